#include "lpuhf/criteria.hpp"

#include "lpuhf/error.hpp"
#include "lpuhf/matalg.hpp"

#include <algorithm>
#include <cmath>

namespace lpuhf {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::convergent_spatial: return "CONVERGENT_SPATIAL";
    case Verdict::divergent_nonamenable: return "DIVERGENT_NONAMENABLE";
    case Verdict::undetermined: return "UNDETERMINED";
  }
  return "UNDETERMINED";
}

SeriesReport series_report(const StageRecipe& recipe, const Exponent& p, std::size_t prefix) {
  if (p.is_infinite()) throw InputError("series_report: p must be finite");
  SeriesReport out;
  std::size_t n_max = prefix;
  if (auto len = recipe.length()) n_max = std::min(n_max, *len);
  double sum = 0.0;
  double prod = 1.0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const double r = p_bound(recipe.stage(n).system, p).upper;
    const double term = std::max(0.0, r - 1.0);
    sum += term;
    prod *= std::max(1.0, r);
    out.terms.push_back(term);
    out.partial_sums.push_back(sum);
    out.partial_products.push_back(prod);
  }
  if (const auto& fam = recipe.family()) {
    out.verdict = fam->convergent() ? Verdict::convergent_spatial : Verdict::divergent_nonamenable;
    out.verdict_basis = to_string(fam->kind) + " family; " + fam->rule();
  } else {
    out.verdict = Verdict::undetermined;
    out.verdict_basis = "finite prefix only";
  }
  return out;
}

SumProductCheck sum_product_consistency(const std::vector<double>& alphas, std::size_t n) {
  if (n > alphas.size()) throw InputError("sum_product_consistency: n exceeds the number of terms");
  SumProductCheck out;
  for (std::size_t k = 0; k < n; ++k) {
    if (!(alphas[k] >= 1.0) || !std::isfinite(alphas[k]))
      throw InputError("sum_product_consistency: alpha_" + std::to_string(k + 1) + " < 1");
    out.max_beta = std::max(out.max_beta, alphas[k] - 1.0);
  }
  const double m = out.max_beta;
  const double c = m > 0.0 ? std::log1p(m) / m : 1.0;
  constexpr double tol = 1e-9;
  double sum = 0.0;
  double log_prod = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double beta = alphas[k] - 1.0;
    const double l = std::log1p(beta);
    if (c * beta > l + tol || l > beta + tol) out.holds = false;
    sum += beta;
    log_prod += l;
    out.partial_sums.push_back(sum);
    out.partial_products.push_back(std::exp(log_prod));
    if (log_prod > sum + tol || log_prod < c * sum - tol) out.holds = false;
  }
  return out;
}

namespace {

// Index of the swap on C^r (x) C^r.
inline Eigen::Index swapped(Eigen::Index idx, Eigen::Index r) { return (idx % r) * r + idx / r; }

// v v = 1 for a 0/1 permutation matrix, checked entrywise without a dense product.
bool permutation_involution(const CMatrix& v) {
  std::vector<Eigen::Index> image(v.cols(), -1);
  for (Eigen::Index c = 0; c < v.cols(); ++c)
    for (Eigen::Index r = 0; r < v.rows(); ++r) {
      if (v(r, c) == Complex(0.0, 0.0)) continue;
      if (v(r, c) != Complex(1.0, 0.0) || image[c] != -1) return false;
      image[c] = r;
    }
  for (Eigen::Index c = 0; c < v.cols(); ++c)
    if (image[c] < 0 || image[image[c]] != c) return false;
  return true;
}

SimilaritySystem doubled_system(const StageSpec& spec, std::size_t n) {
  const auto c = combined_system(spec, 0, n);
  if (c.size() * c.size() > kMaxCombinedIndices)
    throw CapacityError("doubled system: " + std::to_string(c.size() * c.size()) + " indices exceed the cap");
  return tensor_systems(c, c);
}

std::size_t stage_dim(const StageSpec& spec, std::size_t n) {
  const BigInt r = r_d(spec, n);
  if (r * r > BigInt(max_dimension()))
    throw CapacityError("flip witness: dimension r_d(n)^2 = " + BigInt(r * r).str() + " exceeds the cap " +
                        std::to_string(max_dimension()));
  return static_cast<std::size_t>(r);
}

}  // namespace

FlipWitness flip_witness(const StageSpec& spec, std::size_t n) {
  const std::size_t r = stage_dim(spec, n);
  FlipWitness out;
  out.n = n;
  out.v = swap_permutation<Complex>(r);
  out.involution = permutation_involution(out.v);

  if (n == 0) {
    out.norm = NormInterval::point(1.0, NormMethod::exact_monomial);
    out.norm.lower_witness = CVector::Ones(1);
    out.factorizes = true;
    return out;
  }
  // Reorder (d1..dn, d1..dn) into (d1, d1, d2, d2, ...) and compare with the per-stage flips.
  auto dims = spec.dims();
  dims.resize(n);
  std::vector<std::size_t> both(dims);
  both.insert(both.end(), dims.begin(), dims.end());
  std::vector<std::size_t> perm;
  for (std::size_t k = 0; k < n; ++k) {
    perm.push_back(k);
    perm.push_back(n + k);
  }
  const CMatrix reordered = permute_factors<Complex>(out.v, TensorIndexMap(both), perm);
  CMatrix expected = swap_permutation<Complex>(dims[0]);
  for (std::size_t k = 1; k < n; ++k) expected = kron<Complex>(expected, swap_permutation<Complex>(dims[k]));
  out.factorizes = reordered == expected;

  out.norm = norm_pS(doubled_system(spec, n), out.v, spec.p()).interval;
  return out;
}

double flip_conjugation_residual(const StageSpec& spec, std::size_t m, std::size_t n, const CMatrix& a,
                                 const CMatrix& b) {
  const auto r = static_cast<Eigen::Index>(stage_dim(spec, n));
  const CMatrix sa = sigma_embed(a, spec, m, n);
  const CMatrix sb = sigma_embed(b, spec, m, n);
  const CMatrix x = kron<Complex>(sa, sb);
  const CMatrix target = kron<Complex>(sb, sa);
  // v x v^{-1} with v the swap permutation (v^{-1} = v): a pure reindexing.
  CMatrix diff(x.rows(), x.cols());
  for (Eigen::Index row = 0; row < x.rows(); ++row)
    for (Eigen::Index col = 0; col < x.cols(); ++col)
      diff(row, col) = x(swapped(row, r), swapped(col, r)) - target(row, col);
  if (diff.isZero(0.0)) return 0.0;
  if (n == 0) return std::abs(diff(0, 0));
  return norm_pS(doubled_system(spec, n), diff, spec.p()).interval.upper;
}

NormInterval rho_tensor_norm(const SimilaritySystem& s, const Exponent& p) {
  if (!s.diagonal()) throw UnsupportedError("rho_tensor_norm: system is not diagonal");
  const double r = p_bound(s, p).upper;
  const double value = r * r;
  if (s.d() <= 3) {
    const auto check = p_bound(tensor_systems(s, s), p);
    if (std::abs(check.upper - value) > 1e-12 * value)
      throw StructureError("rho_tensor_norm: p-bound of the tensored system is not R^2");
  }
  return NormInterval::point(value, NormMethod::exact_monomial);
}

}  // namespace lpuhf
