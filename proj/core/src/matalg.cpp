#include "lpuhf/matalg.hpp"

#include <string>

namespace lpuhf {

TensorIndexMap::TensorIndexMap(std::vector<std::size_t> factor_dims) : dims_(std::move(factor_dims)) {
  for (auto d : dims_) {
    if (d == 0) throw InputError("TensorIndexMap: factor dimensions must be positive");
    size_ *= d;
  }
}

std::size_t TensorIndexMap::flat(const std::vector<std::size_t>& multi) const {
  if (multi.size() != dims_.size()) throw InputError("TensorIndexMap: multi-index has the wrong length");
  std::size_t out = 0;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (multi[k] >= dims_[k]) throw InputError("TensorIndexMap: multi-index out of range");
    out = out * dims_[k] + multi[k];
  }
  return out;
}

std::vector<std::size_t> TensorIndexMap::multi(std::size_t flat) const {
  if (flat >= size_) throw InputError("TensorIndexMap: flat index out of range");
  std::vector<std::size_t> out(dims_.size());
  for (std::size_t k = dims_.size(); k-- > 0;) {
    out[k] = flat % dims_[k];
    flat /= dims_[k];
  }
  return out;
}

std::vector<std::size_t> TensorIndexMap::permutation(const std::vector<std::size_t>& perm) const {
  if (perm.size() != dims_.size()) throw InputError("TensorIndexMap: permutation has the wrong length");
  std::vector<bool> seen(perm.size(), false);
  std::vector<std::size_t> new_dims(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) {
    if (perm[k] >= perm.size() || seen[perm[k]]) throw InputError("TensorIndexMap: not a permutation");
    seen[perm[k]] = true;
    new_dims[k] = dims_[perm[k]];
  }
  const TensorIndexMap target(new_dims);
  std::vector<std::size_t> out(size_);
  std::vector<std::size_t> moved(perm.size());
  for (std::size_t f = 0; f < size_; ++f) {
    const auto m = multi(f);
    for (std::size_t k = 0; k < perm.size(); ++k) moved[k] = m[perm[k]];
    out[f] = target.flat(moved);
  }
  return out;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out;
  out.entries = kron<Complex>(a.entries, b.entries);
  out.domain = AtomicMeasure::product(a.domain, b.domain);
  out.codomain = AtomicMeasure::product(a.codomain, b.codomain);
  using K = Structure::Kind;
  if (a.structure.kind == K::scaled_permutation && b.structure.kind == K::scaled_permutation)
    out.structure = Structure::scaled_permutation(a.structure.scale * b.structure.scale);
  else if (a.structure.kind != K::general && b.structure.kind != K::general)
    out.structure = Structure::monomial();
  return out;
}

Mat flip_mat(std::size_t d) {
  return Mat::on_counting(flip_element<Complex>(d), Structure::scaled_permutation(1.0 / static_cast<double>(d)));
}

FactorNorm spatial_norm(const Exponent& p) {
  return [p](const CMatrix& a) { return opnorm(a, p).upper; };
}

double projective_upper(const TensorSum<Complex>& z, const FactorNorm& norm_a, const FactorNorm& norm_b) {
  double total = 0.0;
  for (const auto& [a, b] : z.terms) total += norm_a(a) * norm_b(b);
  return total;
}

double projective_upper(const TensorSum<Complex>& z, const FactorNorm& norm) { return projective_upper(z, norm, norm); }

namespace {

Rational monomial_norm_exact(const Matrix<QComplex>& a) {
  Rational best = 0;
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      const auto& x = a(r, c);
      if (x.im != 0) throw UnsupportedError("projective_upper_exact: factor has a non-real entry");
      const Rational m = x.re < 0 ? Rational(-x.re) : x.re;
      if (m > best) best = m;
    }
  std::vector<int> row(a.rows(), 0), col(a.cols(), 0);
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      if (!a(r, c).is_zero() && (++row[r] > 1 || ++col[c] > 1))
        throw UnsupportedError("projective_upper_exact: factor is not monomial");
  return best;
}

}  // namespace

Rational projective_upper_exact(const TensorSum<QComplex>& z) {
  Rational total = 0;
  for (const auto& [a, b] : z.terms) total += monomial_norm_exact(a) * monomial_norm_exact(b);
  return total;
}

double projective_lower_via_contraction(const TensorSum<Complex>& z, Contraction c, const FactorNorm& target_lower,
                                        const std::function<CMatrix(const TensorSum<Complex>&)>& custom) {
  if (z.empty()) return 0.0;
  CMatrix image;
  switch (c) {
    case Contraction::delta: image = delta(z); break;
    case Contraction::delta_op: image = delta_op(z); break;
    case Contraction::custom:
      if (!custom) throw InputError("projective_lower_via_contraction: custom contraction not supplied");
      image = custom(z);
      break;
  }
  if (image.isZero(0.0)) return 0.0;
  return target_lower(image);
}

TensorSum<Complex> to_double(const TensorSum<QComplex>& z) {
  TensorSum<Complex> out;
  for (const auto& [a, b] : z.terms) out.add(to_double(a), to_double(b));
  return out;
}

DiagonalStructure diagonal_structure(const TensorSum<Complex>& z, std::size_t d) {
  if (z.empty()) throw InputError("diagonal_structure: empty tensor sum");
  if (d == 0) throw InputError("diagonal_structure: d must be positive");
  const auto& a0 = z.terms.front().first;
  const auto n = static_cast<std::size_t>(a0.rows());
  if (a0.rows() != a0.cols() || n % d != 0) throw InputError("diagonal_structure: factor size is not a multiple of d");
  const std::size_t m = n / d;
  check_capacity(n * n, "diagonal_structure");

  const CMatrix flat = flatten(z);
  const CMatrix id_m = CMatrix::Identity(m, m);
  const CMatrix id_n = CMatrix::Identity(n, n);
  for (std::size_t j = 1; j <= d; ++j)
    for (std::size_t k = 1; k <= d; ++k) {
      const CMatrix x = kron<Complex>(matrix_unit<Complex>(d, j, k), id_m);
      const CMatrix left = kron<Complex>(x, id_n) * flat;
      const CMatrix right = flat * kron<Complex>(id_n, x);
      if (left != right)
        throw StructureError("diagonal_structure: commutation fails for e_{" + std::to_string(j) + "," +
                             std::to_string(k) + "}");
    }
  const CMatrix dz = delta(z);
  if ((dz - id_n).cwiseAbs().maxCoeff() > 1e-12) throw StructureError("diagonal_structure: Delta(z) != 1");

  // Factor order of flat is (d, m, d, m); z_{l,k} sits at rows (j, ., l, .), cols (k, ., j, .).
  const TensorIndexMap idx({d, m, d, m});
  DiagonalStructure out;
  out.d = d;
  out.m = m;
  out.blocks.resize(d * d);
  CMatrix rebuilt = CMatrix::Zero(flat.rows(), flat.cols());
  for (std::size_t l = 0; l < d; ++l)
    for (std::size_t k = 0; k < d; ++k) {
      CMatrix block(m * m, m * m);
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
          for (std::size_t c = 0; c < m; ++c)
            for (std::size_t e = 0; e < m; ++e)
              block(a * m + b, c * m + e) = flat(idx.flat({0, a, l, b}), idx.flat({k, c, 0, e}));
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t a = 0; a < m; ++a)
          for (std::size_t b = 0; b < m; ++b)
            for (std::size_t c = 0; c < m; ++c)
              for (std::size_t e = 0; e < m; ++e)
                rebuilt(idx.flat({j, a, l, b}), idx.flat({k, c, j, e})) = block(a * m + b, c * m + e);
      auto& zb = out.blocks[l * d + k];
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t s = 0; s < m; ++s) {
          const CMatrix part = block.block(r * m, s * m, m, m);
          if (!part.isZero(0.0)) zb.add(matrix_unit<Complex>(m, r + 1, s + 1), part);
        }
      if (zb.empty()) zb.add(CMatrix::Zero(m, m), CMatrix::Zero(m, m));
    }
  if (rebuilt != flat) throw StructureError("diagonal_structure: z is not of the form sum e_{j,k} (x) e_{l,j} (x) z_{l,k}");

  CMatrix sum = CMatrix::Zero(m, m);
  for (std::size_t j = 1; j <= d; ++j) sum += delta(out.block(j, j));
  if ((sum - id_m).cwiseAbs().maxCoeff() > 1e-12)
    throw StructureError("diagonal_structure: sum_j Delta(z_{j,j}) != 1");
  return out;
}

}  // namespace lpuhf
