#include "lpuhf/perturbation.hpp"

#include "lpuhf/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace lpuhf {

namespace {

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

CMatrix random_matrix(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  CMatrix x(n, n);
  for (Eigen::Index r = 0; r < x.rows(); ++r)
    for (Eigen::Index c = 0; c < x.cols(); ++c) x(r, c) = Complex(normal(rng), normal(rng));
  return x;
}

std::size_t table_dim(std::size_t entries, const char* what) {
  const auto d0 = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(entries))));
  if (d0 == 0 || d0 * d0 != entries)
    throw InputError(std::string(what) + ": table size " + std::to_string(entries) + " is not a square");
  return d0;
}

// phi(x) from its values on matrix units (row-major).
CMatrix apply_table(const std::vector<CMatrix>& table, std::size_t d0, const CMatrix& x) {
  CMatrix out = CMatrix::Zero(table.front().rows(), table.front().cols());
  for (std::size_t j = 0; j < d0; ++j)
    for (std::size_t k = 0; k < d0; ++k)
      if (x(j, k) != Complex(0.0, 0.0)) out += x(j, k) * table[j * d0 + k];
  return out;
}

}  // namespace

PhasePositiveSplit phase_positive_split(const CMatrix& s, const Exponent& p) {
  if (s.rows() != s.cols() || s.rows() == 0) throw InputError("phase_positive_split: s must be square");
  if (!s.isDiagonal(0.0)) throw UnsupportedError("phase_positive_split: s is not diagonal (see polar_split)");
  const Eigen::Index d = s.rows();
  PhasePositiveSplit out;
  const Eigen::VectorXd mod = s.diagonal().cwiseAbs();
  if (mod.minCoeff() == 0.0) throw InputError("phase_positive_split: s is singular");
  out.beta = mod.minCoeff();
  out.w = CMatrix::Zero(d, d);
  out.u = CMatrix::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    out.w(j, j) = mod[j] / out.beta;
    out.u(j, j) = sgn(s(j, j));
  }
  if ((out.beta * out.w * out.u - s).cwiseAbs().maxCoeff() > 1e-12 * mod.maxCoeff())
    throw StructureError("phase_positive_split: s != beta w u");
  const double r = conjugation_map_norm(s, p).upper;
  const CMatrix id = CMatrix::Identity(d, d);
  const CMatrix w_inv = inverse(out.w);
  if (!close(opnorm(out.w, p).upper, r, 1e-12) || !close(opnorm(out.w - id, p).upper, r - 1.0, 1e-12) ||
      !close(opnorm(w_inv, p).upper, 1.0, 1e-12) || !close(opnorm(w_inv - id, p).upper, 1.0 - 1.0 / r, 1e-12))
    throw StructureError("phase_positive_split: norm identities for w fail");
  return out;
}

Spatialization spatialize(const SimilaritySystem& s, const Exponent& p) {
  if (!s.diagonal()) throw UnsupportedError("spatialize: system is not diagonal");
  require_valid(s);
  const std::size_t d = s.d();
  const std::size_t n = d * s.size();
  check_capacity(n, "spatialize");
  Spatialization out;
  out.w.entries = CMatrix::Zero(n, n);
  out.w.domain = s.measure();
  out.w.codomain = out.w.domain;
  out.w.structure = Structure::monomial();
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto split = phase_positive_split(s.entry(i).s, p);
    out.u_blocks.push_back(split.u);
    out.w_blocks.push_back(split.w);
    out.w.entries.block(i * d, i * d, d, d) = split.w;
  }
  out.r = p_bound(s, p).upper;

  Mat w_inv = out.w;
  w_inv.entries = inverse(out.w.entries);
  Mat w_minus = out.w;
  w_minus.entries -= CMatrix::Identity(n, n);
  Mat w_inv_minus = w_inv;
  w_inv_minus.entries -= CMatrix::Identity(n, n);
  out.w_norm = opnorm(out.w, p).upper;
  out.w_minus_one_norm = opnorm(w_minus, p).upper;
  out.w_inverse_norm = opnorm(w_inv, p).upper;
  out.w_inverse_minus_one_norm = opnorm(w_inv_minus, p).upper;

  // psi(e_{j,k}) against w tau(e_{j,k}) w^{-1}, entry by entry (both are supported at (j,k) of each block).
  for (std::size_t i = 0; i < s.size(); ++i) {
    const CMatrix& a = s.entry(i).s;
    const CMatrix& a_inv = s.inverse(i);
    const CMatrix& u = out.u_blocks[i];
    const CMatrix& w = out.w_blocks[i];
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k) {
        const Complex psi = (a(j, j) * Complex(1.0)) * a_inv(k, k);
        const Complex tau = (u(j, j) * Complex(1.0)) * reciprocal(u(k, k));
        const Complex conj = (w(j, j) * tau) * reciprocal(w(k, k));
        out.residual = std::max(out.residual, std::abs(psi - conj));
      }
  }
  if (!close(out.w_norm, out.r, 1e-12) || !close(out.w_minus_one_norm, out.r - 1.0, 1e-12) ||
      !close(out.w_inverse_norm, 1.0, 1e-12) || !close(out.w_inverse_minus_one_norm, 1.0 - 1.0 / out.r, 1e-12))
    throw StructureError("spatialize: norm identities for w fail");
  return out;
}

Mat spatial_rep(const Spatialization& sp, const SimilaritySystem& s, const CMatrix& x) {
  const std::size_t d = s.d();
  if (static_cast<std::size_t>(x.rows()) != d || x.rows() != x.cols())
    throw InputError("spatial_rep: element must be d x d");
  if (sp.u_blocks.size() != s.size()) throw InputError("spatial_rep: spatialization does not match the system");
  Mat out;
  out.entries = CMatrix::Zero(d * s.size(), d * s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const CMatrix& u = sp.u_blocks[i];
    CMatrix block = x;
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k)
        if (block(j, k) != Complex(0.0, 0.0)) block(j, k) = (u(j, j) * block(j, k)) * reciprocal(u(k, k));
    out.entries.block(i * d, i * d, d, d) = block;
  }
  out.domain = s.measure();
  out.codomain = out.domain;
  return out;
}

PolarSplit polar_split(const CMatrix& s) {
  if (s.rows() != s.cols() || s.rows() == 0) throw InputError("polar_split: s must be square");
  const CMatrix s_inv = inverse(s);
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(s * s.adjoint());
  const Eigen::VectorXd lambda = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  if (lambda.minCoeff() == 0.0) throw InputError("polar_split: s is singular");
  PolarSplit out;
  out.c = eig.eigenvectors() * lambda.cast<Complex>().asDiagonal() * eig.eigenvectors().adjoint();
  const CMatrix c_inv =
      eig.eigenvectors() * lambda.cwiseInverse().cast<Complex>().asDiagonal() * eig.eigenvectors().adjoint();
  out.u = c_inv * s;
  const Exponent two(2.0);
  if (std::abs(opnorm(s_inv, two).upper - 1.0) <= 1e-9) {
    const CMatrix id = CMatrix::Identity(s.rows(), s.cols());
    const double bound = opnorm(s, two).upper - 1.0 + 1e-9;
    if (opnorm(out.c - id, two).lower > bound || opnorm(c_inv - id, two).lower > bound)
      throw StructureError("polar_split: ||c - 1|| or ||c^{-1} - 1|| exceeds ||s|| - 1");
  }
  return out;
}

PartialProducts partial_products(const std::vector<CMatrix>& ws, const Exponent& p) {
  constexpr std::size_t kMaterializeCap = 256;
  PartialProducts out;
  double prod = 1.0;
  double prod_inv = 1.0;
  std::vector<double> prefix{1.0};  // prod_{k < n} ||w_k||
  for (const auto& w : ws) {
    if (w.rows() != w.cols() || w.rows() == 0) throw InputError("partial_products: every w_n must be square");
    prod *= opnorm(w, p).upper;
    prod_inv *= opnorm(inverse(w), p).upper;
    prefix.push_back(prod);
    out.m1 = std::max(out.m1, prod);
    out.m2 = std::max(out.m2, prod_inv);
  }
  CMatrix y = CMatrix::Identity(1, 1);
  bool materialize = true;
  for (std::size_t n = 0; n < ws.size(); ++n) {
    const CMatrix id = CMatrix::Identity(ws[n].rows(), ws[n].cols());
    const double w_minus = opnorm(ws[n] - id, p).upper;
    materialize = materialize && static_cast<std::size_t>(y.rows() * ws[n].rows()) <= kMaterializeCap;
    double diff = 0.0;
    if (materialize) {
      // y_n - y_{n-1} = y_{n-1} (x) (w_n - 1) on the stage-n space.
      diff = opnorm(kron<Complex>(y, ws[n] - id), p).upper;
      y = kron<Complex>(y, ws[n]);
    } else {
      diff = prefix[n] * w_minus;
    }
    const double bound = out.m1 * w_minus;
    out.differences.push_back(diff);
    out.bounds.push_back(bound);
    out.materialized.push_back(materialize);
    if (diff > bound + 1e-9 * std::max(1.0, bound)) out.holds = false;
  }
  return out;
}

namespace {

// Shared core of both sign selections; `value` is omega(xi_j) with
// sum_j omega(xi_j) = 1 and ||omega|| <= 1, `eval` measures a coefficient list.
SignSelection select_signs(const std::vector<Complex>& alphas, const std::vector<Complex>& value,
                           const std::function<double(const std::vector<Complex>&)>& eval) {
  const std::size_t d = alphas.size();
  std::size_t jmin = 0;
  std::size_t jmax = 0;
  for (std::size_t j = 0; j < d; ++j) {
    if (alphas[j] == Complex(0.0, 0.0)) throw InputError("sign_selection: alpha_" + std::to_string(j + 1) + " is 0");
    if (std::abs(alphas[j]) < std::abs(alphas[jmin])) jmin = j;
    if (std::abs(alphas[j]) > std::abs(alphas[jmax])) jmax = j;
  }
  const double beta = std::abs(alphas[jmin]);
  const double gamma = std::abs(alphas[jmax]);
  const double bound = std::sqrt(gamma / beta);

  std::vector<Complex> sigma(d);
  for (std::size_t j = 0; j < d; ++j) sigma[j] = std::conj(sgn(value[j]));
  for (auto& s : sigma)
    if (s == Complex(0.0, 0.0)) s = 1.0;

  auto candidate = [&](Side side) {
    SignSelection sel;
    sel.side = side;
    sel.bound = bound;
    sel.j0 = side == Side::first ? jmax : jmin;
    sel.zeta.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
      const Complex phase = std::conj(sgn(alphas[j]));
      sel.zeta[j] = side == Side::first ? phase * std::conj(sigma[j]) : phase * sigma[j];
    }
    const Complex anchor = sel.zeta[sel.j0] * alphas[sel.j0];
    std::vector<Complex> coeff(d);
    for (std::size_t k = 0; k < d; ++k) {
      const Complex zk = sel.zeta[k] * alphas[k];
      coeff[k] = side == Side::first ? anchor / zk : zk / anchor;
    }
    sel.achieved = eval(coeff);
    return sel;
  };
  auto first = candidate(Side::first);
  if (first.achieved >= bound - 1e-9) return first;
  auto second = candidate(Side::second);
  return second.achieved >= first.achieved || second.achieved >= bound - 1e-9 ? second : first;
}

}  // namespace

SignSelection sign_selection(const std::vector<Complex>& alphas, const std::vector<CVector>& xis, const Exponent& p,
                             const AtomicMeasure* m) {
  if (alphas.size() != xis.size() || alphas.empty())
    throw InputError("sign_selection: need one vector per alpha");
  if (p.is_infinite()) throw InputError("sign_selection: p must be finite");
  const Eigen::Index n = xis.front().size();
  const AtomicMeasure measure = m ? *m : AtomicMeasure::counting(n);
  if (static_cast<std::size_t>(n) != measure.size()) throw InputError("sign_selection: measure size mismatch");
  CVector total = CVector::Zero(n);
  for (const auto& x : xis) {
    if (x.size() != n) throw InputError("sign_selection: vectors differ in length");
    total += x;
  }
  const double nt = vector_norm(total, p, measure);
  if (nt == 0.0) throw InputError("sign_selection: sum of the vectors is zero");
  std::vector<CVector> scaled;
  for (const auto& x : xis) scaled.push_back(x / nt);
  const CVector omega = norming_functional(total / nt, p, measure);
  std::vector<Complex> value;
  for (const auto& x : scaled) value.push_back(pairing(omega, x, measure));
  return select_signs(alphas, value, [&](const std::vector<Complex>& coeff) {
    CVector v = CVector::Zero(n);
    for (std::size_t k = 0; k < coeff.size(); ++k) v += coeff[k] * scaled[k];
    return vector_norm(v, p, measure);
  });
}

SignSelection sign_selection(const std::vector<Complex>& alphas, const std::vector<CMatrix>& xis,
                             const std::function<double(const CMatrix&)>& norm,
                             const std::function<Complex(const CMatrix&)>& functional) {
  if (alphas.size() != xis.size() || alphas.empty())
    throw InputError("sign_selection: need one element per alpha");
  CMatrix total = CMatrix::Zero(xis.front().rows(), xis.front().cols());
  for (const auto& x : xis) {
    if (x.rows() != total.rows() || x.cols() != total.cols()) throw InputError("sign_selection: shape mismatch");
    total += x;
  }
  const Complex at_total = functional(total);
  if (std::abs(at_total) == 0.0) throw InputError("sign_selection: functional vanishes on the sum");
  std::vector<Complex> value;
  for (const auto& x : xis) value.push_back(functional(x) / at_total);
  // Rescaling by omega(sum) keeps sum_j omega(xi_j) = 1.
  return select_signs(alphas, value, [&](const std::vector<Complex>& coeff) {
    CMatrix v = CMatrix::Zero(total.rows(), total.cols());
    for (std::size_t k = 0; k < coeff.size(); ++k) v += coeff[k] * xis[k];
    return norm(v / at_total);
  });
}

DiagonalLowerBound diagonal_lower_bound(const TensorSum<Complex>& z, const SimilaritySystem& s, const Exponent& p) {
  if (!s.diagonal()) throw UnsupportedError("diagonal_lower_bound: system is not diagonal");
  if (p.is_infinite()) throw InputError("diagonal_lower_bound: p must be finite");
  const std::size_t d = s.d();
  const auto ds = diagonal_structure(z, d);
  const std::size_t m = ds.m;
  const AtomicMeasure am = AtomicMeasure::normalized_counting(m);
  const CVector ones = CVector::Ones(m);

  // Spatial norm on M_m^p from below: Boyd/exact lower, or the value at the unit vector 1.
  auto block_lower = [&](const CMatrix& y) {
    const Mat ym = Mat::on_counting(y);
    return std::max(opnorm(ym, p).lower, evaluate_ratio(ym, ones, p));
  };
  // omega(Y) = <1, Y 1>: norm one on M_m^p and omega(1) = 1.
  auto omega = [&](const CMatrix& y) { return pairing(ones, y * ones, am); };

  std::vector<CMatrix> xis;
  for (std::size_t j = 1; j <= d; ++j) xis.push_back(delta(ds.block(j, j)));

  DiagonalLowerBound out;
  const CMatrix id_m = CMatrix::Identity(m, m);
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::vector<Complex> alphas;
    for (std::size_t j = 0; j < d; ++j) alphas.push_back(s.entry(i).s(j, j));
    out.targets.push_back(std::sqrt(opnorm(s.entry(i).s, p).upper * opnorm(s.inverse(i), p).upper));
    const auto sel = sign_selection(alphas, xis, block_lower, omega);

    CMatrix w = CMatrix::Zero(d, d);
    CMatrix w_inv = CMatrix::Zero(d, d);
    for (std::size_t j = 0; j < d; ++j) {
      w(j, j) = sel.zeta[j] * alphas[j];
      w_inv(j, j) = reciprocal(w(j, j));
    }
    const CMatrix W = kron<Complex>(w, id_m);
    const CMatrix W_inv = kron<Complex>(w_inv, id_m);
    CMatrix d1 = CMatrix::Zero(d * m, d * m);
    CMatrix d2 = CMatrix::Zero(d * m, d * m);
    for (const auto& [b1, b2] : z.terms) {
      d1 += W * b1 * W_inv * b2;
      d2 += b1 * W * b2 * W_inv;
    }
    // Both images are block diagonal; each diagonal block is a compression, hence a lower bound.
    double best = 0.0;
    for (const CMatrix* img : {&d1, &d2})
      for (std::size_t j = 0; j < d; ++j) best = std::max(best, block_lower(img->block(j * m, j * m, m, m)));
    out.per_index.push_back(best);
    out.value = std::max(out.value, best);
  }
  return out;
}

double certify_map_bound(const std::vector<CMatrix>& phi_table, std::size_t d, double gamma, const Exponent& p) {
  table_dim(phi_table.size(), "certify_map_bound");
  double total = 0.0;
  for (const auto& y : phi_table) total += k_gamma_norm(d, gamma, y, p).upper;
  return total;
}

BlockCompression block_compression(const std::vector<CMatrix>& phi_table, std::size_t d, double gamma, double gamma0,
                                   double m_bound, const Exponent& p, int random_tests, unsigned long long seed) {
  const std::size_t d0 = table_dim(phi_table.size(), "block_compression");
  const auto n = static_cast<std::size_t>(phi_table.front().rows());
  if (d == 0 || n % d != 0) throw InputError("block_compression: target size is not a multiple of d");
  for (const auto& y : phi_table)
    if (static_cast<std::size_t>(y.rows()) != n || y.rows() != y.cols())
      throw InputError("block_compression: inconsistent table shapes");
  if (!(gamma >= 1.0) || !(gamma0 >= 1.0)) throw InputError("block_compression: gamma and gamma0 must be >= 1");
  const std::size_t m = n / d;

  BlockCompression out;
  out.bound = m_bound * gamma0 / gamma;
  for (const auto& y : phi_table) {
    CMatrix t = CMatrix::Zero(n, n);
    for (std::size_t l = 0; l < d; ++l) t.block(l * m, l * m, m, m) = y.block(l * m, l * m, m, m);
    out.t_table.push_back(std::move(t));
  }

  auto measure_offdiag = [&](const CMatrix& y) {
    for (std::size_t l = 0; l < d; ++l)
      for (std::size_t k = 0; k < d; ++k) {
        if (l == k) continue;
        const CMatrix b = y.block(l * m, k * m, m, m);
        if (!b.isZero(0.0)) out.max_offdiag = std::max(out.max_offdiag, opnorm(b, p).upper);
      }
  };
  // Test elements scaled into the unit ball of (M_{d0}, ||.||_{p,gamma0}) by an upper norm.
  for (std::size_t j = 1; j <= d0; ++j)
    for (std::size_t k = 1; k <= d0; ++k) {
      const double unit_norm = k_gamma_norm(d0, gamma0, matrix_unit<Complex>(d0, j, k), p).upper;
      measure_offdiag(phi_table[(j - 1) * d0 + (k - 1)] / unit_norm);
    }
  std::mt19937_64 rng(seed);
  for (int t = 0; t < random_tests; ++t) {
    CMatrix x = random_matrix(d0, rng);
    x /= k_gamma_norm(d0, gamma0, x, p).upper;
    measure_offdiag(apply_table(phi_table, d0, x));
  }
  out.holds = out.max_offdiag <= out.bound + 1e-9;
  return out;
}

DefectReport multiplicative_defect(const std::vector<CMatrix>& t_table, const TargetNorm& target, const Exponent& p,
                                   const std::vector<CMatrix>* phi_table, int random_pairs, unsigned long long seed) {
  const std::size_t d0 = table_dim(t_table.size(), "multiplicative_defect");
  for (const auto& y : t_table)
    if (y.rows() != t_table.front().rows() || y.cols() != t_table.front().cols())
      throw InputError("multiplicative_defect: inconsistent table shapes");
  DefectReport out;
  out.best_x = out.best_y = std::numeric_limits<std::size_t>::max();

  auto unit = [&](std::size_t idx) { return matrix_unit<Complex>(d0, idx / d0 + 1, idx % d0 + 1); };
  auto defect = [&](const CMatrix& x, const CMatrix& y) -> CMatrix {
    return apply_table(t_table, d0, x * y) - apply_table(t_table, d0, x) * apply_table(t_table, d0, y);
  };
  for (std::size_t a = 0; a < t_table.size(); ++a)
    for (std::size_t b = 0; b < t_table.size(); ++b) {
      const CMatrix v = defect(unit(a), unit(b));
      if (v.isZero(0.0)) continue;
      const double val = target(v).lower;
      out.max_unit_defect = std::max(out.max_unit_defect, val);
      if (val > out.defect_estimate) {
        out.defect_estimate = val;
        out.best_x = a;
        out.best_y = b;
      }
    }
  std::mt19937_64 rng(seed);
  for (int t = 0; t < random_pairs; ++t) {
    CMatrix x = random_matrix(d0, rng);
    CMatrix y = random_matrix(d0, rng);
    x /= opnorm(x, p).upper;
    y /= opnorm(y, p).upper;
    const double val = target(defect(x, y)).lower;
    if (val > out.defect_estimate) {
      out.defect_estimate = val;
      out.best_x = out.best_y = std::numeric_limits<std::size_t>::max();
    }
  }
  // |x_jk| <= ||x||_p, so ||T|| <= sum_jk ||T(e_jk)||.
  for (const auto& y : t_table) out.t_norm_upper += target(y).upper;

  if (phi_table) {
    if (phi_table->size() != t_table.size()) throw InputError("multiplicative_defect: phi table size mismatch");
    for (std::size_t a = 0; a < t_table.size(); ++a)
      for (std::size_t b = 0; b < t_table.size(); ++b) {
        const CMatrix prod = (*phi_table)[a] * (*phi_table)[b];
        const std::size_t ja = a / d0, ka = a % d0, jb = b / d0, kb = b % d0;
        CMatrix expect = CMatrix::Zero(prod.rows(), prod.cols());
        if (ka == jb) expect = (*phi_table)[ja * d0 + kb];
        if ((prod - expect).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, expect.cwiseAbs().maxCoeff()))
          throw InputError("multiplicative_defect: phi is not a homomorphism on matrix units");
      }
    double eps = 0.0;
    for (std::size_t a = 0; a < t_table.size(); ++a) {
      const CMatrix diff = t_table[a] - (*phi_table)[a];
      if (!diff.isZero(0.0)) eps += target(diff).upper;
    }
    out.distance_upper_bound = eps;
    out.johnson_bound = (1.0 + eps + 2.0 * out.t_norm_upper) * eps;
    out.johnson_holds = out.defect_estimate <= *out.johnson_bound + 1e-9;
  }
  return out;
}

}  // namespace lpuhf
