#include "lpuhf/pnorm.hpp"

#include "lpuhf/error.hpp"
#include "lpuhf/matalg.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace lpuhf {

std::string to_string(NormMethod m) {
  switch (m) {
    case NormMethod::exact_p1: return "EXACT_P1";
    case NormMethod::exact_p2: return "EXACT_P2";
    case NormMethod::exact_pinf: return "EXACT_PINF";
    case NormMethod::exact_monomial: return "EXACT_MONOMIAL";
    case NormMethod::boyd: return "BOYD";
    case NormMethod::interp: return "INTERP";
    case NormMethod::sandwich: return "SANDWICH";
  }
  return "UNKNOWN";
}

Mat Mat::on_counting(CMatrix a, Structure s) {
  if (a.rows() == 0 || a.cols() == 0) throw InputError("Mat: empty matrix");
  Mat m;
  m.domain = AtomicMeasure::normalized_counting(a.cols());
  m.codomain = AtomicMeasure::normalized_counting(a.rows());
  m.entries = std::move(a);
  m.structure = s;
  return m;
}

NormInterval NormInterval::point(double v, NormMethod m) {
  NormInterval n;
  n.lower = n.upper = v;
  n.methods = {m};
  return n;
}

namespace {

void merge_methods(std::vector<NormMethod>& into, const std::vector<NormMethod>& from) {
  for (auto m : from)
    if (std::find(into.begin(), into.end(), m) == into.end()) into.push_back(m);
}

constexpr double kEps = std::numeric_limits<double>::epsilon();

}  // namespace

NormInterval interval_product(const NormInterval& a, const NormInterval& b) {
  NormInterval out;
  out.lower = a.lower * b.lower;
  out.upper = a.upper * b.upper;
  out.methods = a.methods;
  merge_methods(out.methods, b.methods);
  return out;
}

NormInterval interval_max(const std::vector<NormInterval>& parts) {
  if (parts.empty()) throw InputError("interval_max: no parts");
  NormInterval out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto& p = parts[i];
    if (p.lower > out.lower) {
      out.lower = p.lower;
      out.lower_witness = p.lower_witness;
    }
    out.upper = std::max(out.upper, p.upper);
    merge_methods(out.methods, p.methods);
  }
  return out;
}

bool is_monomial(const CMatrix& a) {
  std::vector<int> row_count(a.rows(), 0);
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    int col_count = 0;
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      if (a(r, c) != Complex(0.0, 0.0)) {
        if (++col_count > 1 || ++row_count[r] > 1) return false;
      }
    }
  }
  return true;
}

double evaluate_ratio(const Mat& a, const CVector& x, const Exponent& p) {
  const double nx = vector_norm(x, p, a.domain);
  if (nx == 0.0) return 0.0;
  return vector_norm(a.entries * x, p, a.codomain) / nx;
}

namespace {

CVector unit_vector(Eigen::Index n, Eigen::Index k) {
  CVector e = CVector::Zero(n);
  e[k] = 1.0;
  return e;
}

double max_col_sum(const CMatrix& b, Eigen::Index* arg = nullptr) {
  double best = -1.0;
  for (Eigen::Index c = 0; c < b.cols(); ++c) {
    const double s = b.col(c).cwiseAbs().sum();
    if (s > best) {
      best = s;
      if (arg) *arg = c;
    }
  }
  return best;
}

double max_row_sum(const CMatrix& b, Eigen::Index* arg = nullptr) {
  double best = -1.0;
  for (Eigen::Index r = 0; r < b.rows(); ++r) {
    const double s = b.row(r).cwiseAbs().sum();
    if (s > best) {
      best = s;
      if (arg) *arg = r;
    }
  }
  return best;
}

struct Spectral {
  double sigma = 0.0;
  double upper = 0.0;
  CVector v;
};

Spectral spectral(const CMatrix& b) {
  Spectral s;
  Eigen::BDCSVD<CMatrix> svd(b, Eigen::ComputeThinV);
  s.sigma = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
  s.v = svd.matrixV().col(0);
  const double n = static_cast<double>(std::max(b.rows(), b.cols()));
  s.upper = s.sigma + 64.0 * kEps * n * std::max(s.sigma, b.norm());
  return s;
}

double lp_norm(const CVector& v, double p) {
  const double scale = v.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  double acc = 0.0;
  for (Eigen::Index j = 0; j < v.size(); ++j) acc += std::pow(std::abs(v[j]) / scale, p);
  return scale * std::pow(acc, 1.0 / p);
}

// psi_p(y)_j = |y_j|^{p-1} sgn(y_j)
CVector duality_map(const CVector& y, double p) {
  CVector out(y.size());
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    const double m = std::abs(y[j]);
    out[j] = m == 0.0 ? Complex(0.0, 0.0) : sgn(y[j]) * std::pow(m, p - 1.0);
  }
  return out;
}

struct BoydRun {
  double value = 0.0;
  CVector x;
};

BoydRun boyd_run(const CMatrix& b, CVector x, double p, const BoydOptions& opts) {
  const double q = p / (p - 1.0);
  BoydRun best;
  double nx = lp_norm(x, p);
  if (nx == 0.0) return best;
  x /= nx;
  best.x = x;
  best.value = lp_norm(b * x, p);
  double prev = best.value;
  for (int it = 0; it < opts.max_iterations; ++it) {
    const CVector y = b * x;
    const double ny = lp_norm(y, p);
    if (ny == 0.0) break;
    const CVector z = b.adjoint() * duality_map(y / ny, p);
    const double nz = lp_norm(z, q);
    if (nz == 0.0) break;
    CVector next = duality_map(z / nz, q);
    nx = lp_norm(next, p);
    if (nx == 0.0) break;
    x = next / nx;
    const double val = lp_norm(b * x, p);
    if (val > best.value) {
      best.value = val;
      best.x = x;
    }
    if (std::abs(val - prev) <= opts.tolerance * std::max(val, 1e-300)) break;
    prev = val;
  }
  return best;
}

// Boyd lower bound on an unweighted matrix with finite p not in {1, 2}. The
// iteration only finds local maxima, so it is started from the ones vector,
// the top right singular vector, small-n basis vectors and the best of a
// batch of screened random directions.
BoydRun boyd_unweighted(const CMatrix& b, double p, const CVector& singular_start, const BoydOptions& opts) {
  const Eigen::Index n = b.cols();
  std::vector<CVector> starts{CVector::Ones(n)};
  if (singular_start.size() == n) starts.push_back(singular_start);
  if (n <= 16)
    for (Eigen::Index j = 0; j < n; ++j) starts.push_back(unit_vector(n, j));

  // screening costs O(screen n^2); thin it out for large matrices
  const double budget = 1 << 22;
  const int screen = static_cast<int>(std::min<double>(opts.screen, std::max<double>(opts.restarts, budget / double(n * n))));
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal;
  std::vector<std::pair<double, CVector>> pool;
  for (int r = 0; r < screen; ++r) {
    CVector x(n);
    for (Eigen::Index j = 0; j < n; ++j) x[j] = Complex(normal(rng), normal(rng));
    const double ratio = lp_norm(b * x, p) / lp_norm(x, p);
    pool.emplace_back(ratio, std::move(x));
  }
  const auto keep = std::min<std::size_t>(pool.size(), static_cast<std::size_t>(std::max(opts.restarts, 0)));
  std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(keep), pool.end(),
                    [](const auto& l, const auto& r) { return l.first > r.first; });
  for (std::size_t k = 0; k < keep; ++k) starts.push_back(std::move(pool[k].second));

  BoydRun best;
  for (auto& x : starts) {
    auto run = boyd_run(b, std::move(x), p, opts);
    if (run.value > best.value || best.x.size() == 0) best = std::move(run);
  }
  return best;
}

double interp_unweighted(const CMatrix& b, double p, double n2_upper) {
  const double n1 = max_col_sum(b);
  const double ninf = max_row_sum(b);
  const double slack = 1.0 + 8.0 * kEps * static_cast<double>(b.rows() + b.cols());
  double best = std::pow(n1, 1.0 / p) * std::pow(ninf, 1.0 - 1.0 / p);
  if (p < 2.0) {
    const double theta = 2.0 / p - 1.0;
    best = std::min(best, std::pow(n1, theta) * std::pow(n2_upper, 1.0 - theta));
  } else {
    const double theta = 2.0 / p;
    best = std::min(best, std::pow(n2_upper, theta) * std::pow(ninf, 1.0 - theta));
  }
  return best * slack;
}

// Scale factors that turn the weighted p -> p norm into an unweighted one:
// B = D_cod^{1/p} A D_dom^{-1/p}. Entries with equal weights keep factor 1 exactly.
CMatrix reduce(const Mat& a, const Exponent& p) {
  if (p.is_infinite()) return a.entries;
  if (a.domain.uniform() && a.codomain.uniform() && a.domain.weight(0) == a.codomain.weight(0)) return a.entries;
  const double inv_p = p.reciprocal();
  CMatrix b = a.entries;
  for (Eigen::Index r = 0; r < b.rows(); ++r)
    for (Eigen::Index c = 0; c < b.cols(); ++c) {
      const double wr = a.codomain.weight(r);
      const double wc = a.domain.weight(c);
      if (wr != wc && b(r, c) != Complex(0.0, 0.0)) b(r, c) *= std::pow(wr / wc, inv_p);
    }
  return b;
}

// Maps a witness for the reduced matrix back to the weighted domain: x = D_dom^{-1/p} y.
CVector unreduce_witness(const Mat& a, const Exponent& p, CVector y) {
  if (p.is_infinite() || a.domain.uniform()) return y;
  const double inv_p = p.reciprocal();
  for (Eigen::Index j = 0; j < y.size(); ++j) y[j] *= std::pow(a.domain.weight(j), -inv_p);
  return y;
}

}  // namespace

double interpolation_upper_bound(const CMatrix& a, const Exponent& p) {
  if (p.is_infinite()) return max_row_sum(a);
  if (p.is_exactly(1)) return max_col_sum(a);
  return interp_unweighted(a, p.value(), spectral(a).upper);
}

NormInterval boyd_lower_bound(const CMatrix& a, const Exponent& p, const BoydOptions& opts) {
  if (!p.is_finite() || p.is_exactly(1)) throw InputError("boyd_lower_bound: requires 1 < p < infinity");
  NormInterval out;
  const Spectral sp = spectral(a);
  const double upper = interp_unweighted(a, p.value(), sp.upper);
  auto run = boyd_unweighted(a, p.value(), sp.v, opts);
  out.lower = run.value;
  out.upper = std::max(upper, run.value);
  out.lower_witness = run.x;
  out.methods = {NormMethod::boyd, NormMethod::interp};
  return out;
}

NormInterval opnorm(const Mat& a, const Exponent& p, std::optional<double> sandwich_upper, const BoydOptions& opts) {
  if (static_cast<std::size_t>(a.entries.rows()) != a.codomain.size() ||
      static_cast<std::size_t>(a.entries.cols()) != a.domain.size())
    throw InputError("opnorm: matrix shape does not match its measures");
  if (a.entries.size() == 0) throw InputError("opnorm: empty matrix");

  const CMatrix b = reduce(a, p);
  const Eigen::Index n = b.cols();
  NormInterval out;

  if (b.isZero(0.0)) {
    out = NormInterval::point(0.0, NormMethod::exact_monomial);
    out.lower_witness = unit_vector(n, 0);
    return out;
  }

  if (p.is_exactly(1)) {
    Eigen::Index k = 0;
    out = NormInterval::point(max_col_sum(b, &k), NormMethod::exact_p1);
    out.lower_witness = unreduce_witness(a, p, unit_vector(n, k));
    return out;
  }
  if (p.is_infinite()) {
    Eigen::Index r = 0;
    out = NormInterval::point(max_row_sum(b, &r), NormMethod::exact_pinf);
    CVector x(n);
    for (Eigen::Index c = 0; c < n; ++c) {
      const Complex s = sgn(std::conj(b(r, c)));
      x[c] = s == Complex(0.0, 0.0) ? Complex(1.0, 0.0) : s;
    }
    out.lower_witness = x;
    return out;
  }
  if (is_monomial(b)) {
    double best = -1.0;
    Eigen::Index arg = 0;
    for (Eigen::Index c = 0; c < n; ++c) {
      const double m = b.col(c).cwiseAbs().maxCoeff();
      if (m > best) {
        best = m;
        arg = c;
      }
    }
    out = NormInterval::point(best, NormMethod::exact_monomial);
    out.lower_witness = unreduce_witness(a, p, unit_vector(n, arg));
    return out;
  }

  const Spectral sp = spectral(b);
  if (p.is_exactly(2)) {
    const double lower = lp_norm(b * sp.v, 2.0) / lp_norm(sp.v, 2.0);
    out.lower = lower;
    out.upper = std::max(sp.upper, lower);
    out.lower_witness = unreduce_witness(a, p, sp.v);
    out.methods = {NormMethod::exact_p2};
    return out;
  }

  const double pv = p.value();
  double upper = interp_unweighted(b, pv, sp.upper);
  out.methods = {NormMethod::boyd, NormMethod::interp};
  if (sandwich_upper && *sandwich_upper < upper) {
    upper = *sandwich_upper;
    out.methods.push_back(NormMethod::sandwich);
  }
  auto run = boyd_unweighted(b, pv, sp.v, opts);
  out.lower = run.value;
  out.upper = std::max(upper, run.value);
  out.lower_witness = unreduce_witness(a, p, run.x);
  return out;
}

NormInterval opnorm(const CMatrix& a, const Exponent& p) {
  Mat m;
  m.domain = AtomicMeasure::normalized_counting(a.cols());
  m.codomain = a.rows() == a.cols() ? m.domain : AtomicMeasure::normalized_counting(a.rows());
  m.entries = a;
  return opnorm(m, p);
}

NormInterval conjugation_map_norm(const CMatrix& s, const Exponent& p) {
  if (s.rows() != s.cols() || s.rows() == 0) throw InputError("conjugation_map_norm: s must be square");
  const CMatrix s_inv = inverse(s);
  const auto ns = opnorm(s, p);
  const auto ni = opnorm(s_inv, p);
  NormInterval out = interval_product(ns, ni);
  const Eigen::Index d = s.rows();
  // Witness element a (flattened column-major) with ||a|| = 1 and ||s a s^{-1}|| >= lower.
  if (s.isDiagonal(0.0)) {
    Eigen::Index j = 0;
    Eigen::Index k = 0;
    s.diagonal().cwiseAbs().maxCoeff(&j);
    s_inv.diagonal().cwiseAbs().maxCoeff(&k);
    CMatrix e = CMatrix::Zero(d, d);
    e(j, k) = 1.0;
    out.lower_witness = Eigen::Map<const CVector>(e.data(), e.size());
    return out;
  }
  const auto m = AtomicMeasure::normalized_counting(d);
  const CVector eta = ns.lower_witness / vector_norm(ns.lower_witness, p, m);
  const CVector mu = ni.lower_witness / vector_norm(ni.lower_witness, p, m);
  const CVector omega = norming_functional(s_inv * mu, p, m);
  // a xi = <omega, xi> eta with the weighted pairing.
  CMatrix a(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) a(r, c) = eta[r] * omega[c] * m.weight(c);
  out.lower_witness = Eigen::Map<const CVector>(a.data(), a.size());
  return out;
}

}  // namespace lpuhf
