#include "suites.hpp"

#include <lpuhf/criteria.hpp>
#include <lpuhf/error.hpp>
#include <lpuhf/json_io.hpp>
#include <lpuhf/matalg.hpp>
#include <lpuhf/perturbation.hpp>
#include <lpuhf/spatial_check.hpp>

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#ifndef LPUHF_VERSION
#define LPUHF_VERSION "0.0.0"
#endif

namespace lpuhf::verify {

namespace {

constexpr double kTwoPi = 6.283185307179586;

Record make(std::string id, std::string ref, bool ok, json measured, json tolerance) {
  return {std::move(id), std::move(ref), ok ? Status::pass : Status::fail, std::move(measured), std::move(tolerance)};
}

std::string tag(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// Independent stream per suite, all derived from the one seed.
std::mt19937_64 stream(std::uint64_t seed, std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(salt)};
  return std::mt19937_64(seq);
}

CMatrix diag(const std::vector<Complex>& v) {
  CMatrix m = CMatrix::Zero(v.size(), v.size());
  for (std::size_t j = 0; j < v.size(); ++j) m(j, j) = v[j];
  return m;
}

SimilaritySystem diagonal_system(std::size_t d, const std::vector<std::vector<Complex>>& diagonals) {
  const double f = 1.0 / static_cast<double>(diagonals.size() + 1);
  std::vector<SystemEntry> e{{"id", f, CMatrix::Identity(d, d)}};
  for (std::size_t i = 0; i < diagonals.size(); ++i) e.push_back({"s" + std::to_string(i + 1), f, diag(diagonals[i])});
  return SimilaritySystem(d, std::move(e), true);
}

// +-2^e times a phase in {1, i, -1, -i}: every ratio and product is exact in doubles.
std::vector<Complex> dyadic_diagonal(std::size_t d, std::mt19937_64& rng) {
  static const Complex phases[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  std::uniform_int_distribution<int> ex(-4, 4), ph(0, 3);
  std::vector<Complex> v;
  for (std::size_t j = 0; j < d; ++j) v.push_back(std::ldexp(1.0, ex(rng)) * phases[ph(rng)]);
  return v;
}

SimilaritySystem dyadic_system(std::size_t d, std::size_t extra, std::mt19937_64& rng) {
  std::vector<std::vector<Complex>> diags;
  for (std::size_t i = 0; i < extra; ++i) diags.push_back(dyadic_diagonal(d, rng));
  return diagonal_system(d, diags);
}

std::vector<Complex> random_diagonal(std::size_t d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mod(0.2, 5.0), ang(0.0, kTwoPi);
  std::vector<Complex> v;
  for (std::size_t j = 0; j < d; ++j) v.push_back(std::polar(mod(rng), ang(rng)));
  return v;
}

CMatrix gaussian(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix a(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) a(i, j) = Complex(g(rng), g(rng));
  return a;
}

double lp(const CVector& v, double p) { return std::pow(v.cwiseAbs().array().pow(p).sum(), 1.0 / p); }

std::vector<Mat> rep_table(const SimilaritySystem& s, const std::function<Mat(const CMatrix&)>& rho) {
  std::vector<Mat> out;
  for (std::size_t j = 1; j <= s.d(); ++j)
    for (std::size_t k = 1; k <= s.d(); ++k) out.push_back(rho(matrix_unit<Complex>(s.d(), j, k)));
  return out;
}

// ---- flip ----

std::vector<Record> flip_suite(std::uint64_t) {
  std::vector<Record> out;
  for (std::size_t d : {2u, 3u, 4u})
    for (const char* p_text : {"1", "3/2", "2", "3"}) {
      const Exponent p = Exponent::parse(p_text);
      const auto n = opnorm(flip_mat(d), p);
      const bool ok = n.exact() && n.lower == 1.0 / static_cast<double>(d);
      out.push_back(make("flip.norm.d" + std::to_string(d) + ".p" + p.to_string(), "norm of the flip element y_d in M_d^p (x) M_d^p is 1/d",
                         ok, {{"lower", n.lower}, {"upper", n.upper}, {"expected", 1.0 / static_cast<double>(d)}},
                         {{"width", 0.0}}));
    }

  for (std::size_t d : {2u, 3u}) {
    const QMatrix y = flip_element<QComplex>(d);
    const QMatrix id = QMatrix::Identity(d * d, d * d);
    const QMatrix idd = QMatrix::Identity(d, d);
    const QComplex dd = QComplex::ratio(1, static_cast<long long>(d * d));
    const bool square = exactly_equal(QMatrix(y * y), QMatrix(dd * id));
    const auto z = flip_decomposition<QComplex>(d);
    const bool dl = exactly_equal(delta(z), idd);
    const bool dop = exactly_equal(delta_op(z), idd);
    const QMatrix y_inv = inverse(y);
    std::size_t failures = 0, pairs = 0;
    for (std::size_t a1 = 1; a1 <= d; ++a1)
      for (std::size_t a2 = 1; a2 <= d; ++a2)
        for (std::size_t b1 = 1; b1 <= d; ++b1)
          for (std::size_t b2 = 1; b2 <= d; ++b2) {
            const QMatrix a = matrix_unit<QComplex>(d, a1, a2);
            const QMatrix b = matrix_unit<QComplex>(d, b1, b2);
            const QMatrix lhs = y * kron<QComplex>(a, b) * y_inv;
            if (!exactly_equal(lhs, kron<QComplex>(b, a))) ++failures;
            ++pairs;
          }
    const std::string ds = std::to_string(d);
    const json exact{{"arithmetic", "rational"}};
    out.push_back(make("flip.square.d" + ds, "y_d^2 = d^-2 1", square, {{"equal", square}}, exact));
    out.push_back(make("flip.delta.d" + ds, "Delta(y_d) = Delta^op(y_d) = 1", dl && dop,
                       {{"delta_is_one", dl}, {"delta_op_is_one", dop}}, exact));
    out.push_back(make("flip.conjugation.d" + ds, "y_d (a (x) b) y_d^-1 = b (x) a on matrix units", failures == 0,
                       {{"pairs", pairs}, {"failures", failures}}, exact));
  }

  for (std::size_t d : {2u, 3u}) {
    const auto z = group_average_decomposition<QComplex>(signed_permutation_group<QComplex>(d));
    const bool represents = exactly_equal(flatten(z), flip_element<QComplex>(d));
    const Rational upper = projective_upper_exact(z);
    const QMatrix idd = QMatrix::Identity(d, d);
    // ||z||_pi >= ||Delta(z)|| = ||1|| = 1, Delta being contractive
    const bool lower_one = exactly_equal(delta(z), idd);
    const bool ok = represents && upper == 1 && lower_one;
    out.push_back(make("flip.projective.d" + std::to_string(d),
                       "signed-permutation average pins the projective norm of y_d at 1", ok,
                       {{"upper", upper.str()}, {"lower", lower_one ? "1" : "unproven"}, {"represents_y_d", represents}},
                       {{"arithmetic", "rational"}}));
  }
  return out;
}

// ---- norms ----

std::vector<Record> norms_suite(std::uint64_t seed) {
  std::vector<Record> out;
  for (std::size_t d : {2u, 3u, 4u})
    for (double gamma : {1.0, 2.0, 10.0})
      for (double p : {1.0, 2.0, 3.0}) {
        double err = 0.0;
        for (std::size_t j = 1; j <= d; ++j)
          for (std::size_t k = 1; k <= d; ++k) {
            const auto n = k_gamma_norm(d, gamma, matrix_unit<Complex>(d, j, k), p);
            const double want = j == k ? 1.0 : gamma;
            err = std::max({err, std::abs(n.lower - want), std::abs(n.upper - want)});
          }
        out.push_back(make("norms.matrix_units.d" + std::to_string(d) + ".gamma" + tag(gamma) + ".p" + tag(p),
                           "matrix units have norm gamma off the diagonal and 1 on it under K_{d,gamma}", err <= 1e-9,
                           {{"max_error", err}}, {{"abs", 1e-9}}));
      }

  {
    auto rng = stream(seed, 1);
    std::uniform_int_distribution<int> dist_d(2, 4);
    const double ps[] = {1.0, 1.5, 2.0, 3.0};
    double err = 0.0, brute_err = 0.0;
    for (int t = 0; t < 100; ++t) {
      const std::size_t d = static_cast<std::size_t>(dist_d(rng));
      const double p = ps[t % 4];
      const auto alphas = random_diagonal(d, rng);
      const CMatrix s = diag(alphas);
      double hi = 0.0, lo = 1e300;
      for (const auto& a : alphas) {
        hi = std::max(hi, std::abs(a));
        lo = std::min(lo, std::abs(a));
      }
      const double want = hi / lo;  // ||s|| ||s^-1||
      const auto n = conjugation_map_norm(s, p);
      err = std::max({err, std::abs(n.lower - want), std::abs(n.upper - want)});
      const CMatrix s_inv = inverse(s);
      double brute = 0.0;
      for (std::size_t j = 1; j <= d; ++j)
        for (std::size_t k = 1; k <= d; ++k)
          brute = std::max(brute, opnorm(CMatrix(s * matrix_unit<Complex>(d, j, k) * s_inv), p).upper);
      brute_err = std::max(brute_err, std::abs(brute - want));
    }
    out.push_back(make("norms.conjugation", "norm of Ad(s) is ||s|| ||s^-1||, attained on a matrix unit",
                       err <= 1e-9 && brute_err <= 1e-9, {{"cases", 100}, {"max_error", err}, {"unit_max_error", brute_err}},
                       {{"abs", 1e-9}}));
  }

  {
    auto rng = stream(seed, 2);
    std::size_t mismatches = 0, inexact = 0;
    for (int t = 0; t < 50; ++t) {
      const auto a = dyadic_system(2 + t % 2, 1 + t % 3, rng);
      const auto b = dyadic_system(2 + t % 3 / 2, 1 + t % 2, rng);
      const auto ab = tensor_systems(a, b);
      for (double p : {1.0, 2.5}) {
        const auto r = p_bound(ab, p);
        if (!r.exact()) ++inexact;
        if (r.upper != p_bound(a, p).upper * p_bound(b, p).upper) ++mismatches;
      }
    }
    out.push_back(make("norms.p_bound_multiplicative", "R_{p, S1 (x) S2} = R_{p,S1} R_{p,S2} for diagonal systems",
                       mismatches == 0 && inexact == 0, {{"pairs", 50}, {"mismatches", mismatches}, {"inexact", inexact}},
                       {{"abs", 0.0}}));
  }

  {
    auto rng = stream(seed, 3);
    constexpr int kMatrices = 100;
    constexpr int kSamples = 100000;
    // one direction set serves every matrix; ratios are compared as p-th powers
    const CMatrix x = gaussian(4, kSamples, rng);
    for (double p : {1.5, 2.5}) {
      std::size_t invalid = 0, sample_over = 0, boyd_under = 0;
      double worst_over = -HUGE_VAL, worst_gap = -HUGE_VAL;
      const Eigen::ArrayXd den = x.cwiseAbs2().array().pow(p / 2.0).colwise().sum();
      for (int t = 0; t < kMatrices; ++t) {
        const CMatrix a = gaussian(4, 4, rng);
        const auto n = opnorm(a, p);
        const auto boyd = boyd_lower_bound(a, p);
        if (!(n.lower <= n.upper) || !std::isfinite(n.upper)) ++invalid;
        const CMatrix ax = a * x;
        const Eigen::ArrayXd num = ax.cwiseAbs2().array().pow(p / 2.0).colwise().sum();
        const double sampled = std::pow((num / den).maxCoeff(), 1.0 / p);
        // sampled ratios carry their own rounding, a few ulps
        if (sampled > n.upper * (1.0 + 1e-12)) ++sample_over;
        worst_over = std::max(worst_over, sampled - n.upper);
        if (boyd.lower < sampled - 1e-9) ++boyd_under;
        worst_gap = std::max(worst_gap, sampled - boyd.lower);
      }
      out.push_back(make("norms.engine.p" + tag(p), "interval norm engine against sphere sampling",
                         invalid == 0 && sample_over == 0 && boyd_under == 0,
                         {{"matrices", kMatrices},
                          {"samples", kSamples},
                          {"invalid_intervals", invalid},
                          {"sampled_above_upper", sample_over},
                          {"boyd_below_sampled", boyd_under},
                          {"max_sampled_minus_upper", worst_over},
                          {"max_sampled_minus_boyd", worst_gap}},
                         {{"upper_rel", 1e-12}, {"boyd_abs", 1e-9}}));
    }
    double width = 0.0, err = 0.0;
    for (int t = 0; t < kMatrices; ++t) {
      const CMatrix a = gaussian(4, 4, rng);
      const auto n = opnorm(a, 2.0);
      const double sigma = Eigen::JacobiSVD<CMatrix>(a).singularValues()(0);
      width = std::max(width, n.width());
      err = std::max({err, std::abs(n.lower - sigma), std::abs(n.upper - sigma)});
    }
    out.push_back(make("norms.engine.p2", "p = 2 interval against the largest singular value",
                       width <= 1e-8 && err <= 1e-8, {{"matrices", kMatrices}, {"max_width", width}, {"max_error", err}},
                       {{"width", 1e-8}, {"abs", 1e-8}}));
  }
  return out;
}

// ---- sign selection ----

std::vector<Record> sign_selection_suite(std::uint64_t seed) {
  auto rng = stream(seed, 4);
  std::uniform_int_distribution<int> dist_d(1, 5);
  std::uniform_real_distribution<double> mod(0.1, 10.0), ang(0.0, kTwoPi);
  std::map<int, std::pair<std::size_t, double>> by_p;  // p -> (failures, worst margin)
  for (int p : {1, 2, 3}) by_p[p] = {0, 1e300};
  for (int t = 0; t < 200; ++t) {
    const int d = dist_d(rng);
    const int p = 1 + t % 3;
    std::vector<Complex> alphas;
    std::vector<CVector> xis;
    double hi = 0.0, lo = 1e300;
    for (int j = 0; j < d; ++j) {
      alphas.push_back(std::polar(mod(rng), ang(rng)));
      hi = std::max(hi, std::abs(alphas.back()));
      lo = std::min(lo, std::abs(alphas.back()));
      xis.push_back(gaussian(4, 1, rng).col(0));
    }
    const auto sel = sign_selection(alphas, xis, static_cast<double>(p));
    // recompute the selected vector's norm from scratch
    CVector total = CVector::Zero(4);
    for (const auto& x : xis) total += x;
    const Complex anchor = sel.zeta[sel.j0] * alphas[sel.j0];
    CVector v = CVector::Zero(4);
    for (int k = 0; k < d; ++k) {
      const Complex zk = sel.zeta[k] * alphas[k];
      v += (sel.side == Side::first ? anchor / zk : zk / anchor) * xis[k];
    }
    const double achieved = lp(v, p) / lp(total, p);
    const double margin = achieved - std::sqrt(hi / lo);
    auto& [fails, worst] = by_p[p];
    if (margin < -1e-9) ++fails;
    worst = std::min(worst, margin);
  }
  std::vector<Record> out;
  for (const auto& [p, r] : by_p)
    out.push_back(make("sign_selection.p" + std::to_string(p),
                       "unimodular signs achieve beta^-1/2 gamma^1/2 against the sum", r.first == 0,
                       {{"failures", r.first}, {"min_margin", r.second}}, {{"abs", 1e-9}}));
  return out;
}

// ---- projective lower bound ----

std::vector<Record> lower_bound_suite(std::uint64_t) {
  std::vector<Record> out;
  for (std::size_t d : {2u, 3u})
    for (double gamma : {4.0, 9.0, 100.0}) {
      double worst = 1e300;
      for (double p : {1.5, 2.0, 3.0}) {
        const auto lb = diagonal_lower_bound(flip_decomposition<Complex>(d), gamma_corner_system(d, gamma), p);
        worst = std::min(worst, lb.value - std::sqrt(gamma));
      }
      out.push_back(make("lower_bound.d" + std::to_string(d) + ".gamma" + tag(gamma),
                         "projective norm of y_d over K_{d,gamma} is at least sqrt(gamma)", worst >= -1e-9,
                         {{"min_value_minus_sqrt_gamma", worst}, {"p", {1.5, 2.0, 3.0}}}, {{"abs", 1e-9}}));
    }
  return out;
}

// ---- off-diagonal decay ----

std::vector<Record> decay_suite(std::uint64_t seed) {
  auto rng = stream(seed, 5);
  const CMatrix b = gaussian(2, 2, rng);
  const CMatrix e12 = matrix_unit<Complex>(2, 1, 2);
  const CMatrix id2 = CMatrix::Identity(2, 2);
  std::vector<Record> out;
  for (double p : {1.5, 2.0, 3.0}) {
    bool ok = true;
    json rows = json::array();
    for (double gamma : {10.0, 100.0, 1000.0}) {
      // phi(x) = v (1 (x) x) v^-1 with v = 1 + gamma^-1 e_{1,2} (x) b
      const CMatrix n = (1.0 / gamma) * kron<Complex>(e12, b);
      const CMatrix v = CMatrix::Identity(4, 4) + n;
      const CMatrix v_inv = CMatrix::Identity(4, 4) - n;
      std::vector<CMatrix> phi;
      for (std::size_t j = 1; j <= 2; ++j)
        for (std::size_t k = 1; k <= 2; ++k) phi.push_back(v * kron<Complex>(id2, matrix_unit<Complex>(2, j, k)) * v_inv);
      const double m = certify_map_bound(phi, 2, gamma, p);
      const auto bc = block_compression(phi, 2, gamma, 1.0, m, p, 64, seed);
      const double limit = m / gamma + 1e-9;
      ok = ok && bc.max_offdiag <= limit;
      rows.push_back({{"gamma", gamma}, {"M", m}, {"max_offdiag", bc.max_offdiag}, {"limit", limit}});
    }
    out.push_back(make("decay.p" + tag(p), "off-diagonal blocks of a bounded map are at most M gamma0 / gamma", ok,
                       {{"gamma0", 1.0}, {"rows", rows}}, {{"abs", 1e-9}}));
  }
  return out;
}

// ---- spatialization ----

std::vector<Record> spatialize_suite(std::uint64_t seed) {
  auto rng = stream(seed, 6);
  std::vector<Record> out;
  std::vector<SimilaritySystem> systems;
  for (int t = 0; t < 20; ++t) systems.push_back(dyadic_system(2 + t % 3, 1 + t % 3, rng));
  for (double p : {1.0, 2.0, 3.0}) {
    std::size_t nonzero = 0, norm_fail = 0, not_spatial = 0;
    double worst = 0.0;
    for (const auto& s : systems) {
      const auto sp = spatialize(s, p);
      if (sp.residual != 0.0) ++nonzero;
      const double errs[] = {std::abs(sp.w_norm - sp.r), std::abs(sp.w_minus_one_norm - (sp.r - 1.0)),
                             std::abs(sp.w_inverse_norm - 1.0),
                             std::abs(sp.w_inverse_minus_one_norm - (1.0 - 1.0 / sp.r))};
      const double e = *std::max_element(std::begin(errs), std::end(errs));
      worst = std::max(worst, e);
      if (e > 1e-12) ++norm_fail;
      const auto table = rep_table(s, [&](const CMatrix& x) { return spatial_rep(sp, s, x); });
      if (!is_spatial_rep(table, s.d(), p).spatial) ++not_spatial;
    }
    out.push_back(make("spatialize.p" + tag(p), "diagonal systems are similar to spatial representations via w",
                       nonzero == 0 && norm_fail == 0 && not_spatial == 0,
                       {{"systems", systems.size()},
                        {"nonzero_residuals", nonzero},
                        {"w_identity_failures", norm_fail},
                        {"max_w_identity_error", worst},
                        {"tau_not_spatial", not_spatial}},
                       {{"residual", 0.0}, {"w_identities", 1e-12}}));
  }
  return out;
}

// ---- spatial checker ----

std::vector<Record> spatial_check_suite(std::uint64_t seed) {
  auto rng = stream(seed, 7);
  std::vector<Record> out;
  std::size_t rejected = 0, cases = 0;
  for (std::size_t d : {2u, 3u, 4u}) {
    const auto group = signed_permutation_group<Complex>(d);
    std::uniform_int_distribution<std::size_t> pick(0, group.size() - 1);
    for (int t = 0; t < 3; ++t) {
      std::vector<SystemEntry> e{{"id", 0.25, CMatrix::Identity(d, d)}};
      for (int i = 0; i < 3; ++i) e.push_back({"g" + std::to_string(i), 0.25, group[pick(rng)]});
      const SimilaritySystem s(d, e, false);
      for (double p : {1.0, 2.0, 3.0}) {
        ++cases;
        const auto table = rep_table(s, [&](const CMatrix& x) { return rep_matrix(s, x); });
        if (!is_spatial_rep(table, d, p).spatial) ++rejected;
      }
    }
  }
  out.push_back(make("spatial_check.signed_permutations", "signed-permutation systems give spatial representations",
                     rejected == 0, {{"cases", cases}, {"rejected", rejected}}, json::object()));

  const auto s = diagonal_system(2, {{1.0, 2.0}});
  const auto table = rep_table(s, [&](const CMatrix& x) { return rep_matrix(s, x); });
  const auto r = is_spatial_rep(table, 2, 3.0);
  const bool named = r.refusal.rfind("norm-1 violation", 0) == 0;
  out.push_back(make("spatial_check.non_isometric", "for p != 2 a non-isometric representation is not spatial",
                     !r.spatial && named, {{"spatial", r.spatial}, {"refusal", r.refusal}}, json::object()));
  return out;
}

// ---- series ----

std::vector<Record> series_suite(std::uint64_t) {
  std::vector<Record> out;
  constexpr std::size_t kPrefix = 1000;
  for (double a : {2.0, 1.0}) {
    GammaFamily f;
    f.kind = GammaFamily::Kind::power;
    f.a = a;
    const auto rep = series_report(StageRecipe(f), 2.0, kPrefix);
    const Verdict want = a > 1.0 ? Verdict::convergent_spatial : Verdict::divergent_nonamenable;
    std::vector<double> alphas;
    for (double t : rep.terms) alphas.push_back(1.0 + t);
    const auto sp = sum_product_consistency(alphas, kPrefix);
    out.push_back(make("series.power.a" + tag(a), "sum of (R_{p,S_n} - 1) decides spatial versus non-amenable",
                       rep.verdict == want, {{"verdict", to_string(rep.verdict)}, {"basis", rep.verdict_basis},
                                             {"partial_sum", rep.partial_sums.back()}},
                       json::object()));
    out.push_back(make("series.sum_product.a" + tag(a), "sum and product of 1 + beta_n converge together",
                       sp.holds && sp.partial_products.size() == kPrefix,
                       {{"prefix", kPrefix}, {"max_beta", sp.max_beta}, {"partial_sum", sp.partial_sums.back()},
                        {"partial_product", sp.partial_products.back()}},
                       {{"abs", 1e-9}}));
  }
  return out;
}

using SuiteFn = std::vector<Record> (*)(std::uint64_t);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r{
      {"flip", flip_suite},
      {"norms", norms_suite},
      {"sign-selection", sign_selection_suite},
      {"lower-bound", lower_bound_suite},
      {"decay", decay_suite},
      {"spatialize", spatialize_suite},
      {"spatial-check", spatial_check_suite},
      {"series", series_suite},
  };
  return r;
}

}  // namespace

std::string tool_version() { return LPUHF_VERSION; }

std::string to_string(Status s) {
  switch (s) {
    case Status::pass: return "PASS";
    case Status::fail: return "FAIL";
    case Status::skip: return "SKIP";
  }
  return "?";
}

std::size_t Report::count(Status s) const {
  return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [&](const Record& r) { return r.status == s; }));
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : registry()) n.push_back(name);
    return n;
  }();
  return names;
}

std::vector<std::string> resolve_suites(const std::string& selector) {
  if (selector == "all") return suite_names();
  if (selector == "none" || selector.empty()) return {};
  std::vector<std::string> out;
  std::stringstream ss(selector);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto& names = suite_names();
    if (std::find(names.begin(), names.end(), item) == names.end()) throw InputError("unknown suite \"" + item + "\"");
    if (std::find(out.begin(), out.end(), item) == out.end()) out.push_back(item);
  }
  return out;
}

std::vector<Record> run_suite(const std::string& name, std::uint64_t seed) {
  for (const auto& [n, fn] : registry())
    if (n == name) {
      try {
        return fn(seed);
      } catch (const CapacityError&) {
        throw;
      } catch (const Error& e) {
        // a thrown check is a failed check, reported with its message
        return {make(name + ".error", "plumbing", false, {{"error", e.what()}}, json::object())};
      }
    }
  throw InputError("unknown suite \"" + name + "\"");
}

Report run(const std::string& selector, std::uint64_t seed) {
  Report r;
  r.tool_version = tool_version();
  r.seed = seed;
  r.suites = resolve_suites(selector);
  std::string canonical = "suites=";
  for (const auto& s : r.suites) canonical += s + ";";
  canonical += "seed=" + std::to_string(seed);
  r.input_digest = fnv1a_hex(canonical);
  for (const auto& s : r.suites) {
    auto recs = run_suite(s, seed);
    r.records.insert(r.records.end(), std::make_move_iterator(recs.begin()), std::make_move_iterator(recs.end()));
  }
  return r;
}

json to_json(const Record& r) {
  return {{"id", r.id}, {"paper_ref", r.paper_ref}, {"status", to_string(r.status)}, {"measured", r.measured},
          {"tolerance", r.tolerance}};
}

json to_json(const Report& r) {
  json recs = json::array();
  for (const auto& rec : r.records) recs.push_back(to_json(rec));
  return {{"tool_version", r.tool_version},
          {"input_digest", r.input_digest},
          {"seed", r.seed},
          {"suites", r.suites},
          {"records", recs},
          {"summary",
           {{"pass", r.count(Status::pass)}, {"fail", r.count(Status::fail)}, {"skip", r.count(Status::skip)}}}};
}

std::string summary_line(const Report& r) {
  return "verify: " + std::to_string(r.count(Status::pass)) + " passed, " + std::to_string(r.count(Status::fail)) +
         " failed, " + std::to_string(r.count(Status::skip)) + " skipped";
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace lpuhf::verify
