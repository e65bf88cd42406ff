#include "corpus.hpp"

#include <lpuhf/error.hpp>
#include <lpuhf/perturbation.hpp>
#include <lpuhf/spatial_check.hpp>

#include <doctest.h>

using namespace lpuhf;
using corpus::diag;

namespace {

std::vector<CMatrix> unit_table(std::size_t d0, const std::function<CMatrix(const CMatrix&)>& f) {
  std::vector<CMatrix> out;
  for (std::size_t j = 1; j <= d0; ++j)
    for (std::size_t k = 1; k <= d0; ++k) out.push_back(f(matrix_unit<Complex>(d0, j, k)));
  return out;
}

// x -> v (1_2 (x) x) v^{-1}, v = 1 + (c / gamma) e_{1,2} (x) B: a homomorphism whose
// off-diagonal block is (c / gamma) [B, x].
std::vector<CMatrix> tilted_embedding(double c, double gamma, const CMatrix& b) {
  const CMatrix n = (c / gamma) * oracle::kron(oracle::unit(2, 1, 2), b);
  const CMatrix v = CMatrix::Identity(4, 4) + n;
  const CMatrix v_inv = CMatrix::Identity(4, 4) - n;
  return unit_table(2, [&](const CMatrix& x) { return CMatrix(v * oracle::kron(CMatrix::Identity(2, 2), x) * v_inv); });
}

}  // namespace

TEST_CASE("phase positive split examples") {
  const auto a = phase_positive_split(diag({2.0, 1.0}));
  CHECK(a.beta == 1.0);
  CHECK(a.w == diag({2.0, 1.0}));
  CHECK(a.u == CMatrix::Identity(2, 2));
  CHECK(opnorm(a.w - CMatrix::Identity(2, 2), 2.0).upper == 1.0);

  const auto b = phase_positive_split(diag({Complex(0, 1), Complex(0, 1)}));
  CHECK(b.beta == 1.0);
  CHECK(b.w == CMatrix::Identity(2, 2));
  CHECK(b.u == diag({Complex(0, 1), Complex(0, 1)}));

  const auto c = phase_positive_split(diag({1.0, -3.0}), 3.0);
  CHECK(c.beta == 1.0);
  CHECK(c.w == diag({1.0, 3.0}));
  CHECK(c.u == diag({1.0, -1.0}));

  CMatrix full = CMatrix::Identity(2, 2);
  full(0, 1) = 1.0;
  CHECK_THROWS_AS(phase_positive_split(full), UnsupportedError);
  CHECK_THROWS_AS(phase_positive_split(diag({1.0, 0.0})), InputError);
}

TEST_CASE("phase positive split on random diagonals") {
  std::mt19937_64 rng(89);
  for (int t = 0; t < 100; ++t) {
    const auto s = corpus::random_system(4, 1, rng).entry(1).s;
    for (double p : {1.0, 2.0, 3.0}) {
      const auto sp = phase_positive_split(s, p);
      CHECK((sp.beta * sp.w * sp.u - s).cwiseAbs().maxCoeff() <= 1e-12 * s.cwiseAbs().maxCoeff());
      for (Eigen::Index j = 0; j < 4; ++j) {
        CHECK(sp.w(j, j).real() >= 1.0);
        CHECK(std::abs(sp.u(j, j)) == doctest::Approx(1.0).epsilon(1e-15));
      }
    }
  }
}

TEST_CASE("spatialize") {
  const auto basic = spatialize(SimilaritySystem::basic(3), 2.0);
  CHECK(basic.w.entries == CMatrix::Identity(3, 3));
  CHECK(basic.residual == 0.0);

  const auto s = corpus::diagonal_system(2, {{1.0, 2.0}});
  const auto sp = spatialize(s, 3.0);
  CHECK(sp.residual == 0.0);
  CHECK(sp.w_norm == 2.0);
  CHECK(sp.r == 2.0);

  for (double gamma : {2.0, 5.0}) {
    const auto k = spatialize(gamma_corner_system(2, gamma), 2.0);
    CHECK(k.w_inverse_minus_one_norm == doctest::Approx(1.0 - 1.0 / gamma).epsilon(1e-12));
  }
  CMatrix full = CMatrix::Identity(2, 2);
  full(0, 1) = 0.5;
  SimilaritySystem general(2, {{"a", 0.5, CMatrix::Identity(2, 2)}, {"b", 0.5, full}}, false);
  CHECK_THROWS_AS(spatialize(general, 2.0), UnsupportedError);
}

TEST_CASE("spatialization is exact and its tau is spatial") {
  std::mt19937_64 rng(97);
  for (int t = 0; t < 20; ++t) {
    const std::size_t d = 2 + t % 3;
    const auto s = corpus::dyadic_system(d, 1 + t % 3, rng);
    for (double p : {1.0, 2.0, 3.0}) {
      const auto sp = spatialize(s, p);
      CHECK(sp.residual == 0.0);
      CHECK(sp.w_norm == doctest::Approx(sp.r).epsilon(1e-12));
      CHECK(sp.w_minus_one_norm == doctest::Approx(sp.r - 1.0).epsilon(1e-12));
      CHECK(sp.w_inverse_norm == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(sp.w_inverse_minus_one_norm == doctest::Approx(1.0 - 1.0 / sp.r).epsilon(1e-12));

      // rep(x) = w tau(x) w^{-1} on whole random elements too
      const CMatrix x = oracle::random_matrix(d, d, rng);
      const CMatrix lhs = rep_matrix(s, x).entries;
      const CMatrix rhs = sp.w.entries * spatial_rep(sp, s, x).entries * sp.w.entries.inverse();
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12 * lhs.cwiseAbs().maxCoeff());

      std::vector<Mat> table;
      for (std::size_t j = 1; j <= d; ++j)
        for (std::size_t k = 1; k <= d; ++k) table.push_back(spatial_rep(sp, s, matrix_unit<Complex>(d, j, k)));
      CHECK(is_spatial_rep(table, d, p).spatial);
    }
  }
}

TEST_CASE("polar split") {
  std::mt19937_64 rng(101);
  const CMatrix q = oracle::random_matrix(3, 3, rng).householderQr().householderQ();
  const auto a = polar_split(q);
  CHECK((a.c - CMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((a.u - q).cwiseAbs().maxCoeff() <= 1e-12);

  const auto b = polar_split(diag({2.0, 1.0}));
  CHECK((b.c - diag({2.0, 1.0})).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK((b.u - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-14);

  for (int t = 0; t < 100; ++t) {
    CMatrix s = oracle::random_matrix(3, 3, rng);
    s *= oracle::top_singular_value(s.inverse());  // now ||s^{-1}||_2 = 1
    const auto ps = polar_split(s);
    CHECK((ps.c * ps.u - s).cwiseAbs().maxCoeff() <= 1e-10 * s.cwiseAbs().maxCoeff());
    CHECK((ps.u * ps.u.adjoint() - CMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-10);
    const double ns = oracle::top_singular_value(s);
    CHECK(oracle::top_singular_value(ps.c - CMatrix::Identity(3, 3)) <= ns - 1.0 + 1e-9);
    CHECK(oracle::top_singular_value(ps.c.inverse() - CMatrix::Identity(3, 3)) <= ns - 1.0 + 1e-9);
  }
  CHECK_THROWS_AS(polar_split(diag({1.0, 0.0})), InputError);
}

TEST_CASE("partial products") {
  const auto id = partial_products(std::vector<CMatrix>(5, CMatrix::Identity(2, 2)), 2.0);
  for (double v : id.differences) CHECK(v == 0.0);
  CHECK(id.holds);
  CHECK(id.m1 == 1.0);

  std::vector<CMatrix> geo;
  for (int n = 1; n <= 12; ++n) geo.push_back(diag({1.0 + std::ldexp(1.0, -n), 1.0}));
  for (double p : {1.0, 2.0, 3.0}) {
    const auto g = partial_products(geo, p);
    CHECK(g.holds);
    CHECK(g.materialized[6]);
    CHECK_FALSE(g.materialized[11]);
    for (std::size_t n = 1; n < g.differences.size(); ++n)
      CHECK(g.differences[n] <= 0.75 * g.differences[n - 1]);
    // oracle: prod_{k<n} (1 + 2^-k) 2^-n
    double prefix = 1.0;
    for (int n = 1; n <= 12; ++n) {
      CHECK(g.differences[n - 1] == doctest::Approx(prefix * std::ldexp(1.0, -n)).epsilon(1e-12));
      prefix *= 1.0 + std::ldexp(1.0, -n);
    }
    CHECK(g.m1 == doctest::Approx(prefix).epsilon(1e-12));
  }

  std::vector<CMatrix> harm;
  for (int n = 1; n <= 50; ++n) harm.push_back(diag({1.0 + 1.0 / n, 1.0}));
  const auto h = partial_products(harm, 2.0);
  CHECK(h.holds);
  CHECK(h.m1 == doctest::Approx(51.0).epsilon(1e-12));
}

TEST_CASE("sign selection examples") {
  std::mt19937_64 rng(103);
  const auto xi = oracle::random_vector(3, rng);
  const std::vector<CVector> xis{0.2 * xi, 0.3 * xi, 0.5 * xi};
  const auto eq = sign_selection({2.0, 2.0, 2.0}, xis, 2.0);
  CHECK(eq.bound == 1.0);
  CHECK(eq.achieved >= 1.0 - 1e-9);

  CVector a(2), b(2);
  a << 1.0, 0.0;
  b << 0.0, 1.0;
  const auto s = sign_selection({1.0, 4.0}, {a, b}, 2.0);
  CHECK(s.bound == 2.0);
  CHECK(s.achieved >= 2.0 - 1e-9);
  for (const auto& z : s.zeta) CHECK(std::abs(z) == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(sign_selection({1.0, 0.0}, {a, b}, 2.0), InputError);
  CHECK_THROWS_AS(sign_selection({1.0}, {a, b}, 2.0), InputError);
  CHECK_THROWS_AS(sign_selection({1.0, 2.0}, {a, CVector(-a)}, 2.0), InputError);
}

TEST_CASE("sign selection meets the bound on random instances") {
  std::mt19937_64 rng(107);
  std::uniform_int_distribution<int> dist_d(1, 5);
  std::uniform_real_distribution<double> mod(0.1, 10.0), ang(0.0, 6.283185307179586);
  for (int t = 0; t < 200; ++t) {
    const int d = dist_d(rng);
    const double p = 1.0 + t % 3;
    std::vector<Complex> alphas;
    std::vector<CVector> xis;
    for (int j = 0; j < d; ++j) {
      alphas.push_back(std::polar(mod(rng), ang(rng)));
      xis.push_back(oracle::random_vector(4, rng));
    }
    const auto sel = sign_selection(alphas, xis, p);
    CHECK(sel.achieved >= sel.bound - 1e-9);
    // recompute the achieved value independently
    CVector total = CVector::Zero(4);
    for (const auto& x : xis) total += x;
    const double nt = oracle::lp(total, p, std::vector<double>(4, 1.0));
    const Complex anchor = sel.zeta[sel.j0] * alphas[sel.j0];
    CVector v = CVector::Zero(4);
    for (int k = 0; k < d; ++k) {
      const Complex zk = sel.zeta[k] * alphas[k];
      v += (sel.side == Side::first ? anchor / zk : zk / anchor) * xis[k] / nt;
    }
    CHECK(oracle::lp(v, p, std::vector<double>(4, 1.0)) == doctest::Approx(sel.achieved).epsilon(1e-10));
  }
}

TEST_CASE("diagonal lower bound for the flip element") {
  for (std::size_t d : {2u, 3u})
    for (double gamma : {1.0, 4.0, 9.0, 100.0})
      for (double p : {1.5, 2.0, 3.0}) {
        const auto lb = diagonal_lower_bound(flip_decomposition<Complex>(d), gamma_corner_system(d, gamma), p);
        CHECK(lb.value >= std::sqrt(gamma) - 1e-9);
      }
  const auto basic = diagonal_lower_bound(flip_decomposition<Complex>(2), SimilaritySystem::basic(2), 2.0);
  CHECK(basic.value >= 1.0 - 1e-12);
  const auto nine = diagonal_lower_bound(flip_decomposition<Complex>(2), gamma_corner_system(2, 9.0), 2.0);
  CHECK(nine.value >= 3.0 - 1e-9);
  CHECK(nine.per_index.size() == 4);
  CHECK_THROWS_AS(diagonal_lower_bound(flip_decomposition<Complex>(2), gamma_corner_system(3, 2.0), 2.0),
                  InputError);
}

TEST_CASE("diagonal lower bound with a coefficient algebra") {
  const auto yd = flip_decomposition<Complex>(2);
  const auto ym = flip_decomposition<Complex>(2);
  TensorSum<Complex> z;
  for (const auto& [a, b] : yd.terms)
    for (const auto& [c, e] : ym.terms) z.add(kron<Complex>(a, c), kron<Complex>(b, e));
  std::mt19937_64 rng(109);
  for (int t = 0; t < 10; ++t) {
    const auto s = corpus::random_system(2, 2, rng);
    const auto lb = diagonal_lower_bound(z, s, 2.5);
    CHECK(lb.value >= std::sqrt(p_bound(s, 2.5).upper) - 1e-9);
  }
}

TEST_CASE("block compression of a block-diagonal embedding") {
  const auto phi = unit_table(2, [](const CMatrix& x) { return CMatrix(oracle::kron(CMatrix::Identity(2, 2), x)); });
  const double m = certify_map_bound(phi, 2, 10.0, 2.0);
  const auto bc = block_compression(phi, 2, 10.0, 1.0, m, 2.0);
  CHECK(bc.max_offdiag == 0.0);
  CHECK(bc.holds);
  for (std::size_t k = 0; k < phi.size(); ++k) CHECK(bc.t_table[k] == phi[k]);
}

TEST_CASE("off-diagonal blocks decay like 1/gamma") {
  std::mt19937_64 rng(113);
  const CMatrix b = oracle::random_matrix(2, 2, rng);
  for (double p : {1.5, 2.0, 3.0}) {
    double scaled = -1.0;
    for (double gamma : {10.0, 100.0, 1000.0}) {
      const auto phi = tilted_embedding(1.0, gamma, b);
      const double m = certify_map_bound(phi, 2, gamma, p);
      CHECK(m <= 4.0 + 4.0 * 2.0 * oracle::top_singular_value(b) * 2.0);  // bounded in gamma
      const auto bc = block_compression(phi, 2, gamma, 1.0, m, p);
      CHECK(bc.holds);
      CHECK(bc.max_offdiag <= m / gamma + 1e-9);
      CHECK(bc.max_offdiag > 0.0);
      if (scaled < 0.0)
        scaled = bc.max_offdiag * gamma;
      else
        CHECK(bc.max_offdiag * gamma == doctest::Approx(scaled).epsilon(1e-9));
    }
  }
}

TEST_CASE("certified map bound dominates sampled ratios") {
  std::mt19937_64 rng(127);
  const CMatrix b = oracle::random_matrix(2, 2, rng);
  const double gamma = 20.0;
  const auto phi = tilted_embedding(2.0, gamma, b);
  const double m = certify_map_bound(phi, 2, gamma, 2.0);
  for (int t = 0; t < 50; ++t) {
    const CMatrix x = oracle::random_matrix(2, 2, rng);
    CMatrix y = CMatrix::Zero(4, 4);
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) y += x(j, k) * phi[j * 2 + k];
    CHECK(k_gamma_norm(2, gamma, y, 2.0).lower <= m * oracle::top_singular_value(x) * (1 + 1e-9));
  }
}

TEST_CASE("multiplicative defect") {
  const TargetNorm spatial = [](const CMatrix& y) { return opnorm(y, 2.0); };
  const auto phi = unit_table(2, [](const CMatrix& x) { return CMatrix(oracle::kron(x, CMatrix::Identity(2, 2))); });

  const auto hom = multiplicative_defect(phi, spatial, 2.0, &phi);
  CHECK(hom.defect_estimate == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(hom.max_unit_defect == 0.0);
  CHECK(*hom.distance_upper_bound == 0.0);
  CHECK(hom.johnson_holds);

  std::mt19937_64 rng(131);
  for (double eps : {0.01, 0.1}) {
    auto t = phi;
    const CVector u = oracle::random_vector(4, rng), v = oracle::random_vector(4, rng);
    t[1] += eps * (u * v.adjoint()) / (u.norm() * v.norm());
    const auto r = multiplicative_defect(t, spatial, 2.0, &phi);
    CHECK(r.defect_estimate > 0.0);
    CHECK(r.johnson_holds);
    CHECK(r.defect_estimate <= *r.johnson_bound + 1e-9);
    CHECK(*r.distance_upper_bound == doctest::Approx(eps).epsilon(1e-9));
  }

  auto twice = phi;
  for (auto& y : twice) y *= 2.0;
  const auto r = multiplicative_defect(twice, spatial, 2.0);
  // T(e11 e11) - T(e11)^2 = 2 phi(e11) - 4 phi(e11) = -2 phi(e11)
  CHECK(r.max_unit_defect == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_FALSE(r.distance_upper_bound.has_value());

  auto not_hom = phi;
  not_hom[0] *= 3.0;
  CHECK_THROWS_AS(multiplicative_defect(phi, spatial, 2.0, &not_hom), InputError);
}
