#include "oracles.hpp"

#include <lpuhf/matalg.hpp>

#include <doctest.h>

using namespace lpuhf;

using Q = Matrix<QComplex>;

namespace {

Q identity_q(std::size_t n) { return Q::Identity(n, n); }

}  // namespace

TEST_CASE("tensor index map round trips") {
  const TensorIndexMap map({2, 3, 4});
  CHECK(map.size() == 24);
  for (std::size_t f = 0; f < map.size(); ++f) CHECK(map.flat(map.multi(f)) == f);
  CHECK(map.flat({1, 0, 0}) == 12);
  CHECK(map.flat({0, 1, 0}) == 4);
  CHECK_THROWS_AS(map.flat({2, 0, 0}), InputError);
  CHECK_THROWS_AS(map.permutation({0, 0, 1}), InputError);
  const auto perm = map.permutation({2, 0, 1});
  std::vector<std::size_t> sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t f = 0; f < sorted.size(); ++f) CHECK(sorted[f] == f);
}

TEST_CASE("matrix units") {
  const auto e11 = matrix_unit<QComplex>(2, 1, 1);
  CHECK(e11(0, 0) == QComplex(1));
  CHECK(e11(1, 1).is_zero());
  const auto e12 = matrix_unit<Complex>(2, 1, 2);
  CHECK(e12(0, 1) == Complex(1.0));
  CHECK(e12.cwiseAbs().sum() == 1.0);
  CHECK_THROWS_AS(matrix_unit<Complex>(2, 3, 1), InputError);
  CHECK_THROWS_AS(matrix_unit<Complex>(2, 0, 1), InputError);
  for (std::size_t d = 1; d <= 4; ++d)
    for (std::size_t j = 1; j <= d; ++j)
      for (std::size_t k = 1; k <= d; ++k)
        for (std::size_t l = 1; l <= d; ++l) {
          CHECK(exactly_equal(Q(matrix_unit<QComplex>(d, j, k) * matrix_unit<QComplex>(d, k, l)),
                              matrix_unit<QComplex>(d, j, l)));
        }
}

TEST_CASE("signed permutation groups") {
  CHECK(signed_permutation_group<QComplex>(1).size() == 2);
  const auto g2 = signed_permutation_group<Complex>(2);
  CHECK(g2.size() == 8);
  for (const auto& g : g2) CHECK(opnorm(g, 2.5).upper == 1.0);
  const auto g3 = signed_permutation_group<QComplex>(3);
  CHECK(g3.size() == 48);
  CHECK(exactly_equal(g3.front(), identity_q(3)));
  for (const auto& a : g3)
    for (const auto& b : g3) {
      const Q ab = a * b;
      CHECK(std::any_of(g3.begin(), g3.end(), [&](const Q& g) { return exactly_equal(g, ab); }));
    }
  CHECK(signed_permutation_group<Complex>(4).size() == 384);
  CHECK_THROWS_AS(signed_permutation_group<Complex>(5), CapacityError);
}

TEST_CASE("flip element identities in rational arithmetic") {
  for (std::size_t d = 1; d <= 4; ++d) {
    const Q y = flip_element<QComplex>(d);
    const auto dd = static_cast<long long>(d);
    CHECK(exactly_equal(Q(y * y), Q(QComplex::ratio(1, dd * dd) * identity_q(d * d))));
    const Q v = QComplex(dd) * y;
    CHECK(exactly_equal(Q(v * v), identity_q(d * d)));
    const auto z = flip_decomposition<QComplex>(d);
    CHECK(exactly_equal(flatten(z), y));
    CHECK(exactly_equal(delta(z), identity_q(d)));
    CHECK(exactly_equal(delta_op(z), identity_q(d)));
  }
}

TEST_CASE("flip conjugation swaps matrix-unit pairs exactly") {
  for (std::size_t d = 1; d <= 3; ++d) {
    const Q y = flip_element<QComplex>(d);
    const Q y_inv = QComplex(static_cast<long long>(d * d)) * y;
    for (std::size_t j = 1; j <= d; ++j)
      for (std::size_t k = 1; k <= d; ++k)
        for (std::size_t l = 1; l <= d; ++l)
          for (std::size_t m = 1; m <= d; ++m) {
            const Q a = matrix_unit<QComplex>(d, j, k);
            const Q b = matrix_unit<QComplex>(d, l, m);
            CHECK(exactly_equal(Q(y * kron<QComplex>(a, b) * y_inv), kron<QComplex>(b, a)));
          }
  }
}

TEST_CASE("flip norm is 1/d") {
  for (std::size_t d : {2u, 3u, 4u}) {
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      const auto n = opnorm(flip_mat(d), p);
      CHECK(n.exact());
      CHECK(n.upper == 1.0 / static_cast<double>(d));
    }
  }
}

TEST_CASE("flip from the signed permutation group") {
  CHECK(exactly_equal(flip_from_group<QComplex>(1), identity_q(1)));
  CHECK(exactly_equal(flip_from_group<QComplex>(2), flip_element<QComplex>(2)));
  CHECK(exactly_equal(flip_from_group<QComplex>(3), flip_element<QComplex>(3)));
  const CMatrix y4 = flip_from_group<Complex>(4);
  CHECK((y4 - flip_element<Complex>(4)).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("kron") {
  const Q k = kron<QComplex>(matrix_unit<QComplex>(2, 1, 1), matrix_unit<QComplex>(2, 2, 2));
  const TensorIndexMap map({2, 2});
  const auto at = map.flat({0, 1});
  for (Eigen::Index r = 0; r < 4; ++r)
    for (Eigen::Index c = 0; c < 4; ++c)
      CHECK(k(r, c) == QComplex(static_cast<std::size_t>(r) == at && static_cast<std::size_t>(c) == at ? 1 : 0));

  CVector a(2), b(2), ab(4);
  a << 1.0, 2.0;
  b << 1.0, 3.0;
  ab << 1.0, 3.0, 2.0, 6.0;
  const CMatrix kd = kron<Complex>(a.asDiagonal(), b.asDiagonal());
  CHECK(kd == CMatrix(ab.asDiagonal()));

  std::mt19937_64 rng(6);
  for (int t = 0; t < 10; ++t) {
    const CMatrix x = oracle::random_matrix(2, 3, rng);
    const CMatrix y = oracle::random_matrix(3, 2, rng);
    CHECK((kron<Complex>(x, y) - oracle::kron(x, y)).cwiseAbs().maxCoeff() == 0.0);
  }
  const Mat km = kron(Mat::on_counting(a.asDiagonal()), Mat::on_counting(b.asDiagonal()));
  CHECK(km.domain.weights() == AtomicMeasure::normalized_counting(4).weights());
  for (double p : {1.0, 1.5, 3.0}) CHECK(opnorm(km, p).upper == 6.0);
}

TEST_CASE("permuting factors of y_{d1 d2} gives kron(y_d1, y_d2)") {
  for (auto [d1, d2] : {std::pair<std::size_t, std::size_t>{2, 2}, {2, 3}}) {
    const Q y = flip_element<QComplex>(d1 * d2);
    const TensorIndexMap map({d1, d2, d1, d2});
    const Q moved = permute_factors<QComplex>(y, map, {0, 2, 1, 3});
    CHECK(exactly_equal(moved, kron<QComplex>(flip_element<QComplex>(d1), flip_element<QComplex>(d2))));
  }
}

TEST_CASE("flip element is invariant under signed permutation automorphisms") {
  for (std::size_t d : {2u, 3u}) {
    const Q y = flip_element<QComplex>(d);
    for (const auto& u : signed_permutation_group<QComplex>(d)) {
      const Q uu = kron<QComplex>(u, u);
      const Q ui = inverse(u);
      CHECK(exactly_equal(Q(uu * y * kron<QComplex>(ui, ui)), y));
    }
  }
}

TEST_CASE("delta and delta_op") {
  std::mt19937_64 rng(14);
  const CMatrix a = oracle::random_matrix(3, 3, rng);
  TensorSum<Complex> z;
  z.add(a, CMatrix::Identity(3, 3));
  CHECK(delta(z) == a);

  TensorSum<QComplex> w;
  w.add(matrix_unit<QComplex>(2, 1, 2), matrix_unit<QComplex>(2, 2, 1));
  CHECK(exactly_equal(delta(w), matrix_unit<QComplex>(2, 1, 1)));
  CHECK(exactly_equal(delta_op(w), matrix_unit<QComplex>(2, 2, 2)));

  TensorSum<Complex> bad;
  bad.add(CMatrix::Identity(2, 3), CMatrix::Identity(3, 2));
  CHECK_THROWS_AS(delta(bad), InputError);
  CHECK_THROWS_AS(bad.add(CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)), InputError);
}

TEST_CASE("projective certificates pin the flip element") {
  for (std::size_t d : {2u, 3u}) {
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      const auto norm = spatial_norm(p);
      const auto grp = to_double(group_average_decomposition<QComplex>(signed_permutation_group<QComplex>(d)));
      CHECK(projective_upper(grp, norm) == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(projective_lower_via_contraction(grp, Contraction::delta, norm) == doctest::Approx(1.0).epsilon(1e-14));
      const auto naive = flip_decomposition<Complex>(d);
      CHECK(projective_upper(naive, norm) == doctest::Approx(static_cast<double>(d)).epsilon(1e-14));
    }
  }
  for (std::size_t d : {2u, 3u}) {
    const auto grp = group_average_decomposition<QComplex>(signed_permutation_group<QComplex>(d));
    CHECK(projective_upper_exact(grp) == 1);
    CHECK(exactly_equal(delta(grp), identity_q(d)));
    CHECK(exactly_equal(delta_op(grp), identity_q(d)));
    CHECK(projective_upper_exact(flip_decomposition<QComplex>(d)) == static_cast<long long>(d));
  }
  TensorSum<QComplex> cplx;
  cplx.add(QComplex(0, 1) * identity_q(2), identity_q(2));
  CHECK_THROWS_AS(projective_upper_exact(cplx), UnsupportedError);

  TensorSum<Complex> zero;
  zero.add(CMatrix::Zero(2, 2), CMatrix::Zero(2, 2));
  CHECK(projective_lower_via_contraction(zero, Contraction::delta, spatial_norm(2.0)) == 0.0);

  std::mt19937_64 rng(17);
  TensorSum<Complex> single;
  const CMatrix a = oracle::random_matrix(3, 3, rng), b = oracle::random_matrix(3, 3, rng);
  single.add(a, b);
  const auto n2 = spatial_norm(2.0);
  CHECK(projective_upper(single, n2) == doctest::Approx(n2(a) * n2(b)));
  CHECK(projective_lower_via_contraction(single, Contraction::delta, n2) <= projective_upper(single, n2) + 1e-12);
  CHECK_THROWS_AS(projective_lower_via_contraction(single, Contraction::custom, n2), InputError);
}

TEST_CASE("symmetrize_diagonal") {
  const auto grp = signed_permutation_group<QComplex>(2);
  const auto y = flip_decomposition<QComplex>(2);
  CHECK(exactly_equal(flatten(symmetrize_diagonal(y, grp)), flip_element<QComplex>(2)));

  // delta(z0) = 3/2 here; the averaged element is again y_2
  auto z0 = y;
  z0.add(QComplex::ratio(1, 2) * identity_q(2), identity_q(2));
  const auto z = symmetrize_diagonal(z0, grp);
  CHECK(exactly_equal(delta(z), identity_q(2)));
  CHECK(exactly_equal(flatten(z), flip_element<QComplex>(2)));

}

TEST_CASE("symmetrize_diagonal over the trivial group normalizes only") {
  const std::vector<Q> trivial{identity_q(2)};
  TensorSum<QComplex> w;
  w.add(QComplex(2) * identity_q(2), identity_q(2));
  const auto z = symmetrize_diagonal(w, trivial);
  CHECK(exactly_equal(flatten(z), kron<QComplex>(identity_q(2), identity_q(2))));
  TensorSum<QComplex> singular;
  singular.add(matrix_unit<QComplex>(2, 1, 1), identity_q(2));
  CHECK_THROWS_AS(symmetrize_diagonal(singular, trivial), InputError);
}

TEST_CASE("symmetrize_diagonal in floating point for d = 3") {
  const auto grp = signed_permutation_group<Complex>(3);
  auto z0 = flip_decomposition<Complex>(3);
  z0.add(0.25 * CMatrix::Identity(3, 3), CMatrix::Identity(3, 3));
  const auto z = symmetrize_diagonal(z0, grp);
  CHECK((flatten(z) - flip_element<Complex>(3)).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("diagonal structure of the flip element") {
  for (std::size_t d : {1u, 2u, 3u}) {
    const auto ds = diagonal_structure(flip_decomposition<Complex>(d), d);
    CHECK(ds.m == 1);
    for (std::size_t l = 1; l <= d; ++l)
      for (std::size_t k = 1; k <= d; ++k) {
        const CMatrix v = flatten(ds.block(l, k));
        CHECK(v(0, 0) == Complex(l == k ? 1.0 / static_cast<double>(d) : 0.0));
      }
  }
}

TEST_CASE("diagonal structure with a nontrivial coefficient algebra") {
  // z = y_2 (x) w with w a diagonal of M_2 (x) M_2 satisfying Delta(w) = 1, factors reordered.
  const std::size_t d = 2, m = 2;
  const auto yd = flip_decomposition<Complex>(d);
  const auto ym = flip_decomposition<Complex>(m);
  TensorSum<Complex> z;
  for (const auto& [a, b] : yd.terms)
    for (const auto& [c, e] : ym.terms) z.add(kron<Complex>(a, c), kron<Complex>(b, e));
  const auto ds = diagonal_structure(z, d);
  CHECK(ds.m == m);
  CMatrix total = CMatrix::Zero(m, m);
  for (std::size_t j = 1; j <= d; ++j) total += delta(ds.block(j, j));
  CHECK((total - CMatrix::Identity(m, m)).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(flatten(ds.block(1, 2)).isZero(0.0));
}

TEST_CASE("diagonal structure rejects non-commuting elements") {
  TensorSum<Complex> z;
  z.add(CMatrix::Identity(2, 2), CMatrix::Identity(2, 2));
  z.add(matrix_unit<Complex>(2, 1, 2), matrix_unit<Complex>(2, 1, 2));
  try {
    diagonal_structure(z, 2);
    FAIL("expected StructureError");
  } catch (const StructureError& e) {
    CHECK(std::string(e.what()).find("e_{") != std::string::npos);
  }
  // y_d + w with w outside the commutant
  auto y = flip_decomposition<Complex>(2);
  y.add(0.5 * matrix_unit<Complex>(2, 1, 2), matrix_unit<Complex>(2, 1, 2));
  CHECK_THROWS_AS(diagonal_structure(y, 2), StructureError);
}
