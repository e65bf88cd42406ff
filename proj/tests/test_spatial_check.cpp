#include "corpus.hpp"

#include <lpuhf/error.hpp>
#include <lpuhf/matalg.hpp>
#include <lpuhf/spatial_check.hpp>

#include <doctest.h>

using namespace lpuhf;

namespace {

std::vector<Mat> rep_table(const SimilaritySystem& s) {
  std::vector<Mat> out;
  for (std::size_t j = 1; j <= s.d(); ++j)
    for (std::size_t k = 1; k <= s.d(); ++k) out.push_back(rep_matrix(s, matrix_unit<Complex>(s.d(), j, k)));
  return out;
}

SimilaritySystem signed_permutation_system(std::size_t d, std::size_t count, std::mt19937_64& rng) {
  const auto group = signed_permutation_group<Complex>(d);
  std::uniform_int_distribution<std::size_t> pick(1, group.size() - 1);
  std::vector<SystemEntry> e{{"id", 1.0 / static_cast<double>(count + 1), CMatrix::Identity(d, d)}};
  for (std::size_t i = 0; i < count; ++i)
    e.push_back({"g" + std::to_string(i), 1.0 / static_cast<double>(count + 1), group[pick(rng)]});
  return SimilaritySystem(d, e, false);
}

Mat weighted(const CMatrix& a, std::vector<double> dom, std::vector<double> cod) {
  return Mat{a, AtomicMeasure(std::move(dom)), AtomicMeasure(std::move(cod)), {}};
}

}  // namespace

TEST_CASE("recognize signed permutations and matrix units") {
  const auto group = signed_permutation_group<Complex>(3);
  for (const auto& g : group) {
    const auto rec = recognize_spi(Mat::on_counting(g), 3.0);
    REQUIRE(rec);
    for (const auto& [k, ph] : rec.spi->phase) CHECK((ph == Complex(1.0) || ph == Complex(-1.0)));
    CHECK(rec.spi->matrix() == g);
  }
  const auto e12 = recognize_spi(Mat::on_counting(matrix_unit<Complex>(3, 1, 2)), 2.5);
  REQUIRE(e12);
  CHECK(e12.spi->domain_support() == std::set<std::size_t>{1});
  CHECK(e12.spi->range_support() == std::set<std::size_t>{0});
}

TEST_CASE("recognize_spi refusals") {
  const auto d = recognize_spi(Mat::on_counting(corpus::diag({1.0, 2.0})), 3.0);
  CHECK_FALSE(d);
  CHECK(d.refusal.find("entry (2,2) has modulus 2") != std::string::npos);
  CMatrix two = CMatrix::Zero(2, 2);
  two(0, 0) = two(1, 0) = 1.0;
  CHECK(recognize_spi(Mat::on_counting(two), 2.0).refusal.find("column 1") != std::string::npos);
  CMatrix row = CMatrix::Zero(2, 2);
  row(0, 0) = row(0, 1) = 1.0;
  CHECK(recognize_spi(Mat::on_counting(row), 2.0).refusal.find("row 1") != std::string::npos);
  CHECK_FALSE(recognize_spi(Mat::on_counting(CMatrix::Identity(2, 2)), Exponent::infinity()));
}

TEST_CASE("change of measure factors") {
  // domain atom weight 1/4 mapped to a codomain atom of weight 1: factor (1/4)^{1/p}
  for (double p : {1.0, 2.0, 3.0}) {
    CMatrix a = CMatrix::Zero(1, 2);
    a(0, 1) = Complex(0.0, std::pow(0.25, 1.0 / p));
    const Mat m = weighted(a, {0.5, 0.25}, {1.0});
    const auto rec = recognize_spi(m, p);
    REQUIRE(rec);
    CHECK(std::abs(rec.spi->phase.at(1) - Complex(0.0, 1.0)) <= 1e-15);
    CHECK((rec.spi->matrix() - a).cwiseAbs().maxCoeff() <= 1e-15);
    // a spatial partial isometry is a contraction; isometric on its support
    const auto n = opnorm(m, p);
    CHECK(n.upper == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("recognition round trip") {
  std::mt19937_64 rng(137);
  std::uniform_real_distribution<double> w(0.1, 2.0), ang(0.0, 6.283185307179586);
  for (int t = 0; t < 50; ++t) {
    const int n = 2 + t % 4;
    std::vector<double> dom, cod;
    for (int j = 0; j < n; ++j) {
      dom.push_back(w(rng));
      cod.push_back(w(rng));
    }
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    SpatialPartialIsometry s;
    s.domain = AtomicMeasure(dom);
    s.codomain = AtomicMeasure(cod);
    s.p = 1.0 + t % 3;
    for (int k = 0; k < n; ++k)
      if ((k + t) % 3 != 0) {
        s.atom_map[k] = perm[k];
        s.phase[k] = std::polar(1.0, ang(rng));
      }
    const Mat m{s.matrix(), s.domain, s.codomain, {}};
    const auto rec = recognize_spi(m, s.p);
    REQUIRE(rec);
    CHECK(rec.spi->atom_map == s.atom_map);
    for (const auto& [k, ph] : s.phase) CHECK(std::abs(rec.spi->phase.at(k) - ph) <= 1e-12);
    const auto again = recognize_spi(Mat{rec.spi->matrix(), s.domain, s.codomain, {}}, s.p);
    REQUIRE(again);
    CHECK(again.spi->atom_map == rec.spi->atom_map);
  }
}

TEST_CASE("signed permutation systems give spatial representations") {
  std::mt19937_64 rng(139);
  for (int t = 0; t < 20; ++t) {
    const std::size_t d = 2 + t % 3;
    const auto s = signed_permutation_system(d, 1 + t % 3, rng);
    for (double p : {1.0, 2.0, 3.0}) {
      const auto r = is_spatial_rep(rep_table(s), d, p);
      CHECK(r.spatial);
      CHECK(r.refusal.empty());
      REQUIRE(r.partition.size() == d);
      std::size_t total = 0;
      for (const auto& part : r.partition) total += part.size();
      CHECK(total == d * s.size());
    }
  }
}

TEST_CASE("non-isometric representations are rejected by name") {
  const auto s = corpus::diagonal_system(2, {{1.0, 2.0}});
  const auto r = is_spatial_rep(rep_table(s), 2, 3.0);
  CHECK_FALSE(r.spatial);
  CHECK(r.refusal == "norm-1 violation: ||rho(e_{2,1})|| = 2 != 1");
  // at p = 2 the monomial criterion alone decides
  const auto r2 = is_spatial_rep(rep_table(s), 2, 2.0);
  CHECK_FALSE(r2.spatial);
  CHECK(r2.refusal.find("rho(e_{1,2}) is not a spatial partial isometry") == 0);
}

TEST_CASE("accepted representations have norm-one matrix units") {
  std::mt19937_64 rng(149);
  for (int t = 0; t < 10; ++t) {
    const auto s = signed_permutation_system(3, 2, rng);
    const auto table = rep_table(s);
    REQUIRE(is_spatial_rep(table, 3, 3.0).spatial);
    for (const auto& m : table) CHECK(opnorm(m, 3.0).upper == 1.0);
  }
}

TEST_CASE("trivial and malformed representations") {
  const std::vector<Mat> one{Mat::on_counting(CMatrix::Identity(3, 3))};
  CHECK(is_spatial_rep(one, 1, 2.5).spatial);
  std::vector<Mat> bad = rep_table(SimilaritySystem::basic(2));
  bad[1].entries *= 2.0;
  CHECK_THROWS_AS(is_spatial_rep(bad, 2, 2.0), InputError);
  std::vector<Mat> not_unital = rep_table(SimilaritySystem::basic(2));
  not_unital[0].entries.setZero();
  CHECK_THROWS_AS(is_spatial_rep(not_unital, 2, 2.0), InputError);
  CHECK_THROWS_AS(is_spatial_rep(one, 2, 2.0), InputError);
}

TEST_CASE("direct sums") {
  SpatialPartialIsometry a, b;
  a.domain = a.codomain = AtomicMeasure({1.0}, {"a"});
  b.domain = b.codomain = AtomicMeasure({1.0}, {"b"});
  a.atom_map[0] = 0;
  a.phase[0] = Complex(0, 1);
  b.atom_map[0] = 0;
  b.phase[0] = -1.0;
  const auto s = direct_sum_spi({a, b});
  CHECK(s.matrix() == corpus::diag({Complex(0, 1), -1.0}));
  CHECK(s.domain_support() == std::set<std::size_t>{0, 1});
  const auto rec = recognize_spi(Mat{s.matrix(), s.domain, s.codomain, {}}, s.p);
  REQUIRE(rec);
  CHECK(*rec.spi == s);
  CHECK_THROWS_AS(direct_sum_spi({a, a}), InputError);

  const auto e12 = *recognize_spi(Mat::on_counting(matrix_unit<Complex>(2, 1, 2)), 2.0).spi;
  auto other = e12;
  std::vector<std::string> labels{"x", "y"};
  other.domain = other.codomain = AtomicMeasure({0.5, 0.5}, labels);
  const auto blocks = direct_sum_spi({e12, other});
  CMatrix want = CMatrix::Zero(4, 4);
  want(0, 1) = want(2, 3) = 1.0;
  CHECK(blocks.matrix() == want);
}

TEST_CASE("composition and tensor products stay spatial") {
  std::mt19937_64 rng(151);
  const auto group = signed_permutation_group<Complex>(3);
  std::uniform_int_distribution<std::size_t> pick(0, group.size() - 1);
  for (int t = 0; t < 30; ++t) {
    CMatrix ga = group[pick(rng)], gb = group[pick(rng)];
    ga.col(t % 3).setZero();  // partial isometries
    const auto a = *recognize_spi(Mat::on_counting(ga), 3.0).spi;
    const auto b = *recognize_spi(Mat::on_counting(gb), 3.0).spi;
    const auto ab = compose_spi(a, b);
    CHECK(ab.matrix() == ga * gb);
    const auto rec = recognize_spi(Mat::on_counting(ga * gb), 3.0);
    REQUIRE(rec);
    CHECK(rec.spi->atom_map == ab.atom_map);
    const auto t2 = tensor_spi(a, b);
    CHECK(t2.matrix() == oracle::kron(ga, gb));
    CHECK(recognize_spi(Mat{t2.matrix(), t2.domain, t2.codomain, {}}, 3.0));
  }
  SpatialPartialIsometry x;
  x.domain = x.codomain = AtomicMeasure::counting(2);
  SpatialPartialIsometry y = x;
  y.p = 3.0;
  CHECK_THROWS_AS(compose_spi(x, y), InputError);
}
