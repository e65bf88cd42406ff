#include "corpus.hpp"

#include <lpuhf/error.hpp>
#include <lpuhf/matalg.hpp>
#include <lpuhf/tensor_type.hpp>

#include <doctest.h>

using namespace lpuhf;

namespace {

StageSpec basic_spec(const std::vector<std::size_t>& dims, Exponent p = Exponent(2.0)) {
  std::vector<Stage> st;
  for (auto d : dims) st.push_back({d, SimilaritySystem::basic(d)});
  return StageSpec(st, p);
}

StageSpec corner_spec(const std::vector<double>& gammas, Exponent p = Exponent(2.0)) {
  std::vector<Stage> st;
  for (double g : gammas) st.push_back({2, gamma_corner_system(2, g)});
  return StageSpec(st, p);
}

}  // namespace

TEST_CASE("stage spec validation") {
  CHECK_NOTHROW(basic_spec({2, 3}));
  CHECK_THROWS_AS(basic_spec({1}), InputError);
  CHECK_THROWS_AS(StageSpec({{3, SimilaritySystem::basic(2)}}, Exponent(2.0)), InputError);
  CHECK_THROWS_AS(basic_spec({2}, Exponent::infinity()), InputError);
  SimilaritySystem bad(2, {{"a", 0.7, CMatrix::Identity(2, 2)}}, true);
  CHECK_THROWS_AS(StageSpec({{2, bad}}, Exponent(2.0)), InputError);
  const auto s = basic_spec({2, 3, 2});
  CHECK(s.dims() == std::vector<std::size_t>{2, 3, 2});
  CHECK(s.stage(2).d == 3);
}

TEST_CASE("r_d") {
  CHECK(r_d(basic_spec({2, 3, 2}), 3) == 12);
  CHECK(r_d(basic_spec({2, 3, 2}), 0) == 1);
  CHECK(r_d(basic_spec({2, 2, 2}), 3) == 8);
  CHECK_THROWS_AS(r_d(basic_spec({2}), 2), InputError);
  std::vector<std::size_t> many(100, 7);
  BigInt want = 1;
  for (int k = 0; k < 100; ++k) want *= 7;
  CHECK(r_d(basic_spec(many), 100) == want);
}

TEST_CASE("supernatural numbers") {
  const auto a = supernatural_truncated(basic_spec({2, 3, 2}), 3);
  CHECK(a.exponents == std::map<std::uint64_t, std::uint64_t>{{2, 2}, {3, 1}});
  CHECK(a.truncated);
  CHECK(a.to_string() == "2^2 * 3^1 (truncated)");
  const auto b = supernatural_truncated(basic_spec({6}), 1);
  CHECK(b.exponents == std::map<std::uint64_t, std::uint64_t>{{2, 1}, {3, 1}});
  CHECK(supernatural_truncated(basic_spec({2, 3, 2}), 3) == supernatural_truncated(basic_spec({3, 2, 2}), 3));
  CHECK(supernatural_truncated(basic_spec({2}), 0).exponents.empty());
}

TEST_CASE("reordering stages leaves the invariants unchanged") {
  std::mt19937_64 rng(61);
  std::uniform_int_distribution<std::size_t> u(2, 30);
  for (int t = 0; t < 50; ++t) {
    std::vector<std::size_t> dims;
    for (int k = 0; k < 6; ++k) dims.push_back(u(rng));
    auto shuffled = dims;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto a = basic_spec(dims), b = basic_spec(shuffled);
    CHECK(r_d(a, 6) == r_d(b, 6));
    CHECK(supernatural_truncated(a, 6) == supernatural_truncated(b, 6));
    // the factorization reproduces r_d
    BigInt prod = 1;
    for (const auto& [q, e] : supernatural_truncated(a, 6).exponents)
      for (std::uint64_t k = 0; k < e; ++k) prod *= q;
    CHECK(prod == r_d(a, 6));
  }
}

TEST_CASE("combined systems") {
  const auto spec = corner_spec({3.0, 5.0});
  const auto one = combined_system(spec, 0, 1);
  CHECK(one.size() == spec.stage(1).system.size());
  CHECK(one.entry(1).s == spec.stage(1).system.entry(1).s);
  const auto two = combined_system(spec, 0, 2);
  CHECK(two.d() == 4);
  CHECK(p_bound(two, 2.0).upper == 15.0);
  CHECK(p_bound(combined_system(corner_spec({3.0, 3.0}), 0, 2), 2.0).upper == 9.0);
  const auto scalar = combined_system(spec, 1, 1);
  CHECK(scalar.d() == 1);
  CHECK(p_bound(scalar, 2.0).upper == 1.0);
  CHECK(combined_system(spec, 1, 2).d() == 2);
  CHECK_THROWS_AS(combined_system(spec, 2, 1), InputError);
  CHECK_THROWS_AS(combined_system(spec, 0, 3), InputError);
}

TEST_CASE("combined p_bound is the product of stage p_bounds") {
  std::mt19937_64 rng(67);
  for (int t = 0; t < 20; ++t) {
    std::vector<Stage> st;
    double want = 1.0;
    for (int k = 0; k < 3; ++k) {
      auto s = corpus::dyadic_system(2, 1 + t % 2, rng);
      want *= p_bound(s, 2.0).upper;
      st.push_back({2, std::move(s)});
    }
    const StageSpec spec(st, Exponent(3.0));
    const auto r = p_bound(combined_system(spec, 0, 3), 3.0);
    CHECK(r.exact());
    CHECK(r.upper == want);
  }
}

TEST_CASE("combined systems respect the caps") {
  std::vector<double> g(9, 2.0);
  CHECK_THROWS_AS(combined_system(corner_spec(g), 0, 9), CapacityError);  // 4^9 indices
}

TEST_CASE("sigma_embed") {
  const auto spec = corner_spec({2.0, 3.0, 4.0});
  std::mt19937_64 rng(71);
  const CMatrix x = oracle::random_matrix(2, 2, rng);
  CHECK(sigma_embed(x, spec, 1, 1) == x);
  CHECK(sigma_embed(CMatrix::Identity(2, 2), spec, 1, 3) == CMatrix::Identity(8, 8));
  CHECK(sigma_embed(x, spec, 1, 2) == oracle::kron(x, CMatrix::Identity(2, 2)));
  CHECK_THROWS_AS(sigma_embed(x, spec, 0, 2), InputError);
  CHECK_THROWS_AS(sigma_embed(x, spec, 2, 1), InputError);
}

TEST_CASE("sigma_embed is isometric for the stage norms") {
  std::mt19937_64 rng(73);
  for (int t = 0; t < 10; ++t) {
    const auto spec = corner_spec({1.5 + t % 3, 2.0, 3.0});
    for (double p : {2.0, 3.0}) {
      const StageSpec sp(spec.stages(), Exponent(p));
      for (std::size_t m = 1; m <= 2; ++m) {
        const auto dm = static_cast<std::size_t>(r_d(sp, m));
        const CMatrix x = oracle::random_matrix(dm, dm, rng);
        const auto small = stage_norm(sp, x, m);
        const auto big = stage_norm(sp, sigma_embed(x, sp, m, 3), 3);
        // both enclose the same number
        CHECK(big.lower <= small.upper + 1e-9 * small.upper);
        CHECK(small.lower <= big.upper + 1e-9 * small.upper);
        if (p == 2.0) CHECK(big.lower == doctest::Approx(small.lower).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("stage_norm") {
  const auto spec = corner_spec({3.0, 5.0});
  CHECK(stage_norm(spec, CMatrix::Identity(4, 4), 2).upper == 1.0);
  for (std::size_t j1 = 1; j1 <= 2; ++j1)
    for (std::size_t k1 = 1; k1 <= 2; ++k1)
      for (std::size_t j2 = 1; j2 <= 2; ++j2)
        for (std::size_t k2 = 1; k2 <= 2; ++k2) {
          const CMatrix x = kron<Complex>(matrix_unit<Complex>(2, j1, k1), matrix_unit<Complex>(2, j2, k2));
          const double want = (j1 == k1 ? 1.0 : 3.0) * (j2 == k2 ? 1.0 : 5.0);
          const auto n = stage_norm(spec, x, 2);
          CHECK(n.exact());
          CHECK(n.upper == want);
        }
  CHECK_THROWS_AS(stage_norm(spec, CMatrix::Identity(2, 2), 2), InputError);
}

TEST_CASE("gamma families") {
  GammaFamily f;
  f.kind = GammaFamily::Kind::power;
  f.c = 1.0;
  f.a = 2.0;
  CHECK(f.gamma(1) == 2.0);
  CHECK(f.gamma(2) == 1.25);
  CHECK(f.convergent());
  f.a = 1.0;
  CHECK_FALSE(f.convergent());
  CHECK_THROWS_AS(f.gamma(0), InputError);

  GammaFamily g;
  g.kind = GammaFamily::Kind::geometric;
  g.c = 2.0;
  g.q = 0.5;
  CHECK(g.gamma(3) == 1.25);
  CHECK(g.convergent());
  g.q = 1.0;
  CHECK_FALSE(g.convergent());

  GammaFamily l;
  l.kind = GammaFamily::Kind::log;
  l.a = 2.0;
  CHECK(l.convergent());
  l.a = 1.0;
  CHECK_FALSE(l.convergent());
  CHECK(l.gamma(1) == doctest::Approx(1.0 + 1.0 / std::log(2.0)));

  GammaFamily zero;
  zero.c = 0.0;
  zero.a = 0.5;
  CHECK(zero.convergent());
  CHECK(to_string(GammaFamily::Kind::geometric) == "geometric");
}

TEST_CASE("stage recipes") {
  GammaFamily f;
  f.c = 1.0;
  f.a = 2.0;
  f.d = 3;
  const StageRecipe r(f);
  CHECK_FALSE(r.length().has_value());
  const auto st = r.stage(2);
  CHECK(st.d == 3);
  CHECK(p_bound(st.system, 2.0).upper == 1.25);
  CHECK(r.prefix(4, Exponent(2.0)).size() == 4);

  const StageRecipe e(basic_spec({2, 3}));
  CHECK(e.length() == 2u);
  CHECK(e.stage(2).d == 3);
  CHECK_THROWS_AS(e.stage(3), InputError);
  CHECK_THROWS_AS(e.stage(0), InputError);

  GammaFamily bad;
  bad.c = -1.0;
  CHECK_THROWS_AS(StageRecipe{bad}, InputError);
}
