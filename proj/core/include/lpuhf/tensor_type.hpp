#pragma once

// Finite truncations of tensor-product-type algebras: stage lists, combined
// systems, the unital embeddings between stages, r_d(n) and supernatural
// numbers.

#include "lpuhf/rational.hpp"
#include "lpuhf/simsys.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lpuhf {

struct Stage {
  std::size_t d;
  SimilaritySystem system;
};

class StageSpec {
public:
  /// Validates every stage; throws InputError for invalid systems, mismatched
  /// dimensions, d < 2 or an infinite exponent.
  StageSpec(std::vector<Stage> stages, Exponent p);

  const std::vector<Stage>& stages() const { return stages_; }
  const Stage& stage(std::size_t k) const { return stages_.at(k - 1); }  // 1-based
  std::size_t size() const { return stages_.size(); }
  const Exponent& p() const { return p_; }
  std::vector<std::size_t> dims() const;

private:
  std::vector<Stage> stages_;
  Exponent p_;
};

/// Closed-form gamma(n) sequences with a known convergence rule for
/// sum (gamma(n) - 1).
struct GammaFamily {
  enum class Kind { power, geometric, log };
  Kind kind = Kind::power;
  double c = 1.0;  // gamma(n) - 1 = c * shape(n)
  double a = 2.0;  // power: n^-a; log: 1 / (n ln(n+1)^a)
  double q = 0.5;  // geometric: q^n
  std::size_t d = 2;

  double gamma(std::size_t n) const;
  /// True iff sum_n (gamma(n) - 1) converges.
  bool convergent() const;
  std::string rule() const;
};

std::string to_string(GammaFamily::Kind k);

/// Lazily generated stages: only requested prefixes are materialized.
class StageRecipe {
public:
  explicit StageRecipe(GammaFamily family);
  /// Wraps an explicit finite list; stages beyond it are unavailable.
  explicit StageRecipe(StageSpec explicit_stages);

  Stage stage(std::size_t n) const;  // 1-based
  std::optional<std::size_t> length() const;
  const std::optional<GammaFamily>& family() const { return family_; }
  /// The first n stages at exponent p.
  StageSpec prefix(std::size_t n, const Exponent& p) const;

private:
  std::optional<GammaFamily> family_;
  std::optional<StageSpec> explicit_;
};

/// d(1) d(2) ... d(n); r_d(0) = 1.
BigInt r_d(const StageSpec& spec, std::size_t n);

struct SupernaturalNumber {
  std::map<std::uint64_t, std::uint64_t> exponents;  // prime -> exponent, zeros omitted
  bool truncated = true;

  std::string to_string() const;
  friend bool operator==(const SupernaturalNumber&, const SupernaturalNumber&) = default;
};

/// Prime exponents of r_d(n).
SupernaturalNumber supernatural_truncated(const StageSpec& spec, std::size_t n);

/// Iterated tensor product of S_{m+1}, ..., S_n (the 1-dimensional basic
/// system when m = n). Asserts multiplicativity of the p-bound.
SimilaritySystem combined_system(const StageSpec& spec, std::size_t m, std::size_t n);

/// x (x) 1 from stage m to stage n.
CMatrix sigma_embed(const CMatrix& x, const StageSpec& spec, std::size_t m, std::size_t n);

/// norm_pS of x under combined_system(spec, 0, n).
NormInterval stage_norm(const StageSpec& spec, const CMatrix& x, std::size_t n);

/// Caps the number of indices in a materialized combined system.
inline constexpr std::size_t kMaxCombinedIndices = 1 << 16;

}  // namespace lpuhf
