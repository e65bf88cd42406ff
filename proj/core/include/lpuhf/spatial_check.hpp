#pragma once

// Spatial partial isometries on finite atomic spaces: monomial operators
// whose nonzero entries are phase * (w_k / w_j)^{1/p}.

#include "lpuhf/pnorm.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace lpuhf {

struct SpatialPartialIsometry {
  AtomicMeasure domain;
  AtomicMeasure codomain;
  double p = 2.0;
  std::map<std::size_t, std::size_t> atom_map;  // domain atom -> codomain atom
  std::map<std::size_t, Complex> phase;         // keyed by domain atom

  std::set<std::size_t> domain_support() const;
  std::set<std::size_t> range_support() const;
  /// The operator: entry (atom_map[k], k) = phase[k] (w_k / w'_j)^{1/p}.
  CMatrix matrix() const;

  friend bool operator==(const SpatialPartialIsometry&, const SpatialPartialIsometry&) = default;
};

struct Recognition {
  std::optional<SpatialPartialIsometry> spi;
  std::string refusal;  // first violation when spi is empty

  explicit operator bool() const { return spi.has_value(); }
};

inline constexpr double kSpatialTolerance = 1e-9;

Recognition recognize_spi(const Mat& a, const Exponent& p);

struct SpatialRepCheck {
  bool spatial = false;
  std::vector<std::set<std::size_t>> partition;  // X_j = support of rho(e_{j,j})
  std::string refusal;
};

/// `table` holds rho(e_{j,k}) in row-major order. Throws InputError unless
/// rho is unital and multiplicative on matrix units (1e-9).
SpatialRepCheck is_spatial_rep(const std::vector<Mat>& table, std::size_t d, const Exponent& p);

/// Disjoint union; throws InputError if atom labels overlap.
SpatialPartialIsometry direct_sum_spi(const std::vector<SpatialPartialIsometry>& parts);

/// a after b: atom maps compose, phases multiply. Requires b.codomain == a.domain.
SpatialPartialIsometry compose_spi(const SpatialPartialIsometry& a, const SpatialPartialIsometry& b);

/// a (x) b on the product spaces.
SpatialPartialIsometry tensor_spi(const SpatialPartialIsometry& a, const SpatialPartialIsometry& b);

}  // namespace lpuhf
