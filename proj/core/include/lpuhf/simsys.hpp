#pragma once

// Systems of d-similarities S = (I, s, f), their block-diagonal
// representations x -> (+)_i s(i) x s(i)^{-1}, the p-bound R_{p,S},
// matrix-unit norm tables and the corner systems for K_{d,gamma}.

#include "lpuhf/pnorm.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace lpuhf {

struct SystemEntry {
  std::string label;
  double f = 0.0;
  CMatrix s;
};

class SimilaritySystem {
public:
  /// Builds without validation; use validate_system or require_valid.
  SimilaritySystem(std::size_t d, std::vector<SystemEntry> entries, bool diagonal);

  /// Single index, s = 1, f = 1.
  static SimilaritySystem basic(std::size_t d);

  std::size_t d() const { return d_; }
  std::size_t size() const { return entries_.size(); }
  bool diagonal() const { return diagonal_; }
  const std::vector<SystemEntry>& entries() const { return entries_; }
  const SystemEntry& entry(std::size_t i) const { return entries_[i]; }
  /// s(i)^{-1}; entrywise reciprocal for diagonal systems. Empty if s(i) is singular.
  const CMatrix& inverse(std::size_t i) const { return inverses_[i]; }
  /// Diagonal of s(i); requires diagonal().
  CVector alphas(std::size_t i) const { return entries_[i].s.diagonal(); }

  /// Atom weights f(i)/d of X_S = {1..d} x I, block by block.
  AtomicMeasure measure() const;

  /// Index of the entry with the given label; throws InputError if absent.
  std::size_t index_of(const std::string& label) const;

private:
  std::size_t d_;
  std::vector<SystemEntry> entries_;
  std::vector<CMatrix> inverses_;
  bool diagonal_;
};

struct Violation {
  enum class Kind { shape, one, inv, pos, sum, diag };
  Kind kind;
  std::string message;
};

std::string to_string(Violation::Kind k);

/// Checks every invariant of a system; an empty result means valid.
std::vector<Violation> validate_system(const SimilaritySystem& s);
/// Throws InputError listing the violations, if any.
void require_valid(const SimilaritySystem& s);

/// R_{p,S} = sup_i ||s(i)|| ||s(i)^{-1}||. Width zero for diagonal systems.
NormInterval p_bound(const SimilaritySystem& s, const Exponent& p);

/// (s(i) (x) 1_m) x (s(i)^{-1} (x) 1_m) for x of size (d m) x (d m).
CMatrix conjugate_block(const SimilaritySystem& s, std::size_t i, const CMatrix& x);

/// Block-diagonal operator on X_S with block i equal to s(i) x s(i)^{-1}.
Mat rep_matrix(const SimilaritySystem& s, const CMatrix& x);

struct SystemNorm {
  NormInterval interval;
  std::size_t witness_index = 0;  // smallest index attaining the maximal lower bound
};

/// ||x||_{p,S} for x in M_d (x) M_m: sup_i of the conjugated spatial norms.
/// The weights f never enter the computation.
SystemNorm norm_pS(const SimilaritySystem& s, const CMatrix& x, const Exponent& p);

struct RTable {
  std::size_t d = 0;
  std::vector<double> r;  // row-major, r[(j-1) d + (k-1)]
  double at(std::size_t j, std::size_t k) const { return r[(j - 1) * d + (k - 1)]; }
  double max() const;
};

/// r_{j,k} = max_i |alpha_{i,j}| / |alpha_{i,k}|; cross-checked against
/// norm_pS on every matrix unit (StructureError beyond 1e-9).
RTable r_table(const SimilaritySystem& s, const Exponent& p = Exponent(2.0));

/// Index I1 x I2, s = kron, f = product; diagonal iff both are.
SimilaritySystem tensor_systems(const SimilaritySystem& a, const SimilaritySystem& b);

/// Diagonal system on the 2^d corners of [1, gamma]^d (duplicates removed,
/// identity first), uniform weights. For matrix units and block-diagonal
/// elements its norms coincide with the K_{d,gamma} norms; otherwise it gives
/// the lower end of the enclosure returned by k_gamma_norm.
SimilaritySystem gamma_corner_system(std::size_t d, double gamma);

/// Enclosure of sup_{v in K_{d,gamma}} ||(v (x) 1) x (v^{-1} (x) 1)||_p.
/// Lower end from the corners. The corners are exact when x is block
/// diagonal or its nonzero blocks sit in one block row or one block column;
/// otherwise the upper end is min(gamma ||x||_p, max_l ||x_ll|| + gamma sum_{l != m} ||x_lm||).
NormInterval k_gamma_norm(std::size_t d, double gamma, const CMatrix& x, const Exponent& p);

/// Restriction to the indices J with weights renormalized. Verifies
/// norm_pS(restricted, x) <= norm_pS(s, x) on every supplied test element.
SimilaritySystem subsystem_restrict(const SimilaritySystem& s, const std::vector<std::size_t>& indices,
                                    const std::vector<CMatrix>& test_elements = {},
                                    const Exponent& p = Exponent(2.0));

/// ||x|| under the beta corners <= ||x|| under the gamma corners (+1e-9).
bool norm_monotonicity_check(std::size_t d, double beta, double gamma, const CMatrix& x, const Exponent& p);

}  // namespace lpuhf
