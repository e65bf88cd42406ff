#pragma once

// Constructive analytic tools: phase/positive splitting and spatialization
// of diagonal systems, polar splitting, partial products of similarities,
// sign selection, lower bounds for projective norms, block compression and
// multiplicative defects of linear maps.

#include "lpuhf/matalg.hpp"
#include "lpuhf/simsys.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace lpuhf {

struct PhasePositiveSplit {
  double beta = 0.0;  // min_j |alpha_j|
  CMatrix w;          // diag(|alpha_j| / beta), entries >= 1
  CMatrix u;          // diag(sgn alpha_j)
};

/// s = beta w u for diagonal invertible s; the four norm identities for w are
/// verified to 1e-12 (StructureError otherwise).
PhasePositiveSplit phase_positive_split(const CMatrix& s, const Exponent& p = Exponent(2.0));

struct Spatialization {
  std::vector<CMatrix> u_blocks;  // tau_i = Ad(u_i)
  std::vector<CMatrix> w_blocks;
  Mat w;                          // block diagonal on X_S
  double r = 1.0;                 // R_{p,S}
  double w_norm = 1.0;
  double w_minus_one_norm = 0.0;
  double w_inverse_norm = 1.0;
  double w_inverse_minus_one_norm = 0.0;
  double residual = 0.0;          // max over matrix units of |psi(x) - w tau(x) w^{-1}|
};

/// Spatial representation tau and w with psi^{p,S}(x) = w tau(x) w^{-1}.
Spatialization spatialize(const SimilaritySystem& s, const Exponent& p);

/// tau(x) of a spatialization, block diagonal on X_S.
Mat spatial_rep(const Spatialization& sp, const SimilaritySystem& s, const CMatrix& x);

struct PolarSplit {
  CMatrix c;  // (s s*)^{1/2}
  CMatrix u;  // unitary
};

/// s = c u. When ||s^{-1}||_2 = 1 verifies ||c - 1||_2 <= ||s||_2 - 1 and
/// ||c^{-1} - 1||_2 <= ||s||_2 - 1 (1e-9); StructureError if violated.
PolarSplit polar_split(const CMatrix& s);

struct PartialProducts {
  std::vector<double> differences;  // ||y_n - y_{n-1}||
  std::vector<double> bounds;       // M1 ||w_n - 1||
  std::vector<bool> materialized;   // difference computed on the full product space
  double m1 = 1.0;
  double m2 = 1.0;
  bool holds = true;
};

/// y_n = w_1 (x) ... (x) w_n (x) 1 for spatial Lp norms.
PartialProducts partial_products(const std::vector<CMatrix>& ws, const Exponent& p);

enum class Side { first, second };

struct SignSelection {
  std::vector<Complex> zeta;
  std::size_t j0 = 0;  // 0-based
  Side side = Side::first;
  double achieved = 0.0;
  double bound = 0.0;  // sqrt(gamma / beta)
};

/// Unimodular zeta and j0 with
///   first:  || sum_k (zeta_j0 alpha_j0)(zeta_k alpha_k)^{-1} xi_k || >= sqrt(gamma/beta), or
///   second: || sum_k (zeta_j0 alpha_j0)^{-1}(zeta_k alpha_k) xi_k || >= sqrt(gamma/beta).
/// The xi live in lp over `m` (unit weights by default) and are rescaled so
/// their sum has norm one.
SignSelection sign_selection(const std::vector<Complex>& alphas, const std::vector<CVector>& xis,
                             const Exponent& p, const AtomicMeasure* m = nullptr);

/// Sign selection against an explicitly supplied norm and functional on E.
SignSelection sign_selection(const std::vector<Complex>& alphas, const std::vector<CMatrix>& xis,
                             const std::function<double(const CMatrix&)>& norm,
                             const std::function<Complex(const CMatrix&)>& functional);

struct DiagonalLowerBound {
  double value = 0.0;
  std::vector<double> per_index;  // bound obtained from each s(i)
  std::vector<double> targets;    // sqrt(||s(i)|| ||s(i)^{-1}||)
};

/// Lower bound for ||z||_{S,pi} via the contractions
///   D1(b1 (x) b2) = (w (x) 1) b1 (w^{-1} (x) 1) b2,  D2(b1 (x) b2) = b1 (w (x) 1) b2 (w^{-1} (x) 1)
/// with w = u s(i) and u from sign selection on Delta_A(z_{j,j}).
DiagonalLowerBound diagonal_lower_bound(const TensorSum<Complex>& z, const SimilaritySystem& s, const Exponent& p);

struct BlockCompression {
  std::vector<CMatrix> t_table;  // T on the matrix units of M_{d0}
  double max_offdiag = 0.0;      // max ||a_{l,m}||, l != m, over test elements
  double bound = 0.0;            // M gamma0 / gamma
  bool holds = true;
};

/// Certified upper bound for ||phi|| from (M_{d0}, ||.||_{p,gamma0}) to
/// (M_d (x) M_m, ||.||_{p,gamma}): sum over matrix units of the K_{d,gamma} upper norms.
double certify_map_bound(const std::vector<CMatrix>& phi_table, std::size_t d, double gamma, const Exponent& p);

/// T(x) = sum_l (e_{l,l} (x) 1) phi(x) (e_{l,l} (x) 1), with the off-diagonal
/// blocks of phi(x) measured on matrix units and `random_tests` seeded unit-ball
/// elements. `phi_table` lists phi(e_{j,k}) in row-major order.
BlockCompression block_compression(const std::vector<CMatrix>& phi_table, std::size_t d, double gamma,
                                   double gamma0, double m_bound, const Exponent& p, int random_tests = 64,
                                   unsigned long long seed = 0);

struct DefectReport {
  double defect_estimate = 0.0;  // lower estimate of ||T^v||
  std::size_t best_x = 0;        // matrix-unit indices of the maximizing pair, if a unit pair won
  std::size_t best_y = 0;
  double t_norm_upper = 0.0;
  std::optional<double> distance_upper_bound;  // ||T - phi|| for a supplied homomorphism phi
  std::optional<double> johnson_bound;         // (1 + eps + 2||T||) eps
  bool johnson_holds = true;
  double max_unit_defect = 0.0;
};

using TargetNorm = std::function<NormInterval(const CMatrix&)>;

/// T^v(x, y) = T(xy) - T(x) T(y) on matrix-unit pairs and `random_pairs`
/// seeded unit pairs; the source is M_{d0}^p. When `phi_table` is given it
/// must be a homomorphism; eps = ||T - phi|| is bounded from above and the
/// bound (1 + eps + 2||T||) eps >= ||T^v|| is checked.
DefectReport multiplicative_defect(const std::vector<CMatrix>& t_table, const TargetNorm& target, const Exponent& p,
                                   const std::vector<CMatrix>* phi_table = nullptr, int random_pairs = 100,
                                   unsigned long long seed = 0);

}  // namespace lpuhf
