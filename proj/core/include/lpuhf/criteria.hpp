#pragma once

// Finite-stage diagnostics for tensor-product-type algebras: the series
// sum (R_{p,S_n} - 1), flip witnesses v_n = r_d(n) (sigma_n (x) sigma_n)(y_{r_d(n)})
// and verdicts for registered closed-form families.

#include "lpuhf/tensor_type.hpp"

#include <string>
#include <vector>

namespace lpuhf {

enum class Verdict { convergent_spatial, divergent_nonamenable, undetermined };

std::string to_string(Verdict v);

struct SeriesReport {
  std::vector<double> terms;             // R_{p,S_n} - 1
  std::vector<double> partial_sums;
  std::vector<double> partial_products;  // prod R_{p,S_n}
  Verdict verdict = Verdict::undetermined;
  std::string verdict_basis;
};

/// Evaluates the first N stages. A verdict other than undetermined is given
/// only for registered closed-form families; finite prefixes never decide.
SeriesReport series_report(const StageRecipe& recipe, const Exponent& p, std::size_t prefix);

struct SumProductCheck {
  bool holds = true;
  double max_beta = 0.0;
  std::vector<double> partial_sums;
  std::vector<double> partial_products;
};

/// For alpha_n >= 1, beta_n = alpha_n - 1 and M = max beta_n, checks
/// M^{-1} log(M+1) beta_n <= log(1 + beta_n) <= beta_n termwise and
/// exp(M^{-1} log(M+1) sum beta) <= prod alpha <= exp(sum beta) on every
/// prefix (tolerance 1e-9). Throws InputError if some alpha_n < 1.
SumProductCheck sum_product_consistency(const std::vector<double>& alphas, std::size_t n);

struct FlipWitness {
  std::size_t n = 0;
  CMatrix v;                // r_d(n) y_{r_d(n)}: a permutation matrix
  NormInterval norm;        // in the doubled combined system
  bool involution = false;  // v v = 1, exactly
  bool factorizes = false;  // reordered factors give (x)_k d(k) y_{d(k)}, exactly
};

/// The flip witness at stage n, normed in combined(0,n) (x) combined(0,n).
FlipWitness flip_witness(const StageSpec& spec, std::size_t n);

/// || v_n (sigma(a) (x) sigma(b)) v_n^{-1} - sigma(b) (x) sigma(a) || in the
/// doubled stage norm, for a, b in M_{r_d(m)} embedded at stage n.
double flip_conjugation_residual(const StageSpec& spec, std::size_t m, std::size_t n, const CMatrix& a,
                                 const CMatrix& b);

/// ||rho (x) rho|| = R_{p,S}^2 for a diagonal system; cross-checked against
/// p_bound(tensor_systems(S, S)) when d <= 3. UnsupportedError otherwise.
NormInterval rho_tensor_norm(const SimilaritySystem& s, const Exponent& p);

}  // namespace lpuhf
