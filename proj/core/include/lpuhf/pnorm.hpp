#pragma once

#include "lpuhf/spaces.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lpuhf {

/// Structural hint carried by a matrix. Monomial detection is always
/// re-verified; the tag survives kron so tensored permutations stay cheap.
struct Structure {
  enum class Kind { general, monomial, scaled_permutation };
  Kind kind = Kind::general;
  double scale = 1.0;  // meaningful for scaled_permutation

  static Structure general() { return {}; }
  static Structure monomial() { return {Kind::monomial, 1.0}; }
  static Structure scaled_permutation(double s) { return {Kind::scaled_permutation, s}; }
};

/// A complex matrix acting between two atomic Lp spaces.
struct Mat {
  CMatrix entries;
  AtomicMeasure domain;
  AtomicMeasure codomain;
  Structure structure;

  /// Square matrix on the normalized counting measure.
  static Mat on_counting(CMatrix a, Structure s = {});

  Eigen::Index rows() const { return entries.rows(); }
  Eigen::Index cols() const { return entries.cols(); }
};

enum class NormMethod { exact_p1, exact_p2, exact_pinf, exact_monomial, boyd, interp, sandwich };

std::string to_string(NormMethod m);

/// Certified enclosure [lower, upper] of an operator norm.
struct NormInterval {
  double lower = 0.0;
  double upper = 0.0;
  CVector lower_witness;  // in the (unreduced) domain space; empty when lower == 0
  std::vector<NormMethod> methods;

  double width() const { return upper - lower; }
  bool exact() const { return lower == upper; }
  bool contains(double v, double tol = 0.0) const { return v >= lower - tol && v <= upper + tol; }

  static NormInterval point(double v, NormMethod m);
};

/// Product enclosure of two nonnegative intervals.
NormInterval interval_product(const NormInterval& a, const NormInterval& b);
/// Enclosure of the max of several norms; witness from the first maximizing lower bound.
NormInterval interval_max(const std::vector<NormInterval>& parts);

struct BoydOptions {
  double tolerance = 1e-12;
  int max_iterations = 10'000;
  int restarts = 8;   // best screened directions used as extra starts
  int screen = 256;   // random directions screened, fewer for large n
  unsigned long long seed = 0xC0FFEE;
};

/// True when every row and every column holds at most one nonzero.
bool is_monomial(const CMatrix& a);

/// p -> p operator norm of A between its weighted domain and codomain spaces.
/// `sandwich_upper` is an optional externally certified upper bound.
NormInterval opnorm(const Mat& a, const Exponent& p, std::optional<double> sandwich_upper = std::nullopt,
                    const BoydOptions& opts = {});

/// Shorthand for square matrices on the normalized counting measure.
NormInterval opnorm(const CMatrix& a, const Exponent& p);

/// Lower bound from the Boyd fixed-point iteration alone (no dispatch).
NormInterval boyd_lower_bound(const CMatrix& a, const Exponent& p, const BoydOptions& opts = {});

/// ||A||_1^(1/p) ||A||_inf^(1-1/p), plus the sharper two-point interpolations through p = 2.
double interpolation_upper_bound(const CMatrix& a, const Exponent& p);

/// Norm of a -> s a s^{-1} on L(lp), i.e. ||s|| ||s^{-1}||. Exact for diagonal s.
NormInterval conjugation_map_norm(const CMatrix& s, const Exponent& p);

/// Evaluates ||A x||_p / ||x||_p in the weighted spaces of `a`.
double evaluate_ratio(const Mat& a, const CVector& x, const Exponent& p);

}  // namespace lpuhf
