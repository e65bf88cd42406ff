#pragma once

#include "lpuhf/exponent.hpp"

#include <Eigen/Core>

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace lpuhf {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// A finite measure space: ordered atoms with strictly positive weights.
class AtomicMeasure {
public:
  AtomicMeasure() = default;
  /// Labels default to "0", "1", ... when `labels` is empty.
  explicit AtomicMeasure(std::vector<double> weights, std::vector<std::string> labels = {});

  /// Counting measure scaled to total mass one.
  static AtomicMeasure normalized_counting(std::size_t n);
  /// Every atom has weight one.
  static AtomicMeasure counting(std::size_t n);
  /// Product measure, first factor outermost (lexicographic).
  static AtomicMeasure product(const AtomicMeasure& a, const AtomicMeasure& b);
  /// Disjoint union; throws InputError if labels collide.
  static AtomicMeasure disjoint_union(const AtomicMeasure& a, const AtomicMeasure& b);

  std::size_t size() const { return weights_.size(); }
  const std::vector<double>& weights() const { return weights_; }
  double weight(std::size_t j) const { return weights_[j]; }
  const std::vector<std::string>& labels() const { return labels_; }
  bool normalized() const { return normalized_; }
  /// True when every atom carries the same weight (bitwise).
  bool uniform() const;

  friend bool operator==(const AtomicMeasure&, const AtomicMeasure&) = default;

private:
  std::vector<double> weights_;
  std::vector<std::string> labels_;
  bool normalized_ = false;
};

/// (sum_j w_j |v_j|^p)^(1/p), or max_j |v_j| for p = infinity.
double vector_norm(const CVector& v, const Exponent& p, const AtomicMeasure& m);

/// Weighted pairing sum_j w_j omega_j v_j.
Complex pairing(const CVector& omega, const CVector& v, const AtomicMeasure& m);

/// The functional omega with pairing(omega, v) = ||v||_p and ||omega||_{p'} = 1:
/// omega_j = sgn(conj v_j) (|v_j| / ||v||)^(p-1).
CVector norming_functional(const CVector& v, const Exponent& p, const AtomicMeasure& m);

/// z/|z|, zero for z = 0.
Complex sgn(Complex z);

/// 1/z, computed without cross terms when z is real or purely imaginary.
Complex reciprocal(Complex z);

}  // namespace lpuhf
