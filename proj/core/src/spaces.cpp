#include "lpuhf/spaces.hpp"

#include "lpuhf/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace lpuhf {

AtomicMeasure::AtomicMeasure(std::vector<double> weights, std::vector<std::string> labels)
    : weights_(std::move(weights)), labels_(std::move(labels)) {
  for (double w : weights_)
    if (!(w > 0.0) || !std::isfinite(w)) throw InputError("atomic measure: every weight must be positive");
  if (labels_.empty()) {
    labels_.reserve(weights_.size());
    for (std::size_t j = 0; j < weights_.size(); ++j) labels_.push_back(std::to_string(j));
  } else if (labels_.size() != weights_.size()) {
    throw InputError("atomic measure: label count does not match weight count");
  }
  const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  normalized_ = std::abs(total - 1.0) <= 1e-12;
}

AtomicMeasure AtomicMeasure::normalized_counting(std::size_t n) {
  if (n == 0) throw InputError("atomic measure: need at least one atom");
  return AtomicMeasure(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

AtomicMeasure AtomicMeasure::counting(std::size_t n) {
  if (n == 0) throw InputError("atomic measure: need at least one atom");
  return AtomicMeasure(std::vector<double>(n, 1.0));
}

AtomicMeasure AtomicMeasure::product(const AtomicMeasure& a, const AtomicMeasure& b) {
  std::vector<double> w;
  std::vector<std::string> l;
  w.reserve(a.size() * b.size());
  l.reserve(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      w.push_back(a.weights_[i] * b.weights_[j]);
      l.push_back("(" + a.labels_[i] + "," + b.labels_[j] + ")");
    }
  return AtomicMeasure(std::move(w), std::move(l));
}

AtomicMeasure AtomicMeasure::disjoint_union(const AtomicMeasure& a, const AtomicMeasure& b) {
  std::set<std::string> seen(a.labels_.begin(), a.labels_.end());
  for (const auto& l : b.labels_)
    if (seen.count(l)) throw InputError("disjoint union: atom label '" + l + "' appears in both spaces");
  std::vector<double> w = a.weights_;
  std::vector<std::string> l = a.labels_;
  w.insert(w.end(), b.weights_.begin(), b.weights_.end());
  l.insert(l.end(), b.labels_.begin(), b.labels_.end());
  return AtomicMeasure(std::move(w), std::move(l));
}

bool AtomicMeasure::uniform() const {
  return std::adjacent_find(weights_.begin(), weights_.end(), std::not_equal_to<>()) == weights_.end();
}

Complex sgn(Complex z) {
  const double r = std::abs(z);
  if (r == 0.0) return {0.0, 0.0};
  if (z.imag() == 0.0) return {z.real() > 0 ? 1.0 : -1.0, 0.0};
  if (z.real() == 0.0) return {0.0, z.imag() > 0 ? 1.0 : -1.0};
  return z / r;
}

Complex reciprocal(Complex z) {
  if (z.imag() == 0.0) return {1.0 / z.real(), 0.0};
  if (z.real() == 0.0) return {0.0, -1.0 / z.imag()};
  return Complex(1.0, 0.0) / z;
}

namespace {

void require_match(const CVector& v, const AtomicMeasure& m, const char* what) {
  if (static_cast<std::size_t>(v.size()) != m.size())
    throw InputError(std::string(what) + ": vector length " + std::to_string(v.size()) +
                     " does not match atom count " + std::to_string(m.size()));
}

}  // namespace

double vector_norm(const CVector& v, const Exponent& p, const AtomicMeasure& m) {
  require_match(v, m, "vector_norm");
  if (p.is_infinite()) return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
  const double pv = p.value();
  // Scale by the largest modulus to avoid under/overflow in |v_j|^p.
  const double scale = v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  double acc = 0.0;
  if (p.is_exactly(1)) {
    for (Eigen::Index j = 0; j < v.size(); ++j) acc += m.weight(j) * std::abs(v[j]);
    return acc;
  }
  if (p.is_exactly(2)) {
    for (Eigen::Index j = 0; j < v.size(); ++j) acc += m.weight(j) * std::norm(v[j] / scale);
    return scale * std::sqrt(acc);
  }
  for (Eigen::Index j = 0; j < v.size(); ++j) acc += m.weight(j) * std::pow(std::abs(v[j]) / scale, pv);
  return scale * std::pow(acc, 1.0 / pv);
}

Complex pairing(const CVector& omega, const CVector& v, const AtomicMeasure& m) {
  require_match(v, m, "pairing");
  require_match(omega, m, "pairing");
  Complex acc{0.0, 0.0};
  for (Eigen::Index j = 0; j < v.size(); ++j) acc += m.weight(j) * omega[j] * v[j];
  return acc;
}

CVector norming_functional(const CVector& v, const Exponent& p, const AtomicMeasure& m) {
  require_match(v, m, "norming_functional");
  if (p.is_infinite()) throw InputError("norming_functional: p must be finite");
  const double n = vector_norm(v, p, m);
  if (n == 0.0) throw InputError("norming_functional: zero vector has no norming functional");
  CVector omega(v.size());
  const double e = p.value() - 1.0;
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    const Complex s = sgn(std::conj(v[j]));
    if (p.is_exactly(1))
      omega[j] = s;
    else
      omega[j] = s * std::pow(std::abs(v[j]) / n, e);
  }
  return omega;
}

}  // namespace lpuhf
