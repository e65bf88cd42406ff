#pragma once

#include <boost/rational.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace lpuhf {

using SmallRational = boost::rational<long long>;

/// An Lp exponent: finite p >= 1 (kept exact when given as a rational) or infinity.
class Exponent {
public:
  /// Finite exponent from a float; throws InputError unless p >= 1.
  Exponent(double p);
  /// Exact rational exponent num/den; throws InputError unless num/den >= 1.
  Exponent(long long num, long long den);
  explicit Exponent(SmallRational p);

  static Exponent infinity();
  /// Accepts "inf", "infinity", "n/d" and decimal forms.
  static Exponent parse(std::string_view text);

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }
  /// p as a double; +inf for the infinite exponent.
  double value() const;
  /// 1/p, zero for the infinite exponent.
  double reciprocal() const;
  const std::optional<SmallRational>& exact() const { return exact_; }
  /// True when p equals n exactly (rational path or bit-exact double).
  bool is_exactly(long long n) const;

  /// Conjugate exponent q with 1/p + 1/q = 1.
  Exponent dual() const;

  std::string to_string() const;

  friend bool operator==(const Exponent& a, const Exponent& b);

private:
  Exponent() = default;

  bool infinite_ = false;
  double value_ = 1.0;
  std::optional<SmallRational> exact_;
};

/// dual_exponent(p): the q with 1/p + 1/q = 1 (1 <-> infinity).
inline Exponent dual_exponent(const Exponent& p) { return p.dual(); }

}  // namespace lpuhf
