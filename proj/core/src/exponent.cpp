#include "lpuhf/exponent.hpp"

#include "lpuhf/error.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace lpuhf {

namespace {

double to_double(const SmallRational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

}  // namespace

Exponent::Exponent(double p) : value_(p) {
  if (!(p >= 1.0) || std::isinf(p)) {
    if (std::isinf(p) && p > 0) {
      infinite_ = true;
      value_ = std::numeric_limits<double>::infinity();
      return;
    }
    throw InputError("exponent must satisfy p >= 1, got " + std::to_string(p));
  }
  // Small integers are represented exactly so that dispatch on p = 1, 2 is exact.
  if (p == std::floor(p) && p < 1e15) exact_ = SmallRational(static_cast<long long>(p));
}

Exponent::Exponent(long long num, long long den) : Exponent(SmallRational(num, den)) {}

Exponent::Exponent(SmallRational p) : value_(to_double(p)), exact_(p) {
  if (p < SmallRational(1)) throw InputError("exponent must satisfy p >= 1");
}

Exponent Exponent::infinity() {
  Exponent e;
  e.infinite_ = true;
  e.value_ = std::numeric_limits<double>::infinity();
  return e;
}

Exponent Exponent::parse(std::string_view text) {
  const std::string s = trim(text);
  if (s == "inf" || s == "INF" || s == "infinity" || s == "Infinity") return infinity();
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    long long num = 0;
    long long den = 0;
    const auto a = s.substr(0, slash);
    const auto b = s.substr(slash + 1);
    auto r1 = std::from_chars(a.data(), a.data() + a.size(), num);
    auto r2 = std::from_chars(b.data(), b.data() + b.size(), den);
    if (r1.ec != std::errc{} || r2.ec != std::errc{} || r1.ptr != a.data() + a.size() ||
        r2.ptr != b.data() + b.size() || den == 0)
      throw InputError("malformed rational exponent '" + s + "'");
    return Exponent(num, den);
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InputError("malformed exponent '" + s + "'");
  }
  if (used != s.size()) throw InputError("malformed exponent '" + s + "'");
  return Exponent(v);
}

double Exponent::value() const { return value_; }

double Exponent::reciprocal() const {
  if (infinite_) return 0.0;
  if (exact_) return to_double(SmallRational(exact_->denominator(), exact_->numerator()));
  return 1.0 / value_;
}

bool Exponent::is_exactly(long long n) const {
  if (infinite_) return false;
  if (exact_) return *exact_ == SmallRational(n);
  return value_ == static_cast<double>(n);
}

Exponent Exponent::dual() const {
  if (infinite_) return Exponent(1LL, 1LL);
  if (is_exactly(1)) return infinity();
  if (exact_) return Exponent(*exact_ / (*exact_ - SmallRational(1)));
  return Exponent(value_ / (value_ - 1.0));
}

std::string Exponent::to_string() const {
  if (infinite_) return "inf";
  std::ostringstream os;
  if (exact_) {
    os << exact_->numerator();
    if (exact_->denominator() != 1) os << '/' << exact_->denominator();
  } else {
    os.precision(17);
    os << value_;
  }
  return os.str();
}

bool operator==(const Exponent& a, const Exponent& b) {
  if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
  if (a.exact_ && b.exact_) return *a.exact_ == *b.exact_;
  return a.value_ == b.value_;
}

}  // namespace lpuhf
