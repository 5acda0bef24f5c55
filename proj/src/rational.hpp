#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace sparkppr {

// Exact rational number on 64-bit integers, always stored normalized with a
// positive denominator. Sized for element-proportion bookkeeping, not for
// general arithmetic: the library never grows denominators past a few
// thousand.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1) : num_(num), den_(den) {
    if (den_ == 0) throw std::invalid_argument("rational with zero denominator");
    normalize();
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  Rational operator+(const Rational& o) const {
    return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  }
  Rational operator-(const Rational& o) const {
    return Rational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
  }
  Rational operator*(const Rational& o) const {
    return Rational(num_ * o.num_, den_ * o.den_);
  }
  Rational operator/(const Rational& o) const {
    if (o.num_ == 0) throw std::domain_error("rational division by zero");
    return Rational(num_ * o.den_, den_ * o.num_);
  }

  bool operator==(const Rational& o) const = default;
  bool operator<(const Rational& o) const { return num_ * o.den_ < o.num_ * den_; }

  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  std::string str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

  static Rational parse(const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos) throw std::invalid_argument("rational: expected num/den, got '" + text + "'");
    std::size_t used_n = 0, used_d = 0;
    const std::string ns = text.substr(0, slash), ds = text.substr(slash + 1);
    const std::int64_t n = std::stoll(ns, &used_n);
    const std::int64_t d = std::stoll(ds, &used_d);
    if (used_n != ns.size() || used_d != ds.size())
      throw std::invalid_argument("rational: trailing characters in '" + text + "'");
    return Rational(n, d);
  }

 private:
  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (num_ == 0) den_ = 1;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace sparkppr
