#pragma once

#include <cstdint>

namespace sparkppr {

// Prime field F_q. Elements are canonical representatives in [0, q).
// Construction rejects non-prime moduli, so every nonzero element is
// invertible and the arithmetic below is exact.
class FieldSpec {
 public:
  explicit FieldSpec(std::uint32_t q);

  std::uint32_t q() const { return q_; }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    const std::uint32_t s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const {
    return a >= b ? a - b : a + q_ - b;
  }
  std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : q_ - a; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    return static_cast<std::uint32_t>(
        (static_cast<std::uint64_t>(a) * b) % q_);
  }
  // Multiplicative inverse; throws std::domain_error for 0.
  std::uint32_t inv(std::uint32_t a) const;
  std::uint32_t div(std::uint32_t a, std::uint32_t b) const {
    return mul(a, inv(b));
  }

  bool operator==(const FieldSpec&) const = default;

 private:
  std::uint32_t q_;
};

bool is_prime(std::uint32_t n);

}  // namespace sparkppr
