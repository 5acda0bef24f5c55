#include "fq.hpp"

#include <stdexcept>
#include <string>

namespace sparkppr {

bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint32_t d = 3; static_cast<std::uint64_t>(d) * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

FieldSpec::FieldSpec(std::uint32_t q) : q_(q) {
  if (!is_prime(q)) {
    throw std::invalid_argument("field modulus " + std::to_string(q) +
                                " is not prime");
  }
}

std::uint32_t FieldSpec::inv(std::uint32_t a) const {
  if (a == 0) throw std::domain_error("division by zero in F_q");
  // Extended Euclid on (a, q); q prime guarantees gcd 1.
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = q_, new_r = a;
  while (new_r != 0) {
    const std::int64_t quot = r / new_r;
    t -= quot * new_t;
    std::swap(t, new_t);
    r -= quot * new_r;
    std::swap(r, new_r);
  }
  if (t < 0) t += q_;
  return static_cast<std::uint32_t>(t);
}

}  // namespace sparkppr
