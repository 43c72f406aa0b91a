#include "twobridge/knot.hpp"

#include <numeric>
#include <stdexcept>

namespace twobridge {

long gcd_long(long a, long b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  return std::gcd(a, b);
}

long inverse_mod(long x, long m) {
  // Extended Euclid; m >= 1 and gcd(x, m) == 1 expected.
  x = mod_floor(x, m);
  long r0 = m, r1 = x, s0 = 0, s1 = 1;
  while (r1 != 0) {
    const long k = r0 / r1;
    const long r2 = r0 - k * r1;
    const long s2 = s0 - k * s1;
    r0 = r1;
    r1 = r2;
    s0 = s1;
    s1 = s2;
  }
  if (r0 != 1) {
    throw std::invalid_argument("inverse_mod: arguments are not coprime");
  }
  return mod_floor(s0, m);
}

TwoBridgeKnot TwoBridgeKnot::create(long p, long q) {
  if (p < 3) {
    throw std::invalid_argument("two-bridge parameter p must be at least 3");
  }
  if (p % 2 == 0) {
    throw std::invalid_argument(
        "two-bridge parameter p must be odd (even p gives a link, not a knot)");
  }
  if (q <= 0 || q >= p) {
    throw std::invalid_argument("two-bridge parameter q must satisfy 0 < q < p");
  }
  if (gcd_long(p, q) != 1) {
    throw std::invalid_argument("two-bridge parameters must be coprime");
  }
  return TwoBridgeKnot(p, q);
}

TwoBridgeKnot TwoBridgeKnot::mirror() const {
  return TwoBridgeKnot(p_, p_ - q_);
}

std::string TwoBridgeKnot::name() const {
  return "K_{" + std::to_string(p_) + "," + std::to_string(q_) + "}";
}

bool is_prime(long n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0) return false;
  for (long d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

std::vector<std::pair<long, int>> factorize(long n) {
  if (n < 1) {
    throw std::invalid_argument("factorize expects a positive integer");
  }
  std::vector<std::pair<long, int>> factors;
  for (long d = 2; d * d <= n; d == 2 ? d = 3 : d += 2) {
    if (n % d == 0) {
      int e = 0;
      while (n % d == 0) {
        n /= d;
        ++e;
      }
      factors.emplace_back(d, e);
    }
  }
  if (n > 1) factors.emplace_back(n, 1);
  return factors;
}

} // namespace twobridge
