#include "twobridge/lens_d.hpp"

#include <algorithm>
#include <stdexcept>

namespace twobridge {

namespace {

Rational rat_ll(long long num, long long den) {
  Rational r(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
  r.canonicalize();
  return r;
}

} // namespace

Rational d_lens(long p, long q, long i) {
  if (p < 1) throw std::invalid_argument("d_lens: p must be positive");
  if (i < 0 || i >= p) throw std::invalid_argument("d_lens: i out of range");
  if (p == 1) return Rational(0); // d(S^3) = 0 in its unique spin^c structure
  if (q < 1 || q >= p || gcd_long(p, q) != 1) {
    throw std::invalid_argument("d_lens: need 0 < q < p coprime to p");
  }
  const long long t = 2 * i + 1 - p - q;
  return rat_ll(t * t - p * q, 4 * p * q) - d_lens(q, p % q, i % q);
}

std::vector<Rational> d_branched_cover_multiset(const TwoBridgeKnot& knot) {
  std::vector<Rational> values;
  values.reserve(static_cast<std::size_t>(knot.p()));
  for (long i = 0; i < knot.p(); ++i) {
    values.push_back(-d_lens(knot.p(), knot.q(), i));
  }
  std::sort(values.begin(), values.end());
  return values;
}

Rational d_twist_closed(long p, long k) {
  if (p < 3 || p % 2 == 0) {
    throw std::invalid_argument("d_twist_closed: p must be odd and >= 3");
  }
  if (k < -(p - 1) / 2 || k > (p - 1) / 2) {
    throw std::invalid_argument("d_twist_closed: k out of symmetric range");
  }
  const Rational parity =
      ((p + 1) / 2 + k) % 2 == 0 ? rat(1, 4) : rat(-1, 4);
  return rat(1, 4) - rat_ll(static_cast<long long>(k) * k, 2 * p) + parity;
}

std::vector<Rational> twist_d_table(long p) {
  std::vector<Rational> table;
  table.reserve(static_cast<std::size_t>(p));
  for (long label = 0; label < p; ++label) {
    const long k = label <= (p - 1) / 2 ? label : label - p;
    table.push_back(d_twist_closed(p, k));
  }
  return table;
}

Rational D_twist_closed(long q, long s) {
  if (q < 3 || !is_prime(q) || q % 2 == 0) {
    throw std::invalid_argument("D_twist_closed: q must be an odd prime");
  }
  if (s < 1) throw std::invalid_argument("D_twist_closed: s must be positive");
  const long long p = static_cast<long long>(q) * s;
  if (p % 4 != 1) {
    throw std::invalid_argument(
        "D_twist_closed: closed form requires q*s congruent to 1 mod 4");
  }
  Rational value = rat_ll(q - 1, 4) * (Rational(1) - rat_ll(s * (q + 1), 6));
  if (((q - 1) / 2) % 2 == 1) value += rat(1, 2);
  return value;
}

} // namespace twobridge
