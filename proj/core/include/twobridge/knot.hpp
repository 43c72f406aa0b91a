#pragma once

#include <string>
#include <utility>
#include <vector>

namespace twobridge {

// The two-bridge knot K_{p,q}: p odd, 0 < q < p, gcd(p,q) = 1.  (Odd p is
// what makes the closure a knot rather than a two-component link, and it is
// also the determinant, i.e. the order of the first homology of the double
// branched cover, the lens space L(p,q).)
class TwoBridgeKnot {
public:
  // Validates the parameters and throws std::invalid_argument with a
  // descriptive message when they do not define a two-bridge knot.
  static TwoBridgeKnot create(long p, long q);

  long p() const { return p_; }
  long q() const { return q_; }

  // |H_1| of the double branched cover; equals p.
  long determinant() const { return p_; }

  // The mirror image: K_{p, p-q}.
  TwoBridgeKnot mirror() const;

  // "K_{p,q}" — used in human-readable output.
  std::string name() const;

private:
  TwoBridgeKnot(long p, long q) : p_(p), q_(q) {}
  long p_;
  long q_;
};

// gcd helper shared by validation and modular arithmetic throughout the
// library (std::gcd needs non-negative normalisation at call sites, so we
// keep one canonical spot for it).
long gcd_long(long a, long b);

// x^{-1} mod m for gcd(x, m) = 1, result in [0, m).
long inverse_mod(long x, long m);

// Non-negative remainder in [0, m).
inline long mod_floor(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

// Deterministic trial-division primality test; ample for knot determinants.
bool is_prime(long n);

// Prime factorisation as (prime, exponent) pairs, primes ascending; n >= 1.
std::vector<std::pair<long, int>> factorize(long n);

} // namespace twobridge
