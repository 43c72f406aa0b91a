#pragma once

#include "twobridge/knot.hpp"
#include "twobridge/rational.hpp"

#include <vector>

namespace twobridge {

// Heegaard Floer correction term d(L(p,q), i) for the lens space L(p,q),
// with the spin^c structure indexed by i in {0, ..., p-1} in the standard
// way.  Computed by the classical recursion
//
//   d(L(1,0), 0) = 0,
//   d(L(p,q), i) = ( (2i + 1 - p - q)^2 - pq ) / (4pq)
//                  - d(L(q, p mod q), i mod q)
//
// which descends along the Euclidean algorithm, so exact rationals are
// mandatory (denominators mix 4pq across levels).  Requires p >= 1,
// 0 <= q < p or (p,q) = (1,0), gcd(p,q) = 1, 0 <= i < p.
Rational d_lens(long p, long q, long i);

// The multiset { -d(L(p,q), i) : 0 <= i < p } sorted ascending.  These are
// the correction terms of the orientation-reversed double branched cover of
// K_{p,q} and serve as the absolute-grading anchor for the whole pipeline:
// the top Maslov grading of the knot complex in each spin^c structure must
// realise this multiset exactly.
std::vector<Rational> d_branched_cover_multiset(const TwoBridgeKnot& knot);

// Closed form for the correction terms of the double branched cover of the
// twist knot family K_{p,2} (p odd), indexed by the symmetric parameter
// k in [-(p-1)/2, (p-1)/2] with k = 0 the spin structure:
//
//   1/4 - k^2/(2p) + (+1/4 if (p+1)/2 + k is even, else -1/4).
Rational d_twist_closed(long p, long k);

// d-invariant table of the twist knot K_{p,2} indexed by the group label
// l in {0, ..., p-1} (label 0 = spin structure, labels added mod p), i.e.
// d_twist_closed evaluated at the symmetric representative of l.
std::vector<Rational> twist_d_table(long p);

// Closed form for the order-q obstruction sum D_q of the twist knot
// K_{qs,2}: the sum of its d-invariants over the subgroup of order q.
// Stated for q an odd prime and p = q*s congruent to 1 mod 4:
//
//   (q-1)/4 * (1 - s(q+1)/6)  +  (1/2 if (q-1)/2 is odd, else 0).
//
// Outside that congruence class use twist_d_table and sum directly.
Rational D_twist_closed(long q, long s);

} // namespace twobridge
