#pragma once

#include "twobridge/knot.hpp"
#include "twobridge/rational.hpp"

#include <string>
#include <vector>

namespace twobridge {

// ---------------------------------------------------------------------------
// Concordance-order obstructions.
//
// For a knot whose double branched cover has H_1 of order N, both tau and d
// define functions on the N spin^c structures, identified with Z_N so that
// 0 is the spin structure.  If the knot had finite concordance order, the
// sums of such a function over the subgroups of prime-power order would be
// forced to vanish (tau) or obey sign constraints (d); a nonzero protected
// sum certifies infinite order in the concordance group.  All tests below
// are invariant under relabelling l -> u*l by a unit, so any affine
// identification with Z_N that fixes the spin structure may be used.
// ---------------------------------------------------------------------------

// The unique subgroup of order m inside Z_N (requires m | N): multiples of
// N/m, ascending.
std::vector<long> subgroup_elements_cyclic(long N, long m);

// All subgroups of order p^k of the abelian group Z_{f1} + ... + Z_{fr}.
// Elements are encoded little-endian mixed radix: an element (e_1,...,e_r)
// has index e_1 + f_1*(e_2 + f_2*(...)).  Each subgroup is returned as its
// sorted element list; subgroups are sorted lexicographically.  Intended
// for small groups (the element count is guarded).
std::vector<std::vector<long>> order_pk_subgroups(const std::vector<long>& factors,
                                                  long p, int k);

// Sum of f over a subgroup given by element indices.
Rational S_H(const std::vector<Rational>& f, const std::vector<long>& H);

// The order-p^k obstruction evaluated on f : Z_N -> Q (N = f.size()):
//   * p == 1: |f(0)| (the spin-structure value itself);
//   * p^k does not divide N: 0 (no subgroup, nothing to test);
//   * otherwise the subgroup sums S_H over all order-p^k subgroups: 0 when
//     any sum vanishes or the signs are mixed, else min |S_H|.
// A nonzero result certifies infinite concordance order.  (For cyclic Z_N
// there is exactly one subgroup per order.)
Rational obstruction_value(const std::vector<Rational>& f, long p, int k);

// The refinement for primes p exactly dividing N (requires v_p(N) = 1),
// applied to the restriction g(t) = f(t * N/p) of f to the order-p
// subgroup.  With M = max g and m = min g, consistency with finite order
// requires m = -M, and when M > 0 additionally that the difference sets
//   Delta(M)  = { t != 0 : g(t') = M = g(t' + t) for some t' }
//   Delta(-M) = { t != 0 : g(t') = -M = g(t' + t) for some t' }
// admit a common scaled translate: the intersection over d in Delta(M) of
// d^{-1} * Delta(-M) (d^{-1} the multiplicative inverse mod p) must be
// non-empty whenever Delta(M) is non-empty.  Returns true when the test
// FIRES, i.e. consistency fails and infinite order is certified.
bool minmax_test(const std::vector<Rational>& f, long p);

// Largest admissible exponent: k may run up to floor((v_p(N) + 1) / 2).
int admissible_k(long N, long p);

// Whether the twist knots K_{p,2} for the listed odd p >= 3 are linearly
// independent in the concordance group, decided by exhibiting for each
// member a prime-order d-sum that is nonzero for it and undefined for all
// others (a prime dividing its p and none of the other ps).  An empty
// family is vacuously independent; repeated entries never are.
bool twist_family_independent(const std::vector<long>& ps);

struct ObstructionTest {
  std::string kind;    // "T" (tau sums), "D" (d sums) or "minmax"
  long prime = 1;      // the prime p of the test (1 for the spin-value test)
  int k = 1;           // exponent: the test concerns subgroups of order p^k
  std::string grading; // for minmax tests: "tau" or "d"; empty otherwise
  Rational value;      // the obstruction value (|M + m| for minmax)
  bool fired = false;  // true when this test certifies infinite order

  // "T_9", "D_3", "minmax_7(tau)", ... — used in human-readable output.
  std::string name() const;
};

struct ObstructionReport {
  long p = 0;
  long q = 0;
  std::vector<Rational> tau; // per label
  std::vector<Rational> d;
  std::vector<ObstructionTest> tests;
  bool infinite_order = false;
};

// Runs the full battery for a knot given its tau and d tables: the spin
// value tests, the T/D subgroup sums for every prime dividing the
// determinant and every admissible exponent, and the minmax refinement
// (tau first, then d) for the primes dividing it exactly once.
ObstructionReport verdict(const TwoBridgeKnot& knot,
                          const std::vector<Rational>& tau,
                          const std::vector<Rational>& d);

} // namespace twobridge
