#include "doctest.h"

#include "twobridge/knot.hpp"
#include "twobridge/lens_d.hpp"
#include "twobridge/rational.hpp"

#include <algorithm>
#include <vector>

using namespace twobridge;

TEST_CASE("d-invariant recursion base cases") {
  CHECK(d_lens(1, 0, 0) == Rational(0));

  // L(2,1): the two spin^c structures carry 1/4 and -1/4.
  CHECK(d_lens(2, 1, 0) == rat(1, 4));
  CHECK(d_lens(2, 1, 1) == rat(-1, 4));
}

TEST_CASE("d-invariants of small lens spaces") {
  // L(3,1): spin structure at label 0 with d = 1/2, conjugate pair at -1/6.
  CHECK(d_lens(3, 1, 0) == rat(1, 2));
  CHECK(d_lens(3, 1, 1) == rat(-1, 6));
  CHECK(d_lens(3, 1, 2) == rat(-1, 6));

  // Conjugation i -> p+q-1-i fixes the table for every small case.
  for (long p : {3L, 5L, 7L, 9L, 11L}) {
    for (long q = 1; q < p; ++q) {
      if (gcd_long(p, q) != 1) continue;
      for (long i = 0; i < p; ++i) {
        const long conj = mod_floor(p + q - 1 - i, p);
        CHECK(d_lens(p, q, i) == d_lens(p, q, conj));
      }
    }
  }
}

TEST_CASE("branched cover multiset negates and sorts the recursion") {
  const auto knot = TwoBridgeKnot::create(7, 3);
  const auto target = d_branched_cover_multiset(knot);
  std::vector<Rational> manual;
  for (long i = 0; i < 7; ++i) manual.push_back(Rational(-d_lens(7, 3, i)));
  std::sort(manual.begin(), manual.end());
  CHECK(target == manual);
  CHECK(std::is_sorted(target.begin(), target.end()));
}

TEST_CASE("twist-knot closed form") {
  // p = 5 (figure-8): {0, 2/5, -2/5, -2/5, 2/5} by label, spin value 0.
  const auto t5 = twist_d_table(5);
  CHECK(t5 == std::vector<Rational>{Rational(0), rat(2, 5), rat(-2, 5),
                                    rat(-2, 5), rat(2, 5)});
  CHECK(d_twist_closed(5, 0) == Rational(0));

  // p = 9 (Stevedore): spin value 0 as well.
  CHECK(d_twist_closed(9, 0) == Rational(0));
  const auto t9 = twist_d_table(9);
  CHECK(t9[0] == Rational(0));
  CHECK(t9[1] == rat(4, 9));
  CHECK(t9[4] == rat(-8, 9));

  // d(0) != 0 exactly when p = 3 mod 4.
  for (long p = 3; p <= 99; p += 2) {
    const bool nonzero = d_twist_closed(p, 0) != 0;
    CHECK(nonzero == (p % 4 == 3));
  }

  // Tables are symmetric in the labels: l and -l carry equal values.
  for (long p : {3L, 5L, 9L, 21L, 55L}) {
    const auto table = twist_d_table(p);
    for (long l = 0; l < p; ++l) {
      CHECK(table[static_cast<std::size_t>(l)] ==
            table[static_cast<std::size_t>(mod_floor(-l, p))]);
    }
  }
}

TEST_CASE("twist table matches the recursion for every odd p up to 199") {
  for (long p = 3; p <= 199; p += 2) {
    auto closed = twist_d_table(p);
    std::sort(closed.begin(), closed.end());
    const auto recursion =
        d_branched_cover_multiset(TwoBridgeKnot::create(p, 2));
    CHECK(closed == recursion);
  }
}

TEST_CASE("closed-form D_q for twist knots") {
  // p = 21 = 3*7 = 1 mod 4: closed form applies for q = 3 (s = 7).
  CHECK(D_twist_closed(3, 7) == rat(-4, 3));

  // Direct subgroup sum over {0, 7, 14} of twist_d_table(21) agrees.
  const auto t21 = twist_d_table(21);
  const Rational direct = t21[0] + t21[7] + t21[14];
  CHECK(direct == rat(-4, 3));

  // p = 55 = 5*11 = 3 mod 4: outside the closed form's congruence class;
  // the table path gives the exact value.
  CHECK_THROWS_AS(D_twist_closed(5, 11), std::invalid_argument);
  const auto t55 = twist_d_table(55);
  Rational d5(0);
  for (long l = 0; l < 55; l += 11) d5 += t55[static_cast<std::size_t>(l)];
  CHECK(d5 == rat(-19, 2));
}
