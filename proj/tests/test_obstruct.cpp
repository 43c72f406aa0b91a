#include "doctest.h"

#include "twobridge/knot.hpp"
#include "twobridge/obstruct.hpp"
#include "twobridge/rational.hpp"

#include <string>
#include <vector>

using namespace twobridge;

TEST_CASE("subgroups of a cyclic group") {
  CHECK(subgroup_elements_cyclic(45, 9) ==
        std::vector<long>{0, 5, 10, 15, 20, 25, 30, 35, 40});
  CHECK(subgroup_elements_cyclic(45, 1) == std::vector<long>{0});
  CHECK(subgroup_elements_cyclic(45, 45).size() == 45);
  CHECK(subgroup_elements_cyclic(9, 3) == std::vector<long>{0, 3, 6});
}

TEST_CASE("subgroups of prime-power order in small abelian groups") {
  // Z_45 is cyclic: one subgroup per admissible order.
  CHECK(order_pk_subgroups({45}, 3, 2) ==
        std::vector<std::vector<long>>{{0, 5, 10, 15, 20, 25, 30, 35, 40}});
  CHECK(order_pk_subgroups({45}, 5, 1) ==
        std::vector<std::vector<long>>{{0, 9, 18, 27, 36}});

  // No subgroup of order 7 in Z_45.
  CHECK(order_pk_subgroups({45}, 7, 1).empty());

  // Z_3 + Z_3 has four subgroups of order 3 (the lines through 0).
  const auto lines = order_pk_subgroups({3, 3}, 3, 1);
  REQUIRE(lines.size() == 4);
  for (const auto& line : lines) {
    REQUIRE(line.size() == 3);
    CHECK(line[0] == 0);
  }
  // ...and a unique subgroup of order 9 (everything).
  CHECK(order_pk_subgroups({3, 3}, 3, 2).size() == 1);
}

TEST_CASE("subgroup sums") {
  const std::vector<Rational> f = {rat(1), rat(2), rat(3), rat(4), rat(5),
                                   rat(6), rat(7), rat(8), rat(9)};
  CHECK(S_H(f, {0, 3, 6}) == rat(12)); // 1 + 4 + 7
  CHECK(S_H(f, {0}) == rat(1));
}

TEST_CASE("prime-power obstruction values") {
  // p = 1: the spin value itself, in absolute value.
  CHECK(obstruction_value({rat(-1, 2), rat(1, 6), rat(1, 6)}, 1, 1) ==
        rat(1, 2));
  CHECK(obstruction_value({rat(0), rat(2, 5), rat(-2, 5), rat(-2, 5),
                           rat(2, 5)},
                          1, 1) == rat(0));

  // p^k does not divide N: nothing to test.
  CHECK(obstruction_value({rat(1), rat(1), rat(1)}, 2, 1) == rat(0));
  CHECK(obstruction_value({rat(1), rat(1), rat(1)}, 3, 2) == rat(0));

  // Full-group sum over Z_3, reported in absolute value:
  // |-1/2 + 1/6 + 1/6| = 1/6.
  CHECK(obstruction_value({rat(-1, 2), rat(1, 6), rat(1, 6)}, 3, 1) ==
        rat(1, 6));

  // A vanishing subgroup sum kills the obstruction.
  CHECK(obstruction_value({rat(0), rat(1), rat(-1)}, 3, 1) == rat(0));

  // Mixed signs across subgroups kill it too: in Z_3 + Z_3 the four lines
  // can sum to opposite signs.
  // (Cyclic input here: single subgroup, so sign is whatever S_H gives.)
  CHECK(obstruction_value({rat(1), rat(2), rat(3)}, 3, 1) == rat(6));
}

TEST_CASE("minmax refinement") {
  // Constant zero is consistent with finite order: must not fire.
  CHECK_FALSE(minmax_test(std::vector<Rational>(7, rat(0)), 7));

  // m != -M fires.
  CHECK(minmax_test({rat(1), rat(0), rat(0)}, 3));

  // Symmetric two-level profile f = [0, M, -M] on Z_3: m = -M and the
  // difference sets match, so it must not fire.
  CHECK_FALSE(minmax_test({rat(0), rat(1), rat(-1)}, 3));

  // Profile on Z_5 with m = -M but incompatible difference sets:
  //   g = [M, M, -M, -M, 0] has Delta(M) = {1,4} (hits at 0,1) and
  //   Delta(-M) = {1,4} (hits at 2,3); 1*{1,4} = {1,4}, 4*{1,4} = {4,1},
  //   intersection {1,4} is non-empty: consistent, no fire.
  CHECK_FALSE(
      minmax_test({rat(1), rat(1), rat(-1), rat(-1), rat(0)}, 5));

  // g = [M, M, M, -M, -M] on Z_5: Delta(M) = {1,2,3,4} (hits at 0,1,2),
  // Delta(-M) = {1,4} (hits at 3,4).  1*{1,4} /\ 2*{1,4} = {1,4} /\ {2,3}
  // is empty: fires.
  CHECK(minmax_test({rat(1), rat(1), rat(1), rat(-1), rat(-1)}, 5));

  // Only primes dividing N exactly once are admissible.
  CHECK_THROWS_AS(minmax_test(std::vector<Rational>(9, rat(0)), 3),
                  std::invalid_argument);
}

TEST_CASE("admissible exponents") {
  CHECK(admissible_k(81, 3) == 2);  // v = 4 -> floor(5/2)
  CHECK(admissible_k(125, 5) == 2); // v = 3 -> floor(4/2)
  CHECK(admissible_k(45, 3) == 1);  // v = 2 -> floor(3/2)
  CHECK(admissible_k(45, 5) == 1);
  CHECK(admissible_k(45, 7) == 0);
  CHECK(admissible_k(9, 3) == 1);
}

TEST_CASE("linear independence of twist-knot families") {
  CHECK(twist_family_independent({3}));
  CHECK(twist_family_independent({21, 55}));
  CHECK(twist_family_independent({}));

  // The order-3 sum of the Stevedore cover (p = 9) vanishes, as does the
  // order-5 sum of the figure-eight cover (p = 5): no certificate.
  CHECK_FALSE(twist_family_independent({9}));
  CHECK_FALSE(twist_family_independent({5}));

  // Repeats are never independent.
  CHECK_FALSE(twist_family_independent({3, 3}));
}

TEST_CASE("test naming") {
  ObstructionTest t;
  t.kind = "T";
  t.prime = 3;
  t.k = 2;
  CHECK(t.name() == "T_9");
  t.kind = "D";
  t.prime = 53;
  t.k = 1;
  CHECK(t.name() == "D_53");
  t.kind = "minmax";
  t.prime = 7;
  t.grading = "tau";
  CHECK(t.name() == "minmax_7(tau)");
}

TEST_CASE("verdict for the lift of the left-handed trefoil") {
  const auto knot = TwoBridgeKnot::create(3, 1);
  const std::vector<Rational> tau = {rat(-1), rat(0), rat(0)};
  const std::vector<Rational> d = {rat(-1, 2), rat(1, 6), rat(1, 6)};
  const auto report = verdict(knot, tau, d);

  CHECK(report.p == 3);
  CHECK(report.q == 1);
  CHECK(report.infinite_order);

  // Evaluation order: spin values first, then per ascending prime all tau
  // sums, all d sums, then the minmax refinements (tau before d).
  std::vector<std::string> names;
  for (const auto& t : report.tests) names.push_back(t.name());
  CHECK(names == std::vector<std::string>{"T_1", "D_1", "T_3", "D_3",
                                          "minmax_3(tau)", "minmax_3(d)"});

  CHECK(report.tests[0].value == rat(1));    // |tau(0)|
  CHECK(report.tests[0].fired);
  CHECK(report.tests[1].value == rat(1, 2)); // |d(0)|
  CHECK(report.tests[1].fired);
  CHECK(report.tests[2].value == rat(1));    // |sum tau|
  CHECK(report.tests[3].value == rat(1, 6)); // |sum d| = |-1/2 + 1/3|
  CHECK(report.tests[4].fired);              // tau: m != -M
  CHECK(report.tests[4].value == rat(1));    // |M + m| = |0 + (-1)|... M=0, m=-1
  CHECK(report.tests[5].fired);
}

TEST_CASE("verdict is inconclusive for slice lifts") {
  // Figure-eight: all tests vanish.
  const auto knot = TwoBridgeKnot::create(5, 2);
  const std::vector<Rational> tau(5, rat(0));
  const std::vector<Rational> d = {rat(0), rat(2, 5), rat(-2, 5), rat(-2, 5),
                                   rat(2, 5)};
  const auto report = verdict(knot, tau, d);
  CHECK_FALSE(report.infinite_order);
  for (const auto& t : report.tests) CHECK_FALSE(t.fired);
}

TEST_CASE("verdict battery is invariant under grading negation") {
  // Mirroring negates both tables; the battery must reach the same verdict
  // with the same absolute values.
  const auto knot = TwoBridgeKnot::create(3, 1);
  const std::vector<Rational> tau = {rat(-1), rat(0), rat(0)};
  const std::vector<Rational> d = {rat(-1, 2), rat(1, 6), rat(1, 6)};
  std::vector<Rational> ntau, nd;
  for (const auto& x : tau) ntau.push_back(Rational(-x));
  for (const auto& x : d) nd.push_back(Rational(-x));

  const auto a = verdict(knot, tau, d);
  const auto b = verdict(TwoBridgeKnot::create(3, 2), ntau, nd);
  REQUIRE(a.tests.size() == b.tests.size());
  for (std::size_t i = 0; i < a.tests.size(); ++i) {
    CHECK(a.tests[i].name() == b.tests[i].name());
    CHECK(a.tests[i].value == b.tests[i].value);
    CHECK(a.tests[i].fired == b.tests[i].fired);
  }
  CHECK(a.infinite_order == b.infinite_order);
}
