#include "doctest.h"

#include "twobridge/errors.hpp"
#include "twobridge/gradings.hpp"
#include "twobridge/grid.hpp"
#include "twobridge/knot.hpp"
#include "twobridge/lens_d.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <vector>

using namespace twobridge;

namespace {

GridDiagram make(long p, long q) {
  return GridDiagram::build(TwoBridgeKnot::create(p, q));
}

} // namespace

TEST_CASE("cover lift shape") {
  const auto d = make(5, 2);
  for (Role role : {Role::w, Role::z}) {
    const CoverLift lift = lift_generator(d, 7, role);
    REQUIRE(lift.points.size() == 10);  // 2p points
    REQUIRE(lift.markers.size() == 10); // 2p markers

    // One point and one marker per row and per column of the 2p x 2p grid;
    // doubled coordinates: even for points, odd for markers, inside the
    // window [x0, x0 + 4p) x [y0, y0 + 4p).
    const auto check_permutation = [&](const auto& pts, long parity) {
      std::set<long> xs, ys;
      for (const auto& pt : pts) {
        CHECK(mod_floor(pt[0], 2) == parity);
        CHECK(mod_floor(pt[1], 2) == parity);
        CHECK(pt[0] >= lift.x0);
        CHECK(pt[0] < lift.x0 + 20);
        CHECK(pt[1] >= lift.y0);
        CHECK(pt[1] < lift.y0 + 20);
        xs.insert(pt[0]);
        ys.insert(pt[1]);
      }
      CHECK(xs.size() == 10);
      CHECK(ys.size() == 10);
    };
    check_permutation(lift.points, 0);
    check_permutation(lift.markers, 1);
  }
}

TEST_CASE("strictly-southwest incidence count") {
  const std::vector<std::array<long, 2>> a = {{0, 0}, {2, 2}};
  const std::vector<std::array<long, 2>> b = {{1, 1}, {3, 3}, {0, 5}};
  // Pairs (p, q) with p strictly southwest of q:
  // (0,0)<(1,1), (0,0)<(3,3), (2,2)<(3,3).
  CHECK(grading_I(a, b) == 3);
  CHECK(grading_I(b, a) == 1); // only (1,1)<(2,2)
  CHECK(grading_I(a, a) == 1); // (0,0)<(2,2)
}

TEST_CASE("cover Maslov grading is window independent") {
  const auto d = make(5, 3);
  for (Role role : {Role::w, Role::z}) {
    for (int g : {0, 3, 17, 30, 49}) {
      const long base = cover_maslov(d, g, role);
      for (auto [x0, y0] : std::vector<std::array<long, 2>>{
               {2, 0}, {0, 2}, {-6, 10}, {13, -7}}) {
        CHECK(cover_maslov(d, g, role, x0, y0) == base);
      }
    }
  }
}

TEST_CASE("fast Maslov table matches the direct evaluation") {
  for (auto [p, q] : std::vector<std::array<long, 2>>{
           {3, 1}, {3, 2}, {5, 2}, {7, 3}, {9, 2}}) {
    const auto d = make(p, q);
    for (Role role : {Role::w, Role::z}) {
      const auto table = cover_maslov_table(d, role);
      REQUIRE(table.size() == static_cast<std::size_t>(d.num_generators()));
      for (int g = 0; g < d.num_generators(); ++g) {
        CHECK(table[static_cast<std::size_t>(g)] == cover_maslov(d, g, role));
      }
    }
    // Parallel evaluation gives the same table.
    CHECK(cover_maslov_table(d, Role::w, 4) == cover_maslov_table(d, Role::w));
  }
}

TEST_CASE("relative Maslov gradings are exact cover differences over p") {
  const auto d = make(7, 3);
  const auto table = cover_maslov_table(d, Role::w);
  for (const auto& cls : d.label_classes()) {
    for (std::size_t a = 0; a < cls.size(); ++a) {
      for (std::size_t b = a + 1; b < cls.size(); ++b) {
        const long diff = table[static_cast<std::size_t>(cls[a])] -
                          table[static_cast<std::size_t>(cls[b])];
        CHECK(diff % 7 == 0);
        CHECK(relative_maslov(d, cls[a], cls[b], Role::w) ==
              rat(diff, 7));
      }
    }
  }

  // Generators in different spin^c classes have no relative grading.
  CHECK_THROWS_AS(relative_maslov(d, 0, 1, Role::w), std::invalid_argument);
}

TEST_CASE("pinning against a target multiset") {
  // {top + c} must equal {target}; here c = 3/2.
  const std::vector<Rational> top = {rat(0), rat(-1), rat(1, 2)};
  const std::vector<Rational> target = {rat(2), rat(1, 2), rat(3, 2)};
  CHECK(pin_constant(top, target) == rat(3, 2));

  const std::vector<Rational> rel = {rat(0), rat(-1), rat(1, 2), rat(-7, 2)};
  const auto pinned = pin_gradings(rel, top, target);
  CHECK(pinned == std::vector<Rational>{rat(3, 2), rat(1, 2), rat(2),
                                        rat(-2)});

  // A mismatched multiset falsifies the model and must throw.
  CHECK_THROWS_AS(pin_constant(top, {rat(2), rat(1, 2), rat(5, 4)}),
                  inconsistency_error);
}

TEST_CASE("Alexander gradings are integers") {
  const std::vector<Rational> mw = {rat(1, 2), rat(-1, 2), rat(3, 2)};
  const std::vector<Rational> mz = {rat(-1, 2), rat(-3, 2), rat(-3, 2)};
  // A = (M_w - M_z)/2 - 1/2 entrywise.
  CHECK(alexander_gradings(mw, mz) ==
        std::vector<Rational>{rat(0), rat(0), rat(1)});

  CHECK_THROWS_AS(alexander_gradings({rat(1, 4)}, {rat(-1, 2)}),
                  inconsistency_error);
}
