#pragma once

#include "twobridge/grid.hpp"

#include <array>
#include <vector>

namespace twobridge {

// ---------------------------------------------------------------------------
// Absolute gradings via the double cover.
//
// Unrolling the two beta curves makes the diagram a twisted 2 x 2p grid;
// pulling back to the double branched cover and straightening the shear
// turns the lift of a generator into 2p points of an honest 2p x 2p grid
// torus, one per row and column, and the p lifts of the role's two
// basepoints into 2p markers, again one per row and column.  The classical
// planar grid formula evaluated on one fundamental window then computes p
// times the Maslov grading, up to a single additive constant per role which
// is pinned against the correction terms of the branched cover.
// ---------------------------------------------------------------------------

// A lifted generator presented on the straightened cover torus.  All
// coordinates are doubled integers so that both lattice points and cell
// centres are exact: generator points have even coordinates, basepoint
// markers odd ones.  Everything is reduced into the window
// [x0, x0 + 4p) x [y0, y0 + 4p).
struct CoverLift {
  long x0 = 0;
  long y0 = 0;
  std::vector<std::array<long, 2>> points;  // 2p lifted generator points
  std::vector<std::array<long, 2>> markers; // 2p lifted basepoint markers
};

CoverLift lift_generator(const GridDiagram& diagram, int g, Role role,
                         long x0 = 0, long y0 = 0);

// Strictly-southwest incidence count:
// #{ (a, b) in A x B : a.x < b.x and a.y < b.y }.
long grading_I(const std::vector<std::array<long, 2>>& A,
               const std::vector<std::array<long, 2>>& B);

// Cover-scale Maslov grading of one generator: with X the lifted points and
// O the markers of the window, -(I(X,X) + I(O,O) - I(X,O) - I(O,X) + 1).
// The overall sign accounts for the branched double cover being the
// orientation reverse of the lens space the planar picture presents.
// Independent of the window origin (exercised by the tests).  Differences
// within a spin^c class are divisible by p; (difference)/p is the relative
// Maslov grading.
long cover_maslov(const GridDiagram& diagram, int g, Role role, long x0 = 0,
                  long y0 = 0);

// cover_maslov for every generator id, computed with a sweep over columns
// and Fenwick counting (the tests cross-check it against the naive
// quadratic version).
std::vector<long> cover_maslov_table(const GridDiagram& diagram, Role role,
                                     unsigned jobs = 1);

// Exact relative Maslov grading (cover difference)/p.  Requires the two
// generators to lie in the same spin^c class.
Rational relative_maslov(const GridDiagram& diagram, int g1, int g2,
                         Role role);

// Finds the additive constant c with {top + c} = {target} as multisets
// (computed as max(target) - max(top) and then verified entrywise on the
// sorted lists).  Throws inconsistency_error when the multisets do not
// match, since that falsifies the grading model.
Rational pin_constant(std::vector<Rational> top_relative,
                      std::vector<Rational> target_multiset);

// Applies pin_constant to a full table: returns relative[i] + c for all i.
std::vector<Rational> pin_gradings(const std::vector<Rational>& relative,
                                   const std::vector<Rational>& top_relative,
                                   const std::vector<Rational>& target_multiset);

// Alexander gradings A = (M_w - M_z)/2 - 1/2, checked to be integers.
std::vector<Rational> alexander_gradings(const std::vector<Rational>& mw,
                                         const std::vector<Rational>& mz);

} // namespace twobridge
