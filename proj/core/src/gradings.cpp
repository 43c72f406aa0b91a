#include "twobridge/gradings.hpp"

#include "twobridge/errors.hpp"
#include "twobridge/parallel.hpp"

#include <algorithm>
#include <stdexcept>

namespace twobridge {

namespace {

// Doubled straightened coordinates of the base lift of a diagram point:
// the vertex V(b, m) unshears to column m - q*b in row b.
std::array<long, 2> straightened_point(const GridDiagram& d, const VertexRef& v) {
  return {2 * (v.m - d.q() * v.band), 2L * v.band};
}

// Doubled straightened coordinates of the centre of a cell: cell(b, m)
// unshears to the unit square with lower-left corner (m - q*b, b).
std::array<long, 2> straightened_marker(const GridDiagram& d, int cell) {
  const long b = d.cell_band(cell);
  const long m = d.cell_m(cell);
  return {2 * (m - d.q() * b) + 1, 2 * b + 1};
}

// Appends the p deck translates of a base point, reduced into the window.
// One deck step of the cover moves two rows up and 2q columns west (doubled:
// (-4q, +4)).
void push_lifts(const GridDiagram& d, const std::array<long, 2>& base, long x0,
                long y0, std::vector<std::array<long, 2>>& out) {
  const long span = 4 * d.p();
  for (long t = 0; t < d.p(); ++t) {
    const long x = mod_floor(base[0] - 4 * d.q() * t - x0, span) + x0;
    const long y = mod_floor(base[1] + 4 * t - y0, span) + y0;
    out.push_back({x, y});
  }
}

struct Fenwick {
  std::vector<long> tree;
  int n = 0;
  void init(int size) {
    n = size;
    tree.assign(static_cast<std::size_t>(size) + 1, 0);
  }
  void add(int i) {
    for (++i; i <= n; i += i & -i) ++tree[static_cast<std::size_t>(i)];
  }
  // number of inserted indices strictly below i
  long below(int i) const {
    long s = 0;
    for (; i > 0; i -= i & -i) s += tree[static_cast<std::size_t>(i)];
    return s;
  }
};

} // namespace

CoverLift lift_generator(const GridDiagram& diagram, int g, Role role, long x0,
                         long y0) {
  CoverLift lift;
  lift.x0 = x0;
  lift.y0 = y0;
  lift.points.reserve(static_cast<std::size_t>(2 * diagram.p()));
  lift.markers.reserve(static_cast<std::size_t>(2 * diagram.p()));
  for (const auto& v : diagram.points_of(g)) {
    push_lifts(diagram, straightened_point(diagram, v), x0, y0, lift.points);
  }
  for (const Basepoint* bp : diagram.role_basepoints(role)) {
    push_lifts(diagram, straightened_marker(diagram, bp->cell), x0, y0,
               lift.markers);
  }
  return lift;
}

long grading_I(const std::vector<std::array<long, 2>>& A,
               const std::vector<std::array<long, 2>>& B) {
  long count = 0;
  for (const auto& a : A) {
    for (const auto& b : B) {
      if (a[0] < b[0] && a[1] < b[1]) ++count;
    }
  }
  return count;
}

long cover_maslov(const GridDiagram& diagram, int g, Role role, long x0,
                  long y0) {
  const CoverLift lift = lift_generator(diagram, g, role, x0, y0);
  // The lattice count computes the grading for the lens space the planar
  // picture presents; the branched double cover is its orientation
  // reverse, and reversing orientation negates Maslov gradings, hence the
  // leading minus sign.
  return -(grading_I(lift.points, lift.points) +
           grading_I(lift.markers, lift.markers) -
           grading_I(lift.points, lift.markers) -
           grading_I(lift.markers, lift.points) + 1);
}

std::vector<long> cover_maslov_table(const GridDiagram& diagram, Role role,
                                     unsigned jobs) {
  const long p = diagram.p();
  const long span = 4 * p;
  const std::size_t n_gens = static_cast<std::size_t>(diagram.num_generators());
  std::vector<long> table(n_gens, 0);

  // Markers are shared by every generator of the role.
  std::vector<std::array<long, 2>> markers;
  markers.reserve(static_cast<std::size_t>(2 * p));
  for (const Basepoint* bp : diagram.role_basepoints(role)) {
    push_lifts(diagram, straightened_marker(diagram, bp->cell), 0, 0, markers);
  }
  const long i_oo = grading_I(markers, markers);

  parallel_for(n_gens, jobs, [&](std::size_t id) {
    std::vector<std::array<long, 2>> points;
    points.reserve(static_cast<std::size_t>(2 * p));
    for (const auto& v : diagram.points_of(static_cast<int>(id))) {
      push_lifts(diagram, straightened_point(diagram, v), 0, 0, points);
    }
    // Points use even coordinates, markers odd ones, and each family has
    // one member per row and column, so no two events share a column and
    // a plain query-then-insert sweep in column order counts all strict
    // southwest pairs.
    struct Event {
      long x, y;
      bool marker;
    };
    std::vector<Event> events;
    events.reserve(points.size() + markers.size());
    for (const auto& pt : points) events.push_back({pt[0], pt[1], false});
    for (const auto& mk : markers) events.push_back({mk[0], mk[1], true});
    std::sort(events.begin(), events.end(),
              [](const Event& a, const Event& b) { return a.x < b.x; });

    Fenwick from_points, from_markers;
    from_points.init(static_cast<int>(span));
    from_markers.init(static_cast<int>(span));
    long i_xx = 0, i_xo = 0, i_ox = 0;
    for (const auto& e : events) {
      const int rank = static_cast<int>(e.y);
      if (e.marker) {
        i_xo += from_points.below(rank);
        from_markers.add(rank);
      } else {
        i_xx += from_points.below(rank);
        i_ox += from_markers.below(rank);
        from_points.add(rank);
      }
    }
    // Same orientation-reversal sign as cover_maslov.
    table[id] = -(i_xx + i_oo - i_xo - i_ox + 1);
  });
  return table;
}

Rational relative_maslov(const GridDiagram& diagram, int g1, int g2,
                         Role role) {
  if (diagram.spinc_label(g1) != diagram.spinc_label(g2)) {
    throw std::invalid_argument(
        "relative Maslov grading requires matching spin^c labels");
  }
  const long diff =
      cover_maslov(diagram, g1, role) - cover_maslov(diagram, g2, role);
  if (mod_floor(diff, diagram.p()) != 0) {
    throw inconsistency_error(
        "cover Maslov difference not divisible by p within a spin^c class");
  }
  return rat(diff, diagram.p());
}

Rational pin_constant(std::vector<Rational> top_relative,
                      std::vector<Rational> target_multiset) {
  if (top_relative.size() != target_multiset.size()) {
    throw inconsistency_error("pinning multisets differ in size");
  }
  if (top_relative.empty()) {
    throw inconsistency_error("cannot pin against an empty multiset");
  }
  std::sort(top_relative.begin(), top_relative.end());
  std::sort(target_multiset.begin(), target_multiset.end());
  const Rational c = target_multiset.back() - top_relative.back();
  for (std::size_t i = 0; i < top_relative.size(); ++i) {
    if (top_relative[i] + c != target_multiset[i]) {
      throw inconsistency_error(
          "relative top gradings do not realise the correction-term multiset");
    }
  }
  return c;
}

std::vector<Rational> pin_gradings(const std::vector<Rational>& relative,
                                   const std::vector<Rational>& top_relative,
                                   const std::vector<Rational>& target_multiset) {
  const Rational c = pin_constant(top_relative, target_multiset);
  std::vector<Rational> absolute;
  absolute.reserve(relative.size());
  for (const auto& r : relative) absolute.push_back(r + c);
  return absolute;
}

std::vector<Rational> alexander_gradings(const std::vector<Rational>& mw,
                                         const std::vector<Rational>& mz) {
  if (mw.size() != mz.size()) {
    throw inconsistency_error("grading tables differ in size");
  }
  std::vector<Rational> a;
  a.reserve(mw.size());
  for (std::size_t i = 0; i < mw.size(); ++i) {
    Rational value = (mw[i] - mz[i]) / 2 - rat(1, 2);
    if (!is_integer(value)) {
      throw inconsistency_error("Alexander grading is not an integer");
    }
    a.push_back(std::move(value));
  }
  return a;
}

} // namespace twobridge
