#pragma once

#include "twobridge/knot.hpp"
#include "twobridge/rational.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace twobridge {

// ---------------------------------------------------------------------------
// The twisted toroidal grid diagram of the lift of K_{p,q} to the double
// branched cover -L(p,q), drawn on the flat torus T^2 = R^2/Z^2:
//
//   * two horizontal "alpha" curves   alpha_1: y = 0,  alpha_2: y = 1/2;
//   * two slanted "beta" curves of slope p/q (homology class (q,p)),
//     beta_1 through (0,0) and beta_2 through (1/2,0).
//
// Intersection points sit at V(b,m) = (m/(2p), b/2) for b in {0,1} and
// m in Z/2p: 4p vertices.  The complement of the curves is a union of 4p
// congruent parallelogram cells of area 1/(4p) (V - E + F = 0 on the torus
// with E = 8p forces F = 4p).  cell(b,m) is the parallelogram whose bottom
// edge is [m/(2p),(m+1)/(2p)] x {b/2} and whose top edge is shifted east by
// q/(2p) on the next horizontal line; cells are indexed band-major:
// index = b*2p + m.
//
// A generator of the chain complex is a pair of intersection points, one on
// each alpha curve and one on each beta curve.  Writing the alpha_1 points
// as x_i (on beta_1) and x'_i (on beta_2), and the alpha_2 points as y_j,
// y'_j, the generators are exactly (x_i, y_j) and (x'_i, y'_j) for
// i, j in Z/p: 2p^2 in total.  They fall into p spin^c classes of size 2p
// each, labelled by (i + j) mod p with label 0 the spin structure.
// ---------------------------------------------------------------------------

// Which pair of basepoints the complex avoids.  The four basepoints A-D
// split into two "w" points and two "z" points so that each band and each
// vertical annulus carries one of each; the w-complex computes the Maslov
// grading and the z-complex the Alexander filtration (and vice versa under
// the mirror symmetry).
enum class Role { w, z };

// A generator (x_i, y_j) (primed = false) or (x'_i, y'_j) (primed = true).
struct Generator {
  bool primed = false;
  long i = 0;
  long j = 0;
};

// A vertex V(band, m) of the diagram, i.e. an intersection point.
struct VertexRef {
  int band = 0; // 0: on alpha_1 (y=0), 1: on alpha_2 (y=1/2)
  long m = 0;   // position index mod 2p
};

// One of the four marked points.  Coordinates are exact; `cell` is the
// parallelogram containing the point.
struct Basepoint {
  char name = '?'; // 'A', 'B', 'C' or 'D'
  Rational x, y;
  int cell = -1;
};

// An integral 2-chain on the diagram, stored as one multiplicity per cell
// (band-major cell order).  `from`/`to` are the generator ids it connects
// (-1 for periodic domains, which connect nothing).
struct Domain {
  int from = -1;
  int to = -1;
  std::vector<int> mult;

  bool operator==(const Domain& other) const { return mult == other.mult; }
};

class GridDiagram {
public:
  // Builds the diagram for K_{p,q} and checks its structural invariants:
  // the alpha_2 labels tile the band, the basepoints land in the predicted
  // cells, and each band/annulus carries one w and one z basepoint.
  static GridDiagram build(const TwoBridgeKnot& knot);

  const TwoBridgeKnot& knot() const { return knot_; }
  long p() const { return knot_.p(); }
  long q() const { return knot_.q(); }

  // --- cells --------------------------------------------------------------

  long num_cells() const { return 4 * p(); }
  int cell_index(int band, long m) const {
    return static_cast<int>(band * 2 * p() + mod_floor(m, 2 * p()));
  }
  int cell_band(int cell) const { return cell >= 2 * p() ? 1 : 0; }
  long cell_m(int cell) const { return cell % (2 * p()); }

  // Vertical annulus (between consecutive beta curves) containing the cell:
  // 0 is the annulus containing basepoint A.  A band-b cell at position m
  // lies in annulus (m - q*b) mod 2.
  int cell_annulus(int cell) const {
    return static_cast<int>(mod_floor(cell_m(cell) - q() * cell_band(cell), 2));
  }

  // The four cells around vertex V(band, m), in the order NE, NW, SW, SE.
  std::array<int, 4> sectors(int band, long m) const {
    const int other = 1 - band;
    return {cell_index(band, m), cell_index(band, m - 1),
            cell_index(other, m - q() - 1), cell_index(other, m - q())};
  }

  // Which beta curve the wall left of cell(band, m) belongs to (0 or 1).
  int beta_id(int band, long m) const {
    return static_cast<int>(mod_floor(m - q() * band, 2));
  }

  // --- generators ----------------------------------------------------------

  long num_generators() const { return 2 * p() * p(); }
  Generator generator(int id) const;
  int generator_id(const Generator& g) const;
  std::vector<Generator> generators() const;

  // The two intersection points of a generator: first the alpha_1 (band 0)
  // point, then the alpha_2 (band 1) point.
  std::array<VertexRef, 2> points_of(const Generator& g) const;
  std::array<VertexRef, 2> points_of(int id) const {
    return points_of(generator(id));
  }

  // spin^c label in {0,...,p-1}; label 0 is the spin structure.
  long spinc_label(const Generator& g) const {
    return mod_floor(g.i + g.j, p());
  }
  long spinc_label(int id) const { return spinc_label(generator(id)); }

  // Generator ids grouped by spin^c label.
  const std::vector<std::vector<int>>& label_classes() const {
    return label_classes_;
  }

  // --- geometry ------------------------------------------------------------

  Rational epsilon() const { return epsilon_; }
  std::array<Rational, 2> vertex_coords(int band, long m) const;

  // Exact point location for points in the interior of a cell.  Throws
  // inconsistency_error when (x, y) lies on a curve.
  int locate_cell(const Rational& x, const Rational& y) const;

  // The four basepoints in the order A, B, C, D.
  const std::array<Basepoint, 4>& basepoints() const { return basepoints_; }

  // The two basepoints of a role, band-1 point first.
  std::array<const Basepoint*, 2> role_basepoints(Role role) const;

  // alpha_2 labelling: vertex position of y_j / y'_j, and the inverse map.
  long y_vertex(long j, bool primed) const {
    return primed ? yprime_m_[static_cast<std::size_t>(j)]
                  : y_m_[static_cast<std::size_t>(j)];
  }
  // For a band-1 vertex position m, the (primed, j) label sitting there.
  std::pair<bool, long> band1_label(long m) const {
    return band1_label_[static_cast<std::size_t>(mod_floor(m, 2 * p()))];
  }

private:
  explicit GridDiagram(const TwoBridgeKnot& knot);

  TwoBridgeKnot knot_;
  Rational epsilon_;
  std::vector<long> y_m_;       // position of y_j
  std::vector<long> yprime_m_;  // position of y'_j
  std::vector<std::pair<bool, long>> band1_label_;
  std::array<Basepoint, 4> basepoints_;
  std::vector<std::vector<int>> label_classes_;
};

// ---------------------------------------------------------------------------
// Domains
// ---------------------------------------------------------------------------

// The generator of the rank-one lattice of periodic domains with zero
// multiplicity at both basepoints of the role: [band 1] - [annulus of the
// role's band-1 basepoint].  Entries are -1, 0 or +1 and its Maslov index
// is 0, so adding it preserves the index of any domain.
Domain periodic_domain(const GridDiagram& diagram, Role role = Role::w);

// All positive Maslov-index-one domains from g1 to g2 avoiding both
// basepoints of the role — exactly the domains the differential counts.
// Returns an empty vector when g1, g2 lie in different spin^c classes or
// when no such domain exists.  Domains are returned sorted by multiplicity
// vector (lexicographically); they form a contiguous family differing by
// multiples of the periodic domain.  Requires g1 != g2.
std::vector<Domain> connecting_domains(const GridDiagram& diagram, int g1,
                                       int g2, Role role);

// The boundary operator of the role's complex: arrows[g] lists, in
// increasing id order, the generators reached from g by an odd number of
// positive index-one basepoint-free domains.  When the optional cover
// gradings are supplied (cover-scale Maslov tables for the w and z roles,
// indexed by generator id) the pair enumeration is restricted to the pairs
// compatible with a differential that drops the role's Maslov grading by
// exactly one and respects the opposite filtration; this restriction is
// checked against the unrestricted enumeration in the test suite.
// Verifies that the result squares to zero.
struct Differential {
  Role role = Role::w;
  std::vector<std::vector<int>> arrows;
};

Differential differential(const GridDiagram& diagram, Role role,
                          const std::vector<long>* cover_maslov_w = nullptr,
                          const std::vector<long>* cover_maslov_z = nullptr,
                          bool use_oracle = false, unsigned jobs = 1);

// ---------------------------------------------------------------------------
// Independent slow-path oracle
// ---------------------------------------------------------------------------

// Recomputes connecting domains from first principles: the cell quadrants
// around every vertex are rebuilt by exact rational point probes, a base
// 2-chain is constructed from westward alpha arcs and downward beta walks
// (the fast path walks east and up), its boundary is verified against the
// corner conditions at every vertex, and the kernel of the boundary map is
// certified complete by an F_2 rank computation before the positivity
// interval is scanned.  Only intended for small diagrams: construction
// requires 2pq <= 200 and throws std::invalid_argument beyond that.
class OracleDomains {
public:
  explicit OracleDomains(const GridDiagram& diagram);

  std::vector<Domain> domains(int g1, int g2, Role role) const;

private:
  const GridDiagram& diagram_;
  // quadrants_[band][m] = cells NE, NW, SW, SE of V(band, m), rebuilt
  // geometrically.
  std::vector<std::array<std::array<int, 4>, 2>> quadrants_;
  std::array<int, 4> basepoint_cells_; // A, B, C, D
  std::vector<int> annulus_;           // per cell, from located beta walls
  int quadrant(int band, long m, int corner) const;
};

// Convenience wrapper matching connecting_domains; builds a fresh oracle
// context per call.
std::vector<Domain> oracle_connecting_domains(const GridDiagram& diagram,
                                              int g1, int g2, Role role);

} // namespace twobridge
