#pragma once

#include "twobridge/gradings.hpp"
#include "twobridge/grid.hpp"
#include "twobridge/knot.hpp"
#include "twobridge/rational.hpp"

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

namespace twobridge {

// Cover-scale Maslov tables for both roles; the shared input of the two
// filtered complexes.
struct GradingKeys {
  std::vector<long> maslov_w;
  std::vector<long> maslov_z;
};

GradingKeys compute_grading_keys(const GridDiagram& diagram, unsigned jobs = 1);

// One spin^c class of a filtered complex over F_2.  Arrows are stored as
// dense bit rows over the 2p local generator indices; `primary` is the
// cover Maslov grading of the complex's role (drops by exactly p along
// every arrow) and `secondary` the other role's (drops by at most p; the
// difference primary - secondary is 2p times the filtration level up to a
// constant).
struct LabelComplex {
  long label = 0;
  std::vector<int> gens;       // global generator ids, ascending
  std::vector<long> primary;
  std::vector<long> secondary;
  std::vector<std::vector<std::uint64_t>> out;
  std::vector<std::vector<std::uint64_t>> in;
  std::vector<char> alive;
  int words = 0;
};

struct FilteredComplex {
  Role role = Role::w;
  long p = 0;
  std::vector<LabelComplex> labels;
};

// Assembles the complex from a differential, checking along the way that
// every arrow drops `primary` by exactly p and the filtration level by a
// non-negative integer.
FilteredComplex build_filtered_complex(const GridDiagram& diagram,
                                       const Differential& diff,
                                       const GradingKeys& keys);

// Gaussian cancellation over F_2.  Repeatedly removes the arrow with the
// smallest (filtration drop, source id, target id) — cancelling an arrow
// never creates an arrow with a smaller drop, so with stop_after_level0 the
// result is the homology of the associated graded complex (the knot
// homology tensored with the rank-two factor carried by the doubled
// basepoints), and without it the E-infinity page.  reverse_ties reverses
// the id part of the ordering; the surviving gradings do not depend on the
// order and the tests exercise that.
void reduce(FilteredComplex& complex, bool stop_after_level0,
            bool reverse_ties = false);

// Alive local indices per label after reduction.
std::vector<std::vector<int>> survivors(const FilteredComplex& complex);

// A bigraded homology class (absolute gradings).
struct HfkEntry {
  long label;
  Rational a;
  Rational m;

  bool operator==(const HfkEntry& other) const {
    return label == other.label && a == other.a && m == other.m;
  }
};

// Removes the rank-two tensor factor: within each label, repeatedly peels
// the lexicographically largest (a, m) class together with its partner at
// (a-1, m-1).  Throws inconsistency_error if the classes cannot be paired.
std::vector<HfkEntry> hfk(const std::vector<HfkEntry>& with_factor);

// Final per-label data of the pipeline.
struct SurvivorRow {
  long label = 0;
  Rational tau;
  Rational d;
  // E-infinity survivors as (Alexander, Maslov), top first; the bottom one
  // always sits at (tau - 1, d - 1).
  std::array<std::pair<Rational, Rational>, 2> classes;
};

struct PipelineOptions {
  unsigned jobs = 1;
  bool use_oracle = false;
};

struct PipelineResult {
  long p = 0;
  long q = 0;
  std::vector<SurvivorRow> rows;          // indexed by spin^c label
  std::vector<HfkEntry> hfk_reduced;      // knot homology classes
  std::vector<HfkEntry> hfk_with_factor;  // before removing the tensor factor
  Rational pin_w, pin_z;                  // pinning constants (diagnostics)

  std::vector<Rational> tau_table() const;
  std::vector<Rational> d_table() const;
};

// The full computation for one knot: builds the diagram, computes both
// cover grading tables, runs both filtered complexes through reduction,
// pins the absolute gradings against the branched-cover correction terms
// and extracts tau, d and the knot homology per spin^c structure.  Checks
// en route: differentials square to zero, exactly two E-infinity survivors
// per label in the (t, d), (t-1, d-1) pattern, integral Alexander gradings,
// d-table symmetric under label negation, and the top Maslov multiset equal
// to the correction-term multiset.
PipelineResult tau_and_d(const TwoBridgeKnot& knot,
                         const PipelineOptions& options = {});

} // namespace twobridge
