#include "twobridge/homology.hpp"

#include "twobridge/errors.hpp"
#include "twobridge/lens_d.hpp"

#include <algorithm>
#include <map>

namespace twobridge {

namespace {

inline bool get_bit(const std::vector<std::uint64_t>& row, int i) {
  return (row[static_cast<std::size_t>(i) / 64] >>
          (static_cast<std::size_t>(i) % 64)) &
         1ULL;
}

inline void flip_bit(std::vector<std::uint64_t>& row, int i) {
  row[static_cast<std::size_t>(i) / 64] ^= 1ULL << (static_cast<std::size_t>(i) % 64);
}

inline void xor_rows(std::vector<std::uint64_t>& dst,
                     const std::vector<std::uint64_t>& src) {
  for (std::size_t w = 0; w < dst.size(); ++w) dst[w] ^= src[w];
}

template <typename Fn>
void for_each_bit(const std::vector<std::uint64_t>& row, Fn&& fn) {
  for (std::size_t w = 0; w < row.size(); ++w) {
    std::uint64_t bits = row[w];
    while (bits) {
      const int b = __builtin_ctzll(bits);
      bits &= bits - 1;
      fn(static_cast<int>(w * 64) + b);
    }
  }
}

// Filtration drop of an arrow in integer units.
long drop_of(const LabelComplex& lc, int src, int tgt) {
  const long two_p_units = (lc.primary[static_cast<std::size_t>(src)] -
                            lc.secondary[static_cast<std::size_t>(src)]) -
                           (lc.primary[static_cast<std::size_t>(tgt)] -
                            lc.secondary[static_cast<std::size_t>(tgt)]);
  return two_p_units; // caller divides by 2p once p is known
}

void cancel_arrow(LabelComplex& lc, int src, int tgt) {
  auto outs = lc.out[static_cast<std::size_t>(src)];
  auto ins = lc.in[static_cast<std::size_t>(tgt)];
  flip_bit(outs, tgt); // remove tgt from src's targets
  flip_bit(ins, src);  // remove src from tgt's sources

  for_each_bit(ins, [&](int u) { xor_rows(lc.out[static_cast<std::size_t>(u)], outs); });
  for_each_bit(outs, [&](int v) { xor_rows(lc.in[static_cast<std::size_t>(v)], ins); });

  // Detach src and tgt entirely.
  for_each_bit(lc.out[static_cast<std::size_t>(src)],
               [&](int v) { if (get_bit(lc.in[static_cast<std::size_t>(v)], src)) flip_bit(lc.in[static_cast<std::size_t>(v)], src); });
  for_each_bit(lc.in[static_cast<std::size_t>(src)],
               [&](int u) { if (get_bit(lc.out[static_cast<std::size_t>(u)], src)) flip_bit(lc.out[static_cast<std::size_t>(u)], src); });
  for_each_bit(lc.out[static_cast<std::size_t>(tgt)],
               [&](int v) { if (get_bit(lc.in[static_cast<std::size_t>(v)], tgt)) flip_bit(lc.in[static_cast<std::size_t>(v)], tgt); });
  for_each_bit(lc.in[static_cast<std::size_t>(tgt)],
               [&](int u) { if (get_bit(lc.out[static_cast<std::size_t>(u)], tgt)) flip_bit(lc.out[static_cast<std::size_t>(u)], tgt); });
  std::fill(lc.out[static_cast<std::size_t>(src)].begin(), lc.out[static_cast<std::size_t>(src)].end(), 0);
  std::fill(lc.in[static_cast<std::size_t>(src)].begin(), lc.in[static_cast<std::size_t>(src)].end(), 0);
  std::fill(lc.out[static_cast<std::size_t>(tgt)].begin(), lc.out[static_cast<std::size_t>(tgt)].end(), 0);
  std::fill(lc.in[static_cast<std::size_t>(tgt)].begin(), lc.in[static_cast<std::size_t>(tgt)].end(), 0);
  lc.alive[static_cast<std::size_t>(src)] = 0;
  lc.alive[static_cast<std::size_t>(tgt)] = 0;
}

void reduce_label(LabelComplex& lc, long p, bool stop_after_level0,
                  bool reverse_ties) {
  const int n = static_cast<int>(lc.gens.size());
  for (;;) {
    long best_drop = -1;
    int best_src = -1, best_tgt = -1;
    for (int s = 0; s < n; ++s) {
      const int src = reverse_ties ? n - 1 - s : s;
      if (!lc.alive[static_cast<std::size_t>(src)]) continue;
      for_each_bit(lc.out[static_cast<std::size_t>(src)], [&](int tgt_raw) {
        const int tgt = tgt_raw;
        const long units = drop_of(lc, src, tgt);
        if (units % (2 * p) != 0 || units < 0) {
          throw inconsistency_error("arrow filtration drop is not a natural number");
        }
        const long drop = units / (2 * p);
        const bool better =
            best_drop < 0 || drop < best_drop ||
            (drop == best_drop &&
             (reverse_ties ? (src > best_src || (src == best_src && tgt > best_tgt))
                           : (src < best_src || (src == best_src && tgt < best_tgt))));
        if (better) {
          best_drop = drop;
          best_src = src;
          best_tgt = tgt;
        }
      });
    }
    if (best_drop < 0) return;                      // no arrows left
    if (stop_after_level0 && best_drop > 0) return; // graded part done
    cancel_arrow(lc, best_src, best_tgt);
  }
}

} // namespace

GradingKeys compute_grading_keys(const GridDiagram& diagram, unsigned jobs) {
  GradingKeys keys;
  keys.maslov_w = cover_maslov_table(diagram, Role::w, jobs);
  keys.maslov_z = cover_maslov_table(diagram, Role::z, jobs);

  // Structural checks: within a spin^c class, both cover gradings are
  // constant mod p and their difference is constant mod 2p (these make
  // relative Maslov and Alexander gradings well defined integers).
  const long p = diagram.p();
  for (const auto& cls : diagram.label_classes()) {
    const std::size_t ref = static_cast<std::size_t>(cls.front());
    for (int g : cls) {
      const std::size_t gi = static_cast<std::size_t>(g);
      if (mod_floor(keys.maslov_w[gi] - keys.maslov_w[ref], p) != 0 ||
          mod_floor(keys.maslov_z[gi] - keys.maslov_z[ref], p) != 0) {
        throw inconsistency_error(
            "cover Maslov gradings not congruent within a spin^c class");
      }
      if (mod_floor((keys.maslov_w[gi] - keys.maslov_z[gi]) -
                        (keys.maslov_w[ref] - keys.maslov_z[ref]),
                    2 * p) != 0) {
        throw inconsistency_error(
            "cover grading difference not congruent mod 2p within a class");
      }
    }
  }
  return keys;
}

FilteredComplex build_filtered_complex(const GridDiagram& diagram,
                                       const Differential& diff,
                                       const GradingKeys& keys) {
  const long p = diagram.p();
  FilteredComplex complex;
  complex.role = diff.role;
  complex.p = p;
  const auto& primary_table =
      diff.role == Role::w ? keys.maslov_w : keys.maslov_z;
  const auto& secondary_table =
      diff.role == Role::w ? keys.maslov_z : keys.maslov_w;

  complex.labels.reserve(diagram.label_classes().size());
  for (std::size_t label = 0; label < diagram.label_classes().size(); ++label) {
    const auto& cls = diagram.label_classes()[label];
    LabelComplex lc;
    lc.label = static_cast<long>(label);
    lc.gens = cls;
    const int n = static_cast<int>(cls.size());
    lc.words = (n + 63) / 64;
    lc.primary.reserve(cls.size());
    lc.secondary.reserve(cls.size());
    for (int g : cls) {
      lc.primary.push_back(primary_table[static_cast<std::size_t>(g)]);
      lc.secondary.push_back(secondary_table[static_cast<std::size_t>(g)]);
    }
    lc.out.assign(cls.size(), std::vector<std::uint64_t>(static_cast<std::size_t>(lc.words), 0));
    lc.in.assign(cls.size(), std::vector<std::uint64_t>(static_cast<std::size_t>(lc.words), 0));
    lc.alive.assign(cls.size(), 1);

    std::map<int, int> local_of;
    for (int i = 0; i < n; ++i) local_of[cls[static_cast<std::size_t>(i)]] = i;
    for (int i = 0; i < n; ++i) {
      for (int target : diff.arrows[static_cast<std::size_t>(cls[static_cast<std::size_t>(i)])]) {
        const auto it = local_of.find(target);
        if (it == local_of.end()) {
          throw inconsistency_error("differential arrow crosses spin^c classes");
        }
        const int j = it->second;
        if (lc.primary[static_cast<std::size_t>(i)] -
                lc.primary[static_cast<std::size_t>(j)] !=
            p) {
          throw inconsistency_error("arrow does not drop the Maslov grading by one");
        }
        const long units = drop_of(lc, i, j);
        if (units < 0 || units % (2 * p) != 0) {
          throw inconsistency_error("arrow raises the filtration level");
        }
        flip_bit(lc.out[static_cast<std::size_t>(i)], j);
        flip_bit(lc.in[static_cast<std::size_t>(j)], i);
      }
    }
    complex.labels.push_back(std::move(lc));
  }
  return complex;
}

void reduce(FilteredComplex& complex, bool stop_after_level0,
            bool reverse_ties) {
  for (auto& lc : complex.labels) {
    reduce_label(lc, complex.p, stop_after_level0, reverse_ties);
  }
}

std::vector<std::vector<int>> survivors(const FilteredComplex& complex) {
  std::vector<std::vector<int>> alive;
  alive.reserve(complex.labels.size());
  for (const auto& lc : complex.labels) {
    std::vector<int> local;
    for (std::size_t i = 0; i < lc.alive.size(); ++i) {
      if (lc.alive[i]) local.push_back(static_cast<int>(i));
    }
    alive.push_back(std::move(local));
  }
  return alive;
}

std::vector<HfkEntry> hfk(const std::vector<HfkEntry>& with_factor) {
  std::map<long, std::vector<std::pair<Rational, Rational>>> by_label;
  for (const auto& e : with_factor) {
    by_label[e.label].emplace_back(e.a, e.m);
  }
  std::vector<HfkEntry> result;
  for (auto& [label, classes] : by_label) {
    std::sort(classes.begin(), classes.end());
    while (!classes.empty()) {
      const auto top = classes.back();
      classes.pop_back();
      const std::pair<Rational, Rational> partner{top.first - 1, top.second - 1};
      const auto it = std::find(classes.begin(), classes.end(), partner);
      if (it == classes.end()) {
        throw inconsistency_error(
            "knot homology classes cannot be paired with the tensor factor");
      }
      classes.erase(it);
      result.push_back({label, top.first, top.second});
    }
  }
  std::sort(result.begin(), result.end(), [](const HfkEntry& x, const HfkEntry& y) {
    if (x.label != y.label) return x.label < y.label;
    if (x.a != y.a) return y.a < x.a;
    return y.m < x.m;
  });
  return result;
}

std::vector<Rational> PipelineResult::tau_table() const {
  std::vector<Rational> t;
  t.reserve(rows.size());
  for (const auto& r : rows) t.push_back(r.tau);
  return t;
}

std::vector<Rational> PipelineResult::d_table() const {
  std::vector<Rational> t;
  t.reserve(rows.size());
  for (const auto& r : rows) t.push_back(r.d);
  return t;
}

PipelineResult tau_and_d(const TwoBridgeKnot& knot,
                         const PipelineOptions& options) {
  const GridDiagram diagram = GridDiagram::build(knot);
  const long p = knot.p();
  const GradingKeys keys = compute_grading_keys(diagram, options.jobs);

  const Differential diff_w =
      differential(diagram, Role::w, &keys.maslov_w, &keys.maslov_z,
                   options.use_oracle, options.jobs);
  const Differential diff_z =
      differential(diagram, Role::z, &keys.maslov_w, &keys.maslov_z,
                   options.use_oracle, options.jobs);

  FilteredComplex cw = build_filtered_complex(diagram, diff_w, keys);
  FilteredComplex cw_graded = cw; // for the knot homology
  FilteredComplex cz = build_filtered_complex(diagram, diff_z, keys);

  reduce(cw_graded, /*stop_after_level0=*/true);
  reduce(cw, /*stop_after_level0=*/false);
  reduce(cz, /*stop_after_level0=*/false);

  // Relative (exact, cross-label) Maslov gradings against generator 0.
  const std::size_t n_gens = static_cast<std::size_t>(diagram.num_generators());
  std::vector<Rational> rel_w(n_gens), rel_z(n_gens);
  for (std::size_t g = 0; g < n_gens; ++g) {
    rel_w[g] = rat(keys.maslov_w[g] - keys.maslov_w[0], p);
    rel_z[g] = rat(keys.maslov_z[g] - keys.maslov_z[0], p);
  }

  // E-infinity survivors: exactly two per label, one Maslov unit apart.
  struct LabelSurvivors {
    int top_gen, bottom_gen;
  };
  const auto extract_survivors = [&](const FilteredComplex& complex) {
    std::vector<LabelSurvivors> out;
    out.reserve(complex.labels.size());
    const auto alive = survivors(complex);
    for (std::size_t label = 0; label < complex.labels.size(); ++label) {
      const auto& lc = complex.labels[label];
      const auto& local = alive[label];
      if (local.size() != 2) {
        throw inconsistency_error(
            "expected exactly two E-infinity survivors per spin^c class");
      }
      int top = local[0], bottom = local[1];
      if (lc.primary[static_cast<std::size_t>(top)] <
          lc.primary[static_cast<std::size_t>(bottom)]) {
        std::swap(top, bottom);
      }
      if (lc.primary[static_cast<std::size_t>(top)] -
              lc.primary[static_cast<std::size_t>(bottom)] !=
          complex.p) {
        throw inconsistency_error(
            "E-infinity survivors are not one Maslov unit apart");
      }
      if ((lc.secondary[static_cast<std::size_t>(top)] -
           lc.secondary[static_cast<std::size_t>(bottom)]) != -complex.p) {
        throw inconsistency_error(
            "E-infinity survivors are not one filtration level apart");
      }
      out.push_back({lc.gens[static_cast<std::size_t>(top)],
                     lc.gens[static_cast<std::size_t>(bottom)]});
    }
    return out;
  };
  const auto surv_w = extract_survivors(cw);
  const auto surv_z = extract_survivors(cz);

  // Pin both roles' absolute gradings against the branched-cover
  // correction terms.
  const std::vector<Rational> targets = d_branched_cover_multiset(knot);
  std::vector<Rational> top_w, top_z;
  top_w.reserve(surv_w.size());
  top_z.reserve(surv_z.size());
  for (const auto& s : surv_w) top_w.push_back(rel_w[static_cast<std::size_t>(s.top_gen)]);
  for (const auto& s : surv_z) top_z.push_back(rel_z[static_cast<std::size_t>(s.top_gen)]);
  const Rational c_w = pin_constant(top_w, targets);
  const Rational c_z = pin_constant(top_z, targets);

  std::vector<Rational> abs_w(n_gens), abs_z(n_gens);
  for (std::size_t g = 0; g < n_gens; ++g) {
    abs_w[g] = rel_w[g] + c_w;
    abs_z[g] = rel_z[g] + c_z;
  }
  const std::vector<Rational> alex = alexander_gradings(abs_w, abs_z);

  PipelineResult result;
  result.p = p;
  result.q = knot.q();
  result.pin_w = c_w;
  result.pin_z = c_z;
  result.rows.resize(static_cast<std::size_t>(p));
  for (std::size_t label = 0; label < static_cast<std::size_t>(p); ++label) {
    const auto& s = surv_w[label];
    SurvivorRow row;
    row.label = static_cast<long>(label);
    const std::size_t top = static_cast<std::size_t>(s.top_gen);
    const std::size_t bottom = static_cast<std::size_t>(s.bottom_gen);
    row.tau = alex[top];
    row.d = abs_w[top];
    row.classes = {std::pair<Rational, Rational>{alex[top], abs_w[top]},
                   std::pair<Rational, Rational>{alex[bottom], abs_w[bottom]}};
    if (!is_integer(row.tau)) {
      throw inconsistency_error("tau is not an integer");
    }
    if (alex[bottom] != alex[top] - 1 || abs_w[bottom] != abs_w[top] - 1) {
      throw inconsistency_error(
          "bottom survivor is not at (tau - 1, d - 1)");
    }
    result.rows[label] = std::move(row);
  }

  // d-invariants must be symmetric under conjugation of spin^c structures
  // (label negation) and realise the correction-term multiset.
  std::vector<Rational> d_check;
  d_check.reserve(result.rows.size());
  for (const auto& row : result.rows) d_check.push_back(row.d);
  for (long s = 0; s < p; ++s) {
    if (result.rows[static_cast<std::size_t>(s)].d !=
        result.rows[static_cast<std::size_t>(mod_floor(-s, p))].d) {
      throw inconsistency_error("d-table is not symmetric under label negation");
    }
  }
  std::sort(d_check.begin(), d_check.end());
  if (d_check != targets) {
    throw inconsistency_error("d-table does not realise the correction terms");
  }

  // Knot homology with the rank-two factor, then reduced.
  const auto graded_alive = survivors(cw_graded);
  for (std::size_t label = 0; label < graded_alive.size(); ++label) {
    const auto& lc = cw_graded.labels[label];
    for (int local : graded_alive[label]) {
      const std::size_t g =
          static_cast<std::size_t>(lc.gens[static_cast<std::size_t>(local)]);
      result.hfk_with_factor.push_back(
          {static_cast<long>(label), alex[g], abs_w[g]});
    }
  }
  std::sort(result.hfk_with_factor.begin(), result.hfk_with_factor.end(),
            [](const HfkEntry& x, const HfkEntry& y) {
              if (x.label != y.label) return x.label < y.label;
              if (x.a != y.a) return y.a < x.a;
              return y.m < x.m;
            });
  result.hfk_reduced = hfk(result.hfk_with_factor);
  return result;
}

} // namespace twobridge
