#include "twobridge/obstruct.hpp"

#include "twobridge/errors.hpp"
#include "twobridge/lens_d.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace twobridge {

std::vector<long> subgroup_elements_cyclic(long N, long m) {
  if (N < 1 || m < 1 || N % m != 0) {
    throw std::invalid_argument("subgroup order must divide the group order");
  }
  std::vector<long> H;
  H.reserve(static_cast<std::size_t>(m));
  const long step = N / m;
  for (long t = 0; t < m; ++t) H.push_back(t * step);
  return H;
}

std::vector<std::vector<long>> order_pk_subgroups(const std::vector<long>& factors,
                                                  long p, int k) {
  if (p < 2 || !is_prime(p)) {
    throw std::invalid_argument("order_pk_subgroups expects a prime p");
  }
  if (k < 0) throw std::invalid_argument("negative exponent");
  long N = 1;
  for (long f : factors) {
    if (f < 1) throw std::invalid_argument("invalid cyclic factor");
    if (N > 1000000 / f) {
      throw std::invalid_argument("group too large for subgroup enumeration");
    }
    N *= f;
  }
  long pk = 1;
  for (int i = 0; i < k; ++i) {
    if (pk > N) break;
    pk *= p;
  }
  if (k == 0) return {{0}};
  if (pk > N || N % pk != 0) return {};

  // Decode/encode helpers for the mixed-radix element indexing.
  const auto add = [&](long a, long b) {
    long result = 0, mul = 1;
    for (long f : factors) {
      const long ea = a % f, eb = b % f;
      a /= f;
      b /= f;
      result += ((ea + eb) % f) * mul;
      mul *= f;
    }
    return result;
  };

  // Elements of order dividing p^k (the candidate generators).  The order
  // of (e_1,...,e_r) is the lcm over components of f_i / gcd(e_i, f_i).
  std::vector<long> torsion;
  for (long e = 0; e < N; ++e) {
    long ord = 1;
    long rem = e;
    for (long f : factors) {
      const long ei = rem % f;
      rem /= f;
      const long comp = f / gcd_long(ei == 0 ? f : ei, f);
      ord = ord / gcd_long(ord, comp) * comp;
    }
    long o = ord;
    while (o % p == 0) o /= p;
    if (o == 1 && ord <= pk) torsion.push_back(e);
  }

  // Close each tuple of up to k generators; an abelian group of order p^k
  // needs at most k generators, so k-tuples over the torsion part reach
  // every subgroup.
  std::set<std::vector<long>> found;
  std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
  const std::size_t t = torsion.size();
  if (t == 0) return {};
  for (;;) {
    std::set<long> closure{0};
    for (std::size_t g = 0; g < idx.size(); ++g) {
      const long gen = torsion[idx[g]];
      // add the cyclic group generated by gen to the closure
      std::set<long> next = closure;
      for (long base : closure) {
        long cur = base;
        for (;;) {
          cur = add(cur, gen);
          if (!next.insert(cur).second) break;
          if (cur == base) break;
        }
      }
      closure = std::move(next);
    }
    if (static_cast<long>(closure.size()) == pk) {
      found.emplace(closure.begin(), closure.end());
    }
    // advance the tuple
    std::size_t pos = 0;
    while (pos < idx.size()) {
      if (++idx[pos] < t) break;
      idx[pos] = 0;
      ++pos;
    }
    if (pos == idx.size()) break;
  }
  return {found.begin(), found.end()};
}

Rational S_H(const std::vector<Rational>& f, const std::vector<long>& H) {
  Rational sum(0);
  for (long h : H) {
    if (h < 0 || h >= static_cast<long>(f.size())) {
      throw std::invalid_argument("subgroup element outside the label range");
    }
    sum += f[static_cast<std::size_t>(h)];
  }
  return sum;
}

Rational obstruction_value(const std::vector<Rational>& f, long p, int k) {
  const long N = static_cast<long>(f.size());
  if (N < 1) throw std::invalid_argument("empty function table");
  if (p == 1) return abs(f[0]);
  if (p < 2 || k < 1) throw std::invalid_argument("invalid obstruction order");
  long pk = 1;
  for (int i = 0; i < k; ++i) {
    if (pk > N / p) return Rational(0); // p^k certainly exceeds N
    pk *= p;
  }
  if (N % pk != 0) return Rational(0);

  // The determinant groups handled here are cyclic, so there is exactly
  // one subgroup per order; the sign rules below still follow the general
  // definition over the subgroup list.
  const std::vector<std::vector<long>> subgroups = {
      subgroup_elements_cyclic(N, pk)};
  bool any_negative = false, any_positive = false;
  Rational best;
  bool have_best = false;
  for (const auto& H : subgroups) {
    const Rational s = S_H(f, H);
    if (s == 0) return Rational(0);
    (s > 0 ? any_positive : any_negative) = true;
    const Rational mag = abs(s);
    if (!have_best || mag < best) {
      best = mag;
      have_best = true;
    }
  }
  if (any_positive && any_negative) return Rational(0);
  return best;
}

bool minmax_test(const std::vector<Rational>& f, long p) {
  const long N = static_cast<long>(f.size());
  if (p < 2 || !is_prime(p) || N % p != 0 || (N / p) % p == 0) {
    throw std::invalid_argument("minmax test requires v_p(N) = 1");
  }
  std::vector<Rational> g;
  g.reserve(static_cast<std::size_t>(p));
  for (long t = 0; t < p; ++t) g.push_back(f[static_cast<std::size_t>(t * (N / p))]);
  const Rational M = *std::max_element(g.begin(), g.end());
  const Rational m = *std::min_element(g.begin(), g.end());
  if (m != -M) return true; // fires: extrema not symmetric
  if (M == 0) return false; // identically zero restriction is consistent

  const auto delta_set = [&](const Rational& level) {
    std::set<long> delta;
    for (long t1 = 0; t1 < p; ++t1) {
      if (g[static_cast<std::size_t>(t1)] != level) continue;
      for (long t2 = 0; t2 < p; ++t2) {
        if (t2 == t1 || g[static_cast<std::size_t>(t2)] != level) continue;
        delta.insert(mod_floor(t2 - t1, p));
      }
    }
    return delta;
  };
  const std::set<long> delta_top = delta_set(M);
  const std::set<long> delta_bot = delta_set(-M);
  if (delta_top.empty()) return false; // a unique maximum forces nothing

  // Consistency needs a common element of d^{-1} * Delta(-M) over all d in
  // Delta(M) (d^{-1} the multiplicative inverse mod p): such a common
  // element is where the hidden metabolizer coordinate would have to live.
  std::set<long> intersection;
  bool first = true;
  for (long dtop : delta_top) {
    const long dtop_inv = inverse_mod(dtop, p);
    std::set<long> scaled;
    for (long dbot : delta_bot) {
      scaled.insert(mod_floor(dtop_inv * dbot, p));
    }
    if (first) {
      intersection = std::move(scaled);
      first = false;
    } else {
      std::set<long> keep;
      std::set_intersection(intersection.begin(), intersection.end(),
                            scaled.begin(), scaled.end(),
                            std::inserter(keep, keep.begin()));
      intersection = std::move(keep);
    }
    if (intersection.empty()) return true; // fires
  }
  return intersection.empty();
}

int admissible_k(long N, long p) {
  if (p < 2 || !is_prime(p)) {
    throw std::invalid_argument("admissible_k expects a prime");
  }
  int v = 0;
  while (N % p == 0) {
    N /= p;
    ++v;
  }
  return (v + 1) / 2;
}

bool twist_family_independent(const std::vector<long>& ps) {
  for (long p : ps) {
    if (p < 3 || p % 2 == 0) {
      throw std::invalid_argument("twist family members must be odd and >= 3");
    }
  }
  if (ps.empty()) return true;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t j = i + 1; j < ps.size(); ++j) {
      if (ps[i] == ps[j]) return false;
    }
  }
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const std::vector<Rational> d = twist_d_table(ps[i]);
    bool separated = false;
    for (const auto& [prime, exp] : factorize(ps[i])) {
      (void)exp;
      bool unique_to_i = true;
      for (std::size_t j = 0; j < ps.size(); ++j) {
        if (j != i && ps[j] % prime == 0) {
          unique_to_i = false;
          break;
        }
      }
      if (!unique_to_i) continue;
      if (S_H(d, subgroup_elements_cyclic(ps[i], prime)) != 0) {
        separated = true;
        break;
      }
    }
    if (!separated) return false;
  }
  return true;
}

std::string ObstructionTest::name() const {
  long pk = 1;
  for (int i = 0; i < k; ++i) pk *= prime;
  if (kind == "minmax") {
    return "minmax_" + std::to_string(prime) + "(" + grading + ")";
  }
  return kind + "_" + std::to_string(prime == 1 ? 1 : pk);
}

ObstructionReport verdict(const TwoBridgeKnot& knot,
                          const std::vector<Rational>& tau,
                          const std::vector<Rational>& d) {
  const long N = knot.determinant();
  if (static_cast<long>(tau.size()) != N || static_cast<long>(d.size()) != N) {
    throw std::invalid_argument("tau/d tables must have one entry per label");
  }
  ObstructionReport report;
  report.p = knot.p();
  report.q = knot.q();
  report.tau = tau;
  report.d = d;

  const auto push = [&](std::string kind, long prime, int k, std::string grading,
                        Rational value, bool fired) {
    report.tests.push_back({std::move(kind), prime, k, std::move(grading),
                            std::move(value), fired});
  };

  // Spin-structure values first.
  {
    const Rational tv = obstruction_value(tau, 1, 1);
    push("T", 1, 1, "", tv, tv != 0);
    const Rational dv = obstruction_value(d, 1, 1);
    push("D", 1, 1, "", dv, dv != 0);
  }

  for (const auto& [prime, exp] : factorize(N)) {
    const int kmax = admissible_k(N, prime);
    for (int k = 1; k <= kmax; ++k) {
      const Rational tv = obstruction_value(tau, prime, k);
      push("T", prime, k, "", tv, tv != 0);
    }
    for (int k = 1; k <= kmax; ++k) {
      const Rational dv = obstruction_value(d, prime, k);
      push("D", prime, k, "", dv, dv != 0);
    }
    if (exp == 1) {
      // Explicit return type: abs(...) on GMP values yields an expression
      // template referencing the locals, which must be collapsed to a value
      // before the lambda returns.
      const auto value_of = [&](const std::vector<Rational>& f) -> Rational {
        Rational M = f[0], m = f[0];
        for (long t = 0; t < prime; ++t) {
          const Rational v = f[static_cast<std::size_t>(t * (N / prime))];
          if (t == 0) {
            M = v;
            m = v;
          } else {
            M = std::max(M, v);
            m = std::min(m, v);
          }
        }
        return abs(M + m);
      };
      push("minmax", prime, 1, "tau", value_of(tau), minmax_test(tau, prime));
      push("minmax", prime, 1, "d", value_of(d), minmax_test(d, prime));
    }
  }

  for (const auto& t : report.tests) {
    if (t.fired) {
      report.infinite_order = true;
      break;
    }
  }
  return report;
}

} // namespace twobridge
