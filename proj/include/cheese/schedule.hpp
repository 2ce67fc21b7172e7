#pragma once

// The staged Swiss cheese construction.
//
// Stage m protects the capsule K_m, deletes McKissick systems inside the
// first few discs of S_m with budgets eps_m / 2^k, and extends the bound
// table A_n = 2 n! T_m(n) over the next block (N_{m-1}, N_m], where
//
//   T_m(n) = 1/delta_1^{n+1} + sum_{j<=m} eps_j / delta_j^{n+1}.
//
// eps_1 = 1/4; later eps_m are the largest dyadic 2^-p (p >= m+1) keeping
// n! T_m(n) strictly below every frozen A_n, n <= N_{m-1}. N_m is the first
// index at which the block sum of A_n^{-1/n} is certified >= 1.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cheese/geometry.hpp"
#include "cheese/mckissick.hpp"
#include "cheese/report.hpp"

namespace cheese {

inline constexpr unsigned kDefaultRootPrecision = 32;
inline constexpr unsigned kMaxRootPrecision = 4096;

struct TruncationLimits {
  std::size_t systems_per_stage = 8;
  std::size_t discs_per_system = 16;
};

struct StageParams {
  unsigned long m = 0;
  QRational delta;
  QRational epsilon;
  unsigned long N = 0;
  std::size_t trunc_discs = 0;
  std::size_t trunc_subdiscs = 0;
  /// Root bracket precision t at which the block boundary was certified.
  unsigned root_precision = kDefaultRootPrecision;
};

struct BoundTable {
  std::map<unsigned long, QRational> entries;
  std::vector<unsigned long> block_boundaries;
};

struct Deletion {
  unsigned long stage = 0;
  std::size_t parent_index = 0;  // k, 1-based position of D_{m,k} in S_m
  QDisc disc;
};

struct Provenance {
  std::string tool_version;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> parameters;
};

/// Finite-stage approximation X_M: the closed unit disc minus the recorded
/// open discs.
struct CheeseDescription {
  QDisc outer{QPoint{0, 0}, 1, DiscKind::closed};
  std::vector<Deletion> deletions;
  std::vector<StageParams> stage_records;
  BoundTable bound_table;
  Provenance provenance;
};

/// Sequential construction state; stages complete in order.
struct ScheduleState {
  std::vector<StageParams> stages;
  BoundTable table;
  std::vector<Deletion> deletions;
  unsigned root_precision = kDefaultRootPrecision;

  unsigned long completed() const { return stages.size(); }
  unsigned long boundary(unsigned long m) const { return m == 0 ? 0 : stages.at(m - 1).N; }
};

inline QRational delta(unsigned long n) {
  if (n == 0) throw Error(ErrorKind::invalid_input, "delta_n needs n >= 1");
  return capsule_margin(n);
}

/// T_m(n) over the first m stage records.
inline QRational accumulated_term(const std::vector<StageParams>& stages, unsigned long m, unsigned long n) {
  if (m == 0 || m > stages.size()) throw Error(ErrorKind::invalid_input, "accumulated_term: stage not complete");
  // 1/delta_j^{n+1} = (j+2)^{n+1}
  auto inv_pow = [n](unsigned long j) {
    BigInt p;
    mpz_ui_pow_ui(p.get_mpz_t(), j + 2, n + 1);
    return QRational(p);
  };
  QRational total = inv_pow(1);
  for (unsigned long j = 1; j <= m; ++j) total += stages[j - 1].epsilon * inv_pow(j);
  return total;
}

inline QRational accumulated_term(const ScheduleState& s, unsigned long n) {
  return accumulated_term(s.stages, s.completed(), n);
}

/// The stage j whose block (N_{j-1}, N_j] contains n, or 0 if n > N_m.
inline unsigned long block_of(const std::vector<StageParams>& stages, unsigned long n) {
  unsigned long prev = 0;
  for (const auto& st : stages) {
    if (n > prev && n <= st.N) return st.m;
    prev = st.N;
  }
  return 0;
}

/// A_{m,n}: frozen for n <= N_{m-1}, else 2 n! T_m(n).
inline QRational bound_A(const std::vector<StageParams>& stages, unsigned long m, unsigned long n) {
  if (n == 0) throw Error(ErrorKind::invalid_input, "bound_A needs n >= 1");
  if (m == 0 || m > stages.size()) throw Error(ErrorKind::invalid_input, "bound_A: stage not complete");
  unsigned long j = block_of(stages, n);
  unsigned long owner = (j != 0 && j < m) ? j : m;
  return 2 * QRational(factorial(n)) * accumulated_term(stages, owner, n);
}

inline QRational bound_A(const ScheduleState& s, unsigned long m, unsigned long n) { return bound_A(s.stages, m, n); }

/// The largest 2^-p, p >= m+1, with n! (T_{m-1}(n) + eps / delta_m^{n+1}) < A_{m-1,n}
/// for all 1 <= n <= N_{m-1}.
inline QRational choose_epsilon(const std::vector<StageParams>& stages, unsigned long m) {
  if (m < 2 || stages.size() < m - 1) throw Error(ErrorKind::invalid_input, "choose_epsilon needs stage m-1 complete");
  const unsigned long prev_n = stages[m - 2].N;
  // eps < (A_{m-1,n}/n! - T_{m-1}(n)) delta_m^{n+1} for every n.
  std::optional<QRational> slack;
  for (unsigned long n = 1; n <= prev_n; ++n) {
    QRational a = bound_A(stages, m - 1, n);
    QRational room = (a / QRational(factorial(n)) - accumulated_term(stages, m - 1, n)) * pow(delta(m), n + 1);
    if (!slack || room < *slack) slack = room;
  }
  long p = static_cast<long>(m) + 1;
  if (slack) {
    if (*slack <= 0) throw Error(ErrorKind::invariant_violation, "no positive epsilon satisfies the stage constraints");
    while (pow2(-p) >= *slack) ++p;
  }
  return pow2(-p);
}

struct BlockCertificate {
  unsigned long first = 0;  // N_{m-1} + 1
  unsigned long last = 0;   // N_m
  QRational lower_sum;      // sum of lower root brackets over first..last
  QRational upper_sum_prev; // sum of upper root brackets over first..last-1
  unsigned precision = 0;
};

/// Certified lower/upper sums of A_n^{-1/n} over [first, last] at precision t.
template <class BoundFn>
inline Bracket block_sum(BoundFn&& bound, unsigned long first, unsigned long last, unsigned t) {
  Bracket s{0, 0};
  for (unsigned long n = first; n <= last; ++n) {
    Bracket b = inv_root_bracket(bound(n), n, t);
    s.lo += b.lo;
    s.hi += b.hi;
  }
  return s;
}

/// Smallest N >= first with block sum certified >= 1 (lower brackets), and
/// certified minimal (upper brackets at N - 1 below 1). Precision doubles
/// from `t` until both are decided.
template <class BoundFn>
inline BlockCertificate certify_block_end(BoundFn&& bound, unsigned long first, unsigned t,
                                          unsigned long max_terms = 1'000'000) {
  for (unsigned prec = t; prec <= kMaxRootPrecision; prec *= 2) {
    QRational lower, upper, upper_prev;
    for (unsigned long n = first; n < first + max_terms; ++n) {
      Bracket b = inv_root_bracket(bound(n), n, prec);
      upper_prev = upper;
      lower += b.lo;
      upper += b.hi;
      if (lower >= 1) {
        if (upper_prev < 1) return {first, n, lower, upper_prev, prec};
        break;  // the true crossing may be earlier: refine
      }
    }
  }
  throw Error(ErrorKind::precision_exhausted, "block boundary undecided at root precision " +
                                                  std::to_string(kMaxRootPrecision));
}

/// N_m for the stage-m table; stage m's epsilon must already be recorded.
inline BlockCertificate choose_N(const std::vector<StageParams>& stages, unsigned long m, unsigned t) {
  const unsigned long first = (m >= 2 ? stages.at(m - 2).N : 0) + 1;
  auto bound = [&](unsigned long n) -> QRational { return 2 * QRational(factorial(n)) * accumulated_term(stages, m, n); };
  return certify_block_end(bound, first, t);
}

/// Runs the next stage m = completed() + 1.
inline ScheduleState run_stage(ScheduleState state, const TruncationLimits& limits) {
  if (limits.systems_per_stage == 0 || limits.discs_per_system == 0)
    throw Error(ErrorKind::invalid_input, "truncation limits must be >= 1");
  const unsigned long m = state.completed() + 1;
  StageParams st;
  st.m = m;
  st.delta = delta(m);
  st.epsilon = m == 1 ? q(1, 4) : choose_epsilon(state.stages, m);
  st.trunc_discs = limits.systems_per_stage;
  st.trunc_subdiscs = limits.discs_per_system;

  const auto parents = enumerate_rational_discs(m, limits.systems_per_stage);
  for (std::size_t k = 1; k <= parents.size(); ++k) {
    DiscSystem sys = build_disc_system(parents[k - 1], st.epsilon * pow2(-static_cast<long>(k)), limits.discs_per_system);
    for (auto& d : sys.discs) state.deletions.push_back({m, k, std::move(d)});
  }

  state.stages.push_back(st);
  BlockCertificate blk = choose_N(state.stages, m, state.root_precision);
  state.stages.back().N = blk.last;
  state.stages.back().root_precision = blk.precision;
  for (unsigned long n = blk.first; n <= blk.last; ++n) state.table.entries[n] = bound_A(state.stages, m, n);
  state.table.block_boundaries.push_back(blk.last);
  return state;
}

inline CheeseDescription to_description(const ScheduleState& s) {
  CheeseDescription c;
  c.deletions = s.deletions;
  c.stage_records = s.stages;
  c.bound_table = s.table;
  return c;
}

/// Stages 1..M (M = 0 gives the bare closed unit disc).
inline CheeseDescription build_cheese(unsigned long stages, const TruncationLimits& limits,
                                      unsigned root_precision = kDefaultRootPrecision) {
  ScheduleState s;
  s.root_precision = root_precision;
  for (unsigned long m = 1; m <= stages; ++m) s = run_stage(std::move(s), limits);
  CheeseDescription c = to_description(s);
  c.provenance.parameters["stages"] = std::to_string(stages);
  c.provenance.parameters["systems_per_stage"] = std::to_string(limits.systems_per_stage);
  c.provenance.parameters["discs_per_system"] = std::to_string(limits.discs_per_system);
  c.provenance.parameters["root_precision"] = std::to_string(root_precision);
  return c;
}

/// Re-derives and checks every invariant of a description; exact throughout.
inline VerificationReport verify_schedule(const CheeseDescription& c) {
  VerificationReport rep;
  const auto& stages = c.stage_records;

  rep.add("outer_is_closed_unit_disc", c.outer == QDisc{QPoint{0, 0}, 1, DiscKind::closed});

  // Stage records.
  {
    std::string bad;
    unsigned long prev_n = 0;
    for (std::size_t i = 0; i < stages.size() && bad.empty(); ++i) {
      const auto& st = stages[i];
      const unsigned long m = i + 1;
      if (st.m != m) bad = "stage " + std::to_string(m) + " mislabelled";
      else if (st.delta != delta(m)) bad = "stage " + std::to_string(m) + " delta";
      else if (st.epsilon <= 0) bad = "stage " + std::to_string(m) + " epsilon not positive";
      else if (m == 1 && st.epsilon != q(1, 4)) bad = "epsilon_1 != 1/4";
      else if (st.N <= prev_n) bad = "N_" + std::to_string(m) + " not increasing";
      else if (st.trunc_discs == 0 || st.trunc_subdiscs == 0) bad = "stage " + std::to_string(m) + " truncation";
      prev_n = st.N;
    }
    rep.add("stage_records", bad.empty(), bad);
  }

  // Epsilon: dyadic cap and strict domination for m >= 2, maximality.
  {
    std::string bad_cap, bad_dom, bad_max;
    for (unsigned long m = 2; m <= stages.size(); ++m) {
      const QRational& eps = stages[m - 1].epsilon;
      const bool dyadic = eps.get_num() == 1 && mpz_popcount(eps.get_den_mpz_t()) == 1;
      if (!dyadic || eps > pow2(-static_cast<long>(m + 1))) bad_cap = "epsilon_" + std::to_string(m);
      for (unsigned long n = 1; n <= stages[m - 2].N && bad_dom.empty(); ++n) {
        QRational lhs = QRational(factorial(n)) * accumulated_term(stages, m, n);
        if (!(lhs < bound_A(stages, m - 1, n)))
          bad_dom = "stage " + std::to_string(m) + " violated at n=" + std::to_string(n);
      }
      if (bad_dom.empty() && bad_cap.empty() && choose_epsilon(stages, m) != eps)
        bad_max = "epsilon_" + std::to_string(m) + " is not the largest admissible dyadic";
    }
    rep.add("epsilon_dyadic_cap", bad_cap.empty(), bad_cap);
    rep.add("epsilon_strict_domination", bad_dom.empty(), bad_dom);
    rep.add("epsilon_maximal", bad_max.empty(), bad_max);
  }

  // Deletions: provenance, capsule avoidance, I untouched, containment, budgets.
  std::map<unsigned long, std::vector<QDisc>> parents;
  for (const auto& st : stages) parents[st.m] = enumerate_rational_discs(st.m, st.trunc_discs);
  std::map<std::pair<unsigned long, std::size_t>, std::vector<const QDisc*>> systems;
  {
    std::string bad_prov, bad_caps, bad_seg, bad_parent;
    for (std::size_t i = 0; i < c.deletions.size(); ++i) {
      const auto& del = c.deletions[i];
      const std::string where = "deletion " + std::to_string(i);
      if (del.stage == 0 || del.stage > stages.size() || del.parent_index == 0 ||
          del.parent_index > stages[del.stage - 1].trunc_discs || del.disc.radius <= 0 ||
          del.disc.kind != DiscKind::open) {
        if (bad_prov.empty()) bad_prov = where;
        continue;
      }
      if (!disc_avoids_capsule(del.disc, del.stage) && bad_caps.empty()) bad_caps = where;
      if (dist_sq_to_segment(del.disc.center) < del.disc.radius * del.disc.radius && bad_seg.empty()) bad_seg = where;
      const QDisc& parent = parents[del.stage][del.parent_index - 1];
      if (!closure_inside_open(del.disc, parent) && bad_parent.empty()) bad_parent = where;
      systems[{del.stage, del.parent_index}].push_back(&del.disc);
    }
    for (const auto& [key, discs] : systems)
      if (discs.size() > stages[key.first - 1].trunc_subdiscs && bad_prov.empty())
        bad_prov = "system (" + std::to_string(key.first) + "," + std::to_string(key.second) + ") exceeds truncation";
    rep.add("deletion_provenance", bad_prov.empty(), bad_prov);
    rep.add("capsule_avoidance", bad_caps.empty(), bad_caps);
    rep.add("interval_untouched", bad_seg.empty(), bad_seg);
    rep.add("containment_in_parent", bad_parent.empty(), bad_parent);
  }
  {
    std::string bad_sys, bad_disj, bad_stage;
    std::map<unsigned long, QRational> stage_sum;
    QRational total;
    for (const auto& [key, discs] : systems) {
      QRational sum;
      for (const auto* d : discs) sum += d->radius;
      stage_sum[key.first] += sum;
      total += sum;
      QRational budget = stages[key.first - 1].epsilon * pow2(-static_cast<long>(key.second));
      if (!(sum < budget) && bad_sys.empty())
        bad_sys = "system (" + std::to_string(key.first) + "," + std::to_string(key.second) + ") sum " + to_string(sum);
      for (std::size_t i = 0; i < discs.size() && bad_disj.empty(); ++i)
        for (std::size_t j = i + 1; j < discs.size(); ++j)
          if (disc_relation(*discs[i], *discs[j]) != DiscRelation::disjoint) {
            bad_disj = "system (" + std::to_string(key.first) + "," + std::to_string(key.second) + ")";
            break;
          }
    }
    for (const auto& [m, sum] : stage_sum)
      if (!(sum < stages[m - 1].epsilon) && bad_stage.empty()) bad_stage = "stage " + std::to_string(m);
    rep.add("system_budgets", bad_sys.empty(), bad_sys);
    rep.add("system_disjointness", bad_disj.empty(), bad_disj);
    rep.add("stage_budgets", bad_stage.empty(), bad_stage);
    rep.add("total_radius_below_half", total < q(1, 2), "total " + to_string(total));
  }

  // Bound table: exact keys 1..N_M, frozen values, recorded boundaries.
  {
    std::string bad;
    const unsigned long last = stages.empty() ? 0 : stages.back().N;
    if (c.bound_table.entries.size() != last) bad = "table has " + std::to_string(c.bound_table.entries.size()) + " entries";
    for (unsigned long n = 1; n <= last && bad.empty(); ++n) {
      auto it = c.bound_table.entries.find(n);
      if (it == c.bound_table.entries.end()) bad = "missing A_" + std::to_string(n);
      else if (it->second != bound_A(stages, stages.size(), n)) bad = "A_" + std::to_string(n) + " not frozen";
    }
    std::vector<unsigned long> expected;
    for (const auto& st : stages) expected.push_back(st.N);
    if (bad.empty() && c.bound_table.block_boundaries != expected) bad = "block boundaries disagree with stage records";
    rep.add("bound_table_frozen", bad.empty(), bad);
  }

  // Block sums at each stage's recorded precision.
  {
    std::string bad_lo, bad_min;
    unsigned long prev = 0;
    for (const auto& st : stages) {
      if (st.N <= prev) break;
      auto bound = [&](unsigned long n) { return bound_A(stages, stages.size(), n); };
      Bracket full = block_sum(bound, prev + 1, st.N, st.root_precision);
      Bracket head = block_sum(bound, prev + 1, st.N - 1, st.root_precision);
      if (full.lo < 1 && bad_lo.empty()) bad_lo = "block " + std::to_string(st.m) + " lower sum " + std::to_string(full.lo.get_d());
      if (!(head.hi < 1) && bad_min.empty()) bad_min = "block " + std::to_string(st.m) + " not minimal";
      prev = st.N;
    }
    rep.add("block_sums_at_least_one", bad_lo.empty(), bad_lo);
    rep.add("block_boundaries_minimal", bad_min.empty(), bad_min);
  }
  return rep;
}

}  // namespace cheese
