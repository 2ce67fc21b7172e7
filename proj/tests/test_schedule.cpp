#include <gtest/gtest.h>

#include <map>
#include <set>

#include "support.hpp"

using namespace cheese;
using namespace cheese::testing;

namespace {

const TruncationLimits kSmall{4, 6};

// A_{1,n} = 2 n! (1 + 1/4) 3^(n+1), written out directly.
QRational a1_oracle(unsigned long n) { return QRational(factorial(n)) * q(5, 2) * pow(q(3), n + 1); }

// log of A_{m,n} for the block-owning stage m = eps.size(), in long double.
long double log_a(const std::vector<long double>& eps, unsigned long n) {
  long double t = std::pow(3.0L, static_cast<long double>(n + 1));
  for (std::size_t j = 0; j < eps.size(); ++j) t += eps[j] * std::pow(static_cast<long double>(j + 3), n + 1);
  return std::log(2.0L) + std::lgamma(static_cast<long double>(n + 1)) + std::log(t);
}

// Floating oracle for a block end: the first N with partial sum >= 1, provided
// the two partial sums around the crossing clear 1 by a visible margin.
unsigned long block_end_oracle(const std::vector<long double>& eps, unsigned long first) {
  long double sum = 0;
  for (unsigned long n = first;; ++n) {
    long double prev = sum;
    sum += std::exp(-log_a(eps, n) / static_cast<long double>(n));
    if (sum >= 1) {
      EXPECT_GT(sum - 1, 1e-9L);
      EXPECT_GT(1 - prev, 1e-9L);
      return n;
    }
  }
}

}  // namespace

TEST(Schedule, Delta) {
  EXPECT_EQ(delta(1), q(1, 3));
  EXPECT_EQ(delta(2), q(1, 4));
  EXPECT_EQ(delta(10), q(1, 12));
  EXPECT_THROW(delta(0), Error);
}

TEST(Schedule, StageOneValues) {
  ScheduleState s = run_stage(ScheduleState{}, kSmall);
  ASSERT_EQ(s.completed(), 1u);
  EXPECT_EQ(s.stages[0].delta, q(1, 3));
  EXPECT_EQ(s.stages[0].epsilon, q(1, 4));
  EXPECT_EQ(accumulated_term(s, 1), q(45, 4));
  EXPECT_EQ(accumulated_term(s, 2), q(135, 4));
  EXPECT_EQ(bound_A(s, 1, 1), q(45, 2));
  EXPECT_EQ(bound_A(s, 1, 2), q(135));
  for (unsigned long n = 1; n <= 40; ++n) EXPECT_EQ(bound_A(s, 1, n), a1_oracle(n));
}

TEST(Schedule, StageOneBoundaryMatchesOracle) {
  ScheduleState s = run_stage(ScheduleState{}, kSmall);
  EXPECT_EQ(s.stages[0].N, block_end_oracle({1.0L / 4}, 1));
  EXPECT_EQ(s.stages[0].N, 15u);
}

TEST(Schedule, EpsilonTwoMatchesExactOracle) {
  ScheduleState s = run_stage(ScheduleState{}, kSmall);
  const unsigned long n1 = s.stages[0].N;
  // Largest 2^-p, p >= 3, with 4^(n+1) eps < (5/4) 3^(n+1) for all n <= N_1.
  long p = 3;
  auto ok = [&](const QRational& e) {
    for (unsigned long n = 1; n <= n1; ++n)
      if (!(e * pow(q(4), n + 1) < q(5, 4) * pow(q(3), n + 1))) return false;
    return true;
  };
  while (!ok(pow2(-p))) ++p;
  EXPECT_EQ(choose_epsilon(s.stages, 2), pow2(-p));
  EXPECT_EQ(pow2(-p), q(1, 128));
}

TEST(Schedule, StageTwoMatchesOracle) {
  ScheduleState s = run_stage(run_stage(ScheduleState{}, kSmall), kSmall);
  const auto& st = s.stages;
  EXPECT_EQ(st[1].delta, q(1, 4));
  EXPECT_EQ(st[1].epsilon, q(1, 128));
  EXPECT_EQ(accumulated_term(s, 1), q(45, 4) + q(1, 128) * 16);
  EXPECT_EQ(st[1].N, block_end_oracle({1.0L / 4, 1.0L / 128}, st[0].N + 1));
  EXPECT_EQ(st[1].N, 68u);
  EXPECT_GT(st[1].N, st[0].N);
}

TEST(Schedule, BoundAFreezesEarlierBlocks) {
  ScheduleState s = run_stage(run_stage(run_stage(ScheduleState{}, kSmall), kSmall), kSmall);
  for (unsigned long m = 1; m <= 3; ++m)
    for (unsigned long j = 1; j <= m; ++j)
      for (unsigned long k = 1; k <= s.stages[j - 1].N; ++k) ASSERT_EQ(bound_A(s, m, k), bound_A(s, j, k));
  for (unsigned long n = 1; n <= s.stages[0].N; ++n) EXPECT_EQ(bound_A(s, 2, n), a1_oracle(n));
  for (const auto& [k, a] : s.table.entries) EXPECT_EQ(a, bound_A(s, 3, k));
}

TEST(Schedule, StrictDominationForEveryStage) {
  ScheduleState s = run_stage(run_stage(run_stage(ScheduleState{}, kSmall), kSmall), kSmall);
  for (unsigned long m = 2; m <= 3; ++m) {
    for (unsigned long n = 1; n <= s.stages[m - 2].N; ++n) {
      QRational lhs = QRational(factorial(n)) * accumulated_term(s.stages, m, n);
      ASSERT_LT(lhs, bound_A(s, m - 1, n)) << "m=" << m << " n=" << n;
    }
    // Maximality: doubling epsilon breaks a constraint or the dyadic cap.
    QRational twice = 2 * s.stages[m - 1].epsilon;
    bool broken = twice > pow2(-static_cast<long>(m + 1));
    for (unsigned long n = 1; n <= s.stages[m - 2].N && !broken; ++n) {
      QRational lhs = QRational(factorial(n)) *
                      (accumulated_term(s.stages, m - 1, n) + twice * pow(q(static_cast<long>(m) + 2), n + 1));
      broken = !(lhs < bound_A(s, m - 1, n));
    }
    EXPECT_TRUE(broken) << "m=" << m;
  }
  EXPECT_EQ(s.stages[2].epsilon, pow2(-30));
  EXPECT_EQ(s.stages[2].N, 356u);
}

TEST(Schedule, BlockCertificatesHold) {
  ScheduleState s = run_stage(run_stage(ScheduleState{}, kSmall), kSmall);
  unsigned long prev = 0;
  for (const auto& st : s.stages) {
    auto bound = [&](unsigned long n) -> QRational { return bound_A(s, st.m, n); };
    Bracket full = block_sum(bound, prev + 1, st.N, 32);
    Bracket shorter = block_sum(bound, prev + 1, st.N - 1, 32);
    EXPECT_GE(full.lo, 1);
    EXPECT_LT(shorter.hi, 1);
    prev = st.N;
  }
}

TEST(Schedule, CertifyBlockEndRaisesPrecisionOrGivesUp) {
  // Sum of 1/2 + 1/2 hits 1 exactly: the lower brackets reach it at once.
  auto halves = [](unsigned long n) -> QRational { return pow(q(2), n); };
  BlockCertificate c = certify_block_end(halves, 1, 8);
  EXPECT_EQ(c.last, 2u);
  // A value whose n-th root sits just above the bracket grid forces refinement.
  auto tight = [](unsigned long n) -> QRational { return n == 1 ? QRational(q(3, 2)) : pow(q(2), n); };
  BlockCertificate r = certify_block_end(tight, 1, 1);
  EXPECT_EQ(r.last, 2u);
  EXPECT_EQ(r.precision, 2u);
  // 2/3 + 1/3 = 1 exactly: minimality at N = 2 can never be certified.
  auto tie = [](unsigned long n) -> QRational { return n == 1 ? QRational(q(3, 2)) : pow(q(3), n); };
  try {
    certify_block_end(tie, 1, 8);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::precision_exhausted);
  }
}

TEST(Schedule, BuildCheeseGeometry) {
  CheeseDescription c = build_cheese(2, kSmall);
  ASSERT_EQ(c.deletions.size(), 2u * 4 * 6);
  QRational total;
  for (const auto& st : c.stage_records) {
    std::map<std::size_t, QRational> per_system;
    QRational stage_sum;
    for (const auto& del : c.deletions) {
      if (del.stage != st.m) continue;
      EXPECT_TRUE(disc_avoids_capsule(del.disc, st.m));
      EXPECT_EQ(dist_sq_to_segment(del.disc.center) > del.disc.radius * del.disc.radius, true);
      per_system[del.parent_index] += del.disc.radius;
      stage_sum += del.disc.radius;
    }
    for (const auto& [k, sum] : per_system) EXPECT_LT(sum, st.epsilon * pow2(-static_cast<long>(k)));
    EXPECT_LT(stage_sum, st.epsilon * (1 - pow2(-static_cast<long>(st.trunc_discs))));
    total += stage_sum;
  }
  EXPECT_LT(total, q(1, 2));
  EXPECT_TRUE(verify_schedule(c).ok()) << verify_schedule(c).to_text();
}

TEST(Schedule, ZeroStagesIsTheBareDisc) {
  CheeseDescription c = build_cheese(0, kSmall);
  EXPECT_TRUE(c.deletions.empty());
  EXPECT_TRUE(c.stage_records.empty());
  EXPECT_TRUE(verify_schedule(c).ok());
}

TEST(Schedule, MonotoneRefinement) {
  CheeseDescription two = build_cheese(2, kSmall);
  CheeseDescription three = build_cheese(3, kSmall);
  ASSERT_LE(two.deletions.size(), three.deletions.size());
  for (std::size_t i = 0; i < two.deletions.size(); ++i) {
    EXPECT_EQ(two.deletions[i].stage, three.deletions[i].stage);
    EXPECT_EQ(two.deletions[i].parent_index, three.deletions[i].parent_index);
    EXPECT_EQ(two.deletions[i].disc, three.deletions[i].disc);
  }
  for (const auto& [k, a] : two.bound_table.entries) EXPECT_EQ(three.bound_table.entries.at(k), a);
}

TEST(Schedule, VerifyCatchesMutations) {
  const CheeseDescription good = build_cheese(2, kSmall);
  auto failing = [](const CheeseDescription& c) {
    std::set<std::string> names;
    for (const auto& ch : verify_schedule(c).checks)
      if (!ch.passed) names.insert(ch.name);
    return names;
  };

  CheeseDescription c = good;
  c.deletions[3].disc.radius += 1;
  auto f = failing(c);
  EXPECT_TRUE(f.count("system_budgets") || f.count("stage_budgets")) << verify_schedule(c).to_text();

  c = good;
  c.deletions[0].disc.center = {0, q(1, 5)};
  f = failing(c);
  EXPECT_TRUE(f.count("capsule_avoidance"));

  c = good;
  c.stage_records[1].epsilon *= 2;
  EXPECT_FALSE(failing(c).empty());

  c = good;
  c.stage_records[1].epsilon /= 2;
  EXPECT_TRUE(failing(c).count("epsilon_maximal"));

  c = good;
  c.bound_table.entries[3] *= 2;
  EXPECT_TRUE(failing(c).count("bound_table_frozen"));

  c = good;
  c.stage_records[0].N += 1;
  EXPECT_FALSE(failing(c).empty());

  c = good;
  c.deletions[1].disc = c.deletions[0].disc;
  EXPECT_TRUE(failing(c).count("system_disjointness"));
}

TEST(Schedule, VerificationReportIsDeterministic) {
  CheeseDescription c = build_cheese(2, kSmall);
  EXPECT_EQ(verify_schedule(c).to_text(), verify_schedule(c).to_text());
  EXPECT_EQ(emit_report(verify_schedule(c)), emit_report(verify_schedule(build_cheese(2, kSmall))));
}

TEST(Schedule, StageBoundFormula) {
  ScheduleState s = run_stage(run_stage(ScheduleState{}, kSmall), kSmall);
  EXPECT_EQ(stage_bound_formula(s.stages, 1, 1), q(45, 4));
  for (unsigned long n = s.stages[0].N + 1; n <= s.stages[1].N; ++n)
    EXPECT_EQ(2 * stage_bound_formula(s.stages, 2, n), bound_A(s, 2, n));
}
