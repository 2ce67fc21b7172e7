#include <gtest/gtest.h>

#include "support.hpp"

using namespace cheese;
using namespace cheese::testing;

TEST(CauchyBound, EmptyCheese) {
  CheeseDescription c;
  EXPECT_EQ(cauchy_bound(c, {{0, 0}, 0}).value_upper, 1);
  EXPECT_EQ(cauchy_bound(c, {{0, 0}, 1}).value_upper, 1);
  EXPECT_EQ(cauchy_bound(c, {{0, 0}, 3}).value_upper, 6);
  EXPECT_EQ(cauchy_bound(c, {{0, 0}, 0}).terms_used, 1u);
}

TEST(CauchyBound, OneDeletion) {
  CheeseDescription c = cheese_with({QDisc{{q(3, 4), 0}, q(1, 8)}});
  DerivativeBound b = cauchy_bound(c, {{0, 0}, 0});
  EXPECT_EQ(b.value_upper, q(6, 5));
  EXPECT_EQ(b.terms_used, 2u);
}

TEST(CauchyBound, RejectsBadQueries) {
  CheeseDescription c = cheese_with({QDisc{{q(3, 4), 0}, q(1, 8)}});
  for (QPoint z : {QPoint{1, 0}, QPoint{2, 0}, QPoint{q(3, 4), 0}, QPoint{q(5, 8), 0}}) {
    try {
      cauchy_bound(c, {z, 1});
      ADD_FAILURE() << to_string(z.x);
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::invalid_query);
    }
  }
}

TEST(CauchyBound, UnresolvedDistanceRaisesPrecisionError) {
  CheeseDescription c;
  QPoint z{1 - pow2(-20), 0};
  try {
    cauchy_bound(c, {z, 0, 8});
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::precision_exhausted);
  }
  EXPECT_GT(cauchy_bound(c, {z, 0, 32}).value_upper, 0);
}

TEST(CauchyBoundProperty, MonotoneWhenADiscMovesAway) {
  Rng rng(31);
  for (int i = 0; i < 200; ++i) {
    QDisc d{{random_rational(rng, 8, 20, 32), random_rational(rng, -8, 8, 32)}, random_rational(rng, 1, 4, 32)};
    QDisc far = d;
    far.center.x += random_rational(rng, 0, 4, 64);
    QPoint z{random_rational(rng, -8, 4, 32), random_rational(rng, -8, 8, 32)};
    if (closure_contains(d, z) || closure_contains(far, z) || !closure_inside_open_unit_disc(far)) continue;
    if (!(z.x < d.center.x)) continue;
    for (unsigned k = 0; k <= 4; ++k)
      EXPECT_LE(cauchy_bound(cheese_with({far}), {z, k}).value_upper,
                cauchy_bound(cheese_with({d}), {z, k}).value_upper);
  }
}

TEST(CauchyBoundProperty, NonincreasingInPrecision) {
  CheeseDescription c = build_cheese(2, {4, 6});
  Rng rng(32);
  for (int i = 0; i < 40; ++i) {
    QPoint z = random_cheese_point(rng, c, 64);
    bool near = false;
    for (const auto& del : c.deletions) near = near || closure_contains(del.disc, z);
    if (near) continue;
    QRational prev;
    for (unsigned t : {16u, 32u, 64u, 128u}) {
      QRational b = cauchy_bound(c, {z, 2, t}).value_upper;
      if (t > 16) {
        EXPECT_LE(b, prev);
      }
      prev = b;
    }
  }
}

TEST(CauchyBoundProperty, StageFormulaDominatesOnI) {
  CheeseDescription c = build_cheese(2, {8, 16});
  for (long a = -8; a <= 8; ++a) {
    QPoint z{q(a, 16), 0};
    for (unsigned long n = 1; n <= 20; ++n)
      EXPECT_LE(cauchy_bound(c, {z, static_cast<unsigned>(n)}).value_upper, stage_bound_formula(c.stage_records, 2, n))
          << a << " " << n;
  }
}

TEST(DerivativeOracle, WorkedExamples) {
  RationalFunction f = RationalFunction::pole_term(QComplex(1), QComplex(2), 1);
  EXPECT_EQ(derivative_oracle(f, {0, 0}, 1), QComplex(q(-1, 4)));
  EXPECT_EQ(derivative_oracle(f, {0, 0}, 3), QComplex(q(-3, 8)));
  RationalFunction sq = RationalFunction::polynomial(Polynomial::monomial(2));
  EXPECT_EQ(derivative_oracle(sq, {q(1, 2), 0}, 2), QComplex(2));
  try {
    derivative_oracle(f, {2, 0}, 1);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::pole_at_point);
  }
}

TEST(DerivativeOracle, MatchesClosedFormForPoleTerms) {
  // d^k/dz^k c (z - p)^-m = c (-1)^k (m)_k (z - p)^-(m+k), (m)_k rising.
  Rng rng(33);
  for (int i = 0; i < 60; ++i) {
    QComplex coeff(random_rational(rng, -9, 9, 7), random_rational(rng, -9, 9, 5));
    QComplex pole(random_rational(rng, -9, 9, 4), random_rational(rng, -9, 9, 4));
    unsigned m = 1 + rng() % 3;
    QPoint z{random_rational(rng, -9, 9, 3), random_rational(rng, 1, 9, 3)};
    if (QComplex(z) == pole) continue;
    RationalFunction f = RationalFunction::pole_term(coeff, pole, m);
    for (unsigned k = 0; k <= 4; ++k) {
      BigInt rising = 1;
      for (unsigned j = 0; j < k; ++j) rising *= m + j;
      QComplex base = QComplex(1) / (QComplex(z) - pole);
      QComplex p(1);
      for (unsigned j = 0; j < m + k; ++j) p = p * base;
      QComplex expect = coeff * p * QComplex(QRational(k % 2 ? -rising : rising));
      EXPECT_EQ(derivative_oracle(f, z, k), expect);
    }
  }
}

TEST(CauchyDomination, RandomInstances) {
  DominationStats st = run_domination(120, 34);
  EXPECT_EQ(st.violations, 0) << "worst ratio " << st.worst_ratio;
  EXPECT_GT(st.worst_ratio, 0);
}

TEST(StarCheck, BuiltTablesPass) {
  CheeseDescription c = build_cheese(3, {2, 2});
  VerificationReport r = star_block_check(c.bound_table);
  EXPECT_TRUE(r.ok()) << r.to_text();
  EXPECT_EQ(r.checks.size(), 3u);
}

TEST(StarCheck, HugeEntryFailsItsBlock) {
  CheeseDescription c = build_cheese(2, {2, 2});
  BoundTable t = c.bound_table;
  t.entries[20] = pow(q(10), 200);
  VerificationReport r = star_block_check(t);
  ASSERT_EQ(r.checks.size(), 2u);
  EXPECT_TRUE(r.checks[0].passed);
  EXPECT_FALSE(r.checks[1].passed);
}

TEST(StarCheck, UnitEntryPassesAtOnce) {
  BoundTable t;
  t.entries[1] = 1;
  t.block_boundaries = {1};
  VerificationReport r = star_block_check(t);
  ASSERT_EQ(r.checks.size(), 1u);
  EXPECT_TRUE(r.ok());
}
