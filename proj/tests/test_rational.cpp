#include <gtest/gtest.h>

#include "support.hpp"

using namespace cheese;
using namespace cheese::testing;

TEST(Rational, ParsesFractionsIntegersAndDecimals) {
  EXPECT_EQ(parse_rational("3/6"), q(1, 2));
  EXPECT_EQ(parse_rational("-7"), q(-7));
  EXPECT_EQ(parse_rational("+0.125"), q(1, 8));
  EXPECT_EQ(parse_rational("-1.5"), q(-3, 2));
  EXPECT_EQ(parse_rational("0"), q(0));
  EXPECT_TRUE(is_canonical(parse_rational("10/4")));
}

TEST(Rational, RejectsFloatsAndJunk) {
  for (const char* bad : {"", "1e3", "1.5e-2", "inf", "nan", "1/0", "1/-2", "a", "1/2/3", ".", "1.", "--1", " 1"}) {
    try {
      parse_rational(bad);
      ADD_FAILURE() << "accepted '" << bad << "'";
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::invalid_input) << bad;
    }
  }
}

TEST(Rational, ToStringIsCanonical) {
  EXPECT_EQ(to_string(q(4, 2)), "2");
  EXPECT_EQ(to_string(q(-2, 4)), "-1/2");
  EXPECT_EQ(to_string(q(0, 5)), "0");
}

TEST(Rational, PowFactorialPow2) {
  EXPECT_EQ(pow(q(2, 3), 3), q(8, 27));
  EXPECT_EQ(factorial(5), 120);
  EXPECT_EQ(pow2(-3), q(1, 8));
  EXPECT_EQ(pow2(4), q(16));
  EXPECT_EQ(from_double(0.375), q(3, 8));
}

TEST(Rational, RoundUpDyadic) {
  EXPECT_EQ(round_up_dyadic(q(6, 5), 3), q(10, 8));
  EXPECT_EQ(round_up_dyadic(q(1, 4), 3), q(1, 4));
  EXPECT_EQ(round_up_dyadic(q(-6, 5), 3), q(-9, 8));
}

TEST(RationalProperty, SqrtBracketEnclosesAndHasWidth) {
  Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    QRational x = random_rational(rng, 0, 100000, 997);
    for (unsigned t : {1u, 8u, 32u, 64u}) {
      Bracket b = sqrt_bracket(x, t);
      EXPECT_LE(b.lo * b.lo, x);
      EXPECT_GE(b.hi * b.hi, x);
      EXPECT_LE(b.hi - b.lo, pow2(-static_cast<long>(t)));
      EXPECT_GE(b.lo, 0);
    }
  }
  Bracket exact = sqrt_bracket(q(9, 16), 4);
  EXPECT_EQ(exact.lo, q(3, 4));
  EXPECT_EQ(exact.hi, q(3, 4));
}

TEST(RationalProperty, InverseRootBracketEncloses) {
  Rng rng(12);
  for (int i = 0; i < 200; ++i) {
    QRational a = random_rational(rng, 1, 1000000, 37);
    unsigned long n = 1 + rng() % 20;
    for (unsigned t : {4u, 32u}) {
      Bracket b = inv_root_bracket(a, n, t);
      // lo^n <= 1/a <= hi^n
      EXPECT_LE(pow(b.lo, n) * a, 1);
      EXPECT_GE(pow(b.hi, n) * a, 1);
      EXPECT_LE(b.hi - b.lo, pow2(-static_cast<long>(t)));
    }
  }
  Bracket one = inv_root_bracket(q(1), 7, 32);
  EXPECT_EQ(one.lo, 1);
  EXPECT_EQ(one.hi, 1);
}

TEST(RationalProperty, InverseRootAgreesWithFloatingOracle) {
  // A^(-1/n) via logs in long double, well away from the bracket edges.
  for (unsigned long n = 1; n <= 60; ++n) {
    QRational a = QRational(factorial(n)) * pow(q(3), n + 1) * q(5, 2);
    Bracket b = inv_root_bracket(a, n, 40);
    long double ref = std::exp(-(std::lgamma(static_cast<long double>(n + 1)) + (n + 1) * std::log(3.0L) +
                                 std::log(2.5L)) / static_cast<long double>(n));
    EXPECT_NEAR(to_double(b.lo), static_cast<double>(ref), 1e-11) << n;
  }
}
