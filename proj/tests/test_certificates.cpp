#include <gtest/gtest.h>

#include "support.hpp"

using namespace cheese;
using namespace cheese::testing;

namespace {

const CheeseDescription& desk_cheese() {
  static const CheeseDescription c = build_cheese(2, {8, 16});
  return c;
}

bool passes(const VerificationReport& r, const std::string& name) {
  const auto* c = r.find(name);
  return c != nullptr && c->passed;
}

}  // namespace

TEST(Certificates, FirstClearStage) {
  EXPECT_EQ(first_clear_stage({0, q(1, 2)}), 1u);
  EXPECT_EQ(first_clear_stage({0, q(1, 3)}), 2u);
  EXPECT_EQ(first_clear_stage({0, q(1, 5)}), 4u);
  EXPECT_THROW(first_clear_stage({q(1, 4), 0}), Error);
}

TEST(Certificates, SymmetricPairAcrossI) {
  const auto& c = desk_cheese();
  CertificateSearch s = find_certificate(c, {0, q(1, 2)}, {0, q(-1, 2)});
  ASSERT_TRUE(s.certificate.has_value());
  EXPECT_EQ(s.stage, 1u);
  EXPECT_LE(s.levels_scanned, 16);
  const auto& cert = *s.certificate;
  EXPECT_TRUE(contains(cert.disc, cert.z));
  EXPECT_FALSE(closure_contains(cert.disc, cert.w));
  EXPECT_TRUE(validate_certificate(c, cert)) << check_certificate(c, cert).to_text();
  EXPECT_EQ(enumerate_rational_discs(1, cert.enumeration_index).back(), cert.disc);
}

TEST(Certificates, RejectsBadInputs) {
  const auto& c = desk_cheese();
  auto kind_of = [&](QPoint z, QPoint w) {
    try {
      find_certificate(c, z, w);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::invariant_violation;
  };
  EXPECT_EQ(kind_of({q(1, 4), 0}, {0, q(1, 2)}), ErrorKind::invalid_input);
  EXPECT_EQ(kind_of({0, q(1, 2)}, {0, q(1, 2)}), ErrorKind::invalid_input);
  EXPECT_EQ(kind_of({0, q(1, 2)}, {2, 0}), ErrorKind::invalid_input);
  EXPECT_EQ(kind_of(c.deletions[0].disc.center, {0, 0}), ErrorKind::invalid_input);
}

TEST(Certificates, BudgetExhaustionReportsNotFound) {
  const auto& c = desk_cheese();
  CertificateSearch s = find_certificate(c, {0, q(1, 2)}, {0, q(1, 2) + q(1, 1000)}, 4);
  EXPECT_FALSE(s.certificate.has_value());
  EXPECT_EQ(s.levels_scanned, 4);
  EXPECT_EQ(s.stage, 1u);
}

TEST(Certificates, MutationsAreRejected) {
  const auto& c = desk_cheese();
  CertificateSearch s = find_certificate(c, {q(1, 4), q(5, 8)}, {q(-1, 2), q(-1, 2)});
  ASSERT_TRUE(s.certificate.has_value());
  const ContinuityCertificate good = *s.certificate;
  ASSERT_TRUE(validate_certificate(c, good));

  ContinuityCertificate m = good;
  std::swap(m.z, m.w);
  EXPECT_FALSE(validate_certificate(c, m));

  m = good;
  m.disc.radius *= 4;
  EXPECT_FALSE(validate_certificate(c, m));

  m = good;
  m.disc = QDisc{{0, q(1, 4)}, q(1, 8)};  // meets K_n
  m.z = {0, q(1, 4)};
  EXPECT_FALSE(passes(check_certificate(c, m), "disc_avoids_capsule"));

  m = good;
  m.enumeration_index += 1;
  EXPECT_FALSE(passes(check_certificate(c, m), "enumeration_index"));

  m = good;
  m.disc.radius = q(1, 1000000);
  m.disc.center = m.z;
  EXPECT_FALSE(passes(check_certificate(c, m), "enumeration_index"));

  m = good;
  m.stage += 3;
  EXPECT_FALSE(validate_certificate(c, m));
}

TEST(Certificates, DeletedPointDoesNotSurvive) {
  const auto& c = desk_cheese();
  CertificateSearch s = find_certificate(c, {q(1, 4), q(5, 8)}, {q(-1, 2), q(-1, 2)});
  ASSERT_TRUE(s.certificate.has_value());
  ContinuityCertificate m = *s.certificate;
  m.z = c.deletions[0].disc.center;
  EXPECT_FALSE(passes(check_certificate(c, m), "z_survives"));
}

TEST(CertificatesProperty, CompletenessAndSoundnessOnASample) {
  CertificateStats st = run_certificates(desk_cheese(), 150, 41);
  EXPECT_EQ(st.found, st.pairs) << (st.shortfalls.empty() ? "" : st.shortfalls.front());
  EXPECT_EQ(st.valid, st.found);
}

TEST(CertificatesProperty, StableUnderLargerTruncations) {
  CheeseDescription small = build_cheese(2, {4, 6});
  const auto& big = desk_cheese();
  Rng rng(42);
  int compared = 0;
  while (compared < 60) {
    QPoint z = random_cheese_point(rng, big, 64);
    QPoint w = random_cheese_point(rng, big, 64);
    if (z == w || !(dist_sq_to_segment(z) > delta(5) * delta(5))) continue;
    ++compared;
    auto a = find_certificate(small, z, w);
    auto b = find_certificate(big, z, w);
    ASSERT_TRUE(a.certificate && b.certificate);
    EXPECT_EQ(a.certificate->disc, b.certificate->disc);
    EXPECT_EQ(a.certificate->enumeration_index, b.certificate->enumeration_index);
    EXPECT_TRUE(validate_certificate(small, *b.certificate));
  }
}
