#pragma once

// Point-of-continuity certificates for z off I: a stage n with
// dist(z, I) > delta_n and a disc D_{n,k} of S_n with z in D_{n,k} and w
// outside its closure. The function F_{n,k} built on that disc is then
// nonzero at z and vanishes near w.

#include <cstdint>
#include <optional>

#include "cheese/schedule.hpp"

namespace cheese {

/// Default search budget: the largest enumeration level (common denominator
/// of centre and radius) scanned.
inline constexpr std::int64_t kDefaultSearchBudget = 512;

struct ContinuityCertificate {
  QPoint z;
  QPoint w;
  unsigned long stage = 0;
  QDisc disc;
  std::uint64_t enumeration_index = 0;
};

struct CertificateSearch {
  std::optional<ContinuityCertificate> certificate;
  unsigned long stage = 0;
  /// Levels scanned; equals the budget when nothing was found.
  std::int64_t levels_scanned = 0;
};

/// z lies in the finite-stage set X_M.
inline bool in_cheese(const CheeseDescription& c, const QPoint& z) {
  if (!closure_contains(c.outer, z)) return false;
  for (const auto& del : c.deletions)
    if (contains(del.disc, z)) return false;
  return true;
}

/// Smallest n >= 1 with dist(z, I) > delta_n; z must be off I.
inline unsigned long first_clear_stage(const QPoint& z) {
  QRational d2 = dist_sq_to_segment(z);
  if (sgn(d2) == 0) throw Error(ErrorKind::invalid_input, "z lies on I");
  unsigned long n = 1;
  while (true) {
    QRational m = capsule_margin(n);
    if (d2 > m * m) return n;
    ++n;
  }
}

inline CertificateSearch find_certificate(const CheeseDescription& c, const QPoint& z, const QPoint& w,
                                          std::int64_t search_budget = kDefaultSearchBudget) {
  if (z == w) throw Error(ErrorKind::invalid_input, "z and w coincide");
  if (search_budget < 1) throw Error(ErrorKind::invalid_input, "search budget must be >= 1");
  if (!in_cheese(c, z)) throw Error(ErrorKind::invalid_input, "z is not in the cheese");
  if (!in_cheese(c, w)) throw Error(ErrorKind::invalid_input, "w is not in the cheese");
  CertificateSearch out;
  out.stage = first_clear_stage(z);
  DiscEnumeration family(out.stage);
  auto hit = family.first_containing(z, [&](const QDisc& d) { return !closure_contains(d, w); }, search_budget);
  if (!hit) {
    out.levels_scanned = search_budget;
    return out;
  }
  BigInt lvl;
  mpz_lcm(lvl.get_mpz_t(), hit->disc.center.x.get_den_mpz_t(), hit->disc.center.y.get_den_mpz_t());
  mpz_lcm(lvl.get_mpz_t(), lvl.get_mpz_t(), hit->disc.radius.get_den_mpz_t());
  out.levels_scanned = lvl.get_si();
  out.certificate = ContinuityCertificate{z, w, out.stage, hit->disc, hit->index};
  return out;
}

/// Exact re-check of a certificate against the cheese, one entry per
/// condition.
inline VerificationReport check_certificate(const CheeseDescription& c, const ContinuityCertificate& cert) {
  VerificationReport rep;
  rep.add("distinct_points", !(cert.z == cert.w));
  rep.add("stage_positive", cert.stage >= 1);
  if (cert.stage < 1) return rep;
  QRational m = capsule_margin(cert.stage);
  rep.add("z_clears_capsule", dist_sq_to_segment(cert.z) > m * m);
  rep.add("z_in_open_disc", cert.disc.radius > 0 && contains(QDisc{cert.disc.center, cert.disc.radius, DiscKind::open}, cert.z));
  rep.add("w_outside_closed_disc", !closure_contains(cert.disc, cert.w));
  rep.add("disc_avoids_capsule", disc_avoids_capsule(cert.disc, cert.stage));
  rep.add("disc_inside_unit_disc", closure_inside_open_unit_disc(cert.disc));
  const QDisc open{cert.disc.center, cert.disc.radius, DiscKind::open};
  const DiscEnumeration family(cert.stage);
  auto idx = family.rank_at_most(open, cert.enumeration_index);
  std::string detail = "rank " + (idx ? std::to_string(*idx) : std::string("above the claimed index"));
  if (!idx && !family.coordinates(open)) detail = "not a member of S_n";
  rep.add("enumeration_index", idx && *idx == cert.enumeration_index, detail);
  rep.add("z_survives", in_cheese(c, cert.z));
  rep.add("w_in_cheese", in_cheese(c, cert.w));
  return rep;
}

inline bool validate_certificate(const CheeseDescription& c, const ContinuityCertificate& cert) {
  return check_certificate(c, cert).ok();
}

}  // namespace cheese
