#pragma once

// Cauchy derivative bounds on a finite-stage cheese.
//
// For z in X_M and f rational with poles off X_M,
//
//   |f^(k)(z)| <= k! sum_{j>=0} r_j / s_j^{k+1} |f|_X,
//
// with s_j the distance from z to the j-th deleted disc, and the outer term
// r_0 = 1, s_0 = 1 - |z|. The radius factor r_j is what the Cauchy integral
// over each boundary circle produces (length 2 pi r_j); the staged bound
// n! T_m(n) used by the schedule is exactly this sum with s_j >= delta_stage.

#include <string>

#include "cheese/rational_function.hpp"
#include "cheese/schedule.hpp"

namespace cheese {

struct BoundQuery {
  QPoint z;
  unsigned k = 0;
  unsigned root_precision = kDefaultRootPrecision;
};

struct DerivativeBound {
  QRational value_upper;
  std::size_t terms_used = 0;
  std::string tail_note;
};

/// Certified upper bound on k! sum r_j / s_j^{k+1} over the outer circle and
/// every materialized deletion. Each s_j is replaced by a rational lower
/// bracket, so every rounding pushes the bound up.
inline DerivativeBound cauchy_bound(const CheeseDescription& c, const BoundQuery& query) {
  const QPoint& z = query.z;
  const unsigned t = query.root_precision;
  if (t == 0) throw Error(ErrorKind::invalid_query, "root precision must be >= 1");
  if (!(norm_sq(z) < 1)) throw Error(ErrorKind::invalid_query, "z must lie in the open unit disc");
  for (const auto& del : c.deletions)
    if (closure_contains(del.disc, z))
      throw Error(ErrorKind::invalid_query, "z lies in the closure of a deleted disc");

  const unsigned long power = query.k + 1UL;
  DerivativeBound out;
  // s_0 = 1 - |z| >= 1 - upper(|z|)
  QRational s0 = 1 - sqrt_bracket(norm_sq(z), t).hi;
  if (s0 <= 0) throw Error(ErrorKind::precision_exhausted, "outer distance not resolved at t=" + std::to_string(t));
  QRational sum = 1 / pow(s0, power);
  out.terms_used = 1;
  for (const auto& del : c.deletions) {
    QRational s = sqrt_bracket(dist_sq(z, del.disc.center), t).lo - del.disc.radius;
    if (s <= 0)
      throw Error(ErrorKind::precision_exhausted, "deleted-disc distance not resolved at t=" + std::to_string(t));
    sum += del.disc.radius / pow(s, power);
    ++out.terms_used;
  }
  out.value_upper = QRational(factorial(query.k)) * sum;
  out.tail_note = "outer circle + " + std::to_string(c.deletions.size()) + " materialized deletions over " +
                  std::to_string(c.stage_records.size()) +
                  " stages; undeleted tail of each McKissick system and unprocessed S_m discs omitted";
  return out;
}

/// f^(k)(z), exactly: the quotient rule applied k times, then exact evaluation.
inline QComplex derivative_oracle(const RationalFunction& f, const QPoint& z, unsigned k) {
  RationalFunction g = f;
  for (unsigned i = 0; i < k; ++i) g = g.derivative();
  return g(QComplex(z));
}

/// n! T_m(n): the per-stage closed form of the Cauchy bound for z in I.
inline QRational stage_bound_formula(const std::vector<StageParams>& stages, unsigned long m, unsigned long n) {
  return QRational(factorial(n)) * accumulated_term(stages, m, n);
}

/// For each complete block (N_{m-1}, N_m] of the table, certifies that the
/// sum of A_k^{-1/k} is >= 1 with lower root brackets. Precision is raised
/// from t while the brackets straddle 1.
inline VerificationReport star_block_check(const BoundTable& table, unsigned t = kDefaultRootPrecision) {
  if (table.block_boundaries.empty())
    throw Error(ErrorKind::invalid_input, "star_block_check needs at least one complete block");
  VerificationReport rep;
  unsigned long prev = 0;
  for (std::size_t b = 0; b < table.block_boundaries.size(); ++b) {
    const unsigned long last = table.block_boundaries[b];
    const std::string name = "block_" + std::to_string(b + 1) + " (" + std::to_string(prev) + "," + std::to_string(last) + "]";
    if (last <= prev) {
      rep.add(name, false, "empty block");
      continue;
    }
    auto bound = [&](unsigned long n) {
      auto it = table.entries.find(n);
      if (it == table.entries.end() || it->second <= 0)
        throw Error(ErrorKind::invalid_input, "missing or nonpositive A_" + std::to_string(n));
      return it->second;
    };
    bool decided = false;
    for (unsigned prec = t; prec <= kMaxRootPrecision; prec *= 2) {
      Bracket s = block_sum(bound, prev + 1, last, prec);
      if (s.lo >= 1) {
        rep.add(name, true, "certified lower sum " + to_string(s.lo) + " ~ " + std::to_string(s.lo.get_d()) + " at t=" + std::to_string(prec));
        decided = true;
        break;
      }
      if (s.hi < 1) {
        rep.add(name, false, "upper sum " + std::to_string(s.hi.get_d()) + " < 1 at t=" + std::to_string(prec));
        decided = true;
        break;
      }
    }
    if (!decided)
      throw Error(ErrorKind::precision_exhausted, name + " undecided at t=" + std::to_string(kMaxRootPrecision));
    prev = last;
  }
  return rep;
}

}  // namespace cheese
