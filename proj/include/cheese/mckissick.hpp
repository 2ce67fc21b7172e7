#pragma once

// McKissick disc systems. The geometric half (pairwise disjoint open discs
// inside a parent disc with radius sum below a budget) is built and checked
// exactly. The analytic half, a sequence of rational functions with poles in
// the system, is an optional witness that is only ever checked numerically.

#include <algorithm>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cheese/geometry.hpp"
#include "cheese/rational_function.hpp"
#include "cheese/report.hpp"

namespace cheese {

struct DiscSystem {
  QDisc parent;
  QRational budget;
  std::vector<QDisc> discs;
  QRational radius_sum;
};

/// Point on the unit circle with rational coordinates, from t = tan(theta/2).
inline QPoint rational_unit_vector(const QRational& t) {
  QRational t2 = t * t;
  QRational den = 1 + t2;
  return {QRational((1 - t2) / den), QRational(2 * t / den)};
}

/// Places `count` discs on a spiral inside `parent`.
///
/// Disc k (1-based) sits on the circle of radius R(1 - 2^-k) about the parent
/// centre, in direction rational_unit_vector(k/3), with radius
/// min(budget 2^-(k+1), R 2^-(k+3)). Consecutive rings are R 2^-(k+1) apart,
/// more than the sum of the two radii, so the discs are pairwise disjoint and
/// their closures stay inside the parent. The radius sum is below budget/2.
inline DiscSystem build_disc_system(const QDisc& parent, const QRational& budget, std::size_t count) {
  if (budget <= 0) throw Error(ErrorKind::invalid_input, "disc system budget must be > 0");
  if (count == 0) throw Error(ErrorKind::invalid_input, "disc system needs count >= 1");
  if (parent.radius <= 0) throw Error(ErrorKind::invalid_input, "parent radius must be > 0");
  DiscSystem sys;
  sys.parent = parent;
  sys.budget = budget;
  sys.discs.reserve(count);
  const QRational& big_r = parent.radius;
  for (std::size_t k = 1; k <= count; ++k) {
    const long kk = static_cast<long>(k);
    QRational ring = big_r * (1 - pow2(-kk));
    QRational radius = budget * pow2(-(kk + 1));
    QRational cap = big_r * pow2(-(kk + 3));
    if (cap < radius) radius = cap;
    QPoint dir = rational_unit_vector(q(kk, 3));
    QDisc d;
    d.center = {QRational(parent.center.x + ring * dir.x), QRational(parent.center.y + ring * dir.y)};
    d.radius = radius;
    d.kind = DiscKind::open;
    sys.radius_sum += radius;
    sys.discs.push_back(std::move(d));
  }
  return sys;
}

inline VerificationReport validate_disc_system(const DiscSystem& s) {
  VerificationReport rep;
  bool positive = std::all_of(s.discs.begin(), s.discs.end(), [](const QDisc& d) { return d.radius > 0; });
  rep.add("positive_radii", positive);

  std::string bad;
  for (std::size_t i = 0; i < s.discs.size() && bad.empty(); ++i)
    for (std::size_t j = i + 1; j < s.discs.size(); ++j)
      if (disc_relation(s.discs[i], s.discs[j]) != DiscRelation::disjoint) {
        bad = "discs " + std::to_string(i + 1) + " and " + std::to_string(j + 1) + " meet";
        break;
      }
  rep.add("pairwise_disjoint", bad.empty(), bad);

  bad.clear();
  for (std::size_t i = 0; i < s.discs.size(); ++i)
    if (!closure_inside_open(s.discs[i], s.parent)) {
      bad = "disc " + std::to_string(i + 1) + " leaves the parent";
      break;
    }
  rep.add("contained_in_parent", bad.empty(), bad);

  QRational sum;
  for (const auto& d : s.discs) sum += d.radius;
  rep.add("radius_sum_recorded", sum == s.radius_sum, "sum " + to_string(sum));
  rep.add("radius_sum_below_budget", sum < s.budget, to_string(sum) + " vs budget " + to_string(s.budget));
  return rep;
}

/// Axis-parallel rational box known to contain a pole, with the index
/// (0-based) of the system disc claimed to contain the box.
struct PoleCertificate {
  QRational x_lo, x_hi, y_lo, y_hi;
  std::size_t disc_index = 0;
};

struct AnalyticWitness {
  DiscSystem system;
  std::vector<RationalFunction> sequence;
  std::vector<std::vector<PoleCertificate>> pole_certificates;
};

/// Every certified pole box lies in its named open disc (all four corners
/// inside, which suffices by convexity).
inline VerificationReport validate_pole_certificates(const AnalyticWitness& w) {
  VerificationReport rep;
  rep.add("certificate_per_approximant", w.pole_certificates.size() == w.sequence.size());
  std::string bad;
  for (std::size_t n = 0; n < w.pole_certificates.size() && bad.empty(); ++n)
    for (const auto& pc : w.pole_certificates[n]) {
      if (pc.disc_index >= w.system.discs.size() || pc.x_lo > pc.x_hi || pc.y_lo > pc.y_hi) {
        bad = "approximant " + std::to_string(n) + ": malformed certificate";
        break;
      }
      const QDisc& d = w.system.discs[pc.disc_index];
      for (const auto* xs : {&pc.x_lo, &pc.x_hi})
        for (const auto* ys : {&pc.y_lo, &pc.y_hi})
          if (!contains(d, QPoint{*xs, *ys})) bad = "approximant " + std::to_string(n) + ": pole box leaves disc";
      if (!bad.empty()) break;
    }
  rep.add("poles_inside_union", bad.empty(), bad);
  return rep;
}

/// Diagnostic summary over a grid. Thresholds are the caller's business.
struct ConvergenceReport {
  std::size_t grid_points = 0;
  /// max over the grid of |f_{n+1} - f_n|, one entry per consecutive pair.
  std::vector<double> successive_max_diff;
  /// max |f_last| over grid points outside the closed parent disc.
  std::optional<double> max_outside_parent;
  /// min |f_last| over grid points inside the open parent disc.
  std::optional<double> min_inside_parent;
  /// Largest certified floating-point error met during evaluation.
  double max_eval_error = 0.0;
};

/// Grid points must clear every system disc by more than `margin`.
inline ConvergenceReport convergence_report(const AnalyticWitness& w, const std::vector<QPoint>& grid,
                                            const QRational& margin = 0) {
  ConvergenceReport rep;
  rep.grid_points = grid.size();
  if (grid.empty()) return rep;
  for (const auto& z : grid)
    for (const auto& d : w.system.discs)
      if (!separation_exceeds(z, d, margin))
        throw Error(ErrorKind::grid_touches_union, "grid point within margin of a system disc");

  std::vector<std::vector<std::complex<double>>> values(w.sequence.size());
  for (std::size_t n = 0; n < w.sequence.size(); ++n) {
    values[n].reserve(grid.size());
    for (const auto& z : grid) {
      ComplexValue v = eval_rational(w.sequence[n], z);
      rep.max_eval_error = std::max(rep.max_eval_error, v.abs_error);
      values[n].push_back(v.approx);
    }
  }
  for (std::size_t n = 0; n + 1 < values.size(); ++n) {
    double m = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) m = std::max(m, std::abs(values[n + 1][i] - values[n][i]));
    rep.successive_max_diff.push_back(m);
  }
  if (!values.empty()) {
    const auto& last = values.back();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double mod = std::abs(last[i]);
      if (!closure_contains(w.system.parent, grid[i])) {
        rep.max_outside_parent = std::max(rep.max_outside_parent.value_or(0.0), mod);
      } else if (contains(QDisc{w.system.parent.center, w.system.parent.radius, DiscKind::open}, grid[i])) {
        rep.min_inside_parent = std::min(rep.min_inside_parent.value_or(std::numeric_limits<double>::infinity()), mod);
      }
    }
  }
  return rep;
}

}  // namespace cheese
