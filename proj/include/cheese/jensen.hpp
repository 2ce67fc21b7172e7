#pragma once

// Jensen and representing deficits of discrete measures, and an exact LP
// search for discrete measures that pass the Jensen inequality against a
// finite test family. A positive optimum is robust evidence of a non-trivial
// candidate on the given grid; a zero optimum is evidence only.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "cheese/certificates.hpp"
#include "cheese/rational_function.hpp"
#include "cheese/simplex.hpp"

namespace cheese {

struct DiscreteMeasure {
  std::vector<QPoint> support;
  std::vector<QRational> weights;
};

inline DiscreteMeasure point_mass(const QPoint& x) { return {{x}, {QRational(1)}}; }

inline DiscreteMeasure uniform_measure(std::vector<QPoint> points) {
  if (points.empty()) throw Error(ErrorKind::invalid_input, "uniform measure needs support");
  QRational w(BigInt(1), BigInt(static_cast<unsigned long>(points.size())));
  DiscreteMeasure mu{std::move(points), {}};
  mu.weights.assign(mu.support.size(), w);
  return mu;
}

/// Weights >= 0 summing to exactly 1, distinct support points in X_M.
inline void validate_measure(const CheeseDescription& c, const DiscreteMeasure& mu) {
  if (mu.support.size() != mu.weights.size() || mu.support.empty())
    throw Error(ErrorKind::invalid_input, "measure support and weights differ in length");
  QRational total;
  for (const auto& w : mu.weights) {
    if (w < 0) throw Error(ErrorKind::invalid_input, "negative weight");
    total += w;
  }
  if (total != 1) throw Error(ErrorKind::invalid_input, "weights sum to " + to_string(total));
  for (std::size_t i = 0; i < mu.support.size(); ++i) {
    if (!in_cheese(c, mu.support[i])) throw Error(ErrorKind::invalid_input, "support point outside the cheese");
    for (std::size_t j = i + 1; j < mu.support.size(); ++j)
      if (mu.support[i] == mu.support[j]) throw Error(ErrorKind::invalid_input, "repeated support point");
  }
}

/// The m-point grid on the circle |z - centre| = radius built from rational
/// unit vectors: the first quarter at angles close to 2 pi k / m (tan of the
/// half angle rounded to 2^-bits), the rest by exact quarter turns. m must be
/// a positive multiple of 4.
inline std::vector<QPoint> rational_circle_grid(std::size_t m, const QPoint& centre = {0, 0},
                                                const QRational& radius = 1, unsigned bits = 24) {
  if (m == 0 || m % 4 != 0) throw Error(ErrorKind::invalid_input, "circle grid size must be a multiple of 4");
  std::vector<QPoint> quarter;
  for (std::size_t k = 0; k < m / 4; ++k) {
    const double theta = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(m);
    QRational t = from_double(std::nearbyint(std::tan(theta / 2) * std::ldexp(1.0, static_cast<int>(bits)))) *
                  pow2(-static_cast<long>(bits));
    quarter.push_back(rational_unit_vector(t));
  }
  std::vector<QPoint> out;
  out.reserve(m);
  for (int turn = 0; turn < 4; ++turn)
    for (const auto& u : quarter) {
      QPoint v = u;
      for (int r = 0; r < turn; ++r) v = QPoint{QRational(-v.y), v.x};
      out.push_back({QRational(centre.x + radius * v.x), QRational(centre.y + radius * v.y)});
    }
  return out;
}

/// log of a positive rational without overflow.
inline double log_q(const QRational& v) {
  if (v <= 0) throw Error(ErrorKind::invalid_input, "log of nonpositive rational");
  long en = 0, ed = 0;
  double mn = mpz_get_d_2exp(&en, v.get_num_mpz_t());
  double md = mpz_get_d_2exp(&ed, v.get_den_mpz_t());
  return std::log(mn) - std::log(md) + static_cast<double>(en - ed) * std::log(2.0);
}

/// log|f(z)| from the exact value; -inf at a zero. PoleOnSupport at a pole.
inline double log_modulus(const RationalFunction& f, const QPoint& z) {
  QComplex d = f.denominator(QComplex(z));
  if (d.is_zero()) throw Error(ErrorKind::pole_on_support, "test function has a pole at a support point");
  QComplex v = f.numerator(QComplex(z)) / d;
  if (v.is_zero()) return -std::numeric_limits<double>::infinity();
  return 0.5 * log_q(v.norm_sq());
}

struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

/// sum_i w_i log|f(z_i)| - log|f(x)|. A nonnegative value means the Jensen
/// inequality holds for f. +inf when f(x) = 0, where the left side is -inf.
inline Estimate jensen_deficit(const DiscreteMeasure& mu, const QPoint& x, const RationalFunction& f) {
  const double u = std::numeric_limits<double>::epsilon();
  const double lx = log_modulus(f, x);
  if (std::isinf(lx)) return {std::numeric_limits<double>::infinity(), 0.0};
  Estimate e;
  for (std::size_t i = 0; i < mu.support.size(); ++i) {
    if (sgn(mu.weights[i]) == 0) {
      log_modulus(f, mu.support[i]);  // poles on the support are errors even at zero weight
      continue;
    }
    const double li = log_modulus(f, mu.support[i]);
    if (std::isinf(li)) return {-std::numeric_limits<double>::infinity(), 0.0};
    const double w = to_double(mu.weights[i]);
    e.value += w * li;
    e.error += w * 8 * u * (std::abs(li) + 1);
  }
  e.value -= lx;
  e.error += 8 * u * (std::abs(lx) + 1) + 4 * u * std::abs(e.value);
  return e;
}

/// |sum_i w_i f(z_i) - f(x)|, summed exactly and rounded once.
inline Estimate representing_deficit(const DiscreteMeasure& mu, const QPoint& x, const RationalFunction& f) {
  auto value = [&](const QPoint& z) {
    QComplex d = f.denominator(QComplex(z));
    if (d.is_zero()) throw Error(ErrorKind::pole_on_support, "test function has a pole at a support point");
    return f.numerator(QComplex(z)) / d;
  };
  QComplex acc;
  for (std::size_t i = 0; i < mu.support.size(); ++i) {
    QComplex v = value(mu.support[i]);
    acc = acc + QComplex(mu.weights[i]) * v;
  }
  acc = acc - value(x);
  const double r = std::sqrt(to_double(acc.norm_sq()));
  return {r, 2 * std::numeric_limits<double>::epsilon() * r};
}

struct TestFamily {
  std::vector<RationalFunction> functions;
  /// Exact pole locations of the family members.
  std::vector<QPoint> poles;
  /// Required distance from every support point and the base point to every pole.
  QRational pole_clearance = 1;
};

enum class SearchObjective { max_mass_off_x };

struct SearchResult {
  QRational optimum;
  DiscreteMeasure witness;
  std::size_t constraints = 0;
  /// Per-log rounding: each bracket end is within this of the double log.
  std::string rounding;
  std::string evidence;
};

/// Relative rounding slack applied to every logarithm in the LP.
inline QRational log_slack(double v) { return pow2(-40) * (1 + from_double(std::abs(v))); }

/// Maximizes the mass off x over measures w on `grid` with
/// sum_i w_i L_lo(j, i) >= L_hi(j, x) for every test function j, where
/// L_lo / L_hi are rational brackets of log|f_j| rounded to make each
/// constraint harder. The column of x itself reuses L_hi(j, x), so the
/// point mass stays feasible.
inline SearchResult lp_search(const CheeseDescription& c, const QPoint& x, const std::vector<QPoint>& grid,
                              const TestFamily& family,
                              SearchObjective objective = SearchObjective::max_mass_off_x) {
  (void)objective;
  if (grid.empty()) throw Error(ErrorKind::invalid_input, "empty grid");
  if (family.pole_clearance <= 0) throw Error(ErrorKind::invalid_input, "pole clearance must be > 0");
  if (!in_cheese(c, x)) throw Error(ErrorKind::invalid_input, "base point outside the cheese");
  bool x_in_grid = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!in_cheese(c, grid[i])) throw Error(ErrorKind::invalid_input, "grid point outside the cheese");
    for (std::size_t j = i + 1; j < grid.size(); ++j)
      if (grid[i] == grid[j]) throw Error(ErrorKind::invalid_input, "repeated grid point");
    x_in_grid = x_in_grid || grid[i] == x;
  }
  const QRational clear2 = family.pole_clearance * family.pole_clearance;
  for (const auto& p : family.poles) {
    if (dist_sq(p, x) < clear2) throw Error(ErrorKind::pole_on_support, "pole too close to the base point");
    for (const auto& z : grid)
      if (dist_sq(p, z) < clear2) throw Error(ErrorKind::pole_on_support, "pole too close to a grid point");
  }

  const std::size_t g = grid.size();
  std::vector<bool> usable(g, true);
  LinearProgram lp;
  lp.objective.assign(g, QRational(0));
  for (std::size_t i = 0; i < g; ++i)
    if (!(grid[i] == x)) lp.objective[i] = 1;

  std::vector<std::vector<QRational>> rows;
  std::vector<QRational> rhs;
  for (const auto& f : family.functions) {
    const double lx = log_modulus(f, x);
    if (std::isinf(lx)) continue;  // f(x) = 0: the inequality is vacuous
    QRational hi = from_double(lx) + log_slack(lx);
    std::vector<QRational> row(g);
    for (std::size_t i = 0; i < g; ++i) {
      if (grid[i] == x) {
        row[i] = hi;
        continue;
      }
      const double li = log_modulus(f, grid[i]);
      if (std::isinf(li)) {
        usable[i] = false;  // any mass at a zero of f sends the left side to -inf
        continue;
      }
      row[i] = from_double(li) - log_slack(li);
    }
    rows.push_back(std::move(row));
    rhs.push_back(std::move(hi));
  }
  for (std::size_t j = 0; j < rows.size(); ++j) lp.add(rows[j], Sense::ge, rhs[j]);
  lp.add(std::vector<QRational>(g, QRational(1)), Sense::eq, 1);
  for (std::size_t i = 0; i < g; ++i)
    if (!usable[i]) {
      std::vector<QRational> pin(g);
      pin[i] = 1;
      lp.add(std::move(pin), Sense::le, 0);
    }

  LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::optimal)
    throw Error(ErrorKind::infeasible_grid,
                x_in_grid ? "no feasible measure on the grid" : "no feasible measure; base point is not in the grid");

  SearchResult res;
  res.optimum = sol.value;
  res.constraints = rows.size();
  for (std::size_t i = 0; i < g; ++i)
    if (sgn(sol.x[i]) > 0) {
      res.witness.support.push_back(grid[i]);
      res.witness.weights.push_back(sol.x[i]);
    }
  res.rounding = "log brackets: exact dyadic of the double log, widened by 2^-40 (1 + |log|) against the constraint";
  if (sgn(res.optimum) > 0)
    res.evidence = "non-trivial candidate: mass " + to_string(res.optimum) +
                   " off x passes every sampled Jensen constraint under adversarial rounding; evidence for this grid and family only";
  else
    res.evidence = "only the point mass at x passes; evidence toward triviality for this grid and family, not a proof";
  return res;
}

}  // namespace cheese
