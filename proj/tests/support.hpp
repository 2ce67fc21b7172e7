#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cheese/cheese.hpp"

namespace cheese::testing {

using Rng = std::mt19937_64;

inline QRational random_rational(Rng& rng, long lo_num, long hi_num, long den) {
  std::uniform_int_distribution<long> d(lo_num, hi_num);
  QRational r(BigInt(d(rng)), BigInt(den));
  r.canonicalize();
  return r;
}

/// Random point of the open unit disc on the grid 1/den.
inline QPoint random_point_in_unit_disc(Rng& rng, long den) {
  while (true) {
    QPoint p{random_rational(rng, -den, den, den), random_rational(rng, -den, den, den)};
    if (norm_sq(p) < 1) return p;
  }
}

/// Hand-rolled cheese with the given open deletions; stage tags are 1.
inline CheeseDescription cheese_with(const std::vector<QDisc>& discs) {
  CheeseDescription c;
  for (std::size_t i = 0; i < discs.size(); ++i) c.deletions.push_back({1, i + 1, discs[i]});
  return c;
}

/// Distance from z to the interval [-1/2, 1/2] in doubles, for cross-checks.
inline double segment_distance(double x, double y) {
  double cx = std::clamp(x, -0.5, 0.5);
  return std::hypot(x - cx, y);
}

inline std::complex<double> to_cd(const QComplex& v) { return {to_double(v.re), to_double(v.im)}; }

inline double modulus(const QComplex& v) { return std::sqrt(to_double(v.norm_sq())); }

// ---------------------------------------------------------------------------
// Cauchy domination harness: random small cheeses, rational functions with
// poles off X, and |f|_X estimated by sampling the boundary circles.

struct PoleTerm {
  QComplex coeff;
  QComplex pole;
  unsigned order;
};

struct TestFunction {
  std::vector<QComplex> poly;  // low to high
  std::vector<PoleTerm> terms;

  RationalFunction exact() const {
    RationalFunction f = RationalFunction::polynomial(Polynomial(poly));
    for (const auto& t : terms) f = f + RationalFunction::pole_term(t.coeff, t.pole, t.order);
    return f;
  }

  std::complex<double> operator()(std::complex<double> z) const {
    std::complex<double> v = 0, zp = 1;
    for (const auto& c : poly) {
      v += to_cd(c) * zp;
      zp *= z;
    }
    for (const auto& t : terms) v += to_cd(t.coeff) / std::pow(z - to_cd(t.pole), static_cast<int>(t.order));
    return v;
  }
};

/// Sampled max of |f| on a circle: `samples` equispaced points, then a
/// local refinement around the best few.
inline double circle_max(const TestFunction& f, std::complex<double> c, double r, int samples) {
  const double two_pi = 2 * M_PI;
  auto at = [&](double th) { return std::abs(f(c + std::polar(r, th))); };
  std::vector<std::pair<double, double>> vals;
  vals.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    double th = two_pi * i / samples;
    vals.emplace_back(at(th), th);
  }
  std::partial_sort(vals.begin(), vals.begin() + 3, vals.end(), std::greater<>());
  double best = vals[0].first;
  const double h = two_pi / samples;
  for (int j = 0; j < 3; ++j)
    for (int i = -64; i <= 64; ++i) best = std::max(best, at(vals[j].second + h * i / 64));
  return best;
}

struct DominationStats {
  int instances = 0;
  int violations = 0;
  double worst_ratio = 0;  // max |f^(k)(z)| / (bound U)
  int samples_per_circle = 0;
  double inflation = 0;
};

/// One random instance; returns |f^(k)(z)| / (bound * U(f)).
inline double domination_instance(Rng& rng, int samples) {
  // Cheese: up to 5 deletions, closures well inside the unit disc and apart.
  std::vector<QDisc> discs;
  const int want = static_cast<int>(rng() % 6);
  for (int tries = 0; static_cast<int>(discs.size()) < want && tries < 200; ++tries) {
    QDisc d{random_point_in_unit_disc(rng, 32), random_rational(rng, 2, 8, 64)};
    double cx = to_double(d.center.x), cy = to_double(d.center.y), r = to_double(d.radius);
    if (std::hypot(cx, cy) + r > 0.875) continue;
    bool apart = true;
    for (const auto& e : discs)
      apart = apart && std::hypot(cx - to_double(e.center.x), cy - to_double(e.center.y)) >
                           r + to_double(e.radius) + 1.0 / 32;
    if (apart) discs.push_back(d);
  }
  CheeseDescription c = cheese_with(discs);

  // f: small polynomial plus pole terms inside deletions or outside the disc.
  TestFunction f;
  const int deg = static_cast<int>(rng() % 3);
  for (int i = 0; i <= deg; ++i) f.poly.push_back({random_rational(rng, -4, 4, 4), random_rational(rng, -4, 4, 4)});
  const int nterms = 1 + static_cast<int>(rng() % 3);
  for (int i = 0; i < nterms; ++i) {
    PoleTerm t{{random_rational(rng, -8, 8, 8), random_rational(rng, -8, 8, 8)}, {}, 1 + static_cast<unsigned>(rng() % 2)};
    if (!discs.empty() && rng() % 4 != 0) {
      const QDisc& d = discs[rng() % discs.size()];
      // Offset of at most r/2 from the centre, on the grid r/8.
      QRational ox = d.radius * random_rational(rng, -2, 2, 8), oy = d.radius * random_rational(rng, -2, 2, 8);
      t.pole = QComplex(QRational(d.center.x + ox), QRational(d.center.y + oy));
    } else {
      QPoint dir = rational_unit_vector(random_rational(rng, -8, 8, 8));
      QRational rad = random_rational(rng, 20, 40, 16);
      t.pole = QComplex(QRational(dir.x * rad), QRational(dir.y * rad));
    }
    f.terms.push_back(t);
  }

  // z in X, clear of every boundary circle by 1/64.
  QPoint z;
  while (true) {
    z = random_point_in_unit_disc(rng, 128);
    bool clear = 1 - std::sqrt(to_double(norm_sq(z))) > 1.0 / 64;
    for (const auto& d : discs) clear = clear && std::sqrt(to_double(dist_sq(z, d.center))) - to_double(d.radius) > 1.0 / 64;
    if (clear) break;
  }
  const unsigned k = static_cast<unsigned>(rng() % 5);

  double u = circle_max(f, 0, 1, samples);
  for (const auto& d : discs)
    u = std::max(u, circle_max(f, {to_double(d.center.x), to_double(d.center.y)}, to_double(d.radius), samples));
  u *= 1 + std::ldexp(1.0, -10);

  const double lhs = modulus(derivative_oracle(f.exact(), z, k));
  const double bound = to_double(cauchy_bound(c, {z, k, kDefaultRootPrecision}).value_upper);
  return lhs / (bound * u);
}

inline DominationStats run_domination(int instances, std::uint64_t seed, int samples = 2048) {
  Rng rng(seed);
  DominationStats st;
  st.samples_per_circle = samples;
  st.inflation = 1 + std::ldexp(1.0, -10);
  for (int i = 0; i < instances; ++i) {
    double ratio = domination_instance(rng, samples);
    ++st.instances;
    st.worst_ratio = std::max(st.worst_ratio, ratio);
    if (!(ratio <= 1)) ++st.violations;
  }
  return st;
}

// ---------------------------------------------------------------------------
// Certificate harness: pairs (z, w) on the grid 1/64 inside the cheese, with
// dist(z, I) > delta_5.

struct CertificateStats {
  int pairs = 0;
  int found = 0;
  int valid = 0;
  std::int64_t max_level = 0;
  std::vector<std::string> shortfalls;
};

inline QPoint random_cheese_point(Rng& rng, const CheeseDescription& c, long den) {
  while (true) {
    QPoint p = random_point_in_unit_disc(rng, den);
    if (in_cheese(c, p)) return p;
  }
}

inline CertificateStats run_certificates(const CheeseDescription& c, int pairs, std::uint64_t seed,
                                         std::int64_t budget = kDefaultSearchBudget) {
  Rng rng(seed);
  CertificateStats st;
  const QRational d5 = delta(5);
  while (st.pairs < pairs) {
    QPoint z = random_cheese_point(rng, c, 64);
    if (!(dist_sq_to_segment(z) > d5 * d5)) continue;
    QPoint w = random_cheese_point(rng, c, 64);
    if (w == z) continue;
    ++st.pairs;
    CertificateSearch s = find_certificate(c, z, w, budget);
    if (!s.certificate) {
      st.shortfalls.push_back("z=(" + to_string(z.x) + "," + to_string(z.y) + ") w=(" + to_string(w.x) + "," +
                              to_string(w.y) + "): no disc of S_" + std::to_string(s.stage) + " up to level " +
                              std::to_string(budget));
      continue;
    }
    ++st.found;
    st.max_level = std::max(st.max_level, s.levels_scanned);
    if (validate_certificate(c, *s.certificate)) ++st.valid;
  }
  return st;
}

}  // namespace cheese::testing
