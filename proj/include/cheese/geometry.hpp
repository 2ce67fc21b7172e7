#pragma once

// Exact plane geometry over Q + iQ: points, discs, the interval
// I = [-1/2, 1/2] x {0}, the capsules K_n = {z : dist(z, I) <= 1/(n+2)} and
// the deterministic enumeration of the rational disc families S_n.
//
// Every predicate is decided on squared distances, never on square roots.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "cheese/rational.hpp"

namespace cheese {

struct QPoint {
  QRational x;
  QRational y;

  friend bool operator==(const QPoint& a, const QPoint& b) { return a.x == b.x && a.y == b.y; }
};

enum class DiscKind { open, closed };

struct QDisc {
  QPoint center;
  QRational radius;
  DiscKind kind = DiscKind::open;

  friend bool operator==(const QDisc& a, const QDisc& b) {
    return a.center == b.center && a.radius == b.radius && a.kind == b.kind;
  }
};

inline QRational norm_sq(const QPoint& z) { return z.x * z.x + z.y * z.y; }

inline QRational dist_sq(const QPoint& a, const QPoint& b) {
  QRational dx = a.x - b.x;
  QRational dy = a.y - b.y;
  return dx * dx + dy * dy;
}

/// The fixed interval I = [-1/2, 1/2] on the real axis.
struct Segment {
  static QRational left() { return q(-1, 2); }
  static QRational right() { return q(1, 2); }
};

/// Exact dist(z, I)^2.
inline QRational dist_sq_to_segment(const QPoint& z) {
  QRational cx = z.x;
  if (cx < Segment::left()) cx = Segment::left();
  if (cx > Segment::right()) cx = Segment::right();
  QRational dx = z.x - cx;
  return dx * dx + z.y * z.y;
}

/// delta_n = 1/(n+2), the half-width of K_n.
inline QRational capsule_margin(unsigned long n) { return QRational(BigInt(1), BigInt(n + 2)); }

/// K_n, the closed delta_n-neighbourhood of I.
struct Capsule {
  unsigned long level;
  QRational margin;

  explicit Capsule(unsigned long n) : level(n), margin(capsule_margin(n)) {
    if (n == 0) throw Error(ErrorKind::invalid_input, "capsule level must be >= 1");
  }

  bool contains(const QPoint& z) const { return dist_sq_to_segment(z) <= margin * margin; }
};

inline bool contains(const QDisc& d, const QPoint& z) {
  QRational d2 = dist_sq(z, d.center);
  QRational r2 = d.radius * d.radius;
  return d.kind == DiscKind::open ? d2 < r2 : d2 <= r2;
}

inline bool closure_contains(const QDisc& d, const QPoint& z) {
  return dist_sq(z, d.center) <= d.radius * d.radius;
}

/// dist(z, d) > gap, i.e. |z - c| > gap + r. False whenever z meets the
/// closed disc.
inline bool separation_exceeds(const QPoint& z, const QDisc& d, const QRational& gap) {
  if (gap < 0) throw Error(ErrorKind::invalid_input, "separation gap must be >= 0");
  QRational reach = gap + d.radius;
  return dist_sq(z, d.center) > reach * reach;
}

/// The closed disc d is disjoint from K_n.
inline bool disc_avoids_capsule(const QDisc& d, unsigned long n) {
  if (n == 0) throw Error(ErrorKind::invalid_input, "capsule level must be >= 1");
  QRational reach = d.radius + capsule_margin(n);
  return dist_sq_to_segment(d.center) > reach * reach;
}

/// The closed disc d lies in the open unit disc: |c| + r < 1.
inline bool closure_inside_open_unit_disc(const QDisc& d) {
  if (d.radius >= 1) return false;
  QRational room = 1 - d.radius;
  return norm_sq(d.center) < room * room;
}

/// The closure of `inner` lies inside the open disc `outer`.
inline bool closure_inside_open(const QDisc& inner, const QDisc& outer) {
  if (inner.radius >= outer.radius) return false;
  QRational room = outer.radius - inner.radius;
  return dist_sq(inner.center, outer.center) < room * room;
}

enum class DiscRelation { disjoint, a_inside_b, b_inside_a, overlapping };

/// Classifies two discs as point sets. Tangency counts as disjoint when at
/// least one disc is open, and as containment unless a closed disc would
/// touch the boundary of an open one.
inline DiscRelation disc_relation(const QDisc& a, const QDisc& b) {
  QRational d2 = dist_sq(a.center, b.center);
  QRational sum = a.radius + b.radius;
  QRational sum2 = sum * sum;
  bool either_open = a.kind == DiscKind::open || b.kind == DiscKind::open;
  if (d2 > sum2 || (d2 == sum2 && either_open)) return DiscRelation::disjoint;

  auto inside = [&](const QDisc& in, const QDisc& out) {
    if (in.radius > out.radius) return false;
    QRational diff = out.radius - in.radius;
    QRational diff2 = diff * diff;
    bool strict = in.kind == DiscKind::closed && out.kind == DiscKind::open;
    return d2 < diff2 || (d2 == diff2 && !strict);
  };
  if (inside(a, b)) return DiscRelation::a_inside_b;
  if (inside(b, a)) return DiscRelation::b_inside_a;
  return DiscRelation::overlapping;
}

namespace detail {

inline std::int64_t isqrt_floor(__int128 v) {
  if (v <= 0) return 0;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(v)));
  while (static_cast<__int128>(r) * r > v) --r;
  while (static_cast<__int128>(r + 1) * (r + 1) <= v) ++r;
  return r;
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline std::vector<std::int64_t> prime_factors(std::int64_t g) {
  std::vector<std::int64_t> ps;
  for (std::int64_t p = 2; p * p <= g; ++p) {
    if (g % p == 0) {
      ps.push_back(p);
      while (g % p == 0) g /= p;
    }
  }
  if (g > 1) ps.push_back(g);
  return ps;
}

/// Number of integers in [lo, hi] coprime to g (g >= 1).
inline std::uint64_t count_coprime(std::int64_t lo, std::int64_t hi, std::int64_t g) {
  if (lo > hi) return 0;
  if (g == 1) return static_cast<std::uint64_t>(hi - lo + 1);
  auto ps = prime_factors(g);
  std::int64_t total = 0;
  const std::size_t subsets = std::size_t{1} << ps.size();
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    std::int64_t d = 1;
    int bits = 0;
    for (std::size_t i = 0; i < ps.size(); ++i)
      if (mask & (std::size_t{1} << i)) {
        d *= ps[i];
        ++bits;
      }
    std::int64_t cnt = floor_div(hi, d) - floor_div(lo - 1, d);
    total += (bits % 2 == 0) ? cnt : -cnt;
  }
  return static_cast<std::uint64_t>(total);
}

}  // namespace detail

/// The family S_n restricted to closed discs inside the open unit disc,
/// enumerated deterministically.
///
/// Every rational disc has a unique level q: the least common denominator of
/// its centre coordinates and radius, so it reads (a/q, b/q) with radius c/q
/// and gcd(a, b, c, q) = 1. Discs are listed by increasing level, and within
/// a level lexicographically by (radius, x, y), i.e. by (c, a, b). Each level
/// is finite, so the listing is exhaustive and every member has a finite
/// 1-based index.
class DiscEnumeration {
 public:
  explicit DiscEnumeration(unsigned long n) : n_(n), width_(static_cast<std::int64_t>(n) + 2) {
    if (n == 0) throw Error(ErrorKind::invalid_input, "S_n needs n >= 1");
  }

  unsigned long level_n() const { return n_; }

  /// Members of row (q, c, a): the admissible b form |b| in [bmin, bmax],
  /// restricted to gcd(b, g) = 1.
  struct Row {
    std::int64_t bmin = 0;
    std::int64_t bmax = -1;
    std::int64_t g = 1;

    bool empty() const { return bmax < bmin; }
  };

  Row row(std::int64_t lvl, std::int64_t c, std::int64_t a) const {
    Row row;
    // Unit disc: a^2 + b^2 < (q - c)^2.
    __int128 room = static_cast<__int128>(lvl - c) * (lvl - c) - static_cast<__int128>(a) * a;
    if (room <= 0) return row;
    row.bmax = detail::isqrt_floor(room - 1);
    // Capsule: ((2|a| - q)_+ L)^2 + (2 b L)^2 > (2 c L + 2 q)^2, L = n + 2.
    std::int64_t ex = std::max<std::int64_t>(0, 2 * std::abs(a) - lvl);
    __int128 reach = static_cast<__int128>(2) * c * width_ + 2 * static_cast<__int128>(lvl);
    __int128 v = reach * reach - static_cast<__int128>(ex) * width_ * ex * width_;
    __int128 four_l2 = static_cast<__int128>(4) * width_ * width_;
    if (v < 0) {
      row.bmin = 0;
    } else {
      std::int64_t b0 = detail::isqrt_floor(v / four_l2);
      while (four_l2 * b0 * b0 <= v) ++b0;
      while (b0 > 0 && four_l2 * (b0 - 1) * (b0 - 1) > v) --b0;
      row.bmin = b0;
    }
    row.g = std::gcd(std::gcd(std::abs(a), c), lvl);
    return row;
  }

  /// Members of row (q, c, a) with b < b_limit.
  std::uint64_t count_row_below(std::int64_t lvl, std::int64_t c, std::int64_t a,
                                std::int64_t b_limit) const {
    Row r = row(lvl, c, a);
    if (r.empty()) return 0;
    std::uint64_t total = 0;
    std::int64_t hi = std::min(b_limit - 1, -std::max<std::int64_t>(r.bmin, 1));
    total += detail::count_coprime(-r.bmax, hi, r.g);
    total += detail::count_coprime(r.bmin, std::min(r.bmax, b_limit - 1), r.g);
    return total;
  }

  std::uint64_t count_row(std::int64_t lvl, std::int64_t c, std::int64_t a) const {
    return count_row_below(lvl, c, a, std::numeric_limits<std::int64_t>::max());
  }

  std::uint64_t count_level(std::int64_t lvl) const {
    ensure_levels(lvl);
    return level_counts_[static_cast<std::size_t>(lvl)];
  }

  /// Members on levels strictly below lvl.
  std::uint64_t count_before_level(std::int64_t lvl) const {
    ensure_levels(lvl);
    return cumulative_[static_cast<std::size_t>(lvl)];
  }

  /// The first `count` members in enumeration order.
  std::vector<QDisc> first(std::size_t count) const {
    std::vector<QDisc> out;
    out.reserve(count);
    for (std::int64_t lvl = 1; out.size() < count; ++lvl) {
      for (std::int64_t c = 1; c < lvl && out.size() < count; ++c)
        for (std::int64_t a = -(lvl - c - 1); a <= lvl - c - 1 && out.size() < count; ++a) {
          Row r = row(lvl, c, a);
          if (r.empty()) continue;
          for (std::int64_t b = -r.bmax; b <= r.bmax && out.size() < count; ++b) {
            if (std::abs(b) < r.bmin || std::gcd(r.g, std::abs(b)) != 1) continue;
            out.push_back(make_disc(lvl, c, a, b));
          }
        }
    }
    return out;
  }

  /// 1-based index of d in the enumeration, or nullopt when d is not in S_n
  /// (or its level is beyond the 64-bit indexing range).
  std::optional<std::uint64_t> rank(const QDisc& d) const {
    auto coords = coordinates(d);
    if (!coords) return std::nullopt;
    const auto [lvl, c, a, b] = *coords;
    return index_of(lvl, c, a, b);
  }

  /// rank(d) when d is in S_n with rank <= bound, nullopt otherwise. Levels
  /// are counted only up to the one holding index `bound`, so a claim about
  /// a disc of huge level is refuted cheaply.
  std::optional<std::uint64_t> rank_at_most(const QDisc& d, std::uint64_t bound) const {
    auto coords = coordinates(d);
    if (!coords) return std::nullopt;
    const auto [lvl, c, a, b] = *coords;
    for (std::int64_t l = 1; l <= lvl; ++l)
      if (count_before_level(l) >= bound) return std::nullopt;
    const std::uint64_t idx = index_of(lvl, c, a, b);
    if (idx > bound) return std::nullopt;
    return idx;
  }

  struct Hit {
    QDisc disc;
    std::uint64_t index;
  };

  /// First member (in enumeration order) that contains z and satisfies
  /// `accept`, scanning levels 1..max_level. Only members containing z are
  /// offered to `accept`.
  std::optional<Hit> first_containing(const QPoint& z, const std::function<bool(const QDisc&)>& accept,
                                      std::int64_t max_level) const {
    const double zx = to_double(z.x);
    const double zy = to_double(z.y);
    for (std::int64_t lvl = 1; lvl <= max_level; ++lvl) {
      const double qd = static_cast<double>(lvl);
      for (std::int64_t c = 1; c < lvl; ++c) {
        const double rad = static_cast<double>(c) / qd;
        auto a_lo = std::max<std::int64_t>(-(lvl - c - 1), static_cast<std::int64_t>(std::floor((zx - rad) * qd)) - 1);
        auto a_hi = std::min<std::int64_t>(lvl - c - 1, static_cast<std::int64_t>(std::ceil((zx + rad) * qd)) + 1);
        for (std::int64_t a = a_lo; a <= a_hi; ++a) {
          const double dx = static_cast<double>(a) / qd - zx;
          const double span2 = rad * rad - dx * dx;
          if (span2 < -1e-9) continue;
          const double span = std::sqrt(std::max(0.0, span2));
          Row r = row(lvl, c, a);
          if (r.empty()) continue;
          auto b_lo = std::max<std::int64_t>(-r.bmax, static_cast<std::int64_t>(std::floor((zy - span) * qd)) - 1);
          auto b_hi = std::min<std::int64_t>(r.bmax, static_cast<std::int64_t>(std::ceil((zy + span) * qd)) + 1);
          for (std::int64_t b = b_lo; b <= b_hi; ++b) {
            if (std::abs(b) < r.bmin || std::gcd(r.g, std::abs(b)) != 1) continue;
            QDisc d = make_disc(lvl, c, a, b);
            if (!contains(d, z) || !accept(d)) continue;
            return Hit{std::move(d), index_of(lvl, c, a, b)};
          }
        }
      }
    }
    return std::nullopt;
  }

  static constexpr long kMaxLevel = 1L << 20;

  /// (q, c, a, b) of a member of S_n.
  std::optional<std::array<std::int64_t, 4>> coordinates(const QDisc& d) const {
    if (d.radius <= 0 || !closure_inside_open_unit_disc(d) || !disc_avoids_capsule(d, n_)) return std::nullopt;
    BigInt lvl_big;
    mpz_lcm(lvl_big.get_mpz_t(), d.center.x.get_den_mpz_t(), d.center.y.get_den_mpz_t());
    mpz_lcm(lvl_big.get_mpz_t(), lvl_big.get_mpz_t(), d.radius.get_den_mpz_t());
    if (!lvl_big.fits_slong_p() || lvl_big > kMaxLevel) return std::nullopt;
    const std::int64_t lvl = lvl_big.get_si();
    return std::array<std::int64_t, 4>{lvl, QRational(d.radius * lvl).get_num().get_si(),
                                       QRational(d.center.x * lvl).get_num().get_si(),
                                       QRational(d.center.y * lvl).get_num().get_si()};
  }

 private:
  std::uint64_t index_of(std::int64_t lvl, std::int64_t c, std::int64_t a, std::int64_t b) const {
    std::uint64_t idx = count_before_level(lvl);
    for (std::int64_t cc = 1; cc < c; ++cc)
      for (std::int64_t aa = -(lvl - cc - 1); aa <= lvl - cc - 1; ++aa) idx += count_row(lvl, cc, aa);
    for (std::int64_t aa = -(lvl - c - 1); aa < a; ++aa) idx += count_row(lvl, c, aa);
    return idx + count_row_below(lvl, c, a, b) + 1;
  }

  static QDisc make_disc(std::int64_t lvl, std::int64_t c, std::int64_t a, std::int64_t b) {
    QDisc d;
    const BigInt den(static_cast<long>(lvl));
    d.center.x = QRational(BigInt(static_cast<long>(a)), den);
    d.center.y = QRational(BigInt(static_cast<long>(b)), den);
    d.radius = QRational(BigInt(static_cast<long>(c)), den);
    d.center.x.canonicalize();
    d.center.y.canonicalize();
    d.radius.canonicalize();
    d.kind = DiscKind::open;
    return d;
  }

  void ensure_levels(std::int64_t lvl) const {
    if (level_counts_.empty()) {
      level_counts_.push_back(0);
      cumulative_.push_back(0);
    }
    while (static_cast<std::int64_t>(level_counts_.size()) <= lvl) {
      const auto cur = static_cast<std::int64_t>(level_counts_.size());
      std::uint64_t total = 0;
      for (std::int64_t c = 1; c < cur; ++c)
        for (std::int64_t a = -(cur - c - 1); a <= cur - c - 1; ++a) total += count_row(cur, c, a);
      cumulative_.push_back(cumulative_.back() + level_counts_.back());
      level_counts_.push_back(total);
    }
  }

  unsigned long n_;
  std::int64_t width_;
  mutable std::vector<std::uint64_t> level_counts_;
  mutable std::vector<std::uint64_t> cumulative_;
};

/// The first `count` discs of S_n under DiscEnumeration's order.
inline std::vector<QDisc> enumerate_rational_discs(unsigned long n, std::size_t count) {
  return DiscEnumeration(n).first(count);
}

}  // namespace cheese
