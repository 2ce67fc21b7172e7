#pragma once

// Exact scalars. QRational is GMP's mpq_class: every value produced by its
// arithmetic operators is kept in lowest terms with a positive denominator.

#include <gmpxx.h>

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>

#include "cheese/error.hpp"

namespace cheese {

using BigInt = mpz_class;
using QRational = mpq_class;

inline QRational q(long num, long den = 1) {
  QRational r(num, den);
  r.canonicalize();
  return r;
}

inline bool is_canonical(const QRational& x) {
  if (sgn(x.get_den()) <= 0) return false;
  BigInt g;
  mpz_gcd(g.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return g == 1;
}

/// "p" for integers, "p/q" otherwise.
inline std::string to_string(const QRational& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

inline double to_double(const QRational& x) { return x.get_d(); }

/// Exact conversion; every finite double is a dyadic rational.
inline QRational from_double(double v) {
  QRational r;
  mpq_set_d(r.get_mpq_t(), v);
  return r;
}

inline QRational pow(const QRational& base, unsigned long e) {
  QRational r;
  mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), e);
  r.canonicalize();
  return r;
}

inline BigInt factorial(unsigned long n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

/// 2^e for any integer e.
inline QRational pow2(long e) {
  QRational r(1);
  if (e >= 0)
    mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(e));
  else
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(-e));
  return r;
}

inline QRational abs(const QRational& x) { return x < 0 ? QRational(-x) : x; }

/// Smallest multiple of 2^-t that is >= x.
inline QRational round_up_dyadic(const QRational& x, unsigned t) {
  BigInt scaled = x.get_num();
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), t);
  mpz_cdiv_q(scaled.get_mpz_t(), scaled.get_mpz_t(), x.get_den_mpz_t());
  QRational r(scaled);
  mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), t);
  return r;
}

/// Parses an exact rational literal: an integer "p", a fraction "p/q", or a
/// plain decimal "d.ddd". Exponent notation and non-finite spellings are
/// rejected so no float ever enters the exact pipeline.
inline QRational parse_rational(std::string_view text) {
  auto fail = [&](const char* why) {
    throw Error(ErrorKind::invalid_input,
                "bad rational literal '" + std::string(text) + "': " + why);
  };
  auto digits_ok = [](std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  };
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  QRational result;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!digits_ok(num) || !digits_ok(den)) fail("expected p/q with decimal digits");
    BigInt d(std::string(den), 10);
    if (d == 0) fail("zero denominator");
    result = QRational(BigInt(std::string(num), 10), d);
    result.canonicalize();
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto ip = body.substr(0, dot);
    auto fp = body.substr(dot + 1);
    if (ip.empty()) ip = "0";
    if (!digits_ok(ip) || !digits_ok(fp)) fail("expected a plain decimal");
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, fp.size());
    result = QRational(BigInt(std::string(ip) + std::string(fp), 10), scale);
    result.canonicalize();
  } else {
    if (!digits_ok(body)) fail("expected digits");
    result = QRational(BigInt(std::string(body), 10));
  }
  return negative ? QRational(-result) : result;
}

/// A closed rational interval [lo, hi] known to contain an irrational value.
struct Bracket {
  QRational lo;
  QRational hi;
};

/// Brackets sqrt(x) on the grid 2^-t: lo = floor(sqrt(x) 2^t) / 2^t and
/// hi = lo + 2^-t, or hi = lo when x is a perfect dyadic square at that grid.
inline Bracket sqrt_bracket(const QRational& x, unsigned t) {
  if (x < 0) throw Error(ErrorKind::invalid_input, "sqrt of negative rational");
  // floor(sqrt(x) 2^t) = isqrt(floor(x 4^t)).
  BigInt scaled = x.get_num();
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), 2UL * t);
  mpz_fdiv_q(scaled.get_mpz_t(), scaled.get_mpz_t(), x.get_den_mpz_t());
  BigInt root;
  mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
  QRational lo(root);
  mpq_div_2exp(lo.get_mpq_t(), lo.get_mpq_t(), t);
  if (lo * lo == x) return {lo, lo};
  return {lo, lo + pow2(-static_cast<long>(t))};
}

/// Brackets a^(-1/n) for a > 0 on the grid 2^-t: the largest j with
/// (j 2^-t)^n <= 1/a gives lo; hi = lo + 2^-t unless the root is exact.
inline Bracket inv_root_bracket(const QRational& a, unsigned long n, unsigned t) {
  if (a <= 0 || n == 0) throw Error(ErrorKind::invalid_input, "inv_root_bracket needs a > 0, n >= 1");
  // j^n <= 2^(tn) den / num  <=>  j^n <= floor(2^(tn) den / num).
  BigInt scaled = a.get_den();
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), static_cast<unsigned long>(t) * n);
  mpz_fdiv_q(scaled.get_mpz_t(), scaled.get_mpz_t(), a.get_num_mpz_t());
  BigInt j;
  mpz_root(j.get_mpz_t(), scaled.get_mpz_t(), n);
  QRational lo(j);
  mpq_div_2exp(lo.get_mpq_t(), lo.get_mpq_t(), t);
  if (pow(lo, n) * a == 1) return {lo, lo};
  return {lo, lo + pow2(-static_cast<long>(t))};
}

}  // namespace cheese
