#pragma once

// Rational functions with coefficients in Q + iQ: the elements of R_0(X)
// used as test functions, McKissick approximants and derivative oracles.

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "cheese/geometry.hpp"

namespace cheese {

struct QComplex {
  QRational re;
  QRational im;

  QComplex() = default;
  QComplex(QRational r, QRational i = 0) : re(std::move(r)), im(std::move(i)) {}
  explicit QComplex(const QPoint& p) : re(p.x), im(p.y) {}

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  QRational norm_sq() const { return re * re + im * im; }
  QComplex conj() const { return {re, -im}; }
  std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }

  friend QComplex operator+(const QComplex& a, const QComplex& b) { return {a.re + b.re, a.im + b.im}; }
  friend QComplex operator-(const QComplex& a, const QComplex& b) { return {a.re - b.re, a.im - b.im}; }
  friend QComplex operator-(const QComplex& a) { return {-a.re, -a.im}; }
  friend QComplex operator*(const QComplex& a, const QComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend QComplex operator/(const QComplex& a, const QComplex& b) {
    QRational n = b.norm_sq();
    if (sgn(n) == 0) throw Error(ErrorKind::pole_at_point, "division by exact zero");
    QComplex t = a * b.conj();
    return {t.re / n, t.im / n};
  }
  friend bool operator==(const QComplex& a, const QComplex& b) { return a.re == b.re && a.im == b.im; }
};

/// Dense polynomial, coefficients from degree 0 upward; no trailing zeros.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<QComplex> coeffs) : c_(std::move(coeffs)) { trim(); }
  static Polynomial constant(QComplex v) { return Polynomial({std::move(v)}); }
  /// z - root
  static Polynomial linear(const QComplex& root) { return Polynomial({-root, QComplex(1)}); }
  static Polynomial monomial(std::size_t degree, QComplex coeff = QComplex(1)) {
    std::vector<QComplex> c(degree + 1);
    c[degree] = std::move(coeff);
    return Polynomial(std::move(c));
  }

  bool is_zero() const { return c_.empty(); }
  /// -1 for the zero polynomial.
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  const std::vector<QComplex>& coeffs() const { return c_; }
  const QComplex& lead() const { return c_.back(); }

  QComplex operator()(const QComplex& z) const {
    QComplex acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<QComplex> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i)
      d[i - 1] = c_[i] * QComplex(QRational(static_cast<long>(i)));
    return Polynomial(std::move(d));
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<QComplex> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] = c[i] + a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] = c[i] + b.c_[i];
    return Polynomial(std::move(c));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    std::vector<QComplex> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] = c[i] + a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] = c[i] - b.c_[i];
    return Polynomial(std::move(c));
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<QComplex> c(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] = c[i + j] + a.c_[i] * b.c_[j];
    return Polynomial(std::move(c));
  }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

  /// Euclidean division; divisor must be nonzero.
  static std::pair<Polynomial, Polynomial> divmod(Polynomial num, const Polynomial& div) {
    if (div.is_zero()) throw Error(ErrorKind::invalid_input, "polynomial division by zero");
    std::vector<QComplex> quot(num.degree() >= div.degree() ? num.degree() - div.degree() + 1 : 0);
    while (!num.is_zero() && num.degree() >= div.degree()) {
      const auto shift = static_cast<std::size_t>(num.degree() - div.degree());
      QComplex f = num.lead() / div.lead();
      quot[shift] = f;
      num = num - monomial(shift, f) * div;
    }
    return {Polynomial(std::move(quot)), std::move(num)};
  }

  Polynomial monic() const {
    if (is_zero()) return {};
    QComplex inv = QComplex(1) / lead();
    std::vector<QComplex> c = c_;
    for (auto& x : c) x = x * inv;
    return Polynomial(std::move(c));
  }

  static Polynomial gcd(Polynomial a, Polynomial b) {
    while (!b.is_zero()) {
      auto r = divmod(a, b).second;
      a = std::move(b);
      b = std::move(r);
    }
    return a.monic();
  }

  /// Sum of coefficient moduli weighted by |z|^i, in double; used for
  /// rounding-error bounds of Horner evaluation.
  double abs_horner(double zabs) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * zabs + std::abs(it->to_complex());
    return acc;
  }

  std::complex<double> eval_double(std::complex<double> z) const {
    std::complex<double> acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + it->to_complex();
    return acc;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }

  std::vector<QComplex> c_;
};

/// numerator / denominator. `reduced` records whether the common factor was
/// divided out.
struct RationalFunction {
  Polynomial numerator;
  Polynomial denominator = Polynomial::constant(QComplex(1));
  bool reduced = false;

  RationalFunction() = default;
  RationalFunction(Polynomial num, Polynomial den) : numerator(std::move(num)), denominator(std::move(den)) {
    if (denominator.is_zero()) throw Error(ErrorKind::invalid_input, "zero denominator polynomial");
  }

  static RationalFunction polynomial(Polynomial p) { return {std::move(p), Polynomial::constant(QComplex(1))}; }

  /// coeff / (z - pole)^order
  static RationalFunction pole_term(const QComplex& coeff, const QComplex& pole, unsigned order) {
    Polynomial den = Polynomial::constant(QComplex(1));
    for (unsigned i = 0; i < order; ++i) den = den * Polynomial::linear(pole);
    return {Polynomial::constant(coeff), std::move(den)};
  }

  friend RationalFunction operator+(const RationalFunction& f, const RationalFunction& g) {
    if (f.denominator == g.denominator) return {f.numerator + g.numerator, f.denominator};
    return {f.numerator * g.denominator + g.numerator * f.denominator, f.denominator * g.denominator};
  }
  friend RationalFunction operator-(const RationalFunction& f, const RationalFunction& g) {
    if (f.denominator == g.denominator) return {f.numerator - g.numerator, f.denominator};
    return {f.numerator * g.denominator - g.numerator * f.denominator, f.denominator * g.denominator};
  }
  friend RationalFunction operator*(const RationalFunction& f, const RationalFunction& g) {
    return {f.numerator * g.numerator, f.denominator * g.denominator};
  }

  /// Quotient rule: (N/D)' = (N'D - ND') / D^2.
  RationalFunction derivative() const {
    return {numerator.derivative() * denominator - numerator * denominator.derivative(),
            denominator * denominator};
  }

  /// Divides out gcd(N, D) and normalizes the denominator to be monic.
  RationalFunction reduce() const {
    Polynomial g = Polynomial::gcd(numerator, denominator);
    auto num = Polynomial::divmod(numerator, g).first;
    auto den = Polynomial::divmod(denominator, g).first;
    QComplex inv = QComplex(1) / den.lead();
    RationalFunction out(num * Polynomial::constant(inv), den * Polynomial::constant(inv));
    out.reduced = true;
    return out;
  }

  /// Exact value at z; PoleAtPoint when the denominator vanishes there.
  QComplex operator()(const QComplex& z) const {
    QComplex d = denominator(z);
    if (d.is_zero()) throw Error(ErrorKind::pole_at_point, "denominator vanishes at evaluation point");
    return numerator(z) / d;
  }
};

enum class EvalMode { exact, floating };

struct EvalOptions {
  EvalMode mode = EvalMode::floating;
  /// Floor for a certified lower bound on |D(z)|.
  double pole_threshold = std::ldexp(1.0, -40);
};

/// Value of a rational function at a point. `exact` is set in exact mode;
/// `approx` is always set. `abs_error` bounds |f(z) - approx| and
/// `rel_error` is abs_error / |approx| (infinite when approx is 0).
struct ComplexValue {
  std::optional<QComplex> exact;
  std::complex<double> approx;
  double abs_error = 0.0;
  double rel_error = 0.0;
  bool pole_proximity = false;
};

inline ComplexValue eval_rational(const RationalFunction& f, const QPoint& z, const EvalOptions& opts = {}) {
  ComplexValue out;
  const QComplex zc(z);
  if (opts.mode == EvalMode::exact) {
    QComplex d = f.denominator(zc);
    if (d.is_zero()) throw Error(ErrorKind::pole_at_point, "denominator vanishes at evaluation point");
    QComplex v = f.numerator(zc) / d;
    out.approx = v.to_complex();
    // Conversion of each component to double rounds once.
    out.abs_error = std::abs(out.approx) * std::numeric_limits<double>::epsilon();
    out.rel_error = std::numeric_limits<double>::epsilon();
    out.pole_proximity = to_double(d.norm_sq()) < opts.pole_threshold * opts.pole_threshold;
    out.exact = std::move(v);
    return out;
  }
  if (f.denominator(zc).is_zero())
    throw Error(ErrorKind::pole_at_point, "denominator vanishes at evaluation point");
  // Horner in complex double: |p(z) - fl(p(z))| <= gamma * sum |a_i| |z|^i with
  // gamma covering coefficient/point conversion and 2 deg complex flops.
  const std::complex<double> zd = zc.to_complex();
  const double zabs = std::abs(zd) * (1 + 4 * std::numeric_limits<double>::epsilon());
  auto gamma = [](long deg) {
    const double u = std::numeric_limits<double>::epsilon() / 2;
    const double k = 8.0 * static_cast<double>(std::max<long>(deg, 0) + 2);
    return k * u / (1 - k * u);
  };
  const std::complex<double> nv = f.numerator.eval_double(zd);
  const std::complex<double> dv = f.denominator.eval_double(zd);
  const double en = gamma(f.numerator.degree()) * f.numerator.abs_horner(zabs);
  const double ed = gamma(f.denominator.degree()) * f.denominator.abs_horner(zabs);
  const double dlow = std::abs(dv) - ed;
  out.approx = nv / dv;
  out.pole_proximity = dlow < opts.pole_threshold;
  if (dlow <= 0) {
    out.abs_error = std::numeric_limits<double>::infinity();
    out.rel_error = std::numeric_limits<double>::infinity();
    return out;
  }
  const double u = std::numeric_limits<double>::epsilon();
  out.abs_error = (en * std::abs(dv) + std::abs(nv) * ed) / (std::abs(dv) * dlow) + 4 * u * std::abs(out.approx);
  out.rel_error = std::abs(out.approx) > 0 ? out.abs_error / std::abs(out.approx)
                                           : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace cheese
