#include "wh/polynomial.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "wh/errors.hpp"

namespace wh {

namespace {

constexpr double kTrimTol = 1e-14;

std::vector<cplx> trimmed(std::vector<cplx> c) {
  if (c.empty()) return {cplx(0.0)};
  double mx = 0.0;
  for (const auto& x : c) mx = std::max(mx, std::abs(x));
  if (mx == 0.0) return {cplx(0.0)};
  while (c.size() > 1 && std::abs(c.back()) <= kTrimTol * mx) c.pop_back();
  return c;
}

}  // namespace

Polynomial::Polynomial() : c_{cplx(0.0)} {}
Polynomial::Polynomial(std::vector<cplx> coeffs) : c_(trimmed(std::move(coeffs))) {}
Polynomial::Polynomial(std::initializer_list<cplx> coeffs)
    : c_(trimmed(std::vector<cplx>(coeffs))) {}

Polynomial Polynomial::constant(cplx c) { return Polynomial(std::vector<cplx>{c}); }

Polynomial Polynomial::monomial(int k, cplx c) {
  std::vector<cplx> v(static_cast<size_t>(k) + 1, cplx(0.0));
  v.back() = c;
  return Polynomial(std::move(v));
}

Polynomial Polynomial::from_roots(const std::vector<cplx>& roots, cplx leading) {
  std::vector<cplx> c{leading};
  for (const auto& r : roots) {
    std::vector<cplx> next(c.size() + 1, cplx(0.0));
    for (size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= r * c[k];
    }
    c.swap(next);
  }
  return Polynomial(std::move(c));
}

cplx Polynomial::coeff(int k) const {
  if (k < 0 || k >= static_cast<int>(c_.size())) return 0.0;
  return c_[static_cast<size_t>(k)];
}

double Polynomial::max_abs() const {
  double mx = 0.0;
  for (const auto& x : c_) mx = std::max(mx, std::abs(x));
  return mx;
}

cplx Polynomial::operator()(cplx z) const { return poly_eval(*this, z); }

cplx poly_eval(const Polynomial& p, cplx z) {
  const auto& c = p.coeffs();
  cplx acc = c.back();
  for (size_t k = c.size() - 1; k-- > 0;) acc = acc * z + c[k];
  return acc;
}

Polynomial poly_derivative(const Polynomial& p) {
  const auto& c = p.coeffs();
  if (c.size() == 1) return Polynomial();
  std::vector<cplx> d(c.size() - 1);
  for (size_t k = 1; k < c.size(); ++k) d[k - 1] = static_cast<double>(k) * c[k];
  return Polynomial(std::move(d));
}

Polynomial poly_add(const Polynomial& a, const Polynomial& b) {
  const auto& x = a.coeffs();
  const auto& y = b.coeffs();
  std::vector<cplx> r(std::max(x.size(), y.size()), cplx(0.0));
  for (size_t k = 0; k < x.size(); ++k) r[k] += x[k];
  for (size_t k = 0; k < y.size(); ++k) r[k] += y[k];
  return Polynomial(std::move(r));
}

Polynomial poly_sub(const Polynomial& a, const Polynomial& b) { return poly_add(a, poly_scale(b, -1.0)); }

Polynomial poly_mul(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return Polynomial();
  const auto& x = a.coeffs();
  const auto& y = b.coeffs();
  std::vector<cplx> r(x.size() + y.size() - 1, cplx(0.0));
  for (size_t i = 0; i < x.size(); ++i)
    for (size_t j = 0; j < y.size(); ++j) r[i + j] += x[i] * y[j];
  return Polynomial(std::move(r));
}

Polynomial poly_scale(const Polynomial& p, cplx s) {
  std::vector<cplx> r = p.coeffs();
  for (auto& x : r) x *= s;
  return Polynomial(std::move(r));
}

Polynomial poly_shift(const Polynomial& p, int k) {
  if (k <= 0 || p.is_zero()) return p;
  std::vector<cplx> r(static_cast<size_t>(k), cplx(0.0));
  r.insert(r.end(), p.coeffs().begin(), p.coeffs().end());
  return Polynomial(std::move(r));
}

Polynomial poly_pow(const Polynomial& p, int k) {
  Polynomial r = Polynomial::constant(1.0);
  for (int i = 0; i < k; ++i) r = poly_mul(r, p);
  return r;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) { return poly_add(a, b); }
Polynomial operator-(const Polynomial& a, const Polynomial& b) { return poly_sub(a, b); }
Polynomial operator*(const Polynomial& a, const Polynomial& b) { return poly_mul(a, b); }
Polynomial operator*(cplx s, const Polynomial& p) { return poly_scale(p, s); }

std::vector<cplx> taylor_coefficients(const Polynomial& p, cplx z, int count) {
  // repeated synthetic division by (x - z)
  std::vector<cplx> c = p.coeffs();
  std::vector<cplx> out;
  out.reserve(static_cast<size_t>(std::max(count, 0)));
  for (int d = 0; d < count; ++d) {
    if (c.empty()) {
      out.push_back(0.0);
      continue;
    }
    cplx acc = 0.0;
    std::vector<cplx> q(c.size() > 1 ? c.size() - 1 : 0);
    for (size_t k = c.size(); k-- > 0;) {
      acc = acc * z + c[k];
      if (k > 0) q[k - 1] = acc;
    }
    out.push_back(acc);
    c.swap(q);
  }
  return out;
}

double abs_eval(const Polynomial& p, cplx z) {
  const auto& c = p.coeffs();
  const double az = std::abs(z);
  double acc = std::abs(c.back());
  for (size_t k = c.size() - 1; k-- > 0;) acc = acc * az + std::abs(c[k]);
  return acc;
}

Deflation deflate(const Polynomial& p, cplx r) {
  const auto& c = p.coeffs();
  const size_t n = c.size();
  const double scale = abs_eval(p, r);
  const double residual = scale > 0.0 ? std::abs(poly_eval(p, r)) / scale : 0.0;
  if (n == 1) return {Polynomial(), residual};
  std::vector<cplx> q(n - 1, cplx(0.0));
  if (std::abs(r) <= 1.0) {
    cplx acc = c[n - 1];
    q[n - 2] = acc;
    for (size_t k = n - 2; k >= 1; --k) {
      acc = acc * r + c[k];
      q[k - 1] = acc;
    }
  } else {
    // p = (z - r) q solved from the constant term upward
    cplx prev = 0.0;
    for (size_t k = 0; k + 1 < n; ++k) {
      q[k] = (prev - c[k]) / r;
      prev = q[k];
    }
  }
  return {Polynomial(std::move(q)), residual};
}

cplx newton_polish(const Polynomial& p, cplx r, int steps) {
  const Polynomial dp = poly_derivative(p);
  for (int i = 0; i < steps; ++i) {
    const cplx d = poly_eval(dp, r);
    if (d == cplx(0.0)) break;
    const cplx step = poly_eval(p, r) / d;
    if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
    r -= step;
  }
  return r;
}

std::pair<cplx, cplx> quadratic_roots(cplx a, cplx b, cplx c) {
  if (a == cplx(0.0)) fail(ErrorCode::DegenerateCoefficient, "quadratic_roots: leading coefficient is zero");
  const cplx disc = std::sqrt(b * b - 4.0 * a * c);
  const double sgn = (std::real(std::conj(b) * disc) >= 0.0) ? 1.0 : -1.0;
  const cplx q = -0.5 * (b + sgn * disc);
  cplx r1, r2;
  if (q == cplx(0.0)) {
    r1 = r2 = 0.0;
  } else {
    r1 = q / a;
    r2 = c / q;
  }
  const Polynomial p{c, b, a};
  return {newton_polish(p, r1), newton_polish(p, r2)};
}

std::vector<cplx> poly_roots(const Polynomial& p) {
  const int n = p.degree();
  if (n <= 0) return {};
  if (n == 1) return {-p.coeff(0) / p.coeff(1)};
  if (n == 2) {
    auto [r1, r2] = quadratic_roots(p.coeff(2), p.coeff(1), p.coeff(0));
    return {r1, r2};
  }
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
  const cplx lc = p.leading();
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -p.coeff(i) / lc;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  std::vector<cplx> roots;
  roots.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) roots.push_back(newton_polish(p, es.eigenvalues()(i), 3));
  return roots;
}

RationalFunction::RationalFunction() : num_(), den_(Polynomial::constant(1.0)) {}

RationalFunction::RationalFunction(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) fail(ErrorCode::InvariantViolation, "rational function with zero denominator");
}

cplx RationalFunction::operator()(cplx z) const { return poly_eval(num_, z) / poly_eval(den_, z); }

RationalFunction RationalFunction::cancel_roots(const std::vector<cplx>& roots, double tol) const {
  Polynomial n = num_;
  Polynomial d = den_;
  for (const auto& r : roots) {
    if (n.is_zero() || d.degree() < 1) break;
    const Deflation dd = deflate(d, r);
    if (dd.residual > tol) continue;
    const Deflation dn = deflate(n, r);
    if (dn.residual > tol || n.degree() < 1) continue;
    n = dn.quotient;
    d = dd.quotient;
  }
  if (n.is_zero()) d = Polynomial::constant(1.0);
  return RationalFunction(n, d);
}

}  // namespace wh
