#include "wh/tau_rational.hpp"

#include <algorithm>
#include <cmath>

namespace wh {

namespace {

std::vector<TauPole> normalised(std::vector<TauPole> p) {
  std::sort(p.begin(), p.end(), [](const TauPole& a, const TauPole& b) { return a.key < b.key; });
  std::vector<TauPole> out;
  for (const auto& x : p) {
    if (x.mult <= 0) continue;
    if (!out.empty() && out.back().key == x.key)
      out.back().mult += x.mult;
    else
      out.push_back(x);
  }
  return out;
}

}  // namespace

TauRational::TauRational() : num_(), scale_(1.0) {}

TauRational::TauRational(Polynomial num, cplx scale, std::vector<TauPole> poles)
    : num_(std::move(num)), scale_(scale), poles_(normalised(std::move(poles))) {
  if (num_.is_zero()) {
    poles_.clear();
    scale_ = 1.0;
  }
}

TauRational TauRational::constant(cplx c) { return TauRational(Polynomial::constant(c)); }

int TauRational::mult(int key) const {
  for (const auto& p : poles_)
    if (p.key == key) return p.mult;
  return 0;
}

int TauRational::pole_degree() const {
  int d = 0;
  for (const auto& p : poles_) d += p.mult;
  return d;
}

cplx TauRational::operator()(cplx tau) const {
  cplx d = scale_;
  for (const auto& p : poles_) d *= std::pow(tau - p.at, p.mult);
  return poly_eval(num_, tau) / d;
}

Polynomial pole_polynomial(const std::vector<TauPole>& poles) {
  std::vector<cplx> roots;
  for (const auto& p : poles)
    for (int k = 0; k < p.mult; ++k) roots.push_back(p.at);
  return Polynomial::from_roots(roots);
}

std::vector<TauPole> pole_union(const std::vector<TauPole>& a, const std::vector<TauPole>& b) {
  std::vector<TauPole> out = a;
  for (const auto& p : b) {
    auto it = std::find_if(out.begin(), out.end(), [&](const TauPole& q) { return q.key == p.key; });
    if (it == out.end())
      out.push_back(p);
    else
      it->mult = std::max(it->mult, p.mult);
  }
  return normalised(std::move(out));
}

Polynomial TauRational::lift(const std::vector<TauPole>& target) const {
  std::vector<TauPole> extra;
  for (const auto& p : target) {
    const int m = p.mult - mult(p.key);
    if (m > 0) extra.push_back({p.key, p.at, m});
  }
  return poly_scale(num_ * pole_polynomial(extra), 1.0 / scale_);
}

TauRational operator*(const TauRational& a, const TauRational& b) {
  if (a.is_zero() || b.is_zero()) return TauRational();
  std::vector<TauPole> p = a.poles();
  p.insert(p.end(), b.poles().begin(), b.poles().end());
  return TauRational(a.num() * b.num(), a.scale() * b.scale(), std::move(p));
}

TauRational operator+(const TauRational& a, const TauRational& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const auto L = pole_union(a.poles(), b.poles());
  return TauRational(a.lift(L) + b.lift(L), 1.0, L);
}

TauRational operator-(const TauRational& a) { return TauRational(poly_scale(a.num(), -1.0), a.scale(), a.poles()); }
TauRational operator-(const TauRational& a, const TauRational& b) { return a + (-b); }

PoleRemoval remove_poles(const TauRational& r, const std::function<bool(int)>& drop) {
  Polynomial num = r.num();
  std::vector<TauPole> kept;
  double worst = 0.0, rem = 0.0, mag = 0.0;
  const double sc = std::abs(r.scale());
  for (const auto& p : r.poles()) {
    if (!drop(p.key)) {
      kept.push_back(p);
      continue;
    }
    for (int k = 0; k < p.mult; ++k) {
      const Deflation d = deflate(num, p.at);
      worst = std::max(worst, d.residual);
      rem = std::max(rem, std::abs(poly_eval(num, p.at)) / sc);
      mag = std::max(mag, abs_eval(num, p.at) / sc);
      num = d.quotient;
    }
  }
  return {TauRational(num, r.scale(), kept), worst, rem, mag};
}

RationalMatrixTau::RationalMatrixTau(int n) : n_(n), e_(static_cast<size_t>(n * n)) {}

RationalMatrixTau RationalMatrixTau::identity(int n) {
  RationalMatrixTau m(n);
  for (int i = 0; i < n; ++i) m.at(i, i) = TauRational::constant(1.0);
  return m;
}

ComplexMatrix RationalMatrixTau::operator()(cplx tau) const {
  ComplexMatrix m(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m(i, j) = at(i, j)(tau);
  return m;
}

RationalMatrixTau operator*(const RationalMatrixTau& a, const RationalMatrixTau& b) {
  const int n = a.n();
  RationalMatrixTau c(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      TauRational s;
      for (int k = 0; k < n; ++k) s = s + a.at(i, k) * b.at(k, j);
      c.at(i, j) = s;
    }
  return c;
}

RationalMatrixTau operator*(const TauRational& s, const RationalMatrixTau& a) {
  RationalMatrixTau c(a.n());
  for (int i = 0; i < a.n(); ++i)
    for (int j = 0; j < a.n(); ++j) c.at(i, j) = s * a.at(i, j);
  return c;
}

namespace {

RationalMatrixTau minor_of(const RationalMatrixTau& a, int row, int col) {
  RationalMatrixTau m(a.n() - 1);
  for (int i = 0, r = 0; i < a.n(); ++i) {
    if (i == row) continue;
    for (int j = 0, c = 0; j < a.n(); ++j) {
      if (j == col) continue;
      m.at(r, c++) = a.at(i, j);
    }
    ++r;
  }
  return m;
}

}  // namespace

TauRational determinant(const RationalMatrixTau& a) {
  const int n = a.n();
  if (n == 0) return TauRational::constant(1.0);
  if (n == 1) return a.at(0, 0);
  if (n == 2) return a.at(0, 0) * a.at(1, 1) - a.at(0, 1) * a.at(1, 0);
  TauRational d;
  for (int j = 0; j < n; ++j) {
    if (a.at(0, j).is_zero()) continue;
    const TauRational t = a.at(0, j) * determinant(minor_of(a, 0, j));
    d = (j % 2 == 0) ? d + t : d - t;
  }
  return d;
}

RationalMatrixTau adjugate(const RationalMatrixTau& a) {
  const int n = a.n();
  RationalMatrixTau adj(n);
  if (n == 1) {
    adj.at(0, 0) = TauRational::constant(1.0);
    return adj;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const TauRational c = determinant(minor_of(a, j, i));
      adj.at(i, j) = ((i + j) % 2 == 0) ? c : -c;
    }
  return adj;
}

}  // namespace wh
