#include "wh/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "wh/errors.hpp"

namespace wh {

Branch parse_branch(std::string_view s) {
  if (s == "minus" || s == "-" || s == "m") return Branch::Minus;
  if (s == "plus" || s == "+" || s == "p") return Branch::Plus;
  fail(ErrorCode::Usage, "unknown branch '" + std::string(s) + "'");
}

const char* branch_name(Branch b) { return b == Branch::Minus ? "minus" : "plus"; }

std::vector<Branch> parse_branches(std::string_view s) {
  std::vector<Branch> out;
  if (s.empty()) return out;
  if (s.find(',') == std::string_view::npos && s.find_first_not_of("+-mp") == std::string_view::npos) {
    for (char ch : s) out.push_back(ch == '-' || ch == 'm' ? Branch::Minus : Branch::Plus);
    return out;
  }
  size_t start = 0;
  while (start <= s.size()) {
    const size_t end = std::min(s.find(',', start), s.size());
    out.push_back(parse_branch(s.substr(start, end - start)));
    start = end + 1;
  }
  return out;
}

std::string branches_to_string(const std::vector<Branch>& b) {
  std::string s;
  for (size_t i = 0; i < b.size(); ++i) {
    if (i) s += ',';
    s += branch_name(b[i]);
  }
  return s;
}

void require_engine_point(const SpectralPoint& pt) {
  if (!(pt.rho > 0.0) || !std::isfinite(pt.rho) || !std::isfinite(pt.v))
    fail(ErrorCode::ParameterViolation, "spectral point needs rho > 0 and finite v");
  if (pt.lambda != 1) fail(ErrorCode::UnsupportedLambda, "the factorisation engine requires lambda = 1");
}

cplx spectral_map(const SpectralPoint& pt, cplx tau) {
  if (tau == cplx(0.0)) fail(ErrorCode::ZeroTau, "spectral_map at tau = 0");
  const double l = pt.lambda;
  return pt.v + 0.5 * l * pt.rho * (l - tau * tau) / tau;
}

Polynomial pair_polynomial(const SpectralPoint& pt, cplx omega0) {
  return Polynomial{0.5 * pt.rho, pt.v - omega0, -0.5 * pt.rho};
}

ZeroPair zero_pair_for(const SpectralPoint& pt, cplx omega0, Branch branch) {
  require_engine_point(pt);
  const double rho = pt.rho;
  const cplx x = pt.v - omega0;
  const cplx s = std::sqrt(x * x + rho * rho);
  cplx t;
  // stable forms of (x -+ s)/rho
  if (branch == Branch::Minus)
    t = std::abs(x + s) >= std::abs(x - s) ? -rho / (x + s) : (x - s) / rho;
  else
    t = std::abs(x - s) >= std::abs(x + s) ? rho / (s - x) : (x + s) / rho;
  t = newton_polish(pair_polynomial(pt, omega0), t);
  const cplx t_out = -1.0 / t;
  const double scale = std::max(1.0, std::abs(t));
  if (std::abs(t - t_out) < 1e-10 * scale)
    fail(ErrorCode::DegeneratePair, "coincident zero pair (v +- i rho at a pole of the monodromy)");
  return {t, t_out, omega0, branch};
}

ComposedPolynomial compose_polynomial(const SpectralPoint& pt, const Polynomial& p) {
  if (pt.lambda != 1) fail(ErrorCode::UnsupportedLambda, "composition requires lambda = 1");
  if (p.is_zero()) return {Polynomial(), 0};
  const int k = p.degree();
  // omega = w(tau)/tau with w = rho/2 + v tau - (rho/2) tau^2
  const Polynomial w{0.5 * pt.rho, pt.v, -0.5 * pt.rho};
  Polynomial acc;
  Polynomial wpow = Polynomial::constant(1.0);
  for (int j = 0; j <= k; ++j) {
    acc = acc + poly_shift(poly_scale(wpow, p.coeff(j)), k - j);
    wpow = wpow * w;
  }
  return {acc, k};
}

PolePartition build_partition(const SpectralPoint& pt, const std::vector<cplx>& omega_zeros,
                              const std::vector<Branch>& branch_choices) {
  require_engine_point(pt);
  if (branch_choices.size() != omega_zeros.size())
    fail(ErrorCode::InadmissiblePartition, "need one branch choice per pole (" +
                                               std::to_string(omega_zeros.size()) + " poles, " +
                                               std::to_string(branch_choices.size()) + " choices)");
  PolePartition part;
  part.selection = branch_choices;
  for (size_t k = 0; k < omega_zeros.size(); ++k) {
    const cplx w0 = omega_zeros[k];
    const double scale = std::max({1.0, std::abs(w0), std::abs(pt.v), pt.rho});
    for (double sgn : {1.0, -1.0})
      if (std::abs(w0 - cplx(pt.v, sgn * pt.rho)) < 1e-10 * scale)
        fail(ErrorCode::DegeneratePair, "v +- i rho coincides with a pole of the monodromy");
    part.pairs.push_back(zero_pair_for(pt, w0, branch_choices[k]));
  }
  for (size_t i = 0; i < part.pairs.size(); ++i) {
    const auto& a = part.pairs[i];
    for (const cplx t : {a.tau_in, a.tau_out})
      if (t == cplx(0.0) || !std::isfinite(std::abs(t)))
        fail(ErrorCode::InadmissiblePartition, "zero pair member at 0 or infinity");
    for (size_t j = 0; j < part.pairs.size(); ++j) {
      const auto& b = part.pairs[j];
      const double sc = std::max({1.0, std::abs(a.tau_in), std::abs(b.tau_out)});
      if (std::abs(a.tau_in - b.tau_out) < 1e-10 * sc)
        fail(ErrorCode::InadmissiblePartition, "inside point of pair " + std::to_string(i) +
                                                   " coincides with outside point of pair " + std::to_string(j));
      if (i != j && std::abs(a.tau_in - b.tau_in) < 1e-10 * std::max({1.0, std::abs(a.tau_in), std::abs(b.tau_in)}))
        fail(ErrorCode::InadmissiblePartition, "two inside points coincide");
    }
  }
  return part;
}

Prolate prolate_from_weyl(const SpectralPoint& pt, double scale, ChartKind kind) {
  if (!(pt.rho > 0.0) || !(scale > 0.0)) fail(ErrorCode::OutOfChart, "prolate chart needs rho > 0 and scale > 0");
  const double rp = std::hypot(pt.rho, pt.v + scale);
  const double rm = std::hypot(pt.rho, pt.v - scale);
  Prolate p;
  p.y = (rp - rm) / (2.0 * scale);
  p.u = kind == ChartKind::Focal ? 0.5 * (rp + rm) : (rp + rm) / (2.0 * scale);
  const double umin = kind == ChartKind::Focal ? scale : 1.0;
  if (!(p.u > umin) || !(std::abs(p.y) < 1.0)) fail(ErrorCode::OutOfChart, "point outside the exterior chart");
  return p;
}

SpectralPoint weyl_from_prolate(const Prolate& p, double scale, ChartKind kind) {
  const double umin = kind == ChartKind::Focal ? scale : 1.0;
  if (!(p.u > umin) || !(std::abs(p.y) < 1.0)) fail(ErrorCode::OutOfChart, "prolate point outside the exterior chart");
  SpectralPoint pt;
  if (kind == ChartKind::Focal) {
    pt.v = p.u * p.y;
    pt.rho = std::sqrt((p.u - scale) * (p.u + scale) * (1.0 - p.y) * (1.0 + p.y));
  } else {
    pt.v = scale * p.u * p.y;
    pt.rho = scale * std::sqrt((p.u - 1.0) * (p.u + 1.0) * (1.0 - p.y) * (1.0 + p.y));
  }
  return pt;
}

}  // namespace wh
