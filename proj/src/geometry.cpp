#include "wh/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "wh/errors.hpp"

namespace wh {

Eigen::MatrixXd real_matrix(const ComplexMatrix& M, double tol) {
  const double scale = std::max(1.0, inf_norm(M));
  if (M.imag().cwiseAbs().maxCoeff() > tol * scale)
    fail(ErrorCode::NonPhysicalM, "M has a non-negligible imaginary part");
  return M.real();
}

MetricScalars4D extract_4d(const ComplexMatrix& M, int lambda) {
  if (M.rows() != 2 || M.cols() != 2) fail(ErrorCode::NonPhysicalM, "extract_4d needs a 2x2 matrix");
  const Eigen::MatrixXd R = real_matrix(M);
  if (!(R(1, 1) > 0.0)) fail(ErrorCode::NonPhysicalM, "M22 must be positive");
  MetricScalars4D s;
  s.Delta = 1.0 / R(1, 1);
  s.Btilde = R(0, 1) / R(1, 1);
  s.g_tt = -lambda * s.Delta;
  return s;
}

ComplexMatrix rebuild_4d(const MetricScalars4D& s) {
  ComplexMatrix M(2, 2);
  M << s.Delta + s.Btilde * s.Btilde / s.Delta, s.Btilde / s.Delta, s.Btilde / s.Delta, 1.0 / s.Delta;
  return M;
}

MetricScalars5D extract_5d(const ComplexMatrix& M) {
  if (M.rows() != 3 || M.cols() != 3) fail(ErrorCode::NonPhysicalM, "extract_5d needs a 3x3 matrix");
  const Eigen::MatrixXd R = real_matrix(M);
  const double e1 = R(0, 0);
  if (!(e1 > 0.0)) fail(ErrorCode::NonPhysicalM, "M11 must be positive");
  MetricScalars5D s;
  s.chi2 = R(0, 1) / e1;
  s.chi3 = R(0, 2) / e1;
  const double e2 = R(1, 1) + e1 * s.chi2 * s.chi2;
  if (!(e2 > 0.0)) fail(ErrorCode::NonPhysicalM, "exp(2 Sigma2) must be positive");
  s.chi1 = (R(1, 2) + e1 * s.chi2 * s.chi3) / e2;
  const double e3 = R(2, 2) + e2 * s.chi1 * s.chi1 - e1 * s.chi3 * s.chi3;
  if (!(e3 > 0.0)) fail(ErrorCode::NonPhysicalM, "exp(2 Sigma3) must be positive");
  s.Sigma1 = 0.5 * std::log(e1);
  s.Sigma2 = 0.5 * std::log(e2);
  s.Sigma3 = 0.5 * std::log(e3);
  s.g_tt = -e3 + e2 * s.chi1 * s.chi1;
  return s;
}

ComplexMatrix rebuild_5d(const MetricScalars5D& s) {
  const double e1 = std::exp(2.0 * s.Sigma1), e2 = std::exp(2.0 * s.Sigma2), e3 = std::exp(2.0 * s.Sigma3);
  ComplexMatrix M(3, 3);
  M << e1, e1 * s.chi2, e1 * s.chi3,                                            //
      -e1 * s.chi2, e2 - e1 * s.chi2 * s.chi2, e2 * s.chi1 - e1 * s.chi2 * s.chi3,  //
      e1 * s.chi3, -e2 * s.chi1 + e1 * s.chi2 * s.chi3, e3 - e2 * s.chi1 * s.chi1 + e1 * s.chi3 * s.chi3;
  return M;
}

ModelChart model_chart(const RationalMatrixOmega& model) {
  ModelChart c;
  c.scale = model.scale;
  if (model.name == "kerr") {
    c.kind = ChartKind::Focal;
    c.scale = model.params.at("c");
  } else if (model.name == "mp5d" || model.name == "mvc5d") {
    c.kind = ChartKind::Scaled;
    c.scale = model.params.at("alpha");
  }
  return c;
}

namespace {

bool mixed(const std::vector<Branch>& b) { return b.size() == 2 && b[0] != b[1]; }

double checked_sqrt(double x, const char* what) {
  if (!(x >= 0.0)) fail(ErrorCode::NoRealSolution, what);
  return std::sqrt(x);
}

}  // namespace

double ergosurface_closed_form(const std::string& model, double m, double a, double y,
                               const std::vector<Branch>& branches) {
  if (!(std::abs(y) <= 1.0)) fail(ErrorCode::NoRealSolution, "y must lie in [-1, 1]");
  double u = 0.0, umin = 1.0;
  if (model == "kerr") {
    if (!(m > a) || !(a >= 0.0)) fail(ErrorCode::ExtremalOrOverRotating, "Kerr model needs m > a >= 0");
    const double c = std::sqrt(m * m - a * a);
    umin = c;
    if (mixed(branches)) {
      if (a == 0.0) fail(ErrorCode::NoRealSolution, "mixed contour curve needs a > 0");
      u = (c / a) * checked_sqrt(m * m - c * c * y * y, "no real u for this y");
    } else {
      u = checked_sqrt(m * m - a * a * y * y, "no real u for this y");
    }
  } else if (model == "mp5d") {
    const double L = a * a / m;
    if (!(m > 0.0) || !(L < 2.0)) fail(ErrorCode::ParameterViolation, "MP model needs 2m - a^2 > 0");
    u = (2.0 - L * y) / (2.0 - L);
  } else if (model == "mvc5d") {
    if (!(m > 0.0) || !(2.0 * m - a * a > 0.0)) fail(ErrorCode::ParameterViolation, "mvc model needs 2m - a^2 > 0");
    const double alpha = (2.0 * m - a * a) / 4.0;
    u = checked_sqrt(y * y + m / (2.0 * alpha) * (1.0 - y * y), "no real u for this y");
  } else {
    fail(ErrorCode::NoRealSolution, "no closed-form curve for model '" + model + "'");
  }
  if (u < umin * (1.0 - 1e-14)) fail(ErrorCode::NoRealSolution, "curve leaves the exterior chart");
  return u;
}

SpectralPoint ergosurface_point(const std::string& model, double m, double a, double y,
                                const std::vector<Branch>& branches) {
  const double u = ergosurface_closed_form(model, m, a, y, branches);
  if (model == "kerr") return weyl_from_prolate({u, y}, std::sqrt(m * m - a * a), ChartKind::Focal);
  return weyl_from_prolate({u, y}, (2.0 * m - a * a) / 4.0, ChartKind::Scaled);
}

Spherical boyer_lindquist(double u, double y, double m) {
  if (!(std::abs(y) <= 1.0)) fail(ErrorCode::OutOfChart, "y must lie in [-1, 1]");
  return {u + m, std::acos(y)};
}

Spherical spherical_5d(double u, double y, double alpha) {
  if (!(std::abs(y) <= 1.0) || !(u >= -1.0) || !(alpha > 0.0)) fail(ErrorCode::OutOfChart, "point outside the 5D chart");
  return {std::sqrt(2.0 * alpha * (u + 1.0)), std::acos(std::sqrt(0.5 * (y + 1.0)))};
}

double g_tt_kerr(double r, double theta, double m, double a) {
  const double c2 = std::cos(theta) * std::cos(theta);
  return -(r * r - 2.0 * m * r + a * a * c2) / (r * r + a * a * c2);
}

double minus_g_tt_5d(double r, double theta, double m, double a) {
  const double c2 = std::cos(theta) * std::cos(theta);
  return 1.0 - 2.0 * m / (r * r + a * a * c2);
}


std::optional<double> outcome_g_tt(const FactorisationOutcome& out, int lambda) {
  if (out.status != Status::Canonical || !out.factors) return std::nullopt;
  try {
    const ComplexMatrix M = assemble_M(out);
    if (M.rows() == 2) return extract_4d(M, lambda).g_tt;
    if (M.rows() == 3) return extract_5d(M).g_tt;
  } catch (const Error&) {
  }
  return std::nullopt;
}

std::optional<double> g_tt_at(const Factoriser& f, const SpectralPoint& pt) {
  try {
    return outcome_g_tt(f.factorise(pt), pt.lambda);
  } catch (const Error&) {
    return std::nullopt;
  }
}

SpectralPoint curve_normal(const CurvePolyline& c, size_t k) {
  if (c.samples.size() < 2) fail(ErrorCode::NoCurveFound, "curve has fewer than two samples");
  const size_t a = k == 0 ? 0 : k - 1;
  const size_t b = std::min(k + 1, c.samples.size() - 1);
  const double dr = c.samples[b].rho - c.samples[a].rho, dv = c.samples[b].v - c.samples[a].v;
  const double n = std::hypot(dr, dv);
  return {-dv / n, dr / n, 1};
}

std::optional<double> locus_g_tt(const Factoriser& f, const CurvePolyline& c, size_t k, double delta) {
  const SpectralPoint n = curve_normal(c, k);
  const SpectralPoint& p = c.samples[k];
  for (double side : {1.0, -1.0}) {
    const double d = side * delta;
    const auto g1 = g_tt_at(f, {p.rho + d * n.rho, p.v + d * n.v, p.lambda});
    const auto g2 = g_tt_at(f, {p.rho + 2.0 * d * n.rho, p.v + 2.0 * d * n.v, p.lambda});
    if (g1 && g2) return 2.0 * *g1 - *g2;
  }
  return std::nullopt;
}

bool tag_ergosurface(const Factoriser& f, CurvePolyline& c, double tol, int probes) {
  c.ergosurface = false;
  if (c.samples.size() < 3 || probes < 1) return false;
  const double delta = 1e-5 * f.model().scale;
  for (int k = 1; k <= probes; ++k) {
    const size_t idx = c.samples.size() * static_cast<size_t>(k) / static_cast<size_t>(probes + 1);
    const auto g = locus_g_tt(f, c, idx, delta);
    if (!g || std::abs(*g) > tol) return false;
  }
  c.ergosurface = true;
  return true;
}

}  // namespace wh
