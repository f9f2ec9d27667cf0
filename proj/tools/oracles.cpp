#include "oracles.hpp"

#include <cmath>

#include "wh/errors.hpp"

namespace wh::oracle {

namespace {

double alpha_of(double m, double a) { return (2.0 * m - a * a) / 4.0; }

double root(const SpectralPoint& pt, double w0, bool plus) {
  const double x = pt.v - w0;
  const double s = std::hypot(x, pt.rho);
  return (plus ? x + s : x - s) / pt.rho;
}

}  // namespace

MetricScalars4D kerr_scalars(double m, double a, const SpectralPoint& pt) {
  const double c = std::sqrt(m * m - a * a);
  const Prolate p = prolate_from_weyl(pt, c, ChartKind::Focal);
  const double u = p.u, y = p.y;
  const double den = (u + m) * (u + m) + a * a * y * y;
  MetricScalars4D s;
  s.Delta = (u * u - m * m + a * a * y * y) / den;
  s.Btilde = 2.0 * a * m * y / den;
  s.g_tt = -s.Delta;
  return s;
}

ComplexMatrix kerr_M(double m, double a, const SpectralPoint& pt) { return rebuild_4d(kerr_scalars(m, a, pt)); }

KerrFH kerr_f_h(double m, double a, const SpectralPoint& pt) {
  const double c = std::sqrt(m * m - a * a);
  const cplx t1 = root(pt, c, false), t2 = root(pt, -c, false);
  const double rho = pt.rho, w = m - pt.v;
  KerrFH r;
  r.f = a * a * m * m / 4.0 * rho * rho * std::pow(t1 - t2, 4);
  r.h = -16.0 * w * w * t1 * t1 * t2 * t2 +
        rho * rho *
            (1.0 + 4.0 * std::pow(t1, 3) * t2 + 6.0 * t1 * t1 * t2 * t2 + 4.0 * t1 * std::pow(t2, 3) +
             std::pow(t1, 4) * std::pow(t2, 4)) -
        8.0 * rho * w * t1 * t2 * (-t1 - t2 + t1 * t1 * t2 + t1 * t2 * t2);
  return r;
}

ComplexMatrix mp_M(double m, double a, const SpectralPoint& pt) {
  const double al = alpha_of(m, a), L = a * a / m;
  const double R1 = std::hypot(pt.rho, pt.v + al), R2 = std::hypot(pt.rho, pt.v - al);
  const double e2 = R1 + pt.v + al;
  const double den = R1 + R2 * (1.0 - L) + 2.0 * al;
  const double e3 = (R1 + R2 * (1.0 - L) - 2.0 * al) / den;
  const double e1 = 1.0 / (e2 * e3);
  const double chi3 = a * (R1 - R2 + 2.0 * al) / den;
  ComplexMatrix M = ComplexMatrix::Zero(3, 3);
  M(0, 0) = e1;
  M(0, 2) = M(2, 0) = e1 * chi3;
  M(1, 1) = e2;
  M(2, 2) = e3 + e1 * chi3 * chi3;
  return M;
}

ComplexMatrix mvc_M(double m, double a, const SpectralPoint& pt) {
  const double al = alpha_of(m, a), rho = pt.rho;
  const double ta = root(pt, al, true), tm = root(pt, -al, true);
  const double tta = -1.0 / ta, ttm = -1.0 / tm;
  const double D = tm / rho * (2.0 / (tm - ttm) - (-(ta - tta) / (m * (ta - ttm))) * (-a * a / (tm - tta)));
  const double A11 = 4.0 * tm * (ta - tta) / (m * rho * rho * (tm - ttm) * (ta - ttm) * D) *
                     (2.0 * m / (ta - tta) - a * a / (tm - tta));
  const double A13 = -4.0 * a * tm / (rho * rho * (tm - tta) * D) * (1.0 / (tm - ttm) - 1.0 / (ta - ttm));
  const double A12 = 1.0 + m / 4.0 * A11 - a / 2.0 * A13;
  const double A33 = 1.0 / (m * rho * D) *
                     (2.0 * m / (tm - ttm) * (ta - a * a * tm / (rho * (tm - tta))) -
                      a * a * tm / ((tm - tta) * (ta - ttm)) * (ta - tta - 2.0 * m / rho));
  const double A32 = a / 2.0 + m / 4.0 * A13 - a / 2.0 * A33;
  ComplexMatrix M(3, 3);
  M << A11, A12, A13,                                                                                   //
      -1.0 - m / 4.0 * A11 + a / 2.0 * A13, m / 4.0 - m / 4.0 * A12 + a / 2.0 * A32,                     //
      -a / 2.0 - m / 4.0 * A13 + a / 2.0 * A33,                                                         //
      A13, A32, A33;
  return M;
}

double mvc_minus_g_tt(double m, double a, const SpectralPoint& pt) {
  const double al = alpha_of(m, a);
  const Prolate p = prolate_from_weyl(pt, al, ChartKind::Scaled);
  const double k = m / (2.0 * al);
  return (p.u - p.y - k * (1.0 - p.y)) / (p.u - p.y + k * (1.0 + p.y));
}

double mvc_e2sigma1(double m, double a, const SpectralPoint& pt) {
  const double al = alpha_of(m, a);
  const Prolate p = prolate_from_weyl(pt, al, ChartKind::Scaled);
  const double k = m / (2.0 * al);
  return 2.0 / al * (p.u - p.y + k * (1.0 + p.y)) / (p.u * p.u - p.y * p.y - k * (1.0 - p.y * p.y));
}

bool has_closed_form(const std::string& model) {
  return model == "identity" || model == "identity3" || model == "kerr" || model == "mp5d" || model == "mvc5d";
}

ComplexMatrix catalog_M(const std::string& model, double m, double a, const SpectralPoint& pt) {
  if (model == "identity") return ComplexMatrix::Identity(2, 2);
  if (model == "identity3") return ComplexMatrix::Identity(3, 3);
  if (model == "kerr") return kerr_M(m, a, pt);
  if (model == "mp5d") return mp_M(m, a, pt);
  if (model == "mvc5d") return mvc_M(m, a, pt);
  fail(ErrorCode::Usage, "no closed form for model '" + model + "'");
}

std::vector<SpectralPoint> curve_polyline(const std::string& model, double m, double a,
                                          const std::vector<Branch>& branches, double rho_floor, int n) {
  auto rho = [&](double y) { return ergosurface_point(model, m, a, y, branches).rho; };
  // last y on each side with rho above the floor
  auto edge = [&](double inside, double outside) {
    for (int k = 0; k < 200; ++k) {
      const double mid = 0.5 * (inside + outside);
      if (rho(mid) > rho_floor) inside = mid;
      else outside = mid;
    }
    return inside;
  };
  const double th0 = std::asin(edge(0.0, -1.0)), th1 = std::asin(edge(0.0, 1.0));
  std::vector<SpectralPoint> out;
  for (int k = 0; k <= n; ++k) out.push_back(ergosurface_point(model, m, a, std::sin(th0 + (th1 - th0) * k / n), branches));
  return out;
}

}  // namespace wh::oracle
