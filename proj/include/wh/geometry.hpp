#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wh/engine.hpp"
#include "wh/linalg.hpp"
#include "wh/spectral.hpp"

namespace wh {

struct MetricScalars4D {
  double Delta = 1.0;
  double Btilde = 0.0;
  double g_tt = -1.0;
};

struct MetricScalars5D {
  double Sigma1 = 0.0, Sigma2 = 0.0, Sigma3 = 0.0;
  double chi1 = 0.0, chi2 = 0.0, chi3 = 0.0;
  double g_tt = -1.0;
};

// Real part of M after checking the imaginary part is at most tol * max(1, |M|).
Eigen::MatrixXd real_matrix(const ComplexMatrix& M, double tol = 1e-9);

MetricScalars4D extract_4d(const ComplexMatrix& M, int lambda = 1);
ComplexMatrix rebuild_4d(const MetricScalars4D& s);
MetricScalars5D extract_5d(const ComplexMatrix& M);
ComplexMatrix rebuild_5d(const MetricScalars5D& s);

// Chart used by each catalog model for its closed-form curve.
struct ModelChart {
  ChartKind kind = ChartKind::Focal;
  double scale = 1.0;
};
ModelChart model_chart(const RationalMatrixOmega& model);

// u(y) of the factorisation-failure curve; branches pick the Kerr contour variant.
double ergosurface_closed_form(const std::string& model, double m, double a, double y,
                               const std::vector<Branch>& branches = {});
SpectralPoint ergosurface_point(const std::string& model, double m, double a, double y,
                                const std::vector<Branch>& branches = {});

struct Spherical {
  double r = 0.0;
  double theta = 0.0;
};
Spherical boyer_lindquist(double u, double y, double m);
Spherical spherical_5d(double u, double y, double alpha);
double g_tt_kerr(double r, double theta, double m, double a);
// -g_tt of the 5D solutions: 1 - 2m / (r^2 + a^2 cos^2 theta)
double minus_g_tt_5d(double r, double theta, double m, double a);

struct CurvePolyline {
  std::vector<SpectralPoint> samples;
  std::vector<double> abs_D;  // relative |D| at each sample
  std::string parameter = "arc";
  bool ergosurface = false;
};

struct TraceOptions {
  double rho_min = 0.0, rho_max = 4.0;
  double v_min = -4.0, v_max = 4.0;
  int nrho = 200, nv = 200;
  double max_segment = 4e-3;
  double rho_floor = 5e-3;
  double root_tol = 1e-13;
};

// Zero set of the signed determinant in the box; one polyline per connected chain.
std::vector<CurvePolyline> trace_curve(const Factoriser& f, const TraceOptions& opts);

// g_tt of a canonical outcome (4D for 2x2, 5D for 3x3); nullopt when unavailable.
std::optional<double> outcome_g_tt(const FactorisationOutcome& out, int lambda = 1);
std::optional<double> g_tt_at(const Factoriser& f, const SpectralPoint& pt);

// Unit normal to the polyline at sample k.
SpectralPoint curve_normal(const CurvePolyline& c, size_t k);
// g_tt on the locus at sample k, extrapolated linearly from delta and 2 delta along the normal
// on the first side where the metric can be extracted.
std::optional<double> locus_g_tt(const Factoriser& f, const CurvePolyline& c, size_t k, double delta);
// Sets c.ergosurface when g_tt vanishes at every interior probe to within tol.
bool tag_ergosurface(const Factoriser& f, CurvePolyline& c, double tol = 1e-6, int probes = 7);

// Symmetric point-to-segment Hausdorff distance in the (rho, v) plane.
double hausdorff_distance(const std::vector<SpectralPoint>& a, const std::vector<SpectralPoint>& b);

}  // namespace wh
