#pragma once

#include "wh/geometry.hpp"
#include "wh/linalg.hpp"
#include "wh/spectral.hpp"

namespace wh::oracle {

// Kerr exterior solution in the focal prolate chart.
MetricScalars4D kerr_scalars(double m, double a, const SpectralPoint& pt);
ComplexMatrix kerr_M(double m, double a, const SpectralPoint& pt);

// Factors f and h of the Kerr existence determinant, built from the minus roots.
struct KerrFH {
  cplx f, h;
};
KerrFH kerr_f_h(double m, double a, const SpectralPoint& pt);

// Myers-Perry closed form with one angular momentum.
ComplexMatrix mp_M(double m, double a, const SpectralPoint& pt);

// Closed form of the vacuum 5D solution with plus-branch roots.
ComplexMatrix mvc_M(double m, double a, const SpectralPoint& pt);
double mvc_minus_g_tt(double m, double a, const SpectralPoint& pt);
double mvc_e2sigma1(double m, double a, const SpectralPoint& pt);

// Closed-form M of a catalog model with its default contour; throws for other models.
ComplexMatrix catalog_M(const std::string& model, double m, double a, const SpectralPoint& pt);
bool has_closed_form(const std::string& model);

// Closed-form curve sampled so its polyline resolves both axis endpoints, restricted to rho >= floor.
std::vector<SpectralPoint> curve_polyline(const std::string& model, double m, double a,
                                          const std::vector<Branch>& branches, double rho_floor, int n = 4000);

}  // namespace wh::oracle
