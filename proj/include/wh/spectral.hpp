#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "wh/polynomial.hpp"

namespace wh {

struct SpectralPoint {
  double rho = 1.0;
  double v = 0.0;
  int lambda = 1;
};

enum class Branch { Minus, Plus };

Branch parse_branch(std::string_view s);
const char* branch_name(Branch b);
// "minus,plus", "-+", "mp" ...
std::vector<Branch> parse_branches(std::string_view s);
std::string branches_to_string(const std::vector<Branch>& b);

struct ZeroPair {
  cplx tau_in;
  cplx tau_out;
  cplx omega0;
  Branch branch = Branch::Minus;
};

struct PolePartition {
  std::vector<ZeroPair> pairs;
  std::vector<Branch> selection;
};

void require_engine_point(const SpectralPoint& pt);

cplx spectral_map(const SpectralPoint& pt, cplx tau);
// Numerator of omega - omega0 over 1/tau: -(rho/2) tau^2 + (v - omega0) tau + rho/2
Polynomial pair_polynomial(const SpectralPoint& pt, cplx omega0);
ZeroPair zero_pair_for(const SpectralPoint& pt, cplx omega0, Branch branch);

struct ComposedPolynomial {
  Polynomial num;
  int exponent = 0;
};
// p(omega(tau)) = num(tau) / tau^exponent
ComposedPolynomial compose_polynomial(const SpectralPoint& pt, const Polynomial& p);

PolePartition build_partition(const SpectralPoint& pt, const std::vector<cplx>& omega_zeros,
                              const std::vector<Branch>& branch_choices);

enum class ChartKind {
  Focal,   // v = u y, rho = sqrt((u^2 - s^2)(1 - y^2)), u > s
  Scaled,  // v = s u y, rho = s sqrt((u^2 - 1)(1 - y^2)), u > 1
};

struct Prolate {
  double u = 0.0;
  double y = 0.0;
};

Prolate prolate_from_weyl(const SpectralPoint& pt, double scale, ChartKind kind);
SpectralPoint weyl_from_prolate(const Prolate& p, double scale, ChartKind kind);

}  // namespace wh
