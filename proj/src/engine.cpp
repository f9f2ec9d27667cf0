#include <algorithm>
#include <cmath>

#include "wh/engine.hpp"
#include "wh/errors.hpp"

namespace wh {

const char* path_name(EnginePath p) {
  switch (p) {
    case EnginePath::TwoByTwo: return "2x2";
    case EnginePath::Reducible: return "reducible";
    case EnginePath::Generic: return "generic";
    case EnginePath::Trivial: return "trivial";
  }
  return "?";
}

const char* status_name(Status s) {
  switch (s) {
    case Status::Canonical: return "canonical";
    case Status::NonCanonical: return "non_canonical";
    case Status::Degenerate: return "degenerate";
  }
  return "?";
}

EnginePath choose_path(const MonodromyMatrixTau& mono) {
  if (mono.model.poles.empty()) return EnginePath::Trivial;
  if (mono.normal_form && !mono.normal_form->deg.p12_zero) {
    switch (classify_2x2(mono).kind) {
      case Case2x2::DeterminantTest: return EnginePath::TwoByTwo;
      case Case2x2::ReducibleCase: return EnginePath::Reducible;
      case Case2x2::AlwaysCanonical: return EnginePath::Generic;
    }
  }
  return EnginePath::Generic;
}

namespace {

ConstraintSystem determinant_system(const MonodromyMatrixTau& mono, EnginePath path) {
  if (path == EnginePath::Reducible) return reducible_system_2x2(mono);
  return generic_constraints(mono, true).sys;
}

DValue square_det(const ComplexMatrix& A) {
  if (A.rows() == 0) return {1.0, 1.0};
  return {dense_det(A), dense_det(equilibrate_rows(A))};
}

DValue path_D(const MonodromyMatrixTau& mono, EnginePath path, const DeterminantPlan* plan) {
  if (path == EnginePath::TwoByTwo) return square_det(existence_system_2x2(mono));
  if (path == EnginePath::Trivial) return {1.0, 1.0};
  if (path == EnginePath::Generic && mono.normal_form && !mono.normal_form->deg.p12_zero &&
      classify_2x2(mono).kind == Case2x2::AlwaysCanonical)
    return {1.0, 1.0};
  const ConstraintSystem s = determinant_system(mono, path);
  if (plan) return plan_det(s, *plan);
  return plan_det(s, plan_determinant(s));
}

int path_kernel(const MonodromyMatrixTau& mono, EnginePath path, double rel_tol) {
  if (path == EnginePath::Trivial) return 0;
  if (mono.normal_form && !mono.normal_form->deg.p12_zero) {
    if (auto k = fast_kernel_dim(classify_2x2(mono))) return *k;
  }
  if (path == EnginePath::TwoByTwo) return kernel_dimension(existence_system_2x2(mono), rel_tol);
  return kernel_dimension(determinant_system(mono, path).C, rel_tol);
}

double rel_norm(const ComplexMatrix& A, const ComplexMatrix& B) {
  return inf_norm(A - B) / std::max(1e-300, inf_norm(B));
}

}  // namespace

DValue compute_D(const MonodromyMatrixTau& mono, const DeterminantPlan* plan) {
  return path_D(mono, choose_path(mono), plan);
}

int toeplitz_kernel_dim(const MonodromyMatrixTau& mono, double rel_tol) {
  return path_kernel(mono, choose_path(mono), rel_tol);
}

std::vector<cplx> check_points(const MonodromyMatrixTau& mono, int count) {
  double max_in = 0.0, min_out = INFINITY;
  std::vector<cplx> poles;
  for (const auto& zp : mono.partition.pairs) {
    max_in = std::max(max_in, std::abs(zp.tau_in));
    min_out = std::min(min_out, std::abs(zp.tau_out));
    poles.push_back(zp.tau_in);
    poles.push_back(zp.tau_out);
  }
  double r = 1.0;
  if (!(max_in < 1.0 && min_out > 1.0) && max_in < min_out) r = std::sqrt(max_in * min_out);
  const double pi = std::acos(-1.0);
  std::vector<cplx> pts;
  for (int k = 0; k < count; ++k) {
    double th = 2.0 * pi * k / count + 0.1;
    cplx t = std::polar(r, th);
    for (int tries = 0; tries < 20; ++tries) {
      bool near = false;
      for (const auto& p : poles)
        if (std::abs(t - p) < 1e-3 * r) near = true;
      if (!near) break;
      th += 0.37 / count;
      t = std::polar(r, th);
    }
    pts.push_back(t);
  }
  return pts;
}

ComplexMatrix richardson_limit(const RationalMatrixTau& m_minus) {
  // quadratic extrapolation in h = 1/|tau| to h = 0 from |tau| = 1e3, 1e4, 1e6
  const cplx dir = std::polar(1.0, 0.3);
  const double h[3] = {1e-3, 1e-4, 1e-6};
  ComplexMatrix f[3];
  for (int k = 0; k < 3; ++k) f[k] = m_minus(dir / h[k]);
  ComplexMatrix out = ComplexMatrix::Zero(f[0].rows(), f[0].cols());
  for (int k = 0; k < 3; ++k) {
    double w = 1.0;
    for (int j = 0; j < 3; ++j)
      if (j != k) w *= (0.0 - h[j]) / (h[k] - h[j]);
    out += w * f[k];
  }
  return out;
}

ResidualReport check_factors(const MonodromyMatrixTau& mono, const Factors& f, int count) {
  ResidualReport r;
  const int n = mono.n;
  const ComplexMatrix I = ComplexMatrix::Identity(n, n);
  for (const auto& t : check_points(mono, count)) {
    const ComplexMatrix M = mono(t);
    const ComplexMatrix Mm = f.m_minus(t);
    const ComplexMatrix X = f.x(t);
    r.factorisation = std::max(r.factorisation, rel_norm(Mm * X, M));
    r.det_x = std::max(r.det_x, std::abs(dense_det(X) - 1.0));
    r.det_m_minus = std::max(r.det_m_minus, std::abs(dense_det(Mm) - 1.0));
  }
  r.check_points = count;
  r.x_at_zero = inf_norm(f.x(0.0) - I);
  r.analyticity = f.analyticity_residual;
  r.solve = f.solve_residual;
  r.limit_cross_check = rel_norm(richardson_limit(f.m_minus), f.limit);
  return r;
}

ComplexMatrix assemble_M(const FactorisationOutcome& out) {
  if (out.status != Status::Canonical || !out.factors)
    fail(ErrorCode::NotCanonical, "no canonical factorisation at this point");
  const ComplexMatrix rich = richardson_limit(out.factors->m_minus);
  if (rel_norm(rich, out.factors->limit) > 1e-8)
    fail(ErrorCode::NotCanonical, "limit of the minus factor disagrees with its extrapolation");
  return out.factors->limit;
}

Factoriser::Factoriser(RationalMatrixOmega model, std::vector<Branch> branches, EngineOptions opts)
    : model_(std::move(model)), branches_(std::move(branches)), opts_(opts) {
  if (branches_.empty()) branches_ = model_.default_branches;
  const double s = model_.scale;
  const SpectralPoint candidates[] = {{2.7 * s, 0.35 * s}, {1.9 * s, -1.3 * s}, {3.6 * s, 1.7 * s},
                                      {1.2 * s, 2.4 * s},  {4.4 * s, -0.6 * s}, {0.8 * s, -2.9 * s}};
  double best = -1.0;
  bool have_path = false;
  for (const auto& c : candidates) {
    try {
      const MonodromyMatrixTau mono = compose_monodromy(model_, c, branches_);
      EnginePath p = opts_.force_generic ? EnginePath::Generic : choose_path(mono);
      std::optional<DeterminantPlan> plan;
      if (p == EnginePath::Generic || p == EnginePath::Reducible) {
        const bool fast = p == EnginePath::Generic && mono.normal_form && !mono.normal_form->deg.p12_zero &&
                          classify_2x2(mono).kind == Case2x2::AlwaysCanonical;
        if (!fast) plan = plan_determinant(determinant_system(mono, p));
      }
      const DValue d = path_D(mono, p, plan ? &*plan : nullptr);
      const double mag = std::abs(d.relative);
      if (!have_path || mag > best) {
        best = mag;
        path_ = p;
        plan_ = plan;
        ref_ = c;
        phase_ = mag > 0.0 ? d.relative / mag : cplx(1.0);
        have_path = true;
      }
    } catch (const Error&) {
    }
  }
  if (!have_path) fail(ErrorCode::InvariantViolation, "no usable reference point for model '" + model_.name + "'");
}

MonodromyMatrixTau Factoriser::compose(const SpectralPoint& pt) const {
  return compose_monodromy(model_, pt, branches_);
}

DValue Factoriser::D(const SpectralPoint& pt) const {
  return path_D(compose(pt), path_, plan_ ? &*plan_ : nullptr);
}

double Factoriser::signed_D(const SpectralPoint& pt) const {
  return std::real(D(pt).relative * std::conj(phase_));
}

int Factoriser::kernel_dim(const SpectralPoint& pt) const {
  return path_kernel(compose(pt), path_, opts_.rank_tol);
}

FactorisationOutcome Factoriser::factorise(const SpectralPoint& pt) const {
  const MonodromyMatrixTau mono = compose(pt);
  FactorisationOutcome out;
  out.path = path_;
  const DValue d = path_D(mono, path_, plan_ ? &*plan_ : nullptr);
  out.D_value = d.raw;
  out.D_relative = std::abs(d.relative);
  if (out.D_relative < opts_.tol) {
    out.status = Status::Degenerate;
    out.kernel_dim = path_kernel(mono, path_, opts_.rank_tol);
    out.note = "determinant below tolerance";
    return out;
  }
  out.kernel_dim = path_kernel(mono, path_, opts_.rank_tol);
  if (out.kernel_dim > 0) {
    out.status = Status::NonCanonical;
    out.note = "nontrivial kernel";
    return out;
  }
  try {
    Factors f = path_ == EnginePath::TwoByTwo ? solve_factor_columns_2x2(mono) : solve_factor_columns_generic(mono);
    if (opts_.verify) out.residuals = check_factors(mono, f);
    out.M_limit = f.limit;
    out.factors = std::move(f);
    out.status = Status::Canonical;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SingularSystem) throw;
    out.status = Status::NonCanonical;
    out.kernel_dim = std::max(out.kernel_dim, 1);
    out.note = e.what();
  }
  return out;
}

}  // namespace wh
