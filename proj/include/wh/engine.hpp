#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wh/linalg.hpp"
#include "wh/model.hpp"
#include "wh/tau_rational.hpp"

namespace wh {

enum class Case2x2 { AlwaysCanonical, DeterminantTest, ReducibleCase };
const char* case_name(Case2x2 c);

struct Classification {
  Case2x2 kind = Case2x2::DeterminantTest;
  int excess = 0;  // N1 + N2 - 2n
  std::string transcript;
};

Classification classify_degrees(const DegreeTable& d);
Classification classify_2x2(const MonodromyMatrixTau& mono);
// Case (i) kernel is trivial without solving; nullopt otherwise.
std::optional<int> fast_kernel_dim(const Classification& c);

// Rows: value then derivative at each inside zero; columns (alpha_0.., beta_0..).
ComplexMatrix existence_system_2x2(const MonodromyMatrixTau& mono);

struct RowLabel {
  int component;  // which analyticity function
  int key;        // pole key of the point
  int order;      // Taylor order
  bool operator==(const RowLabel& o) const { return component == o.component && key == o.key && order == o.order; }
};

struct ConstraintSystem {
  ComplexMatrix C;
  std::vector<RowLabel> labels;
  std::vector<double> row_scale;  // magnitude bound of each row's entries
  int unknowns = 0;
};

// Removes rows that vanish identically relative to their entry magnitudes.
void drop_structural_zeros(ConstraintSystem& s);
// Nullity after row and column equilibration.
int kernel_dimension(const ComplexMatrix& C, double rel_tol = 1e-9);

// Case (iii): vanishing of both Cramer numerators at the inside zeros and at 0.
ConstraintSystem reducible_system_2x2(const MonodromyMatrixTau& mono);

struct GenericAnsatz {
  std::vector<std::vector<TauPole>> pi;  // inside-pole polynomial of each row of psi_minus
  std::vector<int> unknowns;             // per row
  std::vector<int> offset;
  RationalMatrixTau adj;
  bool homogeneous = true;
};

struct GenericSystem {
  ConstraintSystem sys;
  GenericAnsatz ansatz;
  ComplexMatrix norm_rows;  // psi_plus(0) rows, inhomogeneous only
};

GenericSystem generic_constraints(const MonodromyMatrixTau& mono, bool homogeneous);

// Square row selection: per point, rows in label order that raise the rank.
struct DeterminantPlan {
  std::vector<RowLabel> rows;
  int unknowns = 0;
};
DeterminantPlan plan_determinant(const ConstraintSystem& s, double rel_tol = 1e-10);

struct DValue {
  cplx raw = 0.0;       // determinant of the square system
  cplx relative = 0.0;  // same with unit-norm rows
};
DValue plan_det(const ConstraintSystem& s, const DeterminantPlan& plan);

enum class EnginePath { TwoByTwo, Reducible, Generic, Trivial };
const char* path_name(EnginePath p);
EnginePath choose_path(const MonodromyMatrixTau& mono);

DValue compute_D(const MonodromyMatrixTau& mono, const DeterminantPlan* plan = nullptr);
int toeplitz_kernel_dim(const MonodromyMatrixTau& mono, double rel_tol = 1e-9);

// tau^power / (leading * prod over pairs (tau - tau_in)(tau - tau_out))
struct ScalarSymbol {
  int power = 0;
  cplx leading = 1.0;
};
struct ScalarFactors {
  TauRational minus;
  TauRational plus;
  cplx minus_at_infinity = 1.0;
};
ScalarFactors scalar_factorise(const ScalarSymbol& s, const PolePartition& part);
cplx scalar_symbol_eval(const ScalarSymbol& s, const PolePartition& part, cplx tau);

struct Factors {
  RationalMatrixTau x_inverse;  // columns psi_plus, outside poles only
  RationalMatrixTau x;
  RationalMatrixTau m_minus;    // inside poles only
  ComplexMatrix limit;          // lim tau -> infinity of m_minus
  double analyticity_residual = 0.0;
  double solve_residual = 0.0;
};

Factors solve_factor_columns_2x2(const MonodromyMatrixTau& mono);
Factors solve_factor_columns_generic(const MonodromyMatrixTau& mono);

enum class Status { Canonical, NonCanonical, Degenerate };
const char* status_name(Status s);

struct ResidualReport {
  double factorisation = 0.0;  // max_tau ||M - M_minus X|| / ||M||
  double x_at_zero = 0.0;      // ||X(0) - I||
  double det_x = 0.0;
  double det_m_minus = 0.0;
  double analyticity = 0.0;
  double solve = 0.0;
  double limit_cross_check = 0.0;
  int check_points = 0;
};

struct EngineOptions {
  double tol = 1e-9;       // relative D threshold
  double rank_tol = 1e-9;  // singular value threshold
  bool force_generic = false;
  bool verify = true;
};

struct FactorisationOutcome {
  Status status = Status::Degenerate;
  EnginePath path = EnginePath::Generic;
  cplx D_value = 0.0;
  double D_relative = 0.0;
  int kernel_dim = 0;
  std::optional<Factors> factors;
  ComplexMatrix M_limit;
  ResidualReport residuals;
  std::string note;
};

std::vector<cplx> check_points(const MonodromyMatrixTau& mono, int count = 12);
ResidualReport check_factors(const MonodromyMatrixTau& mono, const Factors& f, int count = 12);
ComplexMatrix richardson_limit(const RationalMatrixTau& m_minus);
ComplexMatrix assemble_M(const FactorisationOutcome& out);

// Immutable per (model, branches); caches the determinant row plan and phase.
class Factoriser {
 public:
  Factoriser(RationalMatrixOmega model, std::vector<Branch> branches = {}, EngineOptions opts = {});

  const RationalMatrixOmega& model() const { return model_; }
  const std::vector<Branch>& branches() const { return branches_; }
  const EngineOptions& options() const { return opts_; }
  EnginePath path() const { return path_; }
  const SpectralPoint& reference() const { return ref_; }

  MonodromyMatrixTau compose(const SpectralPoint& pt) const;
  DValue D(const SpectralPoint& pt) const;
  // Re(D_rel * conj(phase at the reference point))
  double signed_D(const SpectralPoint& pt) const;
  int kernel_dim(const SpectralPoint& pt) const;
  FactorisationOutcome factorise(const SpectralPoint& pt) const;

 private:
  RationalMatrixOmega model_;
  std::vector<Branch> branches_;
  EngineOptions opts_;
  EnginePath path_ = EnginePath::Generic;
  std::optional<DeterminantPlan> plan_;
  SpectralPoint ref_;
  cplx phase_ = 1.0;
};

}  // namespace wh
