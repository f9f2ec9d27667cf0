#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "wh/linalg.hpp"
#include "wh/polynomial.hpp"
#include "wh/spectral.hpp"
#include "wh/tau_rational.hpp"

namespace wh {

// Denominator of one entry as lc * prod (omega - poles[k]) over the listed pole indices.
struct EntryDenominator {
  cplx lc = 1.0;
  std::vector<int> pole_index;
};

struct RationalMatrixOmega {
  std::string name;
  int n = 0;
  std::vector<int> eta;
  std::vector<RationalFunction> entries;  // row-major
  std::map<std::string, double> params;
  std::vector<cplx> poles;  // distinct denominator zeros, decreasing real part
  std::vector<EntryDenominator> dens;
  std::vector<Branch> default_branches;
  double scale = 1.0;

  const RationalFunction& at(int i, int j) const { return entries[static_cast<size_t>(i * n + j)]; }
  ComplexMatrix operator()(cplx omega) const;
};

RationalMatrixOmega model_identity(int n = 2);
RationalMatrixOmega model_kerr(double m, double a);
RationalMatrixOmega model_mp5d(double m, double a);
RationalMatrixOmega model_mvc5d(double m, double a);
RationalMatrixOmega model_by_name(const std::string& name, double m, double a);
std::vector<std::string> catalog_names();

// Cancels shared factors, locates and orders poles, then enforces det = 1,
// eta-symmetry and simple poles.
RationalMatrixOmega finalize_model(std::string name, int n, std::vector<int> eta,
                                   std::vector<RationalFunction> entries, std::map<std::string, double> params,
                                   std::vector<Branch> default_branches = {});

struct InvariantReport {
  double det_residual = 0.0;
  double symmetry_residual = 0.0;
};
InvariantReport check_model_invariants(const RationalMatrixOmega& m, int det_samples = 7, int sym_samples = 5,
                                       unsigned seed = 7);

RationalMatrixOmega parse_model_json(const nlohmann::json& j);
RationalMatrixOmega load_model_json(const std::string& path);
nlohmann::json model_to_json(const RationalMatrixOmega& m);

struct DegreeTable {
  int k11 = 0, k12 = 0, k22 = 0;
  int n = 0;
  int N1 = 0, N2 = 0;
  bool p12_zero = false;
};

// M = (tau^n / q_2n) * Mtilde with Mtilde_ij = p_ij~(tau) / tau^k_ij
struct NormalForm2x2 {
  Polynomial q, p11, p12, p22;      // in omega, q monic
  Polynomial qt, pt11, pt12, pt22;  // composed numerators in tau
  DegreeTable deg;
};

struct PoleLedgerEntry {
  int key;
  int partner;
  cplx location;
  int multiplicity;
  bool inside;
};

struct MonodromyMatrixTau {
  int n = 0;
  SpectralPoint pt;
  PolePartition partition;
  RationalMatrixTau entries;
  std::optional<NormalForm2x2> normal_form;
  std::vector<PoleLedgerEntry> ledger;
  bool pole_at_origin = false;
  bool pole_at_infinity = false;
  RationalMatrixOmega model;

  // Independent evaluation through the omega-plane model.
  ComplexMatrix operator()(cplx tau) const;
  std::vector<int> inside_keys() const;
};

std::optional<NormalForm2x2> normal_form_2x2(const RationalMatrixOmega& m, const SpectralPoint& pt);
MonodromyMatrixTau compose_monodromy(const RationalMatrixOmega& model, const SpectralPoint& pt,
                                     std::vector<Branch> branches = {});

}  // namespace wh
