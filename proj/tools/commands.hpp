#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "wh/engine.hpp"
#include "wh/geometry.hpp"

namespace wh::cli {

inline constexpr int kSchemaVersion = 1;

enum Exit { kOk = 0, kError = 1, kNonCanonical = 3 };

struct GridSpec {
  double rmin = 0.0, rmax = 0.0;
  int nr = 0;
  double vmin = 0.0, vmax = 0.0;
  int nv = 0;
};
// "rmin:rmax:n,vmin:vmax:n"
GridSpec parse_grid(const std::string& s);

struct RunConfig {
  std::string model;  // empty: kerr, or the whole catalog for verify
  std::string model_json;
  double m = 2.0;
  double a = 1.0;
  std::string branches;
  std::optional<double> rho, v;
  std::optional<std::string> grid;
  double tol = 1e-9;
  std::string out;
  std::string format;
  int jobs = 1;
  std::string suite;
};

// Tolerance default from WH_ERGO_TOL when set.
double default_tolerance();
void apply_config_json(RunConfig& cfg, const nlohmann::json& j);
void validate(const RunConfig& cfg);

RationalMatrixOmega load_model(const RunConfig& cfg);
std::vector<Branch> branch_choice(const RunConfig& cfg);

nlohmann::json matrix_json(const ComplexMatrix& M);
nlohmann::json factorize_report(const Factoriser& f, const SpectralPoint& pt);

int cmd_factorize(const RunConfig& cfg, std::ostream& out);
int cmd_sweep(const RunConfig& cfg, std::ostream& out);
int cmd_curve(const RunConfig& cfg, std::ostream& out);
int cmd_verify(const RunConfig& cfg, std::ostream& out);
int cmd_catalog(const RunConfig& cfg, std::ostream& out);

struct SuiteResult {
  std::string name;
  std::string model;
  double max_residual = 0.0;
  double threshold = 0.0;
  int samples = 0;
  bool pass = true;
  std::string detail;
};
std::vector<std::string> suite_names();
std::vector<SuiteResult> run_suites(const RunConfig& cfg);

// Full command line; writes to out/err and returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wh::cli
