#include "commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "CLI11.hpp"

#include "oracles.hpp"
#include "wh/errors.hpp"
#include "wh/model.hpp"

namespace wh::cli {

namespace {

std::string num(double x) { return fmt::format("{:.17g}", x); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    const double x = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return x;
  } catch (const std::exception&) {
    fail(ErrorCode::Usage, "cannot parse " + what + " '" + s + "'");
  }
}

int parse_int(const std::string& s, const std::string& what) {
  const double x = parse_double(s, what);
  if (x != std::floor(x)) fail(ErrorCode::Usage, what + " must be an integer");
  return static_cast<int>(x);
}

std::string params_string(const RationalMatrixOmega& m) {
  std::string s;
  for (const auto& [k, v] : m.params) s += (s.empty() ? "" : ",") + k + "=" + num(v);
  return s;
}

void csv_preamble(std::ostream& out, const std::string& command, const Factoriser& f) {
  out << "# schema_version: " << kSchemaVersion << "\n";
  out << "# command: " << command << "\n";
  out << "# model: " << f.model().name << "\n";
  out << "# params: " << params_string(f.model()) << "\n";
  out << "# branches: " << branches_to_string(f.branches()) << "\n";
}

EngineOptions engine_options(const RunConfig& cfg, bool verify) {
  EngineOptions o;
  o.tol = cfg.tol;
  o.verify = verify;
  return o;
}

struct Sink {
  std::ofstream file;
  std::ostream* os;
  Sink(const std::string& path, std::ostream& fallback) : os(&fallback) {
    if (path.empty()) return;
    file.open(path);
    if (!file) fail(ErrorCode::Usage, "cannot open output file '" + path + "'");
    os = &file;
  }
};

}  // namespace

GridSpec parse_grid(const std::string& s) {
  if (s.empty()) fail(ErrorCode::Usage, "empty grid spec");
  const auto axes = split(s, ',');
  if (axes.size() != 2) fail(ErrorCode::Usage, "grid spec must be rmin:rmax:n,vmin:vmax:n");
  const auto r = split(axes[0], ':'), v = split(axes[1], ':');
  if (r.size() != 3 || v.size() != 3) fail(ErrorCode::Usage, "grid spec must be rmin:rmax:n,vmin:vmax:n");
  GridSpec g;
  g.rmin = parse_double(r[0], "rmin");
  g.rmax = parse_double(r[1], "rmax");
  g.nr = parse_int(r[2], "rho resolution");
  g.vmin = parse_double(v[0], "vmin");
  g.vmax = parse_double(v[1], "vmax");
  g.nv = parse_int(v[2], "v resolution");
  if (g.nr < 2 || g.nv < 2) fail(ErrorCode::Usage, "grid resolution must be at least 2x2");
  if (!(g.rmin > 0.0) || !(g.rmax > g.rmin)) fail(ErrorCode::Usage, "rho range must be positive and increasing");
  if (!(g.vmax > g.vmin)) fail(ErrorCode::Usage, "v range must be increasing");
  return g;
}

double default_tolerance() {
  if (const char* env = std::getenv("WH_ERGO_TOL"); env && *env) return parse_double(env, "WH_ERGO_TOL");
  return 1e-9;
}

void apply_config_json(RunConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) fail(ErrorCode::SchemaError, "config must be a JSON object");
  for (const auto& [key, val] : j.items()) {
    if (key == "model") cfg.model = val.get<std::string>();
    else if (key == "model_json") cfg.model_json = val.get<std::string>();
    else if (key == "m") cfg.m = val.get<double>();
    else if (key == "a") cfg.a = val.get<double>();
    else if (key == "branches") cfg.branches = val.get<std::string>();
    else if (key == "rho") cfg.rho = val.get<double>();
    else if (key == "v") cfg.v = val.get<double>();
    else if (key == "grid") cfg.grid = val.get<std::string>();
    else if (key == "tol") cfg.tol = val.get<double>();
    else if (key == "out") cfg.out = val.get<std::string>();
    else if (key == "format") cfg.format = val.get<std::string>();
    else if (key == "jobs") cfg.jobs = val.get<int>();
    else if (key == "suite") cfg.suite = val.get<std::string>();
    else fail(ErrorCode::SchemaError, "unknown config key '" + key + "'");
  }
}

void validate(const RunConfig& cfg) {
  if (!(cfg.tol > 0.0)) fail(ErrorCode::Usage, "tolerance must be positive");
  if (cfg.jobs < 1) fail(ErrorCode::Usage, "jobs must be at least 1");
  if (!cfg.format.empty() && cfg.format != "csv" && cfg.format != "json")
    fail(ErrorCode::Usage, "format must be csv or json");
}

RationalMatrixOmega load_model(const RunConfig& cfg) {
  if (!cfg.model_json.empty()) return load_model_json(cfg.model_json);
  return model_by_name(cfg.model.empty() ? "kerr" : cfg.model, cfg.m, cfg.a);
}

std::vector<Branch> branch_choice(const RunConfig& cfg) {
  if (cfg.branches.empty()) return {};
  return parse_branches(cfg.branches);
}

nlohmann::json matrix_json(const ComplexMatrix& M) {
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    nlohmann::json r = nlohmann::json::array(), c = nlohmann::json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      r.push_back(M(i, j).real());
      c.push_back(M(i, j).imag());
    }
    re.push_back(r);
    im.push_back(c);
  }
  return {{"re", re}, {"im", im}};
}

nlohmann::json factorize_report(const Factoriser& f, const SpectralPoint& pt) {
  nlohmann::json r;
  r["schema_version"] = kSchemaVersion;
  r["command"] = "factorize";
  r["model"] = f.model().name;
  r["params"] = f.model().params;
  r["branches"] = branches_to_string(f.branches());
  r["point"] = {{"rho", pt.rho}, {"v", pt.v}};
  const FactorisationOutcome out = f.factorise(pt);
  r["status"] = status_name(out.status);
  r["path"] = path_name(out.path);
  r["D"] = {{"re", out.D_value.real()}, {"im", out.D_value.imag()}, {"relative", out.D_relative}};
  r["kernel_dim"] = out.kernel_dim;
  if (!out.note.empty()) r["note"] = out.note;
  if (out.status == Status::Canonical) {
    const ComplexMatrix M = assemble_M(out);
    r["M_limit"] = matrix_json(M);
    try {
      if (M.rows() == 2) {
        const auto s = extract_4d(M, pt.lambda);
        r["metric"] = {{"Delta", s.Delta}, {"Btilde", s.Btilde}, {"g_tt", s.g_tt}};
      } else if (M.rows() == 3) {
        const auto s = extract_5d(M);
        r["metric"] = {{"Sigma1", s.Sigma1}, {"Sigma2", s.Sigma2}, {"Sigma3", s.Sigma3}, {"chi1", s.chi1},
                       {"chi2", s.chi2},     {"chi3", s.chi3},     {"g_tt", s.g_tt}};
      }
    } catch (const Error& e) {
      r["metric"] = {{"error", error_name(e.code())}, {"message", e.what()}};
    }
    const auto& res = out.residuals;
    r["residual_report"] = {{"factorisation", res.factorisation}, {"x_at_zero", res.x_at_zero},
                            {"det_x", res.det_x},                 {"det_m_minus", res.det_m_minus},
                            {"analyticity", res.analyticity},     {"solve", res.solve},
                            {"limit_cross_check", res.limit_cross_check}, {"check_points", res.check_points}};
  }
  return r;
}

int cmd_factorize(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.rho || !cfg.v) fail(ErrorCode::Usage, "factorize needs --rho and --v");
  const Factoriser f(load_model(cfg), branch_choice(cfg), engine_options(cfg, true));
  const nlohmann::json r = factorize_report(f, {*cfg.rho, *cfg.v, 1});
  Sink sink(cfg.out, out);
  *sink.os << r.dump(2) << "\n";
  return r["status"] == "canonical" ? kOk : kNonCanonical;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  const GridSpec g = parse_grid(cfg.grid.value_or("0.05:4:40,-4:4:81"));
  const Factoriser f(load_model(cfg), branch_choice(cfg), engine_options(cfg, false));
  struct Row {
    SpectralPoint pt;
    bool ok = false;
    cplx D = 0.0;
    int kernel = 0;
    std::optional<double> g_tt;
    std::string error;
  };
  const size_t total = static_cast<size_t>(g.nr) * static_cast<size_t>(g.nv);
  std::vector<Row> rows(total);
  for (int i = 0; i < g.nr; ++i)
    for (int j = 0; j < g.nv; ++j)
      rows[static_cast<size_t>(i * g.nv + j)].pt = {g.rmin + (g.rmax - g.rmin) * i / (g.nr - 1),
                                                     g.vmin + (g.vmax - g.vmin) * j / (g.nv - 1), 1};
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t k = next++; k < total; k = next++) {
      Row& row = rows[k];
      try {
        const FactorisationOutcome o = f.factorise(row.pt);
        row.D = o.D_value;
        row.kernel = o.kernel_dim;
        row.g_tt = outcome_g_tt(o, row.pt.lambda);
        row.ok = true;
      } catch (const Error& e) {
        row.error = error_name(e.code());
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < cfg.jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  Sink sink(cfg.out, out);
  std::ostream& os = *sink.os;
  if (cfg.format == "json") {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "sweep";
    j["model"] = f.model().name;
    j["params"] = f.model().params;
    j["branches"] = branches_to_string(f.branches());
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rows) {
      nlohmann::json e = {{"rho", r.pt.rho}, {"v", r.pt.v}};
      if (r.ok) {
        e["re_D"] = r.D.real();
        e["im_D"] = r.D.imag();
        e["kernel_dim"] = r.kernel;
        e["g_tt"] = r.g_tt ? nlohmann::json(*r.g_tt) : nlohmann::json(nullptr);
      } else {
        e["error"] = r.error;
      }
      j["rows"].push_back(e);
    }
    os << j.dump(2) << "\n";
    return kOk;
  }
  csv_preamble(os, "sweep", f);
  os << "# grid: " << num(g.rmin) << ":" << num(g.rmax) << ":" << g.nr << "," << num(g.vmin) << ":" << num(g.vmax)
     << ":" << g.nv << "\n";
  os << "rho,v,re_D,im_D,kernel_dim,g_tt\n";
  for (const auto& r : rows) {
    os << num(r.pt.rho) << "," << num(r.pt.v) << ",";
    if (r.ok) os << num(r.D.real()) << "," << num(r.D.imag()) << "," << r.kernel << "," << (r.g_tt ? num(*r.g_tt) : "");
    else os << ",,,";
    os << "\n";
  }
  return kOk;
}

int cmd_curve(const RunConfig& cfg, std::ostream& out) {
  const Factoriser f(load_model(cfg), branch_choice(cfg), engine_options(cfg, false));
  TraceOptions o;
  const double s = f.model().scale;
  o.rho_max = 2.0 * s;
  o.v_min = -2.0 * s;
  o.v_max = 2.0 * s;
  o.max_segment = 2e-3 * s;
  o.rho_floor = 2.5e-3 * s;
  if (cfg.grid) {
    const GridSpec g = parse_grid(*cfg.grid);
    o.rho_min = g.rmin;
    o.rho_max = g.rmax;
    o.nrho = g.nr;
    o.v_min = g.vmin;
    o.v_max = g.vmax;
    o.nv = g.nv;
    o.rho_floor = std::max(o.rho_floor, g.rmin);
  }
  auto chains = trace_curve(f, o);
  for (auto& c : chains) tag_ergosurface(f, c);
  Sink sink(cfg.out, out);
  std::ostream& os = *sink.os;
  if (cfg.format == "json") {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "curve";
    j["model"] = f.model().name;
    j["params"] = f.model().params;
    j["branches"] = branches_to_string(f.branches());
    j["label"] = "factorisation-failure curve";
    j["chains"] = nlohmann::json::array();
    for (const auto& c : chains) {
      nlohmann::json e;
      e["ergosurface"] = c.ergosurface;
      e["rho"] = nlohmann::json::array();
      e["v"] = nlohmann::json::array();
      e["absD"] = c.abs_D;
      for (const auto& p : c.samples) {
        e["rho"].push_back(p.rho);
        e["v"].push_back(p.v);
      }
      j["chains"].push_back(e);
    }
    os << j.dump(2) << "\n";
    return kOk;
  }
  csv_preamble(os, "curve", f);
  os << "# label: factorisation-failure curve\n";
  os << "# box: rho (" << num(o.rho_min) << ", " << num(o.rho_max) << "], v [" << num(o.v_min) << ", "
     << num(o.v_max) << "], grid " << o.nrho << "x" << o.nv << "\n";
  os << "chain,rho,v,absD\n";
  for (size_t k = 0; k < chains.size(); ++k) {
    const auto& c = chains[k];
    os << "# chain " << k << ": samples " << c.samples.size() << ", ergosurface " << (c.ergosurface ? "yes" : "no")
       << "\n";
    for (size_t i = 0; i < c.samples.size(); ++i)
      os << k << "," << num(c.samples[i].rho) << "," << num(c.samples[i].v) << "," << num(c.abs_D[i]) << "\n";
  }
  return kOk;
}

int cmd_catalog(const RunConfig& cfg, std::ostream& out) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "catalog";
  j["models"] = nlohmann::json::array();
  for (const auto& name : catalog_names()) {
    nlohmann::json e;
    e["name"] = name;
    try {
      const auto m = model_by_name(name, cfg.m, cfg.a);
      e["model"] = model_to_json(m);
      e["default_branches"] = branches_to_string(m.default_branches);
      nlohmann::json poles = nlohmann::json::array();
      for (const auto& p : m.poles) poles.push_back({p.real(), p.imag()});
      e["poles"] = poles;
    } catch (const Error& err) {
      e["error"] = error_name(err.code());
      e["message"] = err.what();
    }
    j["models"].push_back(e);
  }
  Sink sink(cfg.out, out);
  *sink.os << j.dump(2) << "\n";
  return kOk;
}

std::vector<std::string> suite_names() { return {"vieta", "symmetry", "residual", "sigma", "roundtrip", "oracle"}; }

namespace {

struct Probe {
  SpectralPoint pt;
  FactorisationOutcome out;
};

std::vector<Probe> probes(const Factoriser& f, int want, unsigned seed) {
  std::mt19937 rng(seed);
  const double s = f.model().scale;
  std::uniform_real_distribution<double> R(0.15 * s, 1.8 * s), V(-1.8 * s, 1.8 * s);
  std::vector<Probe> out;
  for (int tries = 0; tries < 10 * want && static_cast<int>(out.size()) < want; ++tries) {
    const SpectralPoint pt{R(rng), V(rng), 1};
    try {
      FactorisationOutcome o = f.factorise(pt);
      if (o.status == Status::Canonical && o.D_relative > 1e-4) out.push_back({pt, std::move(o)});
    } catch (const Error&) {
    }
  }
  return out;
}

double rel_diff(const ComplexMatrix& A, const ComplexMatrix& B) {
  return inf_norm(A - B) / std::max(1e-300, inf_norm(B));
}

ComplexMatrix eta_matrix(const RationalMatrixOmega& m) {
  ComplexMatrix e = ComplexMatrix::Identity(m.n, m.n);
  for (int i = 0; i < static_cast<int>(m.eta.size()) && i < m.n; ++i) e(i, i) = m.eta[static_cast<size_t>(i)];
  return e;
}

SuiteResult run_suite(const std::string& name, const Factoriser& f, const std::vector<Probe>& pr, double m,
                      double a) {
  SuiteResult r;
  r.name = name;
  r.model = f.model().name;
  const auto& model = f.model();
  if (name == "vieta") {
    r.threshold = 1e-12;
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (const auto& p : pr) {
      const auto mono = f.compose(p.pt);
      for (const auto& zp : mono.partition.pairs)
        r.max_residual = std::max(r.max_residual, std::abs(zp.tau_in * zp.tau_out + 1.0));
      const cplx t(U(rng), U(rng));
      const cplx w = spectral_map(p.pt, t);
      r.max_residual = std::max(r.max_residual, std::abs(w - spectral_map(p.pt, -1.0 / t)) / std::max(1.0, std::abs(w)));
      ++r.samples;
    }
  } else if (name == "symmetry") {
    r.threshold = 1e-9;
    const auto inv = check_model_invariants(model);
    r.max_residual = std::max(inv.det_residual, inv.symmetry_residual);
    const ComplexMatrix eta = eta_matrix(model);
    for (const auto& p : pr) {
      const ComplexMatrix M = assemble_M(p.out);
      r.max_residual = std::max(r.max_residual, rel_diff(eta * M.transpose() * eta, M));
      r.max_residual = std::max(r.max_residual, std::abs(dense_det(M) - 1.0));
      ++r.samples;
    }
  } else if (name == "residual") {
    r.threshold = 1e-9;
    double x0 = 0.0;
    for (const auto& p : pr) {
      r.max_residual = std::max(r.max_residual, p.out.residuals.factorisation);
      x0 = std::max(x0, p.out.residuals.x_at_zero);
      ++r.samples;
    }
    r.detail = "max ||X(0) - I|| = " + num(x0);
    if (x0 > 1e-10) r.pass = false;
  } else if (name == "sigma") {
    r.threshold = 1e-9;
    for (const auto& p : pr) {
      const ComplexMatrix M = assemble_M(p.out);
      try {
        if (M.rows() == 3) {
          const auto s = extract_5d(M);
          r.max_residual = std::max(r.max_residual, std::abs(s.Sigma1 + s.Sigma2 + s.Sigma3));
        } else {
          r.max_residual = std::max(r.max_residual, std::abs(std::log(std::abs(dense_det(M)))));
        }
        ++r.samples;
      } catch (const Error&) {
      }
    }
  } else if (name == "roundtrip") {
    r.threshold = 1e-10;
    for (const auto& p : pr) {
      const ComplexMatrix M = assemble_M(p.out);
      try {
        const ComplexMatrix back = M.rows() == 2 ? rebuild_4d(extract_4d(M)) : rebuild_5d(extract_5d(M));
        r.max_residual = std::max(r.max_residual, rel_diff(back, M));
        ++r.samples;
      } catch (const Error&) {
      }
    }
  } else if (name == "oracle") {
    r.threshold = 1e-8;
    if (!oracle::has_closed_form(model.name) || f.branches() != model.default_branches) {
      r.detail = "no closed form for this model and contour";
      return r;
    }
    for (const auto& p : pr) {
      r.max_residual = std::max(r.max_residual, rel_diff(assemble_M(p.out), oracle::catalog_M(model.name, m, a, p.pt)));
      ++r.samples;
    }
  } else {
    fail(ErrorCode::Usage, "unknown suite '" + name + "'");
  }
  if (r.samples == 0 && r.detail.empty()) r.detail = "no applicable samples";
  if (!(r.max_residual <= r.threshold)) r.pass = false;
  return r;
}

}  // namespace

std::vector<SuiteResult> run_suites(const RunConfig& cfg) {
  std::vector<std::string> suites = suite_names();
  if (!cfg.suite.empty()) {
    if (std::find(suites.begin(), suites.end(), cfg.suite) == suites.end())
      fail(ErrorCode::Usage, "unknown suite '" + cfg.suite + "'");
    suites = {cfg.suite};
  }
  std::vector<RationalMatrixOmega> models;
  if (!cfg.model_json.empty() || !cfg.model.empty()) {
    models.push_back(load_model(cfg));
  } else {
    for (const auto& name : catalog_names()) models.push_back(model_by_name(name, cfg.m, cfg.a));
  }
  std::vector<SuiteResult> results;
  for (const auto& model : models) {
    const Factoriser f(model, cfg.model_json.empty() && !cfg.model.empty() ? branch_choice(cfg) : std::vector<Branch>{},
                       engine_options(cfg, true));
    const auto pr = probes(f, 6, 17);
    for (const auto& s : suites) results.push_back(run_suite(s, f, pr, cfg.m, cfg.a));
  }
  return results;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const auto results = run_suites(cfg);
  bool all = true;
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "verify";
  j["suites"] = nlohmann::json::array();
  for (const auto& r : results) {
    all = all && r.pass;
    j["suites"].push_back({{"suite", r.name},
                           {"model", r.model},
                           {"max_residual", r.max_residual},
                           {"threshold", r.threshold},
                           {"samples", r.samples},
                           {"pass", r.pass},
                           {"detail", r.detail}});
  }
  j["pass"] = all;
  if (cfg.format == "json") {
    Sink sink(cfg.out, out);
    *sink.os << j.dump(2) << "\n";
  } else {
    for (const auto& r : results)
      out << fmt::format("{:<10} {:<10} max_residual {:<12.3e} threshold {:<8.1e} samples {:<3} {}{}\n", r.name,
                         r.model, r.max_residual, r.threshold, r.samples, r.pass ? "PASS" : "FAIL",
                         r.detail.empty() ? "" : "  (" + r.detail + ")");
    out << (all ? "all suites passed" : "some suites failed") << "\n";
    if (!cfg.out.empty()) {
      Sink sink(cfg.out, out);
      *sink.os << j.dump(2) << "\n";
    }
  }
  return all ? kOk : kError;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wiener-Hopf factorisation of monodromy matrices"};
  app.require_subcommand(1);
  std::string config_path, model, model_json, branches, grid, out_path, format, suite;
  double m = 0, a = 0, rho = 0, v = 0, tol = 0;
  int jobs = 1;
  struct Opts {
    CLI::Option *config, *model, *model_json, *m, *a, *branches, *rho, *v, *grid, *tol, *out, *format, *jobs, *suite;
  };
  std::map<CLI::App*, Opts> opts;
  auto add = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    Opts o{};
    o.config = sub->add_option("--config", config_path, "JSON run configuration");
    o.model = sub->add_option("--model", model, "catalog model id");
    o.model_json = sub->add_option("--model-json", model_json, "model definition file");
    o.m = sub->add_option("--m", m, "mass parameter");
    o.a = sub->add_option("--a", a, "rotation parameter");
    o.branches = sub->add_option("--branches", branches, "contour branch per pole pair, e.g. minus,plus");
    o.rho = sub->add_option("--rho", rho, "Weyl rho");
    o.v = sub->add_option("--v", v, "Weyl v");
    o.grid = sub->add_option("--grid", grid, "rmin:rmax:n,vmin:vmax:n");
    o.tol = sub->add_option("--tol", tol, "relative determinant tolerance");
    o.out = sub->add_option("--out", out_path, "output file");
    o.format = sub->add_option("--format", format, "csv or json");
    o.jobs = sub->add_option("--jobs", jobs, "worker threads");
    o.suite = sub->add_option("--suite", suite, "single verification suite");
    opts[sub] = o;
    return sub;
  };
  add("factorize", "factorise at one point");
  add("sweep", "grid sweep of the determinant");
  add("curve", "trace the factorisation-failure curve");
  add("verify", "run the invariant suites");
  add("catalog", "list built-in models");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kError;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    const Opts& o = opts.at(sub);
    RunConfig cfg;
    cfg.tol = default_tolerance();
    if (o.config->count()) {
      std::ifstream in(config_path);
      if (!in) fail(ErrorCode::Usage, "cannot open config '" + config_path + "'");
      apply_config_json(cfg, nlohmann::json::parse(in));
    }
    if (o.model->count()) cfg.model = model;
    if (o.model_json->count()) cfg.model_json = model_json;
    if (o.m->count()) cfg.m = m;
    if (o.a->count()) cfg.a = a;
    if (o.branches->count()) cfg.branches = branches;
    if (o.rho->count()) cfg.rho = rho;
    if (o.v->count()) cfg.v = v;
    if (o.grid->count()) cfg.grid = grid;
    if (o.tol->count()) cfg.tol = tol;
    if (o.out->count()) cfg.out = out_path;
    if (o.format->count()) cfg.format = format;
    if (o.jobs->count()) cfg.jobs = jobs;
    if (o.suite->count()) cfg.suite = suite;
    validate(cfg);
    const std::string name = sub->get_name();
    if (name == "factorize") return cmd_factorize(cfg, out);
    if (name == "sweep") return cmd_sweep(cfg, out);
    if (name == "curve") return cmd_curve(cfg, out);
    if (name == "verify") return cmd_verify(cfg, out);
    return cmd_catalog(cfg, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (e.code() == ErrorCode::NoCurveFound || e.code() == ErrorCode::NotCanonical) return kNonCanonical;
    return kError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
}

}  // namespace wh::cli
