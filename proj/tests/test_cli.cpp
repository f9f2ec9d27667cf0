#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "commands.hpp"
#include "doctest.h"
#include "wh/errors.hpp"

using namespace wh;
using namespace wh::cli;

namespace {

struct Result {
  int code = 0;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "whfact");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> data_lines(const std::string& s) {
  std::vector<std::string> rows;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') rows.push_back(line);
  return rows;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("whfact_test_" + name);
}

}  // namespace

TEST_CASE("grid specification parsing") {
  const GridSpec g = parse_grid("0.5:2:4,-1:1:3");
  CHECK(g.rmin == 0.5);
  CHECK(g.rmax == 2.0);
  CHECK(g.nr == 4);
  CHECK(g.vmin == -1.0);
  CHECK(g.nv == 3);
  for (const char* bad : {"", "1:2:3", "0:1:0,0:1:2", "a:b:c,0:1:2", "1:0:3,0:1:2", "0:1:3,0:1:2,4"}) {
    bool threw = false;
    try {
      parse_grid(bad);
    } catch (const Error& e) {
      threw = true;
      CHECK(e.code() == ErrorCode::Usage);
    }
    CHECK_MESSAGE(threw, bad);
  }
}

TEST_CASE("factorize exit codes") {
  const auto ok = invoke({"factorize", "--rho", "3", "--v", "0"});
  CHECK(ok.code == kOk);
  const auto j = nlohmann::json::parse(ok.out);
  CHECK(j["status"] == "canonical");
  CHECK(j["schema_version"] == kSchemaVersion);
  const auto on = invoke({"factorize", "--rho", "1", "--v", "0"});
  CHECK(on.code == kNonCanonical);
  CHECK(nlohmann::json::parse(on.out)["status"] == "degenerate");
  CHECK(invoke({"factorize", "--rho", "3"}).code == kError);
  CHECK(invoke({"factorize", "--rho", "3", "--v", "0", "--a", "3"}).code == kError);
  CHECK(invoke({"factorize", "--rho", "3", "--v", "0", "--model", "nope"}).code == kError);
  CHECK(invoke({"factorize", "--rho", "3", "--v", "0", "--tol", "-1"}).code == kError);
  CHECK(invoke({"bogus"}).code == kError);
}

TEST_CASE("sweep is deterministic across runs and thread counts") {
  const std::vector<std::string> base{"sweep", "--grid", "0.2:3:12,-3:3:13"};
  auto one = base;
  one.insert(one.end(), {"--jobs", "1"});
  auto four = base;
  four.insert(four.end(), {"--jobs", "4"});
  const auto a = invoke(one), b = invoke(one), c = invoke(four);
  REQUIRE(a.code == kOk);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  const auto rows = data_lines(a.out);
  REQUIRE(rows.size() == 1 + 12 * 13);
  CHECK(rows.front() == "rho,v,re_D,im_D,kernel_dim,g_tt");
}

TEST_CASE("sweep crosses the curve") {
  const auto r = invoke({"sweep", "--grid", "0.1:3:10,-3:3:10"});
  REQUIRE(r.code == kOk);
  std::set<std::string> kernels;
  int positive = 0, negative = 0;
  const auto rows = data_lines(r.out);
  for (size_t k = 1; k < rows.size(); ++k) {
    std::vector<std::string> cols;
    std::stringstream ss(rows[k]);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(c);
    REQUIRE(cols.size() >= 5);
    kernels.insert(cols[4]);
    (std::stod(cols[2]) > 0.0 ? positive : negative)++;
  }
  CHECK(kernels.count("0") == 1);
  CHECK(positive > 0);
  CHECK(negative > 0);
  const auto json = invoke({"sweep", "--grid", "0.1:3:10,-3:3:10", "--format", "json"});
  REQUIRE(json.code == kOk);
  CHECK(nlohmann::json::parse(json.out)["rows"].size() == 100);
}

TEST_CASE("sweep rejects an empty grid") {
  CHECK(invoke({"sweep", "--grid", "0:1:0,0:1:0"}).code == kError);
}

TEST_CASE("verify runs the full or a single suite") {
  const auto all = invoke({"verify", "--model", "kerr"});
  CHECK(all.code == kOk);
  CHECK(all.out.find("all suites passed") != std::string::npos);
  const auto one = invoke({"verify", "--model", "kerr", "--suite", "vieta"});
  CHECK(one.code == kOk);
  CHECK(one.out.find("vieta") != std::string::npos);
  CHECK(one.out.find("roundtrip") == std::string::npos);
  CHECK(invoke({"verify", "--suite", "nope"}).code == kError);
  const auto bad = invoke({"verify", "--model-json", std::string(WH_TEST_DATA_DIR) + "/kerr_bad_det.json"});
  CHECK(bad.code == kError);
  CHECK(bad.err.find("error:") != std::string::npos);
}

TEST_CASE("suite names") {
  const auto names = suite_names();
  CHECK(names.size() == 6);
  RunConfig cfg;
  cfg.model = "mp5d";
  for (const auto& s : run_suites(cfg)) CHECK_MESSAGE(s.pass, s.name << " " << s.detail);
}

TEST_CASE("config file with command-line override") {
  const auto path = temp_file("config.json");
  {
    std::ofstream f(path);
    f << R"({"rho": 1.0, "v": 0.0, "m": 2.0, "a": 1.0})";
  }
  CHECK(invoke({"factorize", "--config", path.string()}).code == kNonCanonical);
  CHECK(invoke({"factorize", "--config", path.string(), "--rho", "3"}).code == kOk);
  {
    std::ofstream f(path);
    f << R"({"rho": 1.0, "colour": "red"})";
  }
  CHECK(invoke({"factorize", "--config", path.string()}).code == kError);
  std::filesystem::remove(path);
}

TEST_CASE("tolerance default comes from the environment") {
  setenv("WH_ERGO_TOL", "1e-6", 1);
  CHECK(default_tolerance() == doctest::Approx(1e-6));
  setenv("WH_ERGO_TOL", "junk", 1);
  CHECK_THROWS(default_tolerance());
  unsetenv("WH_ERGO_TOL");
  CHECK(default_tolerance() == doctest::Approx(1e-9));
}

TEST_CASE("catalog lists the built-in models") {
  const auto r = invoke({"catalog"});
  CHECK(r.code == kOk);
  for (const char* m : {"kerr", "mp5d", "mvc5d"}) CHECK(r.out.find(m) != std::string::npos);
}

TEST_CASE("curve output and file sink") {
  const auto path = temp_file("curve.csv");
  const auto r = invoke({"curve", "--grid", "0.001:4:60,-4:4:60", "--out", path.string()});
  REQUIRE(r.code == kOk);
  std::ifstream in(path);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  for (const char* h : {"# schema_version: 1", "# command: curve", "# model: kerr", "# branches: minus,minus",
                        "ergosurface yes", "chain,rho,v,absD"})
    CHECK_MESSAGE(text.find(h) != std::string::npos, h);
  CHECK(data_lines(text).size() > 100);
  std::filesystem::remove(path);
  CHECK(invoke({"curve", "--a", "0", "--grid", "0.001:4:40,-4:4:40"}).code == kNonCanonical);
}
