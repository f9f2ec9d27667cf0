#include <functional>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "wh/errors.hpp"
#include "wh/geometry.hpp"

using namespace wh;

namespace {

constexpr double kPi = 3.14159265358979323846;

double rel(const ComplexMatrix& A, const ComplexMatrix& B) { return inf_norm(A - B) / std::max(1e-300, inf_norm(B)); }

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Usage;
}

TraceOptions coarse_box() {
  TraceOptions o;
  o.nrho = 80;
  o.nv = 80;
  return o;
}

}  // namespace

TEST_CASE("4D extraction examples") {
  const auto id = extract_4d(ComplexMatrix::Identity(2, 2));
  CHECK(id.Delta == doctest::Approx(1.0));
  CHECK(id.Btilde == doctest::Approx(0.0));
  CHECK(id.g_tt == doctest::Approx(-1.0));
  ComplexMatrix M(2, 2);
  M << 2.0 + 9.0 / 2.0, 1.5, 1.5, 0.5;
  const auto s = extract_4d(M);
  CHECK(s.Delta == doctest::Approx(2.0));
  CHECK(s.Btilde == doctest::Approx(3.0));
  CHECK(rel(rebuild_4d(s), M) <= 1e-15);
  CHECK(extract_4d(M, -1).g_tt == doctest::Approx(2.0));
}

TEST_CASE("4D extraction rejects unphysical matrices") {
  ComplexMatrix M = ComplexMatrix::Identity(2, 2);
  M(1, 1) = -1.0;
  CHECK(code_of([&] { extract_4d(M); }) == ErrorCode::NonPhysicalM);
  ComplexMatrix C = ComplexMatrix::Identity(2, 2);
  C(0, 1) = C(1, 0) = cplx(0.0, 1e-3);
  CHECK(code_of([&] { extract_4d(C); }) == ErrorCode::NonPhysicalM);
  C(0, 1) = C(1, 0) = cplx(0.0, 1e-12);
  CHECK_NOTHROW(extract_4d(C));
}

TEST_CASE("5D extraction examples and round trip") {
  const auto id = extract_5d(ComplexMatrix::Identity(3, 3));
  CHECK(std::abs(id.Sigma1) + std::abs(id.Sigma2) + std::abs(id.Sigma3) < 1e-15);
  CHECK(id.g_tt == doctest::Approx(-1.0));
  MetricScalars5D s;
  s.Sigma1 = 0.3;
  s.Sigma2 = -0.5;
  s.Sigma3 = 0.2;
  s.chi1 = 0.7;
  s.chi2 = -0.4;
  s.chi3 = 1.1;
  const ComplexMatrix M = rebuild_5d(s);
  CHECK(std::abs(dense_det(M) - 1.0) <= 1e-13);
  const auto back = extract_5d(M);
  CHECK(back.Sigma1 == doctest::Approx(0.3));
  CHECK(back.Sigma2 == doctest::Approx(-0.5));
  CHECK(back.chi1 == doctest::Approx(0.7));
  CHECK(back.chi3 == doctest::Approx(1.1));
  CHECK(back.g_tt == doctest::Approx(-std::exp(0.4) + std::exp(-1.0) * 0.49));
}

TEST_CASE("coordinate maps") {
  const auto bl = boyer_lindquist(2.0, 1.0, 2.0);
  CHECK(bl.r == doctest::Approx(4.0));
  CHECK(bl.theta == doctest::Approx(0.0));
  const auto s5 = spherical_5d(1.0, 1.0, 1.0);
  CHECK(s5.r == doctest::Approx(2.0));
  CHECK(s5.theta == doctest::Approx(0.0));
  CHECK(code_of([] { boyer_lindquist(2.0, 1.5, 2.0); }) == ErrorCode::OutOfChart);
  // Kerr g_tt vanishes at r = 2m on the equator
  CHECK(std::abs(g_tt_kerr(4.0, kPi / 2.0, 2.0, 1.0)) < 1e-15);
  // and matches the focal-chart Delta through u = r - m, y = cos theta
  const SpectralPoint pt{1.7, 0.9, 1};
  const Prolate p = prolate_from_weyl(pt, std::sqrt(3.0), ChartKind::Focal);
  const auto b = boyer_lindquist(p.u, p.y, 2.0);
  CHECK(g_tt_kerr(b.r, b.theta, 2.0, 1.0) == doctest::Approx(oracle::kerr_scalars(2.0, 1.0, pt).g_tt));
}

TEST_CASE("closed-form curves") {
  CHECK(ergosurface_closed_form("kerr", 2.0, 1.0, 0.0) == doctest::Approx(2.0));
  const double c = std::sqrt(3.0);
  CHECK(ergosurface_closed_form("kerr", 2.0, 1.0, 0.5, {Branch::Minus, Branch::Plus}) ==
        doctest::Approx(c * std::sqrt(4.0 - 3.0 * 0.25)));
  CHECK(ergosurface_closed_form("mp5d", 2.0, 1.0, 1.0) == doctest::Approx(1.0));
  CHECK(ergosurface_closed_form("mvc5d", 2.0, 1.0, 0.0) == doctest::Approx(std::sqrt(2.0 / 1.5)));
  CHECK(code_of([] { ergosurface_closed_form("kerr", 2.0, 1.0, 1.5); }) == ErrorCode::NoRealSolution);
  CHECK(code_of([] { ergosurface_closed_form("identity", 2.0, 1.0, 0.0); }) == ErrorCode::NoRealSolution);
  // the Kerr curve is where g_tt vanishes
  for (double y : {-0.8, -0.1, 0.6}) {
    const double u = ergosurface_closed_form("kerr", 2.0, 1.0, y);
    const auto b = boyer_lindquist(u, y, 2.0);
    CHECK(std::abs(g_tt_kerr(b.r, b.theta, 2.0, 1.0)) < 1e-14);
  }
}

TEST_CASE("mvc closed-form g_tt matches its spherical form") {
  const double m = 2.0, a = 1.0, al = 0.75;
  for (const SpectralPoint& pt : {SpectralPoint{1.0, 0.3, 1}, SpectralPoint{2.5, -1.0, 1}}) {
    const Prolate p = prolate_from_weyl(pt, al, ChartKind::Scaled);
    const auto s = spherical_5d(p.u, p.y, al);
    CHECK(oracle::mvc_minus_g_tt(m, a, pt) == doctest::Approx(minus_g_tt_5d(s.r, s.theta, m, a)).epsilon(1e-12));
  }
}

TEST_CASE("5D factorisations reproduce the closed forms") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> R(0.2, 3.5), V(-3.0, 3.0);
  const Factoriser mp(model_mp5d(2.0, 1.0)), mvc(model_mvc5d(2.0, 1.0));
  int checked = 0;
  while (checked < 8) {
    const SpectralPoint pt{R(rng), V(rng), 1};
    const auto a = mp.factorise(pt), b = mvc.factorise(pt);
    if (a.status != Status::Canonical || b.status != Status::Canonical) continue;
    CHECK(rel(assemble_M(a), oracle::mp_M(2.0, 1.0, pt)) <= 1e-8);
    const ComplexMatrix Mb = assemble_M(b);
    CHECK(rel(Mb, oracle::mvc_M(2.0, 1.0, pt)) <= 1e-8);
    const auto sa = extract_5d(assemble_M(a));
    CHECK(std::abs(sa.chi1) < 1e-10);
    CHECK(std::abs(sa.chi2) < 1e-10);
    CHECK(sa.g_tt == doctest::Approx(-std::exp(2.0 * sa.Sigma3)));
    CHECK(std::abs(sa.Sigma1 + sa.Sigma2 + sa.Sigma3) <= 1e-9);
    const auto sb = extract_5d(Mb);
    CHECK(std::abs(sb.Sigma1 + sb.Sigma2 + sb.Sigma3) <= 1e-9);
    CHECK(std::abs(-sb.g_tt - oracle::mvc_minus_g_tt(2.0, 1.0, pt)) <= 1e-8);
    CHECK(rel(rebuild_5d(sb), Mb) <= 1e-10);
    ++checked;
  }
}

TEST_CASE("traced Kerr curve matches the closed form") {
  const Factoriser f(model_kerr(2.0, 1.0));
  const TraceOptions o = coarse_box();
  const auto chains = trace_curve(f, o);
  REQUIRE(chains.size() == 1);
  const auto& c = chains.front();
  for (size_t k = 0; k < c.samples.size(); ++k) {
    CHECK(c.samples[k].rho > 0.0);
    CHECK(c.abs_D[k] <= 1e-8);
  }
  const auto ref = oracle::curve_polyline("kerr", 2.0, 1.0, f.branches(), o.rho_floor);
  CHECK(hausdorff_distance(c.samples, ref) <= 1e-4);
}

TEST_CASE("static Kerr has no curve in the exterior") {
  const Factoriser f(model_kerr(2.0, 0.0));
  CHECK(code_of([&] { trace_curve(f, coarse_box()); }) == ErrorCode::NoCurveFound);
}

TEST_CASE("ergosurface tag follows the g_tt test") {
  struct Case {
    const char* model;
    bool ergo;
  };
  for (const Case& cs : {Case{"kerr", true}, Case{"mp5d", true}, Case{"mvc5d", false}}) {
    const Factoriser f(model_by_name(cs.model, 2.0, 1.0));
    auto chains = trace_curve(f, coarse_box());
    CHECK(tag_ergosurface(f, chains.front()) == cs.ergo);
    CHECK(chains.front().ergosurface == cs.ergo);
    const auto ref = oracle::curve_polyline(cs.model, 2.0, 1.0, f.branches(), coarse_box().rho_floor);
    CHECK(hausdorff_distance(chains.front().samples, ref) <= 1e-4);
  }
}

TEST_CASE("mvc: e^{2 Sigma1} blows up at the curve while g_tt stays finite") {
  const Factoriser f(model_mvc5d(2.0, 1.0));
  auto chains = trace_curve(f, coarse_box());
  const auto& c = chains.front();
  const size_t k = c.samples.size() / 3;
  const auto g = locus_g_tt(f, c, k, 1e-5);
  REQUIRE(g.has_value());
  CHECK(std::abs(*g) >= 0.01);
  const SpectralPoint n = curve_normal(c, k);
  double prev = 0.0;
  for (double d : {1e-2, 1e-3, 1e-4}) {
    for (double side : {1.0, -1.0}) {
      const SpectralPoint p{c.samples[k].rho + side * d * n.rho, c.samples[k].v + side * d * n.v, 1};
      const auto out = f.factorise(p);
      if (out.status != Status::Canonical) continue;
      const double e1 = std::abs(assemble_M(out)(0, 0).real());
      CHECK(e1 == doctest::Approx(std::abs(oracle::mvc_e2sigma1(2.0, 1.0, p))).epsilon(1e-6));
      if (side > 0.0) {
        CHECK(e1 > 5.0 * prev);
        prev = e1;
      }
    }
  }
}

TEST_CASE("Hausdorff distance") {
  const std::vector<SpectralPoint> a{{1.0, 0.0, 1}, {1.0, 1.0, 1}};
  const std::vector<SpectralPoint> b{{1.5, 0.0, 1}, {1.5, 1.0, 1}};
  CHECK(hausdorff_distance(a, b) == doctest::Approx(0.5));
  CHECK(hausdorff_distance(a, a) == doctest::Approx(0.0));
  const std::vector<SpectralPoint> mid{{1.0, 0.5, 1}};
  CHECK(hausdorff_distance(mid, a) == doctest::Approx(0.5));
}
