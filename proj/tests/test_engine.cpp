#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "wh/engine.hpp"
#include "wh/errors.hpp"
#include "wh/geometry.hpp"

using namespace wh;

namespace {

double rel(const ComplexMatrix& A, const ComplexMatrix& B) { return inf_norm(A - B) / std::max(1e-300, inf_norm(B)); }

// p11 p22 - p12^2 = q^2 with k11 = 3, k12 = 2, k22 = 1
RationalMatrixOmega reducible_model() {
  const Polynomial q{-1.0, 0.0, 1.0}, p12{2.0, 0.5, 1.0};
  const Polynomial s = q * q + p12 * p12;
  const auto r = poly_roots(s);
  const Polynomial p11 = Polynomial::from_roots({r[0], r[1], r[2]});
  const Polynomial p22 = Polynomial::from_roots({r[3]}, s.leading());
  return finalize_model("reducible", 2, {1, 1},
                        {RationalFunction(p11, q), RationalFunction(p12, q), RationalFunction(p12, q),
                         RationalFunction(p22, q)},
                        {});
}

SpectralPoint random_exterior(std::mt19937& rng) {
  std::uniform_real_distribution<double> R(0.1, 4.0), V(-4.0, 4.0);
  return {R(rng), V(rng), 1};
}

}  // namespace

TEST_CASE("identity monodromy factorises trivially") {
  const Factoriser f(model_identity(2));
  const auto out = f.factorise({1.0, 0.5, 1});
  REQUIRE(out.status == Status::Canonical);
  CHECK(out.path == EnginePath::Trivial);
  CHECK(rel(assemble_M(out), ComplexMatrix::Identity(2, 2)) <= 1e-15);
}

TEST_CASE("Kerr M matches the exterior solution") {
  const Factoriser f(model_kerr(2.0, 1.0));
  CHECK(f.path() == EnginePath::TwoByTwo);
  std::mt19937 rng(31);
  int checked = 0;
  while (checked < 20) {
    const SpectralPoint pt = random_exterior(rng);
    const auto out = f.factorise(pt);
    if (out.status != Status::Canonical) continue;
    CHECK(rel(assemble_M(out), oracle::kerr_M(2.0, 1.0, pt)) <= 1e-9);
    CHECK(out.residuals.factorisation <= 1e-9);
    CHECK(out.residuals.x_at_zero <= 1e-10);
    ++checked;
  }
}

TEST_CASE("Kerr existence determinant equals f times h") {
  const auto model = model_kerr(2.0, 1.0);
  std::mt19937 rng(32);
  for (int k = 0; k < 30; ++k) {
    const SpectralPoint pt = random_exterior(rng);
    const auto mono = compose_monodromy(model, pt);
    const cplx d = dense_det(existence_system_2x2(mono));
    const auto fh = oracle::kerr_f_h(2.0, 1.0, pt);
    CHECK(std::abs(d - fh.f * fh.h) <= 1e-8 * std::abs(fh.f * fh.h));
  }
}

TEST_CASE("degree classification") {
  DegreeTable d;
  d.k11 = 2;
  d.k12 = 2;
  d.k22 = 2;
  d.n = 2;
  d.N1 = 2;
  d.N2 = 2;
  CHECK(classify_degrees(d).kind == Case2x2::DeterminantTest);
  d.k11 = 3;
  d.k12 = 2;
  d.k22 = 1;
  d.N1 = 3;
  CHECK(classify_degrees(d).kind == Case2x2::ReducibleCase);
  CHECK(classify_degrees(d).excess == 1);
  // raw table with N1 + N2 < 2n exercises the no-solve branch
  DegreeTable raw;
  raw.k11 = 1;
  raw.k12 = 1;
  raw.k22 = 1;
  raw.n = 2;
  raw.N1 = 1;
  raw.N2 = 1;
  const auto c = classify_degrees(raw);
  CHECK(c.kind == Case2x2::AlwaysCanonical);
  REQUIRE(fast_kernel_dim(c).has_value());
  CHECK(*fast_kernel_dim(c) == 0);
  CHECK_FALSE(fast_kernel_dim(classify_degrees(d)).has_value());
}

TEST_CASE("no det = 1 degree table reaches N1 + N2 < 2n") {
  for (int k11 = 0; k11 <= 6; ++k11)
    for (int k12 = 0; k12 <= 6; ++k12)
      for (int k22 = 0; k22 <= 6; ++k22) {
        const int two_n = std::max(k11 + k22, 2 * k12);
        CHECK(std::max(k11, k12) + std::max(k12, k22) >= two_n);
      }
}

TEST_CASE("on-curve Kerr point is degenerate with a one-dimensional kernel") {
  const Factoriser f(model_kerr(2.0, 1.0));
  const auto out = f.factorise({1.0, 0.0, 1});
  CHECK(out.status == Status::Degenerate);
  CHECK(out.kernel_dim == 1);
  CHECK_THROWS_AS(assemble_M(out), Error);
  for (double y : {-0.7, -0.2, 0.35, 0.8}) {
    const SpectralPoint p = ergosurface_point("kerr", 2.0, 1.0, y);
    const auto o = f.factorise(p);
    CHECK(o.status == Status::Degenerate);
    CHECK(o.kernel_dim == 1);
  }
}

TEST_CASE("Kerr a = 0 gives a diagonal M") {
  const Factoriser f(model_kerr(2.0, 0.0));
  for (const SpectralPoint& p : {SpectralPoint{1.0, 0.5, 1}, SpectralPoint{3.0, -2.0, 1}}) {
    const auto out = f.factorise(p);
    REQUIRE(out.status == Status::Canonical);
    const ComplexMatrix M = assemble_M(out);
    CHECK(std::abs(M(0, 1)) < 1e-10);
    CHECK(std::abs(M(1, 0)) < 1e-10);
  }
}

TEST_CASE("analyticity of the first column forces the second") {
  const auto model = model_kerr(2.0, 1.0);
  std::mt19937 rng(33);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const SpectralPoint pt = random_exterior(rng);
    const auto mono = compose_monodromy(model, pt);
    const auto& nf = *mono.normal_form;
    const auto& d = nf.deg;
    const ComplexMatrix E = existence_system_2x2(mono);
    REQUIRE(E.cols() == d.N1 + d.N2);
    const Polynomial c1 = poly_shift(nf.pt22, d.N2 - d.k22);
    const Polynomial c2 = poly_scale(poly_shift(nf.pt12, d.N1 - d.k12), -1.0);
    const Polynomial c3 = poly_scale(poly_shift(nf.pt12, d.N2 - d.k12), -1.0);
    const Polynomial c4 = poly_shift(nf.pt11, d.N1 - d.k11);
    const cplx A1(U(rng), U(rng)), A2(U(rng), U(rng));
    const Polynomial R = poly_scale(c1, A1) + poly_scale(c2, A2);
    const Polynomial dR = poly_derivative(R);

    auto solve = [&](double sign) {
      ComplexVector rhs(E.rows());
      Eigen::Index row = 0;
      for (const auto& zp : mono.partition.pairs) {
        const cplx t = zp.tau_in;
        rhs(row++) = -sign * R(t) / t;
        rhs(row++) = -sign * (dR(t) - R(t) / t) / t;
      }
      const ComplexVector x = dense_solve(E, rhs);
      std::vector<cplx> q1{A1}, q2{A2};
      for (int j = 0; j < d.N1; ++j) q1.push_back(x(j));
      for (int j = 0; j < d.N2; ++j) q2.push_back(x(d.N1 + j));
      const Polynomial Q1(q1), Q2(q2);
      return std::pair{c1 * Q1 + c2 * Q2, c3 * Q1 + c4 * Q2};
    };

    const auto [num1, num2] = solve(1.0);
    for (const auto& zp : mono.partition.pairs) {
      const cplx t = zp.tau_in;
      const auto t1 = taylor_coefficients(num1, t, 2), t2 = taylor_coefficients(num2, t, 2);
      CHECK(std::abs(t1[0]) <= 1e-9 * abs_eval(num1, t));
      CHECK(std::abs(t1[1]) <= 1e-9 * abs_eval(poly_derivative(num1), t));
      CHECK(std::abs(t2[0]) <= 1e-9 * abs_eval(num2, t));
      CHECK(std::abs(t2[1]) <= 1e-9 * abs_eval(poly_derivative(num2), t));
    }
    // with the opposite right-hand-side sign the first numerator keeps its value at the zeros
    const auto [bad1, bad2] = solve(-1.0);
    double worst = 0.0;
    for (const auto& zp : mono.partition.pairs)
      worst = std::max(worst, std::abs(bad1(zp.tau_in)) / abs_eval(bad1, zp.tau_in));
    CHECK(worst > 1e-6);
  }
}

TEST_CASE("reducible case: square system, agreement with the generic path") {
  const auto model = reducible_model();
  const Factoriser f(model);
  const Factoriser g(model, {}, EngineOptions{1e-9, 1e-9, true, true});
  CHECK(f.path() == EnginePath::Reducible);
  CHECK(g.path() == EnginePath::Generic);
  const auto mono = f.compose({1.3, 0.4, 1});
  const auto cls = classify_2x2(mono);
  CHECK(cls.kind == Case2x2::ReducibleCase);
  CHECK(reducible_system_2x2(mono).unknowns == 5);
  std::vector<double> vs;
  for (double v = -3.0; v <= 3.0; v += 0.25) vs.push_back(v);
  for (double v : vs) {
    const SpectralPoint p{1.0, v, 1};
    const double a = f.signed_D(p), b = g.signed_D(p);
    CHECK(std::abs(a - b) <= 1e-8 * std::max(std::abs(a), std::abs(b)) + 1e-14);
    const auto out = f.factorise(p), ref = g.factorise(p);
    CHECK(out.status == ref.status);
    CHECK(out.kernel_dim == ref.kernel_dim);
    if (out.status == Status::Canonical) {
      CHECK(out.residuals.factorisation <= 1e-9);
      CHECK(out.residuals.x_at_zero <= 1e-10);
      CHECK(rel(assemble_M(out), assemble_M(ref)) <= 1e-8);
    }
  }
}

TEST_CASE("index balance: square systems off the curve") {
  std::mt19937 rng(34);
  for (const auto& name : {"kerr", "mp5d", "mvc5d"}) {
    const auto model = model_by_name(name, 2.0, 1.0);
    const Factoriser f(model);
    for (int k = 0; k < 5; ++k) {
      const auto mono = f.compose(random_exterior(rng));
      if (f.path() == EnginePath::TwoByTwo) {
        const ComplexMatrix E = existence_system_2x2(mono);
        CHECK(E.rows() == E.cols());
        CHECK(E.cols() == 2 * mono.normal_form->deg.n);
      } else {
        const auto g = generic_constraints(mono, true);
        const auto plan = plan_determinant(g.sys);
        CHECK(static_cast<int>(plan.rows.size()) == g.sys.unknowns);
        CHECK(numerical_rank(g.sys.C) == g.sys.unknowns);
      }
    }
  }
}

TEST_CASE("uniqueness probe: perturbed solutions break a constraint") {
  const auto model = model_mvc5d(2.0, 1.0);
  const auto mono = compose_monodromy(model, {1.4, 0.6, 1});
  const auto g = generic_constraints(mono, false);
  ComplexMatrix A(g.sys.C.rows() + g.norm_rows.rows(), g.sys.unknowns);
  A << g.sys.C, g.norm_rows;
  std::mt19937 rng(35);
  std::normal_distribution<double> N;
  for (int k = 0; k < 5; ++k) {
    ComplexVector dx(g.sys.unknowns);
    for (Eigen::Index i = 0; i < dx.size(); ++i) dx(i) = cplx(N(rng), N(rng));
    dx *= 1e-6 / dx.norm();
    CHECK((equilibrate_rows(A) * dx).norm() >= 1e-7 * 1e-3);
    CHECK((A * dx).norm() >= 1e-7 * 1e-6);
  }
  CHECK(numerical_nullity(A) == 0);
}

TEST_CASE("generic path reproduces the 2x2 path on Kerr") {
  const auto model = model_kerr(2.0, 1.0);
  const Factoriser f(model), g(model, {}, EngineOptions{1e-9, 1e-9, true, true});
  for (const SpectralPoint& p : {SpectralPoint{3.0, 0.0, 1}, SpectralPoint{0.5, 2.5, 1}, SpectralPoint{2.2, -1.1, 1}}) {
    const auto a = f.factorise(p), b = g.factorise(p);
    REQUIRE(a.status == Status::Canonical);
    REQUIRE(b.status == Status::Canonical);
    CHECK(rel(assemble_M(b), assemble_M(a)) <= 1e-9);
  }
}

TEST_CASE("near-curve probe: 1/Delta grows along a normal ray") {
  const Factoriser f(model_kerr(2.0, 1.0));
  // outward normal at y = 0 is +rho
  const SpectralPoint c = ergosurface_point("kerr", 2.0, 1.0, 0.0);
  double prev = 0.0;
  for (double d : {1e-2, 1e-3, 1e-4}) {
    const auto out = f.factorise({c.rho + d, c.v, 1});
    REQUIRE(out.status == Status::Canonical);
    const double m22 = assemble_M(out)(1, 1).real();
    CHECK(m22 >= 10.0 * prev);
    prev = m22;
  }
}

TEST_CASE("5D M_limit is an eta-symmetric unit-determinant coset element") {
  const ComplexMatrix eta = Eigen::Vector3cd(1.0, -1.0, 1.0).asDiagonal();
  std::mt19937 rng(36);
  for (const auto& name : {"mp5d", "mvc5d"}) {
    const Factoriser f(model_by_name(name, 2.0, 1.0));
    int checked = 0;
    while (checked < 5) {
      const auto out = f.factorise(random_exterior(rng));
      if (out.status != Status::Canonical) continue;
      const ComplexMatrix M = assemble_M(out);
      CHECK(rel(eta * M.transpose() * eta, M) <= 1e-9);
      CHECK(std::abs(dense_det(M) - 1.0) <= 1e-9);
      ++checked;
    }
  }
}

TEST_CASE("scalar factorisation splits tau^n over the pole pairs") {
  const auto mono = compose_monodromy(model_kerr(2.0, 1.0), {1.5, 0.3, 1});
  const ScalarSymbol s{2, cplx(0.7, 0.0)};
  const auto sf = scalar_factorise(s, mono.partition);
  for (cplx t : {cplx(1.0, 0.2), cplx(-0.4, 0.9), cplx(0.3, -0.8)}) {
    const cplx want = scalar_symbol_eval(s, mono.partition, t);
    CHECK(std::abs(sf.minus(t) * sf.plus(t) - want) <= 1e-12 * std::abs(want));
  }
}

TEST_CASE("check points avoid the poles") {
  const auto mono = compose_monodromy(model_kerr(2.0, 1.0), {1.5, 0.3, 1});
  const auto pts = check_points(mono);
  CHECK(pts.size() == 12);
  for (const auto& t : pts)
    for (const auto& zp : mono.partition.pairs) {
      CHECK(std::abs(t - zp.tau_in) > 1e-4);
      CHECK(std::abs(t - zp.tau_out) > 1e-4);
    }
}
