#include <algorithm>
#include <random>

#include "doctest.h"
#include "wh/errors.hpp"
#include "wh/polynomial.hpp"

using namespace wh;

namespace {

bool has_root(const std::vector<cplx>& roots, cplx r, double tol) {
  return std::any_of(roots.begin(), roots.end(), [&](cplx x) { return std::abs(x - r) <= tol; });
}

}  // namespace

TEST_CASE("polynomial arithmetic matches pointwise evaluation") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<cplx> a(4), b(3);
    for (auto& c : a) c = cplx(U(rng), U(rng));
    for (auto& c : b) c = cplx(U(rng), U(rng));
    const Polynomial p(a), q(b);
    const cplx z(U(rng), U(rng));
    CHECK(std::abs((p * q)(z) - p(z) * q(z)) <= 1e-12 * (1.0 + std::abs(p(z) * q(z))));
    CHECK(std::abs((p + q)(z) - (p(z) + q(z))) <= 1e-13 * (1.0 + std::abs(p(z)) + std::abs(q(z))));
    CHECK(std::abs((p - q)(z) - (p(z) - q(z))) <= 1e-13 * (1.0 + std::abs(p(z)) + std::abs(q(z))));
    CHECK(std::abs(poly_shift(p, 2)(z) - z * z * p(z)) <= 1e-12 * (1.0 + std::abs(z * z * p(z))));
    CHECK(std::abs(poly_pow(q, 3)(z) - std::pow(q(z), 3)) <= 1e-11 * (1.0 + std::abs(std::pow(q(z), 3))));
  }
}

TEST_CASE("trimmed storage and degree") {
  const Polynomial p{1.0, 2.0, 0.0, 0.0};
  CHECK(p.degree() == 1);
  CHECK(Polynomial().is_zero());
  CHECK(Polynomial::monomial(3, 2.0).degree() == 3);
  CHECK(p.coeff(5) == cplx(0.0));
  CHECK((p - p).is_zero());
}

TEST_CASE("derivative and Taylor coefficients") {
  // (z - 1)^3 = z^3 - 3z^2 + 3z - 1
  const Polynomial p{-1.0, 3.0, -3.0, 1.0};
  const auto t = taylor_coefficients(p, 1.0, 4);
  CHECK(std::abs(t[0]) < 1e-15);
  CHECK(std::abs(t[1]) < 1e-15);
  CHECK(std::abs(t[2]) < 1e-15);
  CHECK(std::abs(t[3] - 1.0) < 1e-15);
  const Polynomial d = poly_derivative(p);
  CHECK(std::abs(d(2.0) - 3.0) < 1e-14);
  const auto t2 = taylor_coefficients(p, 2.0, 2);
  CHECK(std::abs(t2[0] - p(2.0)) < 1e-14);
  CHECK(std::abs(t2[1] - d(2.0)) < 1e-14);
}

TEST_CASE("roots from the companion matrix") {
  const std::vector<cplx> r{cplx(1.0, 0.0), cplx(-2.0, 0.5), cplx(0.3, -1.1), cplx(4.0, 0.0)};
  const Polynomial p = Polynomial::from_roots(r, 2.5);
  const auto found = poly_roots(p);
  REQUIRE(found.size() == r.size());
  for (const auto& x : r) CHECK(has_root(found, x, 1e-11));
}

TEST_CASE("quadratic roots are stable under cancellation") {
  // z^2 - 1e8 z + 1: roots near 1e8 and 1e-8
  const auto [r1, r2] = quadratic_roots(1.0, -1e8, 1.0);
  const double small = std::min(std::abs(r1), std::abs(r2));
  const double big = std::max(std::abs(r1), std::abs(r2));
  CHECK(std::abs(small - 1e-8) <= 1e-20);
  CHECK(std::abs(big - 1e8) <= 1e-6);
  // Vieta
  CHECK(std::abs(r1 * r2 - 1.0) <= 1e-14);
}

TEST_CASE("deflation divides out a root") {
  const Polynomial p = Polynomial::from_roots({2.0, -3.0, cplx(0.0, 1.0)});
  const Deflation d = deflate(p, -3.0);
  CHECK(d.quotient.degree() == 2);
  CHECK(d.residual < 1e-14);
  CHECK(std::abs(d.quotient(2.0)) < 1e-13);
  CHECK(std::abs(d.quotient(cplx(0.0, 1.0))) < 1e-13);
}

TEST_CASE("rational function cancellation") {
  const Polynomial num = Polynomial::from_roots({1.0, 2.0});
  const Polynomial den = Polynomial::from_roots({1.0, -1.0});
  const RationalFunction f(num, den);
  const RationalFunction g = f.cancel_roots({1.0});
  CHECK(g.num().degree() == 1);
  CHECK(g.den().degree() == 1);
  CHECK(std::abs(g(0.5) - f(0.5)) < 1e-14);
}

TEST_CASE("abs_eval bounds the value") {
  const Polynomial p{1.0, -2.0, 1.0};
  CHECK(abs_eval(p, 1.0) == doctest::Approx(4.0));
  CHECK(std::abs(p(1.0)) <= abs_eval(p, 1.0));
}
