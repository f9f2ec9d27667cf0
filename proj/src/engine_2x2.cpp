#include <algorithm>
#include <cmath>
#include <sstream>

#include "wh/engine.hpp"
#include "wh/errors.hpp"

namespace wh {

const char* case_name(Case2x2 c) {
  switch (c) {
    case Case2x2::AlwaysCanonical: return "always_canonical";
    case Case2x2::DeterminantTest: return "determinant_test";
    case Case2x2::ReducibleCase: return "reducible";
  }
  return "?";
}

Classification classify_degrees(const DegreeTable& d) {
  Classification c;
  c.excess = d.N1 + d.N2 - 2 * d.n;
  std::ostringstream t;
  t << "k11=" << d.k11 << " k12=" << d.k12 << " k22=" << d.k22 << " n=" << d.n << " N1=" << d.N1
    << " N2=" << d.N2 << "; N1+N2-2n=" << c.excess;
  if (c.excess < 0) {
    c.kind = Case2x2::AlwaysCanonical;
    t << "; kernel elements vanish at 0, kernel trivial";
  } else if (c.excess == 0) {
    c.kind = Case2x2::DeterminantTest;
    t << "; square system of size " << 2 * d.n;
  } else {
    c.kind = Case2x2::ReducibleCase;
    const bool chain = (d.k11 > d.k12 && d.k12 > d.k22) || (d.k22 > d.k12 && d.k12 > d.k11);
    t << "; chain inequality " << (chain ? "holds" : "fails");
    t << "; Cramer rearrangement: numerator 1 doubly vanishes at the " << d.n
      << " inside zeros, numerator 2 vanishes to order " << c.excess << " at 0; square system of size "
      << d.N1 + d.N2;
  }
  c.transcript = t.str();
  return c;
}

Classification classify_2x2(const MonodromyMatrixTau& mono) {
  if (!mono.normal_form) fail(ErrorCode::InvariantViolation, "2x2 normal form not available");
  return classify_degrees(mono.normal_form->deg);
}

std::optional<int> fast_kernel_dim(const Classification& c) {
  if (c.kind == Case2x2::AlwaysCanonical) return 0;
  return std::nullopt;
}

namespace {

const NormalForm2x2& require_nf(const MonodromyMatrixTau& mono) {
  if (!mono.normal_form) fail(ErrorCode::InvariantViolation, "2x2 normal form not available");
  return *mono.normal_form;
}

void check_inside_distinct(const MonodromyMatrixTau& mono) {
  const auto& p = mono.partition.pairs;
  for (size_t i = 0; i < p.size(); ++i)
    for (size_t j = i + 1; j < p.size(); ++j) {
      const double s = std::max({1.0, std::abs(p[i].tau_in), std::abs(p[j].tau_in)});
      if (std::abs(p[i].tau_in - p[j].tau_in) < 1e-10 * s)
        fail(ErrorCode::DegenerateZeros, "two inside zeros coincide");
    }
}

// Column polynomials of numerator 1 (alpha block then beta block).
std::vector<Polynomial> numerator1_columns(const NormalForm2x2& nf) {
  const auto& d = nf.deg;
  std::vector<Polynomial> cols;
  for (int j = 0; j < d.N1; ++j) cols.push_back(poly_shift(nf.pt22, j + d.N2 - d.k22));
  for (int j = 0; j < d.N2; ++j) cols.push_back(poly_scale(poly_shift(nf.pt12, j + d.N1 - d.k12), -1.0));
  return cols;
}

std::vector<Polynomial> numerator2_columns(const NormalForm2x2& nf) {
  const auto& d = nf.deg;
  std::vector<Polynomial> cols;
  for (int j = 0; j < d.N1; ++j) cols.push_back(poly_scale(poly_shift(nf.pt12, j + d.N2 - d.k12), -1.0));
  for (int j = 0; j < d.N2; ++j) cols.push_back(poly_shift(nf.pt11, j + d.N1 - d.k11));
  return cols;
}

double taylor_bound(const Polynomial& p, cplx z, int order) {
  std::vector<cplx> a;
  for (const auto& c : p.coeffs()) a.push_back(std::abs(c));
  return std::abs(taylor_coefficients(Polynomial(a), std::abs(z), order + 1)[static_cast<size_t>(order)]);
}

void append_rows(ConstraintSystem& s, const std::vector<Polynomial>& cols, int component, int key, cplx at,
                 int count) {
  const Eigen::Index ncols = static_cast<Eigen::Index>(cols.size());
  for (int d = 0; d < count; ++d) {
    const Eigen::Index r = s.C.rows();
    s.C.conservativeResize(r + 1, ncols);
    double scale = 0.0;
    for (Eigen::Index c = 0; c < ncols; ++c) {
      const auto& p = cols[static_cast<size_t>(c)];
      s.C(r, c) = taylor_coefficients(p, at, d + 1)[static_cast<size_t>(d)];
      scale = std::max(scale, taylor_bound(p, at, d));
    }
    s.labels.push_back({component, key, d});
    s.row_scale.push_back(scale);
  }
}

}  // namespace

ComplexMatrix existence_system_2x2(const MonodromyMatrixTau& mono) {
  const auto& nf = require_nf(mono);
  if (nf.deg.N1 + nf.deg.N2 != 2 * nf.deg.n)
    fail(ErrorCode::NonSquareSystem, "existence system needs N1 + N2 = 2n");
  check_inside_distinct(mono);
  const auto cols = numerator1_columns(nf);
  const int size = 2 * nf.deg.n;
  ComplexMatrix A(size, size);
  for (int k = 0; k < nf.deg.n; ++k) {
    const cplx t = mono.partition.pairs[static_cast<size_t>(k)].tau_in;
    for (int c = 0; c < size; ++c) {
      const auto tc = taylor_coefficients(cols[static_cast<size_t>(c)], t, 2);
      A(2 * k, c) = tc[0];
      A(2 * k + 1, c) = tc[1];
    }
  }
  return A;
}

ConstraintSystem reducible_system_2x2(const MonodromyMatrixTau& mono) {
  const auto& nf = require_nf(mono);
  check_inside_distinct(mono);
  const int e = nf.deg.N1 + nf.deg.N2 - 2 * nf.deg.n;
  ConstraintSystem s;
  s.unknowns = nf.deg.N1 + nf.deg.N2;
  s.C.resize(0, s.unknowns);
  const std::vector<std::vector<Polynomial>> comps{numerator1_columns(nf), numerator2_columns(nf)};
  for (int comp = 0; comp < 2; ++comp) {
    if (e > 0) append_rows(s, comps[static_cast<size_t>(comp)], comp, kOriginKey, 0.0, e);
    for (int k = 0; k < nf.deg.n; ++k)
      append_rows(s, comps[static_cast<size_t>(comp)], comp, inside_key(k),
                  mono.partition.pairs[static_cast<size_t>(k)].tau_in, 2);
  }
  drop_structural_zeros(s);
  return s;
}

ScalarFactors scalar_factorise(const ScalarSymbol& s, const PolePartition& part) {
  const int n = static_cast<int>(part.pairs.size());
  if (s.power != n) fail(ErrorCode::UnsupportedPoleSet, "scalar symbol must carry tau^n over n zero pairs");
  if (s.leading == cplx(0.0)) fail(ErrorCode::UnsupportedPoleSet, "scalar symbol has zero leading coefficient");
  std::vector<TauPole> in, out;
  cplx minus_num = 1.0, plus_scale = 1.0;
  for (int k = 0; k < n; ++k) {
    const auto& zp = part.pairs[static_cast<size_t>(k)];
    in.push_back({inside_key(k), zp.tau_in, 1});
    out.push_back({outside_key(k), zp.tau_out, 1});
    minus_num *= -1.0 / zp.tau_out;
    plus_scale *= -1.0 / zp.tau_out;
  }
  ScalarFactors f;
  f.minus = TauRational(Polynomial::monomial(n, minus_num), s.leading, in);
  f.plus = TauRational(Polynomial::constant(1.0), plus_scale, out);
  f.minus_at_infinity = minus_num / s.leading;
  return f;
}

cplx scalar_symbol_eval(const ScalarSymbol& s, const PolePartition& part, cplx tau) {
  cplx d = s.leading;
  for (const auto& zp : part.pairs) d *= (tau - zp.tau_in) * (tau - zp.tau_out);
  return std::pow(tau, s.power) / d;
}

Factors solve_factor_columns_2x2(const MonodromyMatrixTau& mono) {
  const auto& nf = require_nf(mono);
  const auto& d = nf.deg;
  if (d.p12_zero) fail(ErrorCode::UnsupportedPoleSet, "2x2 construction needs a nonzero off-diagonal entry");
  const ComplexMatrix E = existence_system_2x2(mono);
  const int n = d.n;

  // (A1, A2) from psi_plus(0) = e_i
  ComplexMatrix B(2, 2);
  B(0, 0) = d.N2 == d.k22 ? nf.pt22.coeff(0) : cplx(0.0);
  B(0, 1) = d.N1 == d.k12 ? -nf.pt12.coeff(0) : cplx(0.0);
  B(1, 0) = d.N2 == d.k12 ? -nf.pt12.coeff(0) : cplx(0.0);
  B(1, 1) = d.N1 == d.k11 ? nf.pt11.coeff(0) : cplx(0.0);
  const cplx q0 = nf.qt.coeff(0);

  const Polynomial c1 = poly_shift(nf.pt22, d.N2 - d.k22);
  const Polynomial c2 = poly_scale(poly_shift(nf.pt12, d.N1 - d.k12), -1.0);
  const Polynomial c3 = poly_scale(poly_shift(nf.pt12, d.N2 - d.k12), -1.0);
  const Polynomial c4 = poly_shift(nf.pt11, d.N1 - d.k11);

  const ScalarFactors sf = scalar_factorise({n, nf.qt.leading()}, mono.partition);
  // 1/s_plus = prod (tau - tau_out) / prod (-tau_out)
  std::vector<TauPole> outs;
  cplx out_scale = 1.0;
  for (int k = 0; k < n; ++k) {
    const cplx t = mono.partition.pairs[static_cast<size_t>(k)].tau_out;
    outs.push_back({outside_key(k), t, 1});
    out_scale *= -t;
  }
  const TauRational plus_inv(pole_polynomial(outs), out_scale);

  std::vector<TauPole> qq;
  for (int k = 0; k < n; ++k) {
    const auto& zp = mono.partition.pairs[static_cast<size_t>(k)];
    qq.push_back({inside_key(k), zp.tau_in, 2});
    qq.push_back({outside_key(k), zp.tau_out, 2});
  }
  const cplx lc2 = nf.qt.leading() * nf.qt.leading();

  Factors f;
  f.x_inverse = RationalMatrixTau(2);
  f.m_minus = RationalMatrixTau(2);
  f.limit = ComplexMatrix::Zero(2, 2);
  for (int i = 0; i < 2; ++i) {
    ComplexVector rhs0(2);
    rhs0 << (i == 0 ? q0 * q0 : cplx(0.0)), (i == 1 ? q0 * q0 : cplx(0.0));
    const ComplexVector A = dense_solve(B, rhs0);
    const Polynomial R = poly_add(poly_scale(c1, A(0)), poly_scale(c2, A(1)));
    ComplexVector rhs(2 * n);
    for (int k = 0; k < n; ++k) {
      const cplx t = mono.partition.pairs[static_cast<size_t>(k)].tau_in;
      const auto tr = taylor_coefficients(R, t, 2);
      rhs(2 * k) = -tr[0] / t;
      rhs(2 * k + 1) = -(tr[1] - tr[0] / t) / t;
    }
    const ComplexVector x = dense_solve(E, rhs);
    f.solve_residual = std::max(f.solve_residual, (E * x - rhs).norm() / std::max(1.0, rhs.norm()));
    std::vector<cplx> q1(static_cast<size_t>(d.N1) + 1), q2(static_cast<size_t>(d.N2) + 1);
    q1[0] = A(0);
    q2[0] = A(1);
    for (int j = 0; j < d.N1; ++j) q1[static_cast<size_t>(j) + 1] = x(j);
    for (int j = 0; j < d.N2; ++j) q2[static_cast<size_t>(j) + 1] = x(d.N1 + j);
    const Polynomial Q1(q1), Q2(q2);
    const Polynomial num1 = c1 * Q1 + c2 * Q2;
    const Polynomial num2 = c3 * Q1 + c4 * Q2;
    const Polynomial nums[2] = {num1, num2};
    double rem = 0.0, mag = 0.0;
    for (int j = 0; j < 2; ++j) {
      const PoleRemoval pr = remove_poles(TauRational(nums[j], lc2, qq), key_is_inside);
      rem = std::max(rem, pr.remainder);
      mag = std::max(mag, pr.magnitude);
      f.x_inverse.at(j, i) = pr.value * plus_inv;
    }
    if (mag > 0.0) f.analyticity_residual = std::max(f.analyticity_residual, rem / mag);
    f.m_minus.at(0, i) = sf.minus * TauRational(Q1, 1.0, {{kOriginKey, 0.0, d.N1}});
    f.m_minus.at(1, i) = sf.minus * TauRational(Q2, 1.0, {{kOriginKey, 0.0, d.N2}});
    f.limit(0, i) = sf.minus_at_infinity * Q1.coeff(d.N1);
    f.limit(1, i) = sf.minus_at_infinity * Q2.coeff(d.N2);
  }
  f.x = adjugate(f.x_inverse);
  return f;
}

}  // namespace wh
