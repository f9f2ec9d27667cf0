#include <algorithm>
#include <cmath>
#include <map>

#include "wh/engine.hpp"
#include "wh/errors.hpp"

namespace wh {

namespace {

cplx key_location(const MonodromyMatrixTau& mono, int key) {
  if (key == kOriginKey) return 0.0;
  const auto& zp = mono.partition.pairs[static_cast<size_t>((key - 1) / 2)];
  return key_is_inside(key) ? zp.tau_in : zp.tau_out;
}

std::vector<TauPole> pole_sum(const std::vector<TauPole>& a, const std::vector<TauPole>& b) {
  std::map<int, TauPole> m;
  for (const auto& p : a) m.emplace(p.key, p);
  for (const auto& p : b) {
    auto [it, fresh] = m.emplace(p.key, p);
    if (!fresh) it->second.mult += p.mult;
  }
  std::vector<TauPole> out;
  for (const auto& [k, p] : m) out.push_back(p);
  return out;
}

int pole_mult(const std::vector<TauPole>& poles, int key) {
  for (const auto& p : poles)
    if (p.key == key) return p.mult;
  return 0;
}

double taylor_bound(const Polynomial& p, cplx z, int order) {
  std::vector<cplx> a;
  for (const auto& c : p.coeffs()) a.push_back(std::abs(c));
  return std::abs(taylor_coefficients(Polynomial(a), std::abs(z), order + 1)[static_cast<size_t>(order)]);
}

bool structurally_zero(const ConstraintSystem& s, Eigen::Index r) {
  return s.C.row(r).norm() <= 1e-11 * s.row_scale[static_cast<size_t>(r)];
}

}  // namespace

void drop_structural_zeros(ConstraintSystem& s) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index r = 0; r < s.C.rows(); ++r)
    if (!structurally_zero(s, r)) keep.push_back(r);
  ComplexMatrix C(static_cast<Eigen::Index>(keep.size()), s.C.cols());
  std::vector<RowLabel> labels;
  std::vector<double> scale;
  for (size_t k = 0; k < keep.size(); ++k) {
    C.row(static_cast<Eigen::Index>(k)) = s.C.row(keep[k]);
    labels.push_back(s.labels[static_cast<size_t>(keep[k])]);
    scale.push_back(s.row_scale[static_cast<size_t>(keep[k])]);
  }
  s.C = std::move(C);
  s.labels = std::move(labels);
  s.row_scale = std::move(scale);
}

namespace {

struct ComponentColumns {
  std::vector<Polynomial> cols;
  std::vector<TauPole> L;
};

ComponentColumns component_columns(const GenericAnsatz& a, int i, int n) {
  ComponentColumns cc;
  std::vector<std::vector<TauPole>> dens(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    if (a.adj.at(i, k).is_zero()) continue;
    dens[static_cast<size_t>(k)] = pole_sum(a.adj.at(i, k).poles(), a.pi[static_cast<size_t>(k)]);
    cc.L = pole_union(cc.L, dens[static_cast<size_t>(k)]);
  }
  for (int k = 0; k < n; ++k) {
    const int nu = a.unknowns[static_cast<size_t>(k)];
    const auto& e = a.adj.at(i, k);
    if (e.is_zero()) {
      for (int l = 0; l < nu; ++l) cc.cols.emplace_back();
      continue;
    }
    std::vector<TauPole> extra;
    for (const auto& p : cc.L) {
      const int m = p.mult - pole_mult(dens[static_cast<size_t>(k)], p.key);
      if (m > 0) extra.push_back({p.key, p.at, m});
    }
    const Polynomial base = poly_scale(e.num() * pole_polynomial(extra), 1.0 / e.scale());
    for (int l = 0; l < nu; ++l) cc.cols.push_back(poly_shift(base, l));
  }
  return cc;
}

}  // namespace

int kernel_dimension(const ComplexMatrix& C, double rel_tol) {
  if (C.cols() == 0) return 0;
  if (C.rows() == 0) return static_cast<int>(C.cols());
  ComplexMatrix A = equilibrate_rows(C);
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    const double nj = A.col(j).norm();
    if (nj > 0.0) A.col(j) /= nj;
  }
  return numerical_nullity(A, rel_tol);
}

GenericSystem generic_constraints(const MonodromyMatrixTau& mono, bool homogeneous) {
  const int n = mono.n;
  GenericSystem g;
  auto& a = g.ansatz;
  a.homogeneous = homogeneous;
  a.adj = adjugate(mono.entries);
  const auto inside = mono.inside_keys();
  int total = 0;
  for (int j = 0; j < n; ++j) {
    std::vector<TauPole> pi;
    for (int key : inside) {
      int mu = 0;
      for (int k = 0; k < n; ++k) mu = std::max(mu, mono.entries.at(j, k).mult(key));
      if (mu > 0) pi.push_back({key, key_location(mono, key), mu});
    }
    int deg = 0;
    for (const auto& p : pi) deg += p.mult;
    a.pi.push_back(pi);
    a.offset.push_back(total);
    a.unknowns.push_back(deg + (homogeneous ? 0 : 1));
    total += a.unknowns.back();
  }
  auto& s = g.sys;
  s.unknowns = total;
  s.C.resize(0, total);
  g.norm_rows = ComplexMatrix::Zero(homogeneous ? 0 : n, total);
  for (int i = 0; i < n; ++i) {
    const ComponentColumns cc = component_columns(a, i, n);
    for (int key : inside) {
      const int mu = pole_mult(cc.L, key);
      if (mu == 0) continue;
      const cplx at = key_location(mono, key);
      std::vector<std::vector<cplx>> tay;
      for (const auto& c : cc.cols) tay.push_back(taylor_coefficients(c, at, mu));
      for (int d = 0; d < mu; ++d) {
        const Eigen::Index r = s.C.rows();
        s.C.conservativeResize(r + 1, total);
        double scale = 0.0;
        for (int c = 0; c < total; ++c) {
          s.C(r, c) = tay[static_cast<size_t>(c)][static_cast<size_t>(d)];
          scale = std::max(scale, taylor_bound(cc.cols[static_cast<size_t>(c)], at, d));
        }
        s.labels.push_back({i, key, d});
        s.row_scale.push_back(scale);
      }
    }
    if (!homogeneous) {
      const int mu0 = pole_mult(cc.L, kOriginKey);
      cplx denom0 = 1.0;
      for (const auto& p : cc.L)
        if (p.key != kOriginKey) denom0 *= std::pow(-p.at, p.mult);
      for (int c = 0; c < total; ++c) g.norm_rows(i, c) = cc.cols[static_cast<size_t>(c)].coeff(mu0) / denom0;
    }
  }
  drop_structural_zeros(s);
  return g;
}

DeterminantPlan plan_determinant(const ConstraintSystem& s, double rel_tol) {
  DeterminantPlan plan;
  plan.unknowns = s.unknowns;
  auto greedy = [&](const std::vector<Eigen::Index>& candidates, int limit) {
    std::vector<Eigen::Index> chosen;
    ComplexMatrix acc(0, s.C.cols());
    for (Eigen::Index r : candidates) {
      if (static_cast<int>(chosen.size()) >= limit) break;
      ComplexMatrix trial(acc.rows() + 1, acc.cols());
      trial << acc, s.C.row(r) / s.C.row(r).norm();
      if (numerical_rank(trial, rel_tol) > static_cast<int>(acc.rows())) {
        acc = trial;
        chosen.push_back(r);
      }
    }
    return chosen;
  };

  // per point, in label order
  std::vector<int> keys;
  for (const auto& l : s.labels)
    if (std::find(keys.begin(), keys.end(), l.key) == keys.end()) keys.push_back(l.key);
  std::sort(keys.begin(), keys.end());
  std::vector<Eigen::Index> rows;
  for (int key : keys) {
    std::vector<Eigen::Index> block;
    for (Eigen::Index r = 0; r < s.C.rows(); ++r)
      if (s.labels[static_cast<size_t>(r)].key == key) block.push_back(r);
    const auto pick = greedy(block, s.unknowns);
    rows.insert(rows.end(), pick.begin(), pick.end());
  }
  bool ok = static_cast<int>(rows.size()) == s.unknowns;
  if (ok) {
    ComplexMatrix sq(s.unknowns, s.C.cols());
    for (int k = 0; k < s.unknowns; ++k) sq.row(k) = s.C.row(rows[static_cast<size_t>(k)]).normalized();
    ok = numerical_rank(sq, rel_tol) == s.unknowns;
  }
  if (!ok) {
    std::vector<Eigen::Index> all;
    for (Eigen::Index r = 0; r < s.C.rows(); ++r) all.push_back(r);
    rows = greedy(all, s.unknowns);
  }
  for (Eigen::Index r : rows) plan.rows.push_back(s.labels[static_cast<size_t>(r)]);
  return plan;
}

DValue plan_det(const ConstraintSystem& s, const DeterminantPlan& plan) {
  if (s.unknowns != plan.unknowns) fail(ErrorCode::NonSquareSystem, "determinant plan does not match the system");
  if (static_cast<int>(plan.rows.size()) != plan.unknowns) return {0.0, 0.0};
  if (plan.unknowns == 0) return {1.0, 1.0};
  ComplexMatrix sq(plan.unknowns, s.C.cols());
  for (int k = 0; k < plan.unknowns; ++k) {
    const auto& lab = plan.rows[static_cast<size_t>(k)];
    auto it = std::find(s.labels.begin(), s.labels.end(), lab);
    if (it == s.labels.end()) return {0.0, 0.0};
    sq.row(k) = s.C.row(it - s.labels.begin());
  }
  DValue d;
  d.raw = dense_det(sq);
  d.relative = dense_det(equilibrate_rows(sq));
  return d;
}

Factors solve_factor_columns_generic(const MonodromyMatrixTau& mono) {
  const int n = mono.n;
  const GenericSystem g = generic_constraints(mono, false);
  const auto& a = g.ansatz;
  const auto& s = g.sys;
  const Eigen::Index rows = s.C.rows() + n;
  ComplexMatrix A(rows, s.unknowns);
  A << s.C, g.norm_rows;
  ComplexMatrix B = ComplexMatrix::Zero(rows, n);
  for (int i = 0; i < n; ++i) B(s.C.rows() + i, i) = 1.0;
  const LeastSquares ls = least_squares(A, B);
  if (ls.rank < s.unknowns) fail(ErrorCode::SingularSystem, "generic factor system is rank deficient");

  Factors f;
  f.solve_residual = ls.residual;
  f.m_minus = RationalMatrixTau(n);
  f.x_inverse = RationalMatrixTau(n);
  f.limit = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    std::vector<TauRational> psi_minus;
    for (int j = 0; j < n; ++j) {
      const int off = a.offset[static_cast<size_t>(j)], nu = a.unknowns[static_cast<size_t>(j)];
      std::vector<cplx> c(static_cast<size_t>(nu));
      for (int l = 0; l < nu; ++l) c[static_cast<size_t>(l)] = ls.x(off + l, i);
      const TauRational pm(Polynomial(c), 1.0, a.pi[static_cast<size_t>(j)]);
      psi_minus.push_back(pm);
      f.m_minus.at(j, i) = pm;
      f.limit(j, i) = ls.x(off + nu - 1, i);
    }
    double rem = 0.0, mag = 0.0;
    for (int j = 0; j < n; ++j) {
      TauRational acc;
      for (int k = 0; k < n; ++k) acc = acc + a.adj.at(j, k) * psi_minus[static_cast<size_t>(k)];
      const PoleRemoval pr = remove_poles(acc, key_is_inside);
      rem = std::max(rem, pr.remainder);
      mag = std::max(mag, pr.magnitude);
      f.x_inverse.at(j, i) = pr.value;
    }
    if (mag > 0.0) f.analyticity_residual = std::max(f.analyticity_residual, rem / mag);
  }
  f.x = adjugate(f.x_inverse);
  return f;
}

}  // namespace wh
