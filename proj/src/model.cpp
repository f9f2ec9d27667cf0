#include "wh/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "wh/errors.hpp"

namespace wh {

namespace {

struct FactoredEntry {
  Polynomial num;
  cplx lc = 1.0;
  std::vector<cplx> roots;
};

FactoredEntry factored(Polynomial num, cplx lc, std::vector<cplx> roots) {
  return {std::move(num), lc, std::move(roots)};
}

FactoredEntry zero_entry() { return {Polynomial(), 1.0, {}}; }

RationalFunction to_rational(const FactoredEntry& e) {
  return RationalFunction(e.num, Polynomial::from_roots(e.roots, e.lc));
}

cplx sample_omega(std::mt19937& rng, const std::vector<cplx>& poles, double scale) {
  std::uniform_real_distribution<double> re(-2.0, 2.0), im(0.5, 2.0);
  for (;;) {
    const cplx w(scale * re(rng), scale * im(rng));
    bool ok = true;
    for (const auto& p : poles)
      if (std::abs(w - p) < 1e-2 * scale) ok = false;
    if (ok) return w;
  }
}

double hadamard_bound(const ComplexMatrix& M) {
  double b = 1.0;
  for (Eigen::Index i = 0; i < M.rows(); ++i) b *= std::max(1.0, M.row(i).norm());
  return b;
}

RationalMatrixOmega finalize_factored(std::string name, int n, std::vector<int> eta,
                                      std::vector<FactoredEntry> entries, std::map<std::string, double> params,
                                      std::vector<Branch> default_branches, std::vector<RationalFunction> given) {
  if (n < 1) fail(ErrorCode::SchemaError, "model dimension must be positive");
  if (static_cast<int>(entries.size()) != n * n) fail(ErrorCode::SchemaError, "entry count must be n*n");
  if (eta.empty()) eta.assign(static_cast<size_t>(n), 1);
  if (static_cast<int>(eta.size()) != n) fail(ErrorCode::SchemaError, "eta must have n entries");
  for (int e : eta)
    if (e != 1 && e != -1) fail(ErrorCode::SchemaError, "eta entries must be +1 or -1");

  double scale = 1.0;
  if (auto it = params.find("m"); it != params.end() && it->second > 0.0) scale = it->second;

  // cancel shared linear factors
  bool cancelled_any = false;
  for (auto& e : entries) {
    if (e.num.is_zero()) {
      e.roots.clear();
      e.lc = 1.0;
      continue;
    }
    bool changed = true;
    while (changed && e.num.degree() >= 1) {
      changed = false;
      for (size_t k = 0; k < e.roots.size(); ++k) {
        const Deflation d = deflate(e.num, e.roots[k]);
        if (d.residual <= 1e-12) {
          e.num = d.quotient;
          e.roots.erase(e.roots.begin() + static_cast<long>(k));
          changed = cancelled_any = true;
          break;
        }
      }
    }
  }

  // distinct poles
  std::vector<cplx> poles;
  std::vector<int> count;
  const double ctol = 1e-9 * scale;
  for (const auto& e : entries)
    for (const auto& r : e.roots) {
      auto it = std::find_if(poles.begin(), poles.end(), [&](cplx p) { return std::abs(p - r) <= ctol; });
      if (it == poles.end()) poles.push_back(r);
    }
  std::stable_sort(poles.begin(), poles.end(), [&](cplx a, cplx b) {
    if (std::abs(a.real() - b.real()) > ctol) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  for (auto& p : poles) {
    if (std::abs(p.imag()) <= ctol) p.imag(0.0);
  }

  RationalMatrixOmega m;
  m.name = std::move(name);
  m.n = n;
  m.eta = std::move(eta);
  m.params = std::move(params);
  m.poles = poles;
  m.scale = std::max(scale, 1e-300);
  for (size_t idx = 0; idx < entries.size(); ++idx) {
    const auto& e = entries[idx];
    EntryDenominator d;
    d.lc = e.lc;
    for (const auto& r : e.roots) {
      int best = -1;
      for (size_t k = 0; k < poles.size(); ++k)
        if (std::abs(poles[k] - r) <= ctol) best = static_cast<int>(k);
      if (std::find(d.pole_index.begin(), d.pole_index.end(), best) != d.pole_index.end())
        fail(ErrorCode::InvariantViolation, "entry (" + std::to_string(idx / static_cast<size_t>(n)) + "," +
                                                std::to_string(idx % static_cast<size_t>(n)) +
                                                ") has a repeated denominator zero; poles must be simple");
      d.pole_index.push_back(best);
    }
    std::sort(d.pole_index.begin(), d.pole_index.end());
    m.dens.push_back(d);
    if (!given.empty() && !cancelled_any)
      m.entries.push_back(given[idx]);
    else
      m.entries.push_back(to_rational(e));
  }
  if (default_branches.empty()) default_branches.assign(poles.size(), Branch::Minus);
  if (default_branches.size() != poles.size())
    fail(ErrorCode::SchemaError, "default branches must list one choice per pole");
  m.default_branches = std::move(default_branches);
  check_model_invariants(m);
  return m;
}

}  // namespace

ComplexMatrix RationalMatrixOmega::operator()(cplx omega) const {
  ComplexMatrix M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = at(i, j)(omega);
  return M;
}

InvariantReport check_model_invariants(const RationalMatrixOmega& m, int det_samples, int sym_samples,
                                       unsigned seed) {
  std::mt19937 rng(seed);
  InvariantReport rep;
  ComplexMatrix eta = ComplexMatrix::Zero(m.n, m.n);
  for (int i = 0; i < m.n; ++i) eta(i, i) = static_cast<double>(m.eta[static_cast<size_t>(i)]);
  for (int s = 0; s < std::max(det_samples, sym_samples); ++s) {
    const cplx w = sample_omega(rng, m.poles, m.scale);
    const ComplexMatrix M = m(w);
    if (s < det_samples) {
      const double r = std::abs(dense_det(M) - 1.0) / hadamard_bound(M);
      rep.det_residual = std::max(rep.det_residual, r);
      if (r > 1e-10) {
        fail(ErrorCode::InvariantViolation, "det M != 1 at omega = (" + std::to_string(w.real()) + ", " +
                                                std::to_string(w.imag()) + "), |det - 1| = " +
                                                std::to_string(std::abs(dense_det(M) - 1.0)));
      }
    }
    if (s < sym_samples) {
      const ComplexMatrix S = eta * M.transpose() * eta;
      const double r = inf_norm(S - M) / std::max(1e-300, inf_norm(M));
      rep.symmetry_residual = std::max(rep.symmetry_residual, r);
      if (r > 1e-10)
        fail(ErrorCode::InvariantViolation, "eta M^T eta != M at omega = (" + std::to_string(w.real()) + ", " +
                                                std::to_string(w.imag()) + ")");
    }
  }
  return rep;
}

RationalMatrixOmega finalize_model(std::string name, int n, std::vector<int> eta, std::vector<RationalFunction> entries,
                                   std::map<std::string, double> params, std::vector<Branch> default_branches) {
  std::vector<FactoredEntry> f;
  for (const auto& e : entries) {
    if (e.num().is_zero()) {
      f.push_back(zero_entry());
      continue;
    }
    std::vector<cplx> roots = poly_roots(e.den());
    f.push_back(factored(e.num(), e.den().leading(), roots));
  }
  return finalize_factored(std::move(name), n, std::move(eta), std::move(f), std::move(params),
                           std::move(default_branches), std::move(entries));
}

RationalMatrixOmega model_identity(int n) {
  std::vector<FactoredEntry> e;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) e.push_back(i == j ? factored(Polynomial::constant(1.0), 1.0, {}) : zero_entry());
  return finalize_factored("identity", n, {}, std::move(e), {}, {}, {});
}

RationalMatrixOmega model_kerr(double m, double a) {
  if (!(m > a) || !(a >= 0.0)) fail(ErrorCode::ExtremalOrOverRotating, "Kerr model needs m > a >= 0");
  const double c = std::sqrt(m * m - a * a);
  const std::vector<cplx> q{c, -c};
  std::vector<FactoredEntry> e{
      factored(Polynomial{m * m + a * a, -2.0 * m, 1.0}, 1.0, q),
      a == 0.0 ? zero_entry() : factored(Polynomial::constant(2.0 * a * m), 1.0, q),
      a == 0.0 ? zero_entry() : factored(Polynomial::constant(2.0 * a * m), 1.0, q),
      factored(Polynomial{m * m + a * a, 2.0 * m, 1.0}, 1.0, q),
  };
  return finalize_factored("kerr", 2, {1, 1}, std::move(e), {{"m", m}, {"a", a}, {"c", c}},
                           {Branch::Minus, Branch::Minus}, {});
}

RationalMatrixOmega model_mp5d(double m, double a) {
  if (!(m > 0.0) || !(2.0 * m - a * a > 0.0)) fail(ErrorCode::ParameterViolation, "MP model needs 2m - a^2 > 0");
  const double al = (2.0 * m - a * a) / 4.0;
  const Polynomial wm{-al, 1.0}, wp{al, 1.0};
  const Polynomial n33 = poly_add(poly_scale(wm * wm * wp, 8.0), Polynomial::constant(4.0 * a * a * m * m));
  std::vector<FactoredEntry> e{
      factored(Polynomial{m - al, 1.0}, 2.0, {al, -al}),
      zero_entry(),
      a == 0.0 ? zero_entry() : factored(Polynomial::constant(a * m), 2.0, {al, -al}),
      zero_entry(),
      factored(Polynomial{2.0 * al, 2.0}, 1.0, {}),
      zero_entry(),
      a == 0.0 ? zero_entry() : factored(Polynomial::constant(a * m), 2.0, {al, -al}),
      zero_entry(),
      factored(n33, 8.0, {al, -al, al - m}),
  };
  return finalize_factored("mp5d", 3, {1, -1, 1}, std::move(e),
                           {{"m", m}, {"a", a}, {"alpha", al}, {"L", a * a / m}}, {}, {});
}

RationalMatrixOmega model_mvc5d(double m, double a) {
  if (!(m > 0.0) || !(2.0 * m - a * a > 0.0)) fail(ErrorCode::ParameterViolation, "mvc model needs 2m - a^2 > 0");
  const double al = (2.0 * m - a * a) / 4.0;
  const Polynomial n22 = poly_add(poly_scale(Polynomial{al, 1.0}, -2.0 * a * a * m), poly_scale(Polynomial{-al, 1.0}, m * m));
  std::vector<FactoredEntry> e{
      factored(Polynomial::constant(-2.0), 1.0, {-al}),
      factored(Polynomial{al - 0.5 * m, 1.0}, 1.0, {-al}),
      zero_entry(),
      factored(Polynomial{0.5 * m - al, -1.0}, 1.0, {-al}),
      factored(n22, 8.0, {al, -al}),
      a == 0.0 ? zero_entry() : factored(Polynomial::constant(a * m), 2.0, {al}),
      zero_entry(),
      a == 0.0 ? zero_entry() : factored(Polynomial::constant(-a * m), 2.0, {al}),
      factored(Polynomial{m - al, 1.0}, 1.0, {al}),
  };
  return finalize_factored("mvc5d", 3, {1, -1, 1}, std::move(e),
                           {{"m", m}, {"a", a}, {"alpha", al}, {"L", a * a / m}}, {Branch::Plus, Branch::Plus}, {});
}

std::vector<std::string> catalog_names() { return {"identity", "kerr", "mp5d", "mvc5d"}; }

RationalMatrixOmega model_by_name(const std::string& name, double m, double a) {
  if (name == "identity") return model_identity(2);
  if (name == "identity3") return model_identity(3);
  if (name == "kerr") return model_kerr(m, a);
  if (name == "mp5d") return model_mp5d(m, a);
  if (name == "mvc5d") return model_mvc5d(m, a);
  fail(ErrorCode::Usage, "unknown model '" + name + "'");
}

}  // namespace wh
