#include <algorithm>
#include <cmath>

#include "wh/errors.hpp"
#include "wh/model.hpp"

namespace wh {

ComplexMatrix MonodromyMatrixTau::operator()(cplx tau) const { return model(spectral_map(pt, tau)); }

std::vector<int> MonodromyMatrixTau::inside_keys() const {
  std::vector<int> k{kOriginKey};
  for (size_t i = 0; i < partition.pairs.size(); ++i) k.push_back(inside_key(static_cast<int>(i)));
  return k;
}

std::optional<NormalForm2x2> normal_form_2x2(const RationalMatrixOmega& m, const SpectralPoint& pt) {
  if (m.n != 2 || m.eta[0] != 1 || m.eta[1] != 1) return std::nullopt;
  NormalForm2x2 nf;
  nf.q = Polynomial::from_roots(m.poles);
  auto lifted = [&](int i, int j) {
    const auto& d = m.dens[static_cast<size_t>(i * 2 + j)];
    std::vector<cplx> rest;
    for (size_t k = 0; k < m.poles.size(); ++k)
      if (std::find(d.pole_index.begin(), d.pole_index.end(), static_cast<int>(k)) == d.pole_index.end())
        rest.push_back(m.poles[k]);
    return poly_scale(m.at(i, j).num() * Polynomial::from_roots(rest), 1.0 / d.lc);
  };
  nf.p11 = lifted(0, 0);
  nf.p12 = lifted(0, 1);
  nf.p22 = lifted(1, 1);
  auto& d = nf.deg;
  d.k11 = nf.p11.degree();
  d.k22 = nf.p22.degree();
  d.p12_zero = nf.p12.is_zero();
  d.k12 = d.p12_zero ? 0 : nf.p12.degree();
  d.n = nf.q.degree();
  d.N1 = std::max(d.k11, d.k12);
  d.N2 = std::max(d.k12, d.k22);
  const int two_n = d.p12_zero ? d.k11 + d.k22 : std::max(d.k11 + d.k22, 2 * d.k12);
  if (two_n != 2 * d.n)
    fail(ErrorCode::InvariantViolation, "2x2 normal form violates 2n = max(k11 + k22, 2 k12)");
  nf.qt = compose_polynomial(pt, nf.q).num;
  nf.pt11 = compose_polynomial(pt, nf.p11).num;
  nf.pt12 = compose_polynomial(pt, nf.p12).num;
  nf.pt22 = compose_polynomial(pt, nf.p22).num;
  return nf;
}

MonodromyMatrixTau compose_monodromy(const RationalMatrixOmega& model, const SpectralPoint& pt,
                                     std::vector<Branch> branches) {
  require_engine_point(pt);
  if (branches.empty()) branches = model.default_branches;
  MonodromyMatrixTau mono;
  mono.n = model.n;
  mono.pt = pt;
  mono.model = model;
  mono.partition = build_partition(pt, model.poles, branches);
  mono.entries = RationalMatrixTau(model.n);
  std::vector<int> maxmult(2 * model.poles.size() + 1, 0);
  for (int i = 0; i < model.n; ++i)
    for (int j = 0; j < model.n; ++j) {
      const auto& f = model.at(i, j);
      if (f.num().is_zero()) continue;
      const auto& d = model.dens[static_cast<size_t>(i * model.n + j)];
      const ComposedPolynomial cn = compose_polynomial(pt, f.num());
      const int kd = static_cast<int>(d.pole_index.size());
      std::vector<TauPole> poles;
      cplx scale = d.lc * std::pow(cplx(-0.5 * pt.rho), kd);
      for (int k : d.pole_index) {
        const auto& zp = mono.partition.pairs[static_cast<size_t>(k)];
        poles.push_back({inside_key(k), zp.tau_in, 1});
        poles.push_back({outside_key(k), zp.tau_out, 1});
      }
      Polynomial num = cn.num;
      if (kd >= cn.exponent)
        num = poly_shift(num, kd - cn.exponent);
      else
        poles.push_back({kOriginKey, 0.0, cn.exponent - kd});
      TauRational e(num, scale, poles);
      for (const auto& p : e.poles()) maxmult[static_cast<size_t>(p.key)] = std::max(maxmult[static_cast<size_t>(p.key)], p.mult);
      if (e.num().degree() > e.pole_degree()) mono.pole_at_infinity = true;
      mono.entries.at(i, j) = e;
    }
  mono.pole_at_origin = maxmult[0] > 0;
  if (mono.pole_at_origin) mono.ledger.push_back({kOriginKey, -1, 0.0, maxmult[0], true});
  for (size_t k = 0; k < model.poles.size(); ++k) {
    const auto& zp = mono.partition.pairs[k];
    const int ki = inside_key(static_cast<int>(k)), ko = outside_key(static_cast<int>(k));
    mono.ledger.push_back({ki, ko, zp.tau_in, maxmult[static_cast<size_t>(ki)], true});
    mono.ledger.push_back({ko, ki, zp.tau_out, maxmult[static_cast<size_t>(ko)], false});
  }
  mono.normal_form = normal_form_2x2(model, pt);
  return mono;
}

}  // namespace wh
