#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <boost/math/tools/roots.hpp>

#include "wh/errors.hpp"
#include "wh/geometry.hpp"

namespace wh {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Evaluator {
  const Factoriser& f;
  double safe(const SpectralPoint& p) const {
    if (!(p.rho > 0.0)) return kNaN;
    try {
      return f.signed_D(p);
    } catch (const Error&) {
      return kNaN;
    }
  }
};

struct Root {
  bool ok = false;
  SpectralPoint pt;
  double absD = 0.0;
};

// Zero of D on the segment p0 + t (p1 - p0), t in [0, 1], given opposite signs at the ends.
Root segment_root(const Evaluator& ev, const SpectralPoint& p0, const SpectralPoint& p1, double d0, double d1,
                  double tol) {
  Root r;
  if (!(d0 * d1 < 0.0)) return r;
  auto at = [&](double t) { return SpectralPoint{p0.rho + t * (p1.rho - p0.rho), p0.v + t * (p1.v - p0.v), p0.lambda}; };
  const double len = std::hypot(p1.rho - p0.rho, p1.v - p0.v);
  auto fn = [&](double t) {
    const double d = ev.safe(at(t));
    if (std::isnan(d)) throw Error(ErrorCode::NoCurveFound, "unevaluable point");
    return d;
  };
  auto done = [&](double a, double b) { return std::abs(b - a) * len <= tol; };
  std::uintmax_t iters = 200;
  try {
    const auto br = boost::math::tools::toms748_solve(fn, 0.0, 1.0, d0, d1, done, iters);
    const double t = 0.5 * (br.first + br.second);
    r.pt = at(t);
    const DValue dv = ev.f.D(r.pt);
    r.absD = std::abs(dv.relative);
    r.ok = r.absD <= 1e-8;
  } catch (const std::exception&) {
    r.ok = false;
  }
  return r;
}

// Root on the line through p perpendicular to direction dir, within +-half.
Root normal_root(const Evaluator& ev, const SpectralPoint& p, double dr, double dv, double half, double tol) {
  const double n = std::hypot(dr, dv);
  const double nr = -dv / n, nv = dr / n;
  for (double w = half; w <= 8.0 * half; w *= 2.0) {
    const SpectralPoint a{p.rho - w * nr, p.v - w * nv, p.lambda};
    const SpectralPoint b{p.rho + w * nr, p.v + w * nv, p.lambda};
    const double da = ev.safe(a), db = ev.safe(b);
    if (da * db < 0.0) return segment_root(ev, a, b, da, db, tol);
  }
  return {};
}

double dist(const SpectralPoint& a, const SpectralPoint& b) { return std::hypot(a.rho - b.rho, a.v - b.v); }

std::vector<Root> densify(const Evaluator& ev, const std::vector<Root>& chain, double max_seg, double tol) {
  std::vector<Root> out;
  for (size_t k = 0; k < chain.size(); ++k) {
    if (k > 0) {
      const auto& a = chain[k - 1].pt;
      const auto& b = chain[k].pt;
      const double d = dist(a, b);
      const int pieces = static_cast<int>(std::ceil(d / max_seg));
      for (int s = 1; s < pieces; ++s) {
        const double t = static_cast<double>(s) / pieces;
        const SpectralPoint mid{a.rho + t * (b.rho - a.rho), a.v + t * (b.v - a.v), a.lambda};
        const Root r = normal_root(ev, mid, b.rho - a.rho, b.v - a.v, 0.25 * d, tol);
        if (r.ok) out.push_back(r);
      }
    }
    out.push_back(chain[k]);
  }
  return out;
}

// Continue a chain end toward the axis along horizontal lines rho = const.
void extend_to_floor(const Evaluator& ev, std::vector<Root>& chain, bool at_front, double floor, double step,
                     double tol) {
  if (chain.size() < 2) return;
  auto last = [&](size_t i) -> const SpectralPoint& {
    return at_front ? chain[i].pt : chain[chain.size() - 1 - i].pt;
  };
  std::vector<Root> added;
  SpectralPoint p1 = last(0), p0 = last(1);
  while (p1.rho > floor * (1.0 + 1e-12)) {
    if (!(p1.rho < p0.rho)) break;
    const double rho = std::max(floor, p1.rho - step);
    const double slope = (p1.v - p0.v) / (p1.rho - p0.rho);
    const double vg = p1.v + slope * (rho - p1.rho);
    const double w = std::max(4.0 * std::abs(slope) * (p1.rho - rho), 1e-3);
    const SpectralPoint a{rho, vg - w, p1.lambda}, b{rho, vg + w, p1.lambda};
    const Root r = segment_root(ev, a, b, ev.safe(a), ev.safe(b), tol);
    if (!r.ok) break;
    added.push_back(r);
    p0 = p1;
    p1 = r.pt;
  }
  if (at_front) {
    std::reverse(added.begin(), added.end());
    chain.insert(chain.begin(), added.begin(), added.end());
  } else {
    chain.insert(chain.end(), added.begin(), added.end());
  }
}

}  // namespace

std::vector<CurvePolyline> trace_curve(const Factoriser& f, const TraceOptions& o) {
  if (!(o.rho_max > o.rho_min) || !(o.rho_min >= 0.0) || !(o.v_max > o.v_min) || o.nrho < 2 || o.nv < 2)
    fail(ErrorCode::Usage, "invalid trace box");
  const Evaluator ev{f};
  const double scale = f.model().scale;
  const double tol = o.root_tol * std::max(1.0, scale);
  const int NR = o.nrho, NV = o.nv;
  const double drho = (o.rho_max - o.rho_min) / NR;
  const double dv = (o.v_max - o.v_min) / (NV - 1);
  auto grid = [&](int i, int j) { return SpectralPoint{o.rho_min + (i + 1) * drho, o.v_min + j * dv, 1}; };

  std::vector<double> val(static_cast<size_t>(NR * NV));
  for (int i = 0; i < NR; ++i)
    for (int j = 0; j < NV; ++j) val[static_cast<size_t>(i * NV + j)] = ev.safe(grid(i, j));
  auto value = [&](int i, int j) { return val[static_cast<size_t>(i * NV + j)]; };

  // Edge ids: horizontal (i,j)-(i+1,j) -> 2*(i*NV+j), vertical (i,j)-(i,j+1) -> 2*(i*NV+j)+1.
  std::map<long, Root> crossings;
  auto edge_root = [&](int i, int j, bool along_rho) -> const Root* {
    const long id = 2L * (i * NV + j) + (along_rho ? 0 : 1);
    auto it = crossings.find(id);
    if (it != crossings.end()) return it->second.ok ? &it->second : nullptr;
    const int i2 = along_rho ? i + 1 : i, j2 = along_rho ? j : j + 1;
    const Root r = segment_root(ev, grid(i, j), grid(i2, j2), value(i, j), value(i2, j2), tol);
    auto ins = crossings.emplace(id, r).first;
    return ins->second.ok ? &ins->second : nullptr;
  };

  std::map<long, std::vector<long>> adj;
  for (int i = 0; i + 1 < NR; ++i) {
    for (int j = 0; j + 1 < NV; ++j) {
      struct E {
        int i, j;
        bool along_rho;
      };
      const E edges[4] = {{i, j, true}, {i + 1, j, false}, {i, j + 1, true}, {i, j, false}};
      std::vector<long> hit;
      for (const auto& e : edges)
        if (edge_root(e.i, e.j, e.along_rho)) hit.push_back(2L * (e.i * NV + e.j) + (e.along_rho ? 0 : 1));
      auto link = [&](long a, long b) {
        adj[a].push_back(b);
        adj[b].push_back(a);
      };
      if (hit.size() == 2) {
        link(hit[0], hit[1]);
      } else if (hit.size() == 4) {
        const SpectralPoint c{o.rho_min + (i + 1.5) * drho, o.v_min + (j + 0.5) * dv, 1};
        const double dc = ev.safe(c);
        if (dc * value(i, j) > 0.0) {
          link(hit[0], hit[1]);
          link(hit[2], hit[3]);
        } else {
          link(hit[0], hit[3]);
          link(hit[1], hit[2]);
        }
      }
    }
  }

  std::vector<std::vector<Root>> chains;
  std::map<long, bool> seen;
  auto walk = [&](long start) {
    std::vector<Root> chain;
    long prev = -1, cur = start;
    while (cur >= 0 && !seen[cur]) {
      seen[cur] = true;
      chain.push_back(crossings.at(cur));
      long next = -1;
      for (long nb : adj[cur])
        if (nb != prev && !seen[nb]) {
          next = nb;
          break;
        }
      prev = cur;
      cur = next;
    }
    if (!chain.empty()) chains.push_back(std::move(chain));
  };
  for (const auto& [id, nbs] : adj)
    if (nbs.size() == 1 && !seen[id]) walk(id);
  for (const auto& [id, nbs] : adj)
    if (!seen[id]) walk(id);
  // isolated crossings without a partner cell are ignored

  std::vector<CurvePolyline> out;
  const double rho_first = o.rho_min + drho;
  for (auto& chain : chains) {
    if (chain.size() < 2) continue;
    if (chain.front().pt.rho > chain.back().pt.rho) std::reverse(chain.begin(), chain.end());
    chain = densify(ev, chain, o.max_segment, tol);
    if (chain.front().pt.rho < rho_first + 2.0 * drho)
      extend_to_floor(ev, chain, true, o.rho_floor, o.max_segment, tol);
    if (chain.back().pt.rho < rho_first + 2.0 * drho)
      extend_to_floor(ev, chain, false, o.rho_floor, o.max_segment, tol);
    CurvePolyline poly;
    for (const auto& r : chain) {
      if (!poly.samples.empty() && dist(poly.samples.back(), r.pt) <= 1e-9 * std::max(1.0, scale)) continue;
      poly.samples.push_back(r.pt);
      poly.abs_D.push_back(r.absD);
    }
    if (poly.samples.size() >= 2) out.push_back(std::move(poly));
  }
  if (out.empty()) fail(ErrorCode::NoCurveFound, "no zero of D in the box");
  std::sort(out.begin(), out.end(), [](const CurvePolyline& a, const CurvePolyline& b) {
    return a.samples.size() > b.samples.size();
  });
  return out;
}

namespace {

double point_segment(const SpectralPoint& p, const SpectralPoint& a, const SpectralPoint& b) {
  const double ex = b.rho - a.rho, ey = b.v - a.v;
  const double l2 = ex * ex + ey * ey;
  double t = l2 > 0.0 ? ((p.rho - a.rho) * ex + (p.v - a.v) * ey) / l2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.rho - (a.rho + t * ex), p.v - (a.v + t * ey));
}

double directed(const std::vector<SpectralPoint>& a, const std::vector<SpectralPoint>& b) {
  double worst = 0.0;
  for (const auto& p : a) {
    double best = INFINITY;
    if (b.size() == 1) best = dist(p, b[0]);
    for (size_t k = 1; k < b.size(); ++k) best = std::min(best, point_segment(p, b[k - 1], b[k]));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

double hausdorff_distance(const std::vector<SpectralPoint>& a, const std::vector<SpectralPoint>& b) {
  if (a.empty() || b.empty()) return INFINITY;
  return std::max(directed(a, b), directed(b, a));
}

}  // namespace wh
