#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "parallel.hpp"
#include "symbol.hpp"

namespace schur_scope {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Seed grid and bisection settings for boundary arc scans.
struct BoundaryRes {
  int n_seed = 4096;
  double tol_theta = 1e-12;
  /// Refine seed intervals down to h / (16 L) near the region (L = boundary Lipschitz bound).
  bool adaptive = true;
};

struct Arc {
  double start;  // in [0, 2 pi)
  double end;    // in [0, 2 pi]; end < start means the arc wraps through 0
  double length() const { return end >= start ? end - start : end + kTwoPi - start; }
};

/// {theta : phi*(e^{i theta}) in region} as disjoint arcs and its normalized length.
struct ArcSet {
  std::vector<Arc> arcs;
  double mass = 0.0;
  /// Set when some detected arc is shorter than four scan steps.
  bool resolution_warning = false;
  /// Finest theta step used by the scan.
  double resolution = 0.0;
};

/// phi* sampled on the uniform seed grid theta_i = 2 pi i / n.
struct BoundaryTable {
  std::vector<cplx> values;
  std::vector<double> args;           // arg of values, for the angular prefilter
  std::vector<std::uint32_t> by_arg;  // seed indices sorted by arg

  int size() const { return static_cast<int>(values.size()); }
  double step() const { return kTwoPi / size(); }
};

inline BoundaryTable make_boundary_table(const SchurMap& phi, int n_seed) {
  if (n_seed < 16) throw PreconditionError("need at least 16 boundary seeds");
  BoundaryTable t;
  t.values = parallel_map(static_cast<std::size_t>(n_seed),
                          [&](std::size_t i) { return phi.value(unit(kTwoPi * i / n_seed)); });
  t.args.resize(n_seed);
  t.by_arg.resize(n_seed);
  for (int i = 0; i < n_seed; ++i) {
    t.args[i] = std::arg(t.values[i]);
    t.by_arg[i] = static_cast<std::uint32_t>(i);
  }
  std::stable_sort(t.by_arg.begin(), t.by_arg.end(),
                   [&t](std::uint32_t a, std::uint32_t b) { return t.args[a] < t.args[b]; });
  return t;
}

namespace detail {

/// Distance from z to the complement of the region (0 when z is outside).
inline double interior_depth(const CarlesonWindow& w, cplx z) {
  if (w.whole_disk()) return 1e300;
  const double r = std::abs(z);
  const double radial = r - (1.0 - w.h);
  const double ang = w.h - std::abs(std::arg(z * std::conj(w.xi)));
  if (radial < 0.0 || ang < 0.0) return 0.0;
  return std::min(radial, r * std::sin(std::min(ang, std::numbers::pi / 2)));
}

inline double interior_depth(const DiskSector& s, cplx z) {
  if (s.whole_disk()) return 1e300;
  return std::max(0.0, s.h - std::abs(z - s.xi));
}

/// Radius R such that every point within R of the region... is within R of xi;
/// used to prefilter seeds by argument.
inline double enclosing_radius(const CarlesonWindow& w) { return 2.0 * w.h; }
inline double enclosing_radius(const DiskSector& s) { return s.h; }

struct Crossing {
  double theta;
  bool entering;
};

template <typename Region>
ArcSet scan_arcs(const SchurMap& phi, const Region& region, const BoundaryTable& tab,
                 const BoundaryRes& res) {
  ArcSet out;
  if (region.whole_disk()) {
    out.arcs.push_back({0.0, kTwoPi});
    out.mass = 1.0;
    out.resolution = tab.step();
    return out;
  }
  const int n = tab.size();
  const double step = tab.step();
  const double lip = phi.boundary_lipschitz();
  const double theta_res =
      res.adaptive ? std::min(step, region.h / (16.0 * std::max(lip, 1e-300))) : step;
  out.resolution = theta_res;

  auto member_at = [&](double th) { return region.contains(phi.value(unit(th))); };

  // Seed intervals [i, i+1] that may meet the region: one endpoint within
  // R + L*step/2 of xi. Found through the argument-sorted index.
  const double reach = enclosing_radius(region) + 0.5 * lip * step;
  std::vector<int> intervals;
  if (reach >= 1.0) {
    intervals.resize(n);
    for (int i = 0; i < n; ++i) intervals[i] = i;
  } else {
    const double delta = std::asin(reach) + 1e-12;
    const double c = std::arg(region.xi);
    std::vector<char> mark(n, 0);
    auto take_range = [&](double lo, double hi) {
      auto first = std::lower_bound(tab.by_arg.begin(), tab.by_arg.end(), lo,
                                    [&tab](std::uint32_t i, double v) { return tab.args[i] < v; });
      for (auto it = first; it != tab.by_arg.end() && tab.args[*it] <= hi; ++it) {
        if (std::abs(tab.values[*it] - region.xi) > reach) continue;
        mark[*it] = 1;
        mark[(*it + n - 1) % n] = 1;  // the interval ending at this seed
      }
    };
    double lo = c - delta, hi = c + delta;
    take_range(std::max(lo, -std::numbers::pi), std::min(hi, std::numbers::pi));
    if (lo < -std::numbers::pi) take_range(lo + kTwoPi, std::numbers::pi);
    if (hi > std::numbers::pi) take_range(-std::numbers::pi, hi - kTwoPi);
    for (int i = 0; i < n; ++i)
      if (mark[i]) intervals.push_back(i);
  }

  std::vector<Crossing> crossings;
  auto bisect = [&](double a, double b, bool state_a) {
    while (b - a > res.tol_theta) {
      const double m = 0.5 * (a + b);
      if (!(m > a && m < b)) break;
      if (member_at(m) == state_a)
        a = m;
      else
        b = m;
    }
    crossings.push_back({0.5 * (a + b), !state_a});
  };

  struct Piece {
    double a, b;
    cplx za, zb;
  };
  std::vector<Piece> stack;
  for (int i : intervals) {
    stack.push_back({i * step, (i + 1) * step, tab.values[i], tab.values[(i + 1) % n]});
    while (!stack.empty()) {
      const Piece p = stack.back();
      stack.pop_back();
      const bool ma = region.contains(p.za), mb = region.contains(p.zb);
      const double half_sweep = 0.5 * lip * (p.b - p.a);
      if (!ma && !mb && region.distance_lower_bound(p.za) > half_sweep &&
          region.distance_lower_bound(p.zb) > half_sweep)
        continue;
      if (ma && mb && interior_depth(region, p.za) > half_sweep &&
          interior_depth(region, p.zb) > half_sweep)
        continue;
      const double mid = 0.5 * (p.a + p.b);
      if (p.b - p.a > theta_res * (1.0 + 1e-9)) {
        const cplx zm = phi.value(unit(mid));
        stack.push_back({mid, p.b, zm, p.zb});
        stack.push_back({p.a, mid, p.za, zm});
        continue;
      }
      if (ma != mb) {
        bisect(p.a, p.b, ma);
      } else {
        // Tangency probe: the indicator may dip in and out between equal endpoints.
        if (member_at(mid) != ma) {
          bisect(p.a, mid, ma);
          bisect(mid, p.b, !ma);
        }
      }
    }
  }

  std::sort(crossings.begin(), crossings.end(),
            [](const Crossing& x, const Crossing& y) { return x.theta < y.theta; });
  const bool start_inside = region.contains(tab.values[0]);
  bool inside = start_inside;
  double open = 0.0;
  std::vector<Arc> arcs;
  for (const auto& c : crossings) {
    if (c.entering && !inside) {
      open = c.theta;
      inside = true;
    } else if (!c.entering && inside) {
      arcs.push_back({open, c.theta});
      inside = false;
    }
  }
  if (inside) {
    if (start_inside && !arcs.empty() && arcs.front().start == 0.0) {
      arcs.front().start = open;  // wrap through theta = 0
    } else if (start_inside && arcs.empty() && open == 0.0) {
      arcs.push_back({0.0, kTwoPi});
    } else {
      arcs.push_back({open, kTwoPi});
    }
  }
  double total = 0.0;
  for (const auto& a : arcs) {
    const double len = (a.start == 0.0 && a.end == kTwoPi) ? kTwoPi : a.length();
    total += len;
    if (len < 4.0 * theta_res) out.resolution_warning = true;
  }
  out.arcs = std::move(arcs);
  out.mass = std::clamp(total / kTwoPi, 0.0, 1.0);
  return out;
}

}  // namespace detail

/*!
  m_phi(W(xi, h)): normalized length of {theta : phi*(e^{i theta}) in W(xi, h)}.

  Seeds on a uniform grid are prefiltered by argument, intervals that cannot
  meet the window (by the boundary Lipschitz bound) are discarded, the rest
  are refined and every membership change is bisected to tol_theta.
*/
inline ArcSet pullback_window_mass(const SchurMap& phi, const CarlesonWindow& w,
                                   const BoundaryRes& res = {}) {
  return detail::scan_arcs(phi, w, make_boundary_table(phi, res.n_seed), res);
}

inline ArcSet pullback_window_mass(const SchurMap& phi, const CarlesonWindow& w,
                                   const BoundaryTable& tab, const BoundaryRes& res = {}) {
  return detail::scan_arcs(phi, w, tab, res);
}

/// m_phi(S(xi, h)), same machinery with the indicator |phi* - xi| <= h.
inline ArcSet pullback_sector_mass(const SchurMap& phi, const DiskSector& s,
                                   const BoundaryRes& res = {}) {
  return detail::scan_arcs(phi, s, make_boundary_table(phi, res.n_seed), res);
}

inline ArcSet pullback_sector_mass(const SchurMap& phi, const DiskSector& s,
                                   const BoundaryTable& tab, const BoundaryRes& res = {}) {
  return detail::scan_arcs(phi, s, tab, res);
}

/// Total mass of m_phi; equals one since m_phi is a probability measure.
inline double total_mass_check(const SchurMap& phi) {
  return pullback_window_mass(phi, CarlesonWindow(cplx{1.0}, 1.0)).mass;
}

// ---------------------------------------------------------------------------

struct CenterRes {
  int n_centers = 512;
  int refinement_rounds = 2;
  int refinement_factor = 8;
  int top = 4;
  BoundaryRes boundary;
};

struct CarlesonSample {
  double h = 0.0;
  double value = 0.0;
  cplx argmax_xi{1.0};
  CenterRes resolution;
  bool resolution_warning = false;
};

/*!
  Carleson function rho_phi(h) = sup_xi m_phi(W(xi, h)) as a lower bound.

  Candidate centres: a uniform grid of n_centers angles plus up to n_centers
  arguments of boundary images with |phi*| >= 1 - h (so narrow windows near
  the touching points are not skipped). The best `top` centres are then
  refined `refinement_rounds` times on a grid `refinement_factor` times finer.
  Ties go to the smallest angle in [0, 2 pi).
*/
inline CarlesonSample rho(const SchurMap& phi, double h, const CenterRes& res = {}) {
  CarlesonSample out;
  out.h = h;
  out.resolution = res;
  if (!(h > 0.0)) throw PreconditionError("rho: need h > 0");
  if (h >= 1.0) {
    out.value = 1.0;
    return out;
  }
  const BoundaryTable tab = make_boundary_table(phi, res.boundary.n_seed);

  std::vector<double> centres;
  for (int k = 0; k < res.n_centers; ++k) centres.push_back(kTwoPi * k / res.n_centers);
  {
    std::vector<double> touching;
    for (int i = 0; i < tab.size(); ++i)
      if (std::abs(tab.values[i]) >= 1.0 - h) touching.push_back(tab.args[i]);
    std::sort(touching.begin(), touching.end());
    const std::size_t stride = std::max<std::size_t>(1, touching.size() / res.n_centers);
    for (std::size_t i = 0; i < touching.size(); i += stride) centres.push_back(touching[i]);
  }
  for (auto& c : centres) {
    c = std::fmod(c, kTwoPi);
    if (c < 0.0) c += kTwoPi;
  }

  struct Scored {
    double angle;
    double mass;
    bool warn;
  };
  auto score = [&](const std::vector<double>& angles) {
    return parallel_map(angles.size(), [&](std::size_t i) {
      const auto arcs = pullback_window_mass(phi, CarlesonWindow(unit(angles[i]), h), tab, res.boundary);
      return Scored{angles[i], arcs.mass, arcs.resolution_warning};
    });
  };
  auto better = [](const Scored& a, const Scored& b) {
    if (a.mass != b.mass) return a.mass > b.mass;
    return a.angle < b.angle;
  };

  std::vector<Scored> all = score(centres);
  Scored best{0.0, -1.0, false};
  for (const auto& s : all)
    if (better(s, best)) best = s;

  double spacing = kTwoPi / res.n_centers;
  std::vector<Scored> pool = all;
  for (int round = 0; round < res.refinement_rounds; ++round) {
    std::sort(pool.begin(), pool.end(), better);
    spacing /= res.refinement_factor;
    std::vector<double> next;
    for (int k = 0; k < res.top && k < static_cast<int>(pool.size()); ++k)
      for (int j = -res.refinement_factor; j <= res.refinement_factor; ++j)
        if (j != 0) {
          double a = std::fmod(pool[k].angle + j * spacing, kTwoPi);
          if (a < 0.0) a += kTwoPi;
          next.push_back(a);
        }
    pool = score(next);
    for (const auto& s : pool)
      if (better(s, best)) best = s;
  }
  out.value = std::max(0.0, best.mass);
  out.argmax_xi = unit(best.angle);
  out.resolution_warning = best.warn;
  return out;
}

struct ExponentFit {
  double alpha = 0.0;
  double c = 0.0;         // rho(h) ~ c h^alpha
  double intercept = 0.0; // log c
  double residual = 0.0;  // RMS of log residuals
};

/// Least-squares slope of log rho_phi(h) against log h.
inline ExponentFit carleson_exponent_fit(const SchurMap& phi, const std::vector<double>& h_list,
                                         const CenterRes& res = {}) {
  if (h_list.size() < 6) throw PreconditionError("exponent fit needs at least 6 sizes");
  const double cap = 1.0 - std::abs(phi.at_zero());
  std::vector<double> xs, ys;
  for (double h : h_list) {
    if (!(h > 0.0 && h < cap)) throw PreconditionError("exponent fit: h must lie in (0, 1 - |phi(0)|)");
    const double r = rho(phi, h, res).value;
    if (!(r > 0.0)) throw FitError("rho_phi vanishes at h = " + std::to_string(h));
    xs.push_back(std::log(h));
    ys.push_back(std::log(r));
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  ExponentFit fit;
  fit.alpha = sxy / sxx;
  fit.intercept = my - fit.alpha * mx;
  fit.c = std::exp(fit.intercept);
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (fit.intercept + fit.alpha * xs[i]);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

// ---------------------------------------------------------------------------

struct MonteCarloMass {
  double estimate = 0.0;
  double std_error = 0.0;
  long samples = 0;
  std::uint64_t seed = 0;
};

/// Pushforward estimate of m_phi(region) from uniformly random boundary angles.
template <typename Region>
MonteCarloMass monte_carlo_pullback_mass(const SchurMap& phi, const Region& region, long samples,
                                         std::uint64_t seed = 0x5EED) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  long hits = 0;
  for (long k = 0; k < samples; ++k)
    if (region.contains(phi.value(unit(u(rng))))) ++hits;
  MonteCarloMass m;
  m.samples = samples;
  m.seed = seed;
  m.estimate = static_cast<double>(hits) / samples;
  m.std_error = std::sqrt(m.estimate * (1.0 - m.estimate) / samples);
  return m;
}

}  // namespace schur_scope
