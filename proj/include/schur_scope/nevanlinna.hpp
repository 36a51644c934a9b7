#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "symbol.hpp"

namespace schur_scope {

inline constexpr double kTolRoot = 1e-12;
inline constexpr double kClusterTol = 1e-7;
inline constexpr double kExclusion = 1e-9;
inline constexpr double kTolBase = 1e-9;

struct Preimage {
  cplx z;
  int multiplicity = 1;
};

/// Solutions of phi(z) = w in the open disk, with multiplicity.
struct PreimageSet {
  cplx w;
  std::vector<Preimage> roots;
  /// Roots in the band 1 - exclusion <= |z| <= 1 + exclusion, left out of the sum.
  int excluded_near_boundary = 0;
  /// Largest residual |phi(z) - w| over the returned roots.
  double max_residual = 0.0;
  int total_multiplicity() const {
    int m = 0;
    for (const auto& r : roots) m += r.multiplicity;
    return m;
  }
};

namespace detail {

/// Newton polishing on phi(z) - w itself (not on the cleared polynomial, whose
/// coefficients may be badly scaled). The iterate may not wander farther than
/// max_move from its start, so two eigenvalues cannot collapse onto one root.
inline cplx polish_root(const SchurMap& phi, cplx w, cplx z0, double max_move) {
  cplx z = z0;
  cplx g = phi.value(z) - w;
  cplx best = z;
  double best_res = std::abs(g);
  for (int it = 0; it < 80 && best_res > 0.0; ++it) {
    const cplx d = phi.derivative(z);
    if (std::abs(d) < 1e-300) break;
    const cplx step = g / d;
    const cplx z1 = z - step;
    if (std::abs(z1 - z0) > max_move) break;
    const cplx g1 = phi.value(z1) - w;
    if (std::abs(g1) < best_res) {
      best = z1;
      best_res = std::abs(g1);
    }
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(z1))) break;
    z = z1;
    g = g1;
  }
  return best;
}

}  // namespace detail

/*!
  Preimages of w under phi inside the open disk.

  Roots of the cleared polynomial come from companion-matrix eigenvalues, are
  polished by Newton steps on phi - w, then merged when closer than
  cluster_tol (multiplicities add). Roots with |z| >= 1 - exclusion are
  dropped and counted in `excluded_near_boundary`.
*/
inline PreimageSet preimages(const SchurMap& phi, cplx w, double tol_root = kTolRoot,
                             double cluster_tol = kClusterTol, double exclusion = kExclusion) {
  if (!(std::abs(w) < 1.0)) throw DomainError("preimages: target must lie in the open disk");
  const Coeffs c = clear_to_polynomial(phi, w);
  const std::vector<cplx> raw = poly::roots(c);

  std::vector<cplx> polished;
  polished.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (std::abs(raw[i]) > 1.0 + 1e-3) continue;  // far outside: irrelevant to the disk
    double sep = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < raw.size(); ++j)
      if (j != i) sep = std::min(sep, std::abs(raw[i] - raw[j]));
    const double max_move = std::isfinite(sep) ? std::max(0.5 * sep, 1e-14) : 1.0;
    polished.push_back(detail::polish_root(phi, w, raw[i], max_move));
  }

  // Single-linkage clustering in index order (deterministic).
  std::vector<int> label(polished.size(), -1);
  std::vector<Preimage> clusters;
  std::vector<int> counts;
  for (std::size_t i = 0; i < polished.size(); ++i) {
    if (label[i] >= 0) continue;
    label[i] = static_cast<int>(clusters.size());
    std::vector<std::size_t> members{i};
    for (std::size_t k = 0; k < members.size(); ++k)
      for (std::size_t j = 0; j < polished.size(); ++j)
        if (label[j] < 0 && std::abs(polished[members[k]] - polished[j]) <= cluster_tol) {
          label[j] = label[i];
          members.push_back(j);
        }
    cplx centroid{};
    for (auto m : members) centroid += polished[m];
    centroid /= static_cast<double>(members.size());
    clusters.push_back({centroid, static_cast<int>(members.size())});
  }

  PreimageSet out{w, {}, 0, 0.0};
  const double limit = tol_root * (1.0 + phi.degree());
  for (const auto& cl : clusters) {
    const double r = std::abs(cl.z);
    if (r >= 1.0 - exclusion) {
      if (r <= 1.0 + exclusion) ++out.excluded_near_boundary;
      continue;
    }
    const double res = std::abs(phi.value(cl.z) - w);
    // Merged multiple roots only reach residual ~ (cluster spread)^m; allow that.
    const double allowed = cl.multiplicity > 1 ? std::max(limit, 1e-9) : limit;
    if (!(res <= allowed))
      throw SolverError("root refinement stagnated: residual " + std::to_string(res));
    out.max_residual = std::max(out.max_residual, res);
    out.roots.push_back(cl);
  }
  std::sort(out.roots.begin(), out.roots.end(), [](const Preimage& a, const Preimage& b) {
    if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
    return a.z.imag() < b.z.imag();
  });
  return out;
}

/// N_phi(w) = sum over preimages of multiplicity * log(1/|z|); zero off phi(D).
inline double counting_function(const SchurMap& phi, cplx w) {
  if (!(std::abs(w) < 1.0)) throw DomainError("counting_function: w must lie in the open disk");
  if (std::abs(w - phi.at_zero()) < kTolBase)
    throw BasePointError("N_phi is undefined at phi(0)");
  const PreimageSet set = preimages(phi, w);
  double n = 0.0;
  for (const auto& r : set.roots) n += r.multiplicity * std::log(1.0 / std::abs(r.z));
  return n;
}

/// N_phi(w), or nullopt-like NaN when w is within tol_base of phi(0). Used by sweeps.
inline double counting_function_or_nan(const SchurMap& phi, cplx w) {
  if (std::abs(w - phi.at_zero()) < kTolBase) return std::numeric_limits<double>::quiet_NaN();
  return counting_function(phi, w);
}

// ---------------------------------------------------------------------------
// Maximal functions.

/// Two-stage supremum search parameters.
struct GridSpec {
  int n_radial = 32;
  int n_angular = 256;
  int top_k = 8;
  int refinement_levels = 3;
  int factor = 4;
};

struct MaximalFunctionSample {
  double parameter = 0.0;
  double value = 0.0;
  cplx argmax_w{};
  GridSpec grid;
  /// Best value after the coarse pass and after each refinement level.
  std::vector<double> level_values;
};

namespace detail {

/// Region described on a rectangle (u, v) -> w with a membership filter.
struct SearchChart {
  double u0, u1, v0, v1;
  bool v_periodic = false;
  std::function<cplx(double, double)> to_w;
  std::function<bool(cplx)> admits;
};

struct Node2 {
  double value;
  int iu, iv;  // indices on the grid that produced the node (tie-break)
  double u, v;
  cplx w;
};

inline bool better(const Node2& a, const Node2& b) {
  if (a.value != b.value) return a.value > b.value;
  if (a.iv != b.iv) return a.iv < b.iv;  // smallest angular index first
  return a.iu < b.iu;
}

inline std::vector<Node2> evaluate_grid(const SchurMap& phi, const SearchChart& chart, double u0,
                                        double u1, int nu, double v0, double v1, int nv) {
  const std::size_t total = static_cast<std::size_t>(nu) * nv;
  auto nodes = parallel_map(total, [&](std::size_t k) {
    const int iu = static_cast<int>(k % nu);
    const int iv = static_cast<int>(k / nu);
    const double u = nu == 1 ? u0 : u0 + (u1 - u0) * iu / (nu - 1);
    const double v = nv == 1 ? v0 : v0 + (v1 - v0) * iv / (nv - 1);
    const cplx w = chart.to_w(u, v);
    double val = -1.0;
    if (std::abs(w) < 1.0 - kExclusion && chart.admits(w) &&
        std::abs(w - phi.at_zero()) >= kTolBase)
      val = counting_function(phi, w);
    return Node2{val, iu, iv, u, v, w};
  });
  return nodes;
}

/// Coarse grid then local refinement around the best `top_k` nodes.
inline MaximalFunctionSample maximize(const SchurMap& phi, const SearchChart& chart,
                                      const GridSpec& grid, double parameter) {
  MaximalFunctionSample out;
  out.parameter = parameter;
  out.grid = grid;
  const int nv = grid.n_angular + (chart.v_periodic ? 0 : 1);
  const double v1 = chart.v_periodic ? chart.v0 + (chart.v1 - chart.v0) * (nv - 1) / nv : chart.v1;
  auto nodes = evaluate_grid(phi, chart, chart.u0, chart.u1, grid.n_radial, chart.v0, v1, nv);
  Node2 best{-1.0, 0, 0, 0.0, 0.0, cplx{}};
  for (const auto& n : nodes)
    if (better(n, best)) best = n;
  out.level_values.push_back(std::max(0.0, best.value));

  double du = grid.n_radial > 1 ? (chart.u1 - chart.u0) / (grid.n_radial - 1) : 0.0;
  double dv = (chart.v1 - chart.v0) / std::max(1, grid.n_angular);
  std::vector<Node2> seeds = nodes;
  for (int level = 0; level < grid.refinement_levels; ++level) {
    std::sort(seeds.begin(), seeds.end(), better);
    std::vector<Node2> centres;
    for (const auto& s : seeds) {
      if (s.value < 0.0) break;
      if (static_cast<int>(centres.size()) >= grid.top_k) break;
      centres.push_back(s);
    }
    std::vector<Node2> next;
    const int m = 2 * grid.factor + 1;
    for (const auto& c : centres) {
      double a0 = std::max(chart.u0, c.u - du), a1 = std::min(chart.u1, c.u + du);
      double b0 = c.v - dv, b1 = c.v + dv;
      if (!chart.v_periodic) {
        b0 = std::max(chart.v0, b0);
        b1 = std::min(chart.v1, b1);
      }
      auto local = evaluate_grid(phi, chart, a0, a1, a1 > a0 ? m : 1, b0, b1, b1 > b0 ? m : 1);
      next.insert(next.end(), local.begin(), local.end());
    }
    for (const auto& n : next)
      if (n.value > best.value) best = n;
    out.level_values.push_back(std::max(0.0, best.value));
    seeds = std::move(next);
    du /= grid.factor;
    dv /= grid.factor;
  }
  out.value = std::max(0.0, best.value);
  out.argmax_w = best.value >= 0.0 ? best.w : cplx{};
  return out;
}

}  // namespace detail

/// nu_phi(t) = sup_{|w| >= 1 - t} N_phi(w), as a grid lower bound.
inline MaximalFunctionSample nu(const SchurMap& phi, double t, const GridSpec& grid = {}) {
  if (!(t > 0.0 && t < 1.0)) throw PreconditionError("nu: need 0 < t < 1");
  detail::SearchChart chart{1.0 - t, 1.0 - kExclusion, 0.0, 2.0 * std::numbers::pi, true,
                            [](double r, double th) { return std::polar(r, th); },
                            [](cplx) { return true; }};
  return detail::maximize(phi, chart, grid, t);
}

/// sup of N_phi over W(xi, h) inside the open disk.
inline MaximalFunctionSample nu_window(const SchurMap& phi, cplx xi, double h,
                                       const GridSpec& grid = {}) {
  const CarlesonWindow win(xi, h);
  detail::SearchChart chart;
  if (win.whole_disk()) {
    chart = {0.0, 1.0 - kExclusion, 0.0, 2.0 * std::numbers::pi, true,
             [](double r, double th) { return std::polar(r, th); }, [](cplx) { return true; }};
  } else {
    const double c = std::arg(xi);
    chart = {1.0 - h, 1.0 - kExclusion, c - h, c + h, false,
             [](double r, double th) { return std::polar(r, th); },
             [win](cplx w) { return win.contains(w); }};
  }
  return detail::maximize(phi, chart, grid, h);
}

/// sup of N_phi over S(xi, h) inside the open disk. Chart: w = xi (1 - rho e^{i tau}).
inline MaximalFunctionSample nu_sector(const SchurMap& phi, cplx xi, double h,
                                       const GridSpec& grid = {}) {
  const DiskSector sec(xi, h);
  const double rho_max = std::min(h, 2.0);
  detail::SearchChart chart{0.0, rho_max, -std::numbers::pi / 2, std::numbers::pi / 2, false,
                            [xi](double rho, double tau) { return xi * (1.0 - rho * unit(tau)); },
                            [sec](cplx w) { return sec.contains(w); }};
  return detail::maximize(phi, chart, grid, h);
}

// ---------------------------------------------------------------------------

/// Area-quadrature settings shared by the disk integrals of N_phi.
struct QuadSpec {
  int n_radial = 8;      // initial radial segments of the inner integral
  int n_angular = 32;    // initial angular segments of the outer integral
  int boundary_n = 4096; // trapezoid nodes on the circle
  double tol_quad = 1e-6;
};

namespace detail {
inline QuadOptions outer_options(const QuadSpec& q, double scale = 1.0) {
  return {.abs_tol = 1e-3 * q.tol_quad * scale, .rel_tol = 1e-3 * q.tol_quad,
          .initial_segments = q.n_angular, .max_segments = 20000};
}
inline QuadOptions inner_options(const QuadSpec& q, double scale = 1.0) {
  return {.abs_tol = 1e-5 * q.tol_quad * scale, .rel_tol = 1e-5 * q.tol_quad,
          .initial_segments = q.n_radial, .max_segments = 4000};
}
}  // namespace detail

struct SubaverageResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

/// N_phi(w0) against its area mean over the disk of centre w0 and given radius.
inline SubaverageResult subaveraging_check(const SchurMap& phi, cplx w0, double radius,
                                           const QuadSpec& quad = {}) {
  if (!(radius > 0.0) || std::abs(w0) + radius >= 1.0)
    throw PreconditionError("sub-averaging disk must lie inside the unit disk");
  if (!(std::abs(phi.at_zero() - w0) > radius))
    throw PreconditionError("sub-averaging disk contains phi(0)");
  SubaverageResult r;
  r.lhs = counting_function(phi, w0);
  auto f = [&](cplx w) { return counting_function(phi, w); };
  const auto integral =
      integrate_polar(f, w0, [radius](double) { return radius; }, 0.0, 2.0 * std::numbers::pi,
                      detail::outer_options(quad, radius * radius),
                      detail::inner_options(quad, radius));
  r.rhs = integral.value / (radius * radius);  // A(disk) = radius^2 in dA = dxdy/pi
  r.pass = r.lhs <= r.rhs * (1.0 + quad.tol_quad);
  return r;
}

}  // namespace schur_scope
