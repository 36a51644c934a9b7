#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

#include "errors.hpp"
#include "polynomial.hpp"
#include "symbol.hpp"
#include "quadrature.hpp"

namespace schur_scope {

namespace detail {
inline cplx checked_unit(cplx xi) {
  if (std::abs(std::abs(xi) - 1.0) > 1e-12) throw DomainError("window centre must be unimodular");
  return xi;
}
inline double checked_size(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("region size must be positive");
  return h;
}
}  // namespace detail

/// Carleson window W(xi, h) = {|z| >= 1 - h, |arg(z conj xi)| <= h}; the closed disk for h >= 1.
struct CarlesonWindow {
  cplx xi;
  double h;

  CarlesonWindow(cplx centre, double size)
      : xi(detail::checked_unit(centre)), h(detail::checked_size(size)) {}

  bool whole_disk() const { return h >= 1.0; }

  bool contains(cplx z) const {
    if (whole_disk()) return true;
    // The modulus clause runs first; it rejects z = 0 whose argument is undefined.
    if (std::abs(z) < 1.0 - h) return false;
    return std::abs(std::arg(z * std::conj(xi))) <= h;
  }

  /// Lower bound of the distance from z to the window, via W(xi,h) inside S(xi,2h).
  double distance_lower_bound(cplx z) const {
    if (whole_disk()) return 0.0;
    return std::max({0.0, std::abs(z - xi) - 2.0 * h, (1.0 - h) - std::abs(z)});
  }
};

/// S(xi, h) = {z in closed disk : |z - xi| <= h}.
struct DiskSector {
  cplx xi;
  double h;

  DiskSector(cplx centre, double size)
      : xi(detail::checked_unit(centre)), h(detail::checked_size(size)) {}

  bool whole_disk() const { return h >= 2.0; }
  bool contains(cplx z) const { return std::abs(z - xi) <= h; }
  double distance_lower_bound(cplx z) const { return std::max(0.0, std::abs(z - xi) - h); }
};

inline bool window_contains(const CarlesonWindow& w, cplx z) { return w.contains(z); }
inline bool sector_contains(const DiskSector& s, cplx z) { return s.contains(z); }

/// Normalized area (dxdy/pi) of a window. Integrates the radial extent
/// (r_out^2 - r_in^2)/2 over the angular span.
inline double normalized_area(const CarlesonWindow& w) {
  if (w.whole_disk()) return 1.0;
  const double r_in = 1.0 - w.h;
  auto extent = [r_in](double) { return 0.5 * (1.0 - r_in * r_in); };
  return integrate_adaptive(extent, -w.h, w.h, {.abs_tol = 1e-14, .rel_tol = 1e-12}).value /
         std::numbers::pi;
}

/// Normalized area of S(xi, h). In coordinates z = xi (1 - rho e^{i tau}) the
/// disk constraint reads rho <= 2 cos tau, so A = (1/pi) int min(h, 2 cos tau)^2 / 2 dtau.
inline double normalized_area(const DiskSector& s) {
  if (s.whole_disk()) return 1.0;
  const double h = s.h;
  auto extent = [h](double tau) {
    const double r = std::min(h, 2.0 * std::cos(tau));
    return 0.5 * r * r;
  };
  const double kink = std::acos(h / 2.0);
  const double half = std::numbers::pi / 2.0;
  const QuadOptions opt{.abs_tol = 1e-15, .rel_tol = 1e-12};
  const double inner = integrate_adaptive(extent, -kink, kink, opt).value;
  const double outer = integrate_adaptive(extent, kink, half, opt).value;
  return (inner + 2.0 * outer) / std::numbers::pi;
}

namespace detail {

/// Uniform sample of the polar box {r in [r0, 1], |arg(z conj xi)| <= h}.
template <typename Rng>
cplx sample_window(const CarlesonWindow& w, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (w.whole_disk()) return std::sqrt(u(rng)) * unit(2.0 * std::numbers::pi * u(rng));
  const double r0 = 1.0 - w.h;
  const double r = std::sqrt(r0 * r0 + (1.0 - r0 * r0) * u(rng));
  return w.xi * std::polar(r, w.h * (2.0 * u(rng) - 1.0));
}

template <typename Rng>
cplx sample_sector(const DiskSector& s, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    const double rho = s.h * std::sqrt(u(rng));
    const double tau = std::numbers::pi * (u(rng) - 0.5);
    const cplx z = s.xi * (1.0 - rho * unit(tau));
    if (std::abs(z) <= 1.0) return z;
  }
}

}  // namespace detail

struct ContainmentReport {
  bool window_in_window = false;   // W(zeta,s) in W(xi,2t)
  bool sector_in_window = false;   // S(xi,6t) in W(xi,12t)
  bool window_in_sector = false;   // W(xi,t) in S(xi,2t)
  long counterexamples = 0;
  bool all() const { return window_in_window && sector_in_window && window_in_sector; }
};

/// Dense random sampling of the three containments used to pass between windows
/// and sectors. Returns per-containment flags; a flag is false as soon as one
/// sampled point of the smaller set falls outside the larger one.
inline ContainmentReport containment_selftest(double t, double s, cplx zeta, cplx xi = cplx{1.0},
                                              long n_samples = 100000,
                                              std::uint64_t seed = 0x5EED) {
  if (!(s > 0.0 && s <= t)) throw PreconditionError("need 0 < s <= t");
  const CarlesonWindow big(xi, t);
  if (!big.contains(detail::checked_unit(zeta)))
    throw PreconditionError("zeta must lie in W(xi, t)");
  std::mt19937_64 rng(seed);
  ContainmentReport rep;
  long bad1 = 0, bad2 = 0, bad3 = 0;
  const CarlesonWindow w_small(zeta, s), w_2t(xi, 2.0 * t), w_12t(xi, 12.0 * t), w_t(xi, t);
  const DiskSector s_6t(xi, 6.0 * t), s_2t(xi, 2.0 * t);
  for (long k = 0; k < n_samples; ++k) {
    if (!w_2t.contains(detail::sample_window(w_small, rng))) ++bad1;
    if (!w_12t.contains(detail::sample_sector(s_6t, rng))) ++bad2;
    if (!s_2t.contains(detail::sample_window(w_t, rng))) ++bad3;
  }
  rep.window_in_window = bad1 == 0;
  rep.sector_in_window = bad2 == 0;
  rep.window_in_sector = bad3 == 0;
  rep.counterexamples = bad1 + bad2 + bad3;
  return rep;
}

/// Both sides of |1 - conj(a) z|^2 >= (h^2 + |z - xi|^2)/4 with a = (1 - h) xi.
struct KernelLowerBound {
  double lhs;
  double rhs;
};

inline KernelLowerBound kernel_lower_bound(cplx xi, double h, cplx z) {
  const cplx a = (1.0 - h) * xi;
  return {std::norm(1.0 - std::conj(a) * z), 0.25 * (h * h + std::norm(z - xi))};
}

}  // namespace schur_scope
