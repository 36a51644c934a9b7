#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "carleson.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "nevanlinna.hpp"
#include "quadrature.hpp"
#include "symbol.hpp"

namespace schur_scope {

/// Multiplicative slack granted to every inequality for quadrature and grid noise.
inline constexpr double kTolIneq = 1e-3;

/// The explicit constants of the comparison theorems. Defaults are the
/// published ones; overriding them is meant for exploratory tightening only.
struct BoundConstants {
  double upper = 196.0;              // N(a) <= upper * m(W(xi, upper_window * h))
  double upper_window = 12.0;
  double upper_sup_window = 24.0;    // sup_W(xi,h) N <= upper * m(W(xi, 24 h))
  double lower = 64.0;               // m(W(xi,h)) <= lower * sup_{W(xi, lower_window h)} N
  double lower_window = 64.0;
  double average = 128.0 * 17.0 * 17.0;  // m(S(xi,h)) <= average * mean_{S(xi, c h)} N
  double average_dilation = 17.0;
};

struct InequalityRecord {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  std::vector<std::pair<std::string, double>> params;
  bool pass = false;
  bool warning = false;
};

inline InequalityRecord make_record(std::string name, double lhs, double rhs,
                                    std::vector<std::pair<std::string, double>> params,
                                    bool warning = false, double tol = kTolIneq) {
  InequalityRecord r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  r.params = std::move(params);
  r.pass = lhs <= rhs * (1.0 + tol);
  r.warning = warning;
  return r;
}

// ---------------------------------------------------------------------------
// Boundary and area integrals.

namespace detail {

/// Periodic trapezoid rule for (1/2pi) int g(phi*(e^{it})) dt, doubling the node
/// count until two successive estimates agree to 1e-13 relative.
template <typename G>
double boundary_mean(const SchurMap& phi, G&& g, int n0) {
  auto rule = [&](int n) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += g(phi.value(unit(kTwoPi * k / n)));
    return s / n;
  };
  int n = std::max(64, n0);
  double prev = rule(n);
  for (int it = 0; it < 8; ++it) {
    n *= 2;
    const double cur = rule(n);
    if (std::abs(cur - prev) <= 1e-13 * std::max(1.0, std::abs(cur))) return cur;
    prev = cur;
  }
  return prev;
}

/// N_phi with the base point (a null set) mapped to zero.
inline double counting_or_zero(const SchurMap& phi, cplx w) {
  if (std::abs(w - phi.at_zero()) < kTolBase) return 0.0;
  return counting_function(phi, w);
}

}  // namespace detail

/// int_D |f_k'(w)|^2 N_phi(w) dA(w) for every k, sharing the N evaluations.
template <std::size_t K>
QuadResult<std::array<double, K>> weighted_counting_integrals(const SchurMap& phi,
                                                               const std::array<Coeffs, K>& fs,
                                                               const QuadSpec& quad = {}) {
  std::array<Coeffs, K> dfs;
  for (std::size_t k = 0; k < K; ++k) dfs[k] = poly::derivative(fs[k]);
  auto integrand = [&](cplx w) {
    std::array<double, K> v{};
    const double n = detail::counting_or_zero(phi, w);
    if (n == 0.0) return v;
    for (std::size_t k = 0; k < K; ++k) v[k] = std::norm(poly::eval(dfs[k], w)) * n;
    return v;
  };
  return integrate_polar(integrand, cplx{}, [](double) { return 1.0; }, 0.0, kTwoPi,
                         detail::outer_options(quad), detail::inner_options(quad));
}

struct IdentityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  // |lhs - rhs| / (1 + lhs)
  double quad_error = 0.0;
};

/// ||f o phi||_2^2 against |f(phi(0))|^2 + 2 int |f'|^2 N_phi dA, for several f at once.
template <std::size_t K>
std::array<IdentityCheck, K> littlewood_paley_batch(const SchurMap& phi,
                                                    const std::array<Coeffs, K>& fs,
                                                    const QuadSpec& quad = {}) {
  const auto area = weighted_counting_integrals(phi, fs, quad);
  std::array<IdentityCheck, K> out;
  for (std::size_t k = 0; k < K; ++k) {
    const Coeffs& f = fs[k];
    auto& c = out[k];
    c.lhs = detail::boundary_mean(phi, [&f](cplx z) { return std::norm(poly::eval(f, z)); },
                                  quad.boundary_n);
    c.rhs = std::norm(poly::eval(f, phi.at_zero())) + 2.0 * area.value[k];
    c.residual = std::abs(c.lhs - c.rhs) / (1.0 + c.lhs);
    c.quad_error = 2.0 * area.error;
  }
  return out;
}

inline IdentityCheck littlewood_paley_check(const SchurMap& phi, const Coeffs& f,
                                            const QuadSpec& quad = {}) {
  return littlewood_paley_batch<1>(phi, {f}, quad)[0];
}

/// Subharmonic test functions with a closed-form Laplacian.
struct StantonKernel {
  enum class Kind { square_modulus, poly_modulus_sq } kind = Kind::square_modulus;
  Coeffs f;  // used by poly_modulus_sq
  static StantonKernel square_modulus() { return {}; }
  static StantonKernel poly_modulus_sq(Coeffs f) { return {Kind::poly_modulus_sq, std::move(f)}; }
};

/// Boundary mean of G o phi* against G(phi(0)) + (1/2) int Laplacian(G) N_phi dA.
/// For G = |w|^2 the Laplacian is 4; for G = |f|^2 it is 4 |f'|^2.
inline IdentityCheck stanton_check(const SchurMap& phi, const StantonKernel& g,
                                   const QuadSpec& quad = {}) {
  const Coeffs f = g.kind == StantonKernel::Kind::square_modulus ? Coeffs{cplx{}, cplx{1.0}} : g.f;
  // Both kinds reduce to G = |f|^2 with f = id for the plain square modulus.
  return littlewood_paley_check(phi, f, quad);
}

struct ChoaKimReport {
  double n_value = 0.0;
  double kernel_integral = 0.0;
  double stated_bound = 0.0;
  /// Constant c for which N_phi(w) = c (1 - |w|^2)^2 / |w|^2 * kernel_integral.
  double best_constant = 0.0;
  bool lhs_exceeds_bound = false;
};

/// Reports both sides of the kernel bound with constant 1/8 without asserting it.
inline ChoaKimReport choa_kim_diagnostic(const SchurMap& phi, cplx w, const QuadSpec& quad = {}) {
  const double r = std::abs(w);
  if (!(r > 0.5 && r < 1.0)) throw PreconditionError("choa_kim_diagnostic: need 1/2 < |w| < 1");
  ChoaKimReport rep;
  rep.n_value = counting_function(phi, w);
  const int n0 = std::max(quad.boundary_n, static_cast<int>(std::ceil(64.0 / (1.0 - r))));
  rep.kernel_integral =
      detail::boundary_mean(phi, [w](cplx z) { return 1.0 / std::norm(1.0 - std::conj(w) * z); }, n0);
  const double shape = (1.0 - r * r) * (1.0 - r * r) / (r * r);
  rep.stated_bound = shape / 8.0 * rep.kernel_integral;
  rep.best_constant = rep.n_value / (shape * rep.kernel_integral);
  rep.lhs_exceeds_bound = rep.n_value > rep.stated_bound;
  return rep;
}

// ---------------------------------------------------------------------------
// Comparison theorems.

inline double base_gap(const SchurMap& phi) { return 1.0 - std::abs(phi.at_zero()); }

/// N_phi(a) <= 196 m_phi(W(a/|a|, 12 h)), h = 1 - |a| < (1 - |phi(0)|)/4.
inline InequalityRecord upper_bound_check(const SchurMap& phi, cplx a, const BoundaryRes& res = {},
                                          const BoundConstants& k = {}) {
  const double h = 1.0 - std::abs(a);
  if (a == cplx{} || !(h > 0.0 && h < base_gap(phi) / 4.0))
    throw PreconditionError("upper_bound_check: need 0 < 1 - |a| < (1 - |phi(0)|)/4");
  const cplx xi = a / std::abs(a);
  const double lhs = counting_function(phi, a);
  const auto arcs = pullback_window_mass(phi, CarlesonWindow(xi, k.upper_window * h), res);
  return make_record("upper_bound", lhs, k.upper * arcs.mass,
                     {{"a_re", a.real()}, {"a_im", a.imag()}, {"h", h}, {"mass", arcs.mass}},
                     arcs.resolution_warning);
}

/// sup_{W(xi,h)} N_phi <= 196 m_phi(W(xi, 24 h)) for h < (1 - |phi(0)|)/4.
inline InequalityRecord window_sup_upper_check(const SchurMap& phi, cplx xi, double h,
                                               const GridSpec& grid = {},
                                               const BoundaryRes& res = {},
                                               const BoundConstants& k = {}) {
  if (!(h > 0.0 && h < base_gap(phi) / 4.0))
    throw PreconditionError("window_sup_upper_check: need 0 < h < (1 - |phi(0)|)/4");
  const auto sup = nu_window(phi, xi, h, grid);
  const auto arcs = pullback_window_mass(phi, CarlesonWindow(xi, k.upper_sup_window * h), res);
  return make_record("window_sup_upper", sup.value, k.upper * arcs.mass,
                     {{"xi_arg", std::arg(xi)}, {"h", h}, {"nu_window", sup.value},
                      {"argmax_re", sup.argmax_w.real()}, {"argmax_im", sup.argmax_w.imag()},
                      {"mass", arcs.mass}},
                     arcs.resolution_warning);
}

/// m_phi(W(xi,h)) <= 64 sup_{W(xi, 64 h)} N_phi for h < (1 - |phi(0)|)/16.
inline InequalityRecord lower_bound_check(const SchurMap& phi, cplx xi, double h,
                                          const GridSpec& grid = {}, const BoundaryRes& res = {},
                                          const BoundConstants& k = {}) {
  if (!(h > 0.0 && h < base_gap(phi) / 16.0))
    throw PreconditionError("lower_bound_check: need 0 < h < (1 - |phi(0)|)/16");
  const auto arcs = pullback_window_mass(phi, CarlesonWindow(xi, h), res);
  const auto sup = nu_window(phi, xi, k.lower_window * h, grid);
  return make_record("lower_bound", arcs.mass, k.lower * sup.value,
                     {{"xi_arg", std::arg(xi)}, {"h", h}, {"mass", arcs.mass},
                      {"nu_window", sup.value}, {"argmax_re", sup.argmax_w.real()},
                      {"argmax_im", sup.argmax_w.imag()}},
                     arcs.resolution_warning);
}

/// int_{S(xi, t)} N_phi dA by polar quadrature about xi.
inline QuadResult<double> sector_counting_integral(const SchurMap& phi, cplx xi, double t,
                                                   const QuadSpec& quad = {}) {
  const double c = std::arg(xi);
  const double reach = std::min(t, 2.0);
  auto f = [&phi](cplx w) {
    if (!(std::abs(w) < 1.0)) return 0.0;
    return detail::counting_or_zero(phi, w);
  };
  // Direction e^{i(c + pi + tau)} points into the disk; the disk constraint is rho <= 2 cos tau.
  auto rmax = [reach, c](double t_abs) {
    return std::min(reach, -2.0 * std::cos(t_abs - c) * (1.0 - 1e-15));
  };
  const double scale = reach * reach;
  return integrate_polar(f, xi, rmax, c + std::numbers::pi / 2, c + 1.5 * std::numbers::pi,
                         detail::outer_options(quad, scale), detail::inner_options(quad, reach));
}

/// m_phi(S(xi,h)) <= 128*17^2 / A(S(xi,17h)) int_{S(xi,17h)} N_phi dA for h < (1 - |phi(0)|)/8.
inline InequalityRecord average_bound_check(const SchurMap& phi, cplx xi, double h,
                                            const QuadSpec& quad = {}, const BoundaryRes& res = {},
                                            const BoundConstants& k = {}) {
  if (!(h > 0.0 && h < base_gap(phi) / 8.0))
    throw PreconditionError("average_bound_check: need 0 < h < (1 - |phi(0)|)/8");
  const auto arcs = pullback_sector_mass(phi, DiskSector(xi, h), res);
  const double big = k.average_dilation * h;
  const double area = normalized_area(DiskSector(xi, big));
  const auto integral = sector_counting_integral(phi, xi, big, quad);
  const double mean = integral.value / area;
  return make_record("average_bound", arcs.mass, k.average * mean,
                     {{"xi_arg", std::arg(xi)}, {"h", h}, {"mass", arcs.mass},
                      {"area", area}, {"integral", integral.value}},
                     arcs.resolution_warning);
}

/// m_phi(S(w/|w|, 6h)) >= (|w|/8)(1 - |z|) for w = phi(z), h = 1 - |w| <= 1/4.
inline InequalityRecord preparatory_lemma_check(const SchurMap& phi, cplx z,
                                                const BoundaryRes& res = {}) {
  const cplx w = phi.value(z);
  const double h = 1.0 - std::abs(w);
  if (!(std::abs(z) < 1.0) || !(h > 0.0 && h <= 0.25))
    throw PreconditionError("preparatory_lemma_check: need |z| < 1 and 1 - |phi(z)| <= 1/4");
  const cplx xi = w / std::abs(w);
  const auto sector = pullback_sector_mass(phi, DiskSector(xi, 6.0 * h), res);
  const double bound = std::abs(w) / 8.0 * (1.0 - std::abs(z));
  return make_record("preparatory_lemma", bound, sector.mass,
                     {{"z_re", z.real()}, {"z_im", z.imag()}, {"h", h}},
                     sector.resolution_warning);
}

/// |phi_a(phi(0))| where phi_a(z) = (a - z)/(1 - conj(a) z); exceeds 1/3 once
/// 1 - |a| < (1 - |phi(0)|)/4.
inline double base_point_image(const SchurMap& phi, cplx a) {
  const cplx p = phi.at_zero();
  return std::abs((a - p) / (1.0 - std::conj(a) * p));
}

// ---------------------------------------------------------------------------

struct EquivalenceRow {
  double h = 0.0;
  double rho = 0.0;        // rho_phi(h)
  double nu = 0.0;         // nu_phi(h)
  double rho_small = 0.0;  // rho_phi(h / 64)
  double rho_large = 0.0;  // rho_phi(24 h)
  /// nu(h) / (196 rho(24h)); at most one when the upper comparison holds.
  double ratio_up = 0.0;
  /// rho(h/64) / (64 nu(h)); at most one when the lower comparison holds.
  double ratio_down = 0.0;
  bool pass_up = false;
  bool pass_down = false;
  bool warning = false;
};

namespace detail {
inline double safe_ratio(double num, double den) {
  if (num == 0.0) return 0.0;
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return num / den;
}
}  // namespace detail

/// (1/64) rho(h/64) <= nu(h) <= 196 rho(24 h) row by row.
inline std::vector<EquivalenceRow> equivalence_sweep(const SchurMap& phi,
                                                     const std::vector<double>& h_list,
                                                     const GridSpec& grid = {},
                                                     const CenterRes& res = {},
                                                     const BoundConstants& k = {}) {
  std::vector<EquivalenceRow> rows;
  for (double h : h_list) {
    if (!(h > 0.0 && h < base_gap(phi) / 16.0))
      throw PreconditionError("equivalence_sweep: need 0 < h < (1 - |phi(0)|)/16");
    EquivalenceRow r;
    r.h = h;
    const auto rh = rho(phi, h, res);
    const auto rs = rho(phi, h / k.lower_window, res);
    const auto rl = rho(phi, k.upper_sup_window * h, res);
    r.rho = rh.value;
    r.rho_small = rs.value;
    r.rho_large = rl.value;
    r.nu = nu(phi, h, grid).value;
    r.ratio_up = detail::safe_ratio(r.nu, k.upper * r.rho_large);
    r.ratio_down = detail::safe_ratio(r.rho_small, k.lower * r.nu);
    r.pass_up = r.nu <= k.upper * r.rho_large * (1.0 + kTolIneq);
    r.pass_down = r.rho_small <= k.lower * r.nu * (1.0 + kTolIneq);
    r.warning = rh.resolution_warning || rs.resolution_warning || rl.resolution_warning;
    rows.push_back(r);
  }
  return rows;
}

// ---------------------------------------------------------------------------

struct SlitExponent {
  double alpha_hat = 0.0;
  double residual = 0.0;
  std::vector<std::pair<double, double>> samples;  // (h, N_phi(w))
};

/*!
  Tangential approach for phi(z) = (1 + z)/2: for each h, w = 1/2 + (1/2 - s) e^{i zeta}
  with zeta = s^{1/(2 alpha)} and s solving h = zeta^2 / 4 + 2 s. N_phi(w) = log 1/|2w - 1|
  is taken in the form -log1p(-2 s): for alpha near 2 the preimage 2w - 1 sits within
  1e-9 of the circle, where the solver drops it. log N is fitted against log h.
*/
inline SlitExponent slit_example_exponent(double alpha, const std::vector<double>& h_list) {
  if (!(alpha >= 1.0 && alpha <= 2.5)) throw PreconditionError("slit example: alpha in [1, 2.5]");
  if (h_list.size() < 2) throw PreconditionError("slit example: need at least two sizes");
  SlitExponent out;
  std::vector<double> xs, ys;
  for (double h : h_list) {
    auto model = [alpha](double s) { return std::pow(s, 1.0 / alpha) / 4.0 + 2.0 * s; };
    double lo = 0.0, hi = 0.5;
    for (int it = 0; it < 200 && hi - lo > 1e-300; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (!(mid > lo && mid < hi)) break;
      (model(mid) < h ? lo : hi) = mid;
    }
    const double s = 0.5 * (lo + hi);
    const double n = -std::log1p(-2.0 * s);
    out.samples.emplace_back(h, n);
    xs.push_back(std::log(h));
    ys.push_back(std::log(n));
  }
  const double m = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  out.alpha_hat = sxy / sxx;
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (my + out.alpha_hat * (xs[i] - mx));
    ss += e * e;
  }
  out.residual = std::sqrt(ss / m);
  return out;
}

}  // namespace schur_scope
