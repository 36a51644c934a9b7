#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <queue>
#include <type_traits>
#include <vector>

namespace schur_scope {

/// Tolerances and budget of the adaptive Gauss-Kronrod driver.
struct QuadOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int initial_segments = 1;
  int max_segments = 4000;
};

template <typename T>
struct QuadResult {
  T value{};
  double error = 0.0;
  long evaluations = 0;
  bool converged = false;
};

namespace detail {

// Scalar and fixed-size vector integrands share one driver.
template <typename T>
struct QuadValue;

template <>
struct QuadValue<double> {
  static double zero() { return 0.0; }
  static double norm(double v) { return std::abs(v); }
  static void axpy(double& acc, double w, double v) { acc += w * v; }
  static double sub(double a, double b) { return a - b; }
};

template <std::size_t K>
struct QuadValue<std::array<double, K>> {
  using A = std::array<double, K>;
  static A zero() { return A{}; }
  static double norm(const A& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
  static void axpy(A& acc, double w, const A& v) {
    for (std::size_t i = 0; i < K; ++i) acc[i] += w * v[i];
  }
  static A sub(const A& a, const A& b) {
    A r;
    for (std::size_t i = 0; i < K; ++i) r[i] = a[i] - b[i];
    return r;
  }
};

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15 tables).
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename T>
struct Segment {
  double a, b;
  T value;
  double error;
  bool operator<(const Segment& o) const {
    if (error != o.error) return error < o.error;
    return a > o.a;  // deterministic tie-break: lower endpoint first
  }
};

template <typename T, typename F>
Segment<T> gk15(F& f, double a, double b) {
  using V = QuadValue<T>;
  const double c = 0.5 * (a + b), hl = 0.5 * (b - a);
  T kron = V::zero(), gauss = V::zero();
  const T fc = f(c);
  V::axpy(kron, kWgk[7], fc);
  V::axpy(gauss, kWg[3], fc);
  for (int j = 0; j < 7; ++j) {
    const double dx = hl * kXgk[j];
    const T f1 = f(c - dx);
    const T f2 = f(c + dx);
    V::axpy(kron, kWgk[j], f1);
    V::axpy(kron, kWgk[j], f2);
    if (j % 2 == 1) {
      V::axpy(gauss, kWg[j / 2], f1);
      V::axpy(gauss, kWg[j / 2], f2);
    }
  }
  T val = V::zero();
  V::axpy(val, hl, kron);
  const double err = std::abs(hl) * V::norm(V::sub(kron, gauss));
  return {a, b, val, err};
}

}  // namespace detail

/*!
  Globally adaptive Gauss-Kronrod (7/15) quadrature of f over [a, b].

  The segment with the largest error estimate is bisected until the summed
  estimate falls below max(abs_tol, rel_tol * |I|) or the segment budget is
  spent. Works for double and std::array<double, K> valued integrands; for
  vectors the error is the max-norm over components.
*/
template <typename F>
auto integrate_adaptive(F&& f, double a, double b, const QuadOptions& opt = {})
    -> QuadResult<std::decay_t<decltype(f(0.0))>> {
  using T = std::decay_t<decltype(f(0.0))>;
  using V = detail::QuadValue<T>;
  QuadResult<T> out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::priority_queue<detail::Segment<T>> heap;
  const int n0 = std::max(1, opt.initial_segments);
  for (int k = 0; k < n0; ++k) {
    const double lo = a + (b - a) * k / n0;
    const double hi = (k + 1 == n0) ? b : a + (b - a) * (k + 1) / n0;
    heap.push(detail::gk15<T>(f, lo, hi));
    out.evaluations += 15;
  }
  auto totals = [&heap]() {
    // Copy-free walk of the heap storage is not exposed; rebuild from a copy.
    auto copy = heap;
    std::vector<detail::Segment<T>> segs;
    segs.reserve(copy.size());
    while (!copy.empty()) {
      segs.push_back(copy.top());
      copy.pop();
    }
    std::sort(segs.begin(), segs.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
    T value = V::zero();
    double err = 0.0;
    for (const auto& s : segs) {
      V::axpy(value, 1.0, s.value);
      err += s.error;
    }
    return std::pair<T, double>{value, err};
  };
  // Running sums drive the loop; the final result is re-summed in a fixed order.
  T running = V::zero();
  double running_err = 0.0;
  {
    auto [v, e] = totals();
    running = v;
    running_err = e;
  }
  int segments = n0;
  while (running_err > std::max(opt.abs_tol, opt.rel_tol * V::norm(running)) &&
         segments < opt.max_segments) {
    const auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Interval exhausted at double resolution; keep it and stop refining.
      heap.push(worst);
      break;
    }
    auto left = detail::gk15<T>(f, worst.a, mid);
    auto right = detail::gk15<T>(f, mid, worst.b);
    out.evaluations += 30;
    V::axpy(running, -1.0, worst.value);
    V::axpy(running, 1.0, left.value);
    V::axpy(running, 1.0, right.value);
    running_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++segments;
  }
  auto [value, err] = totals();
  out.value = value;
  out.error = err;
  out.converged = err <= std::max(opt.abs_tol, opt.rel_tol * V::norm(value));
  return out;
}

/*!
  Area integral in polar coordinates about `center`, normalized by dA = dxdy/pi:

      (1/pi) int_{t0}^{t1} int_0^{rmax(t)} F(center + rho e^{it}) rho drho dt.

  Nested adaptive quadrature: the inner radial integral is solved to a tighter
  tolerance than the outer angular one so that the outer integrand looks smooth.
*/
template <typename F, typename R>
auto integrate_polar(F&& f, std::complex<double> center, R&& rmax, double t0, double t1,
                     const QuadOptions& outer, const QuadOptions& inner)
    -> QuadResult<std::decay_t<decltype(f(std::complex<double>{}))>> {
  using T = std::decay_t<decltype(f(std::complex<double>{}))>;
  using V = detail::QuadValue<T>;
  long evals = 0;
  bool inner_ok = true;
  auto radial = [&](double t) -> T {
    const double r1 = rmax(t);
    if (!(r1 > 0.0)) return V::zero();
    const std::complex<double> dir = std::polar(1.0, t);
    auto g = [&](double rho) -> T {
      T v = V::zero();
      V::axpy(v, rho, f(center + rho * dir));
      return v;
    };
    auto res = integrate_adaptive(g, 0.0, r1, inner);
    evals += res.evaluations;
    inner_ok = inner_ok && res.converged;
    return res.value;
  };
  auto res = integrate_adaptive(radial, t0, t1, outer);
  QuadResult<T> out;
  out.value = V::zero();
  V::axpy(out.value, 1.0 / std::numbers::pi, res.value);
  out.error = res.error / std::numbers::pi;
  out.evaluations = evals;
  out.converged = res.converged && inner_ok;
  return out;
}

}  // namespace schur_scope
