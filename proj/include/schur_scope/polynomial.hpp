#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace schur_scope {

using cplx = std::complex<double>;

/// Dense polynomial with complex coefficients, lowest degree first.
using Coeffs = std::vector<cplx>;

namespace poly {

/// Drops trailing (highest-degree) coefficients whose modulus is at most
/// rel_tol times the largest coefficient modulus.
inline void trim(Coeffs& c, double rel_tol = 0.0) {
  double scale = 0.0;
  for (const auto& v : c) scale = std::max(scale, std::abs(v));
  while (!c.empty() && std::abs(c.back()) <= rel_tol * scale) c.pop_back();
}

inline int degree(std::span<const cplx> c) {
  for (std::size_t i = c.size(); i-- > 0;)
    if (c[i] != cplx{}) return static_cast<int>(i);
  return -1;
}

inline cplx eval(std::span<const cplx> c, cplx z) {
  cplx acc{};
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
  return acc;
}

/// Value and first derivative by one Horner pass.
inline std::pair<cplx, cplx> eval_with_derivative(std::span<const cplx> c, cplx z) {
  cplx p{}, dp{};
  for (std::size_t i = c.size(); i-- > 0;) {
    dp = dp * z + p;
    p = p * z + c[i];
  }
  return {p, dp};
}

inline Coeffs derivative(std::span<const cplx> c) {
  if (c.size() <= 1) return {};
  Coeffs d(c.size() - 1);
  for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<double>(i);
  return d;
}

inline Coeffs multiply(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.empty() || b.empty()) return {};
  Coeffs r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

inline Coeffs add(std::span<const cplx> a, std::span<const cplx> b) {
  Coeffs r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

inline Coeffs scale(std::span<const cplx> a, cplx s) {
  Coeffs r(a.begin(), a.end());
  for (auto& v : r) v *= s;
  return r;
}

inline Coeffs power(std::span<const cplx> a, int n) {
  Coeffs r{cplx{1.0}};
  for (int k = 0; k < n; ++k) r = multiply(r, a);
  return r;
}

/// All complex roots of a polynomial whose leading coefficient is nonzero.
/// Degree one and two are solved in closed form; higher degrees use the
/// eigenvalues of the companion matrix. Callers polish the result.
inline std::vector<cplx> roots(std::span<const cplx> c) {
  const int n = degree(c);
  if (n <= 0) return {};
  if (n == 1) return {-c[0] / c[1]};
  if (n == 2) {
    // Stable quadratic formula: pick the sign that avoids cancellation.
    const cplx a = c[2], b = c[1], k = c[0];
    const cplx disc = std::sqrt(b * b - 4.0 * a * k);
    const cplx q = (std::real(std::conj(b) * disc) >= 0.0) ? -0.5 * (b + disc) : -0.5 * (b - disc);
    if (q == cplx{}) return {cplx{}, cplx{}};
    return {q / a, k / q};
  }
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -c[i] / c[n];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, /*computeEigenvectors=*/false);
  std::vector<cplx> out(n);
  for (int i = 0; i < n; ++i) out[i] = solver.eigenvalues()[i];
  return out;
}

}  // namespace poly
}  // namespace schur_scope
