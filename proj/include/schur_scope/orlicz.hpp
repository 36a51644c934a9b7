#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "errors.hpp"
#include "nevanlinna.hpp"
#include "symbol.hpp"

namespace schur_scope {

/// Young function Psi: Power(p) x^p, ExpPower(a) e^{x^a} - 1.
class OrliczFunction {
 public:
  enum class Family { power, exp_power };

  static OrliczFunction power(double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("Power(p) needs p >= 1");
    return {Family::power, p};
  }
  static OrliczFunction exp_power(double a) {
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("ExpPower(a) needs a > 0");
    return {Family::exp_power, a};
  }

  Family family() const { return family_; }
  double parameter() const { return param_; }

  std::string describe() const {
    return (family_ == Family::power ? "Power(" : "ExpPower(") + std::to_string(param_) + ")";
  }

  double operator()(double x) const { return evaluate(x); }

  double evaluate(double x) const {
    if (x <= 0.0) return 0.0;
    return family_ == Family::power ? std::pow(x, param_) : std::expm1(std::pow(x, param_));
  }

  /// Psi^{-1}(y) by bracketing and bisection to full double precision.
  double inverse(double y) const {
    if (y < 0.0 || std::isnan(y)) throw DomainError("Psi^{-1} needs y >= 0");
    if (y == 0.0) return 0.0;
    if (std::isinf(y)) return y;
    double lo = 0.0, hi = 1.0;
    while (evaluate(hi) < y) {
      lo = hi;
      hi *= 2.0;
    }
    auto g = [this, y](double x) { return evaluate(x) - y; };
    auto tol = [](double a, double b) { return std::abs(b - a) <= 4e-16 * std::max(std::abs(a), std::abs(b)); };
    const auto br = boost::math::tools::bisect(g, lo, hi, tol);
    return 0.5 * (br.first + br.second);
  }

  /// Second differences on a log grid in [1e-3, 1e3]; false if any falls below -1e-12.
  bool convex_on_grid(int n = 400) const {
    for (int k = 0; k < n; ++k) {
      const double x = 1e-3 * std::pow(1e6, static_cast<double>(k) / (n - 1));
      const double h = 1e-3 * x;
      const double d2 = evaluate(x + h) - 2.0 * evaluate(x) + evaluate(std::max(0.0, x - h));
      if (d2 < -1e-12 * std::max(1.0, evaluate(x))) return false;
    }
    return true;
  }

 private:
  OrliczFunction(Family f, double p) : family_(f), param_(p) {}
  Family family_;
  double param_;
};

struct HomogeneityRecord {
  double epsilon = 0.0;
  double nu_eps_t = 0.0;
  double ratio = 0.0;  // nu(eps t) / (eps nu(t))
};

struct HomogeneityResult {
  double t = 0.0;
  double nu_t = 0.0;
  double k_hat = 0.0;
  std::vector<HomogeneityRecord> records;
};

/// K_hat = max over eps of nu(eps t) / (eps nu(t)) with t < (1 - |phi(0)|)/64.
inline HomogeneityResult homogeneity_check(const SchurMap& phi, double t,
                                           const std::vector<double>& eps_list,
                                           const GridSpec& grid = {}) {
  const double gap = 1.0 - std::abs(phi.at_zero());
  if (!(t > 0.0 && t < gap / 64.0))
    throw PreconditionError("homogeneity_check: need 0 < t < (1 - |phi(0)|)/64");
  for (double e : eps_list)
    if (!(e > 0.0 && e < 1.0)) throw PreconditionError("homogeneity_check: eps in (0, 1)");
  HomogeneityResult out;
  out.t = t;
  out.nu_t = nu(phi, t, grid).value;
  if (out.nu_t == 0.0) throw ZeroMaximalError("nu_phi(t) = 0; the homogeneity property is vacuous");
  for (double e : eps_list) {
    HomogeneityRecord r;
    r.epsilon = e;
    r.nu_eps_t = nu(phi, e * t, grid).value;
    r.ratio = r.nu_eps_t / (e * out.nu_t);
    out.k_hat = std::max(out.k_hat, r.ratio);
    out.records.push_back(r);
  }
  return out;
}

/// Psi^{-1}(1/h) / Psi^{-1}(1/nu(h)) given nu(h); zero when nu(h) = 0.
inline double compactness_ratio_from_nu(const OrliczFunction& psi, double h, double nu_h) {
  if (nu_h <= 0.0) return 0.0;
  return psi.inverse(1.0 / h) / psi.inverse(1.0 / nu_h);
}

inline double compactness_ratio(const SchurMap& phi, const OrliczFunction& psi, double h,
                                const GridSpec& grid = {}) {
  const double gap = 1.0 - std::abs(phi.at_zero());
  if (!(h > 0.0 && h < gap / 16.0))
    throw PreconditionError("compactness_ratio: need 0 < h < (1 - |phi(0)|)/16");
  return compactness_ratio_from_nu(psi, h, nu(phi, h, grid).value);
}

struct CompactnessVerdict {
  enum class Verdict { compact_consistent, noncompact_consistent, inconclusive };
  Verdict verdict = Verdict::inconclusive;
  std::vector<std::pair<double, double>> ratio_trace;  // (h, ratio), h decreasing
  /// last / first ratio of the trace (0 for an all-zero trace).
  double trend_stat = 0.0;
};

inline const char* to_string(CompactnessVerdict::Verdict v) {
  switch (v) {
    case CompactnessVerdict::Verdict::compact_consistent: return "compact_consistent";
    case CompactnessVerdict::Verdict::noncompact_consistent: return "noncompact_consistent";
    default: return "inconclusive";
  }
}

/// The decision rule, applied to an assembled trace.
inline CompactnessVerdict::Verdict classify_trace(const std::vector<std::pair<double, double>>& trace,
                                                  double* trend = nullptr) {
  using V = CompactnessVerdict::Verdict;
  if (trace.empty()) return V::inconclusive;
  const double first = trace.front().second, last = trace.back().second;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& p : trace) {
    lo = std::min(lo, p.second);
    hi = std::max(hi, p.second);
  }
  if (trend) *trend = first > 0.0 ? last / first : 0.0;
  if (hi == 0.0) return V::compact_consistent;
  if (last <= first / 2.0 && last <= 0.1) return V::compact_consistent;
  if (lo >= 0.1 && hi <= 2.0 * lo) return V::noncompact_consistent;
  return V::inconclusive;
}

inline CompactnessVerdict compactness_diagnostic(const SchurMap& phi, const OrliczFunction& psi,
                                                 const std::vector<double>& h_list,
                                                 const GridSpec& grid = {}) {
  if (h_list.size() < 6) throw PreconditionError("compactness_diagnostic: need at least 6 sizes");
  for (std::size_t i = 1; i < h_list.size(); ++i)
    if (!(h_list[i] < h_list[i - 1]))
      throw PreconditionError("compactness_diagnostic: sizes must decrease");
  CompactnessVerdict out;
  for (double h : h_list) out.ratio_trace.emplace_back(h, compactness_ratio(phi, psi, h, grid));
  out.verdict = classify_trace(out.ratio_trace, &out.trend_stat);
  return out;
}

/// Psi^{-1}(1/(1 - |z|)) / Psi^{-1}(1/(1 - |phi(z)|)).
inline double angular_ratio(const SchurMap& phi, cplx z, const OrliczFunction& psi) {
  if (!(std::abs(z) < 1.0)) throw DomainError("angular_ratio: need |z| < 1");
  const double wz = std::abs(phi.value(z));
  if (!(wz < 1.0)) throw DomainError("angular_ratio: need |phi(z)| < 1");
  return psi.inverse(1.0 / (1.0 - std::abs(z))) / psi.inverse(1.0 / (1.0 - wz));
}

struct AngularSweep {
  std::vector<std::pair<double, double>> trace;  // (r, ratio)
  bool grows = false;  // last ratio at least twice the first
};

/// The ratio along z = r xi with r = 1 - 2^{-k}, k = 1..levels.
inline AngularSweep angular_ratio_sweep(const SchurMap& phi, cplx xi, const OrliczFunction& psi,
                                       int levels = 20) {
  if (levels < 2) throw PreconditionError("angular_ratio_sweep: need at least two radii");
  AngularSweep out;
  for (int k = 1; k <= levels; ++k) {
    const double r = 1.0 - std::ldexp(1.0, -k);
    out.trace.emplace_back(r, angular_ratio(phi, r * xi, psi));
  }
  out.grows = out.trace.back().second >= 2.0 * out.trace.front().second;
  return out;
}

}  // namespace schur_scope
