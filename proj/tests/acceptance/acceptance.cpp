// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <schur_scope.hpp>

using namespace schur_scope;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  const char* id;
  const char* title;
  double limit_seconds;
  std::function<Outcome()> body;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

cplx random_in_disk(std::mt19937_64& rng, double rmax = 1.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return rmax * std::sqrt(u(rng)) * std::polar(1.0, 2 * pi * u(rng));
}

double gap(const SchurMap& phi) { return 1.0 - std::abs(phi.at_zero()); }

const SchurMap& by_name(const std::vector<NamedSymbol>& c, const std::string& n) {
  for (const auto& s : c)
    if (s.name == n) return s.map;
  throw std::runtime_error("no symbol " + n);
}

// ---------------------------------------------------------------------------

Outcome ac1() {
  const SchurMap id = SchurMap::identity();
  std::mt19937_64 rng(1);
  double err_n = 0.0;
  for (int k = 0; k < 1000; ++k) {
    cplx w = random_in_disk(rng, 1.0 - 1e-6);
    if (std::abs(w) < 1e-6) w = 0.5;
    err_n = std::max(err_n, std::abs(counting_function(id, w) - std::log(1 / std::abs(w))));
  }
  double err_m = 0.0;
  std::uniform_real_distribution<double> u(0.0, 2 * pi);
  for (double h : {0.01, 0.1, 0.5})
    for (int k = 0; k < 8; ++k)
      err_m = std::max(err_m, std::abs(pullback_window_mass(id, CarlesonWindow(std::polar(1.0, u(rng)), h)).mass - h / pi));
  return {err_n <= 1e-10 && err_m <= 1e-9,
          "max |N - log 1/|w|| = " + fmt("%.2e", err_n) + " (1e-10), max |m - h/pi| = " + fmt("%.2e", err_m) +
              " (1e-9)"};
}

Outcome ac2() {
  const auto corpus = bundled_corpus();
  const auto z2 = littlewood_paley_check(by_name(corpus, "z2"), {0.0, 1.0});
  const double rel = std::max(std::abs(z2.lhs - 1.0), std::abs(z2.rhs - 1.0));
  const std::array<Coeffs, 3> fs = {Coeffs{0.0, 1.0}, Coeffs{0.0, 0.0, 1.0}, Coeffs{0.0, 1.0, 0.5}};
  double worst = 0.0;
  std::string worst_name;
  for (const auto& s : corpus) {
    for (const auto& c : littlewood_paley_batch(s.map, fs)) {
      if (c.residual > worst) {
        worst = c.residual;
        worst_name = s.name;
      }
    }
  }
  return {rel <= 1e-6 && worst <= 1e-5,
          "z^2: |lhs-1|,|rhs-1| <= " + fmt("%.2e", rel) + " (1e-6); worst residual " + fmt("%.2e", worst) + " [" +
              worst_name + "] over 27 pairs (1e-5)"};
}

Outcome ac3() {
  long n = 0, bad = 0, warn = 0;
  double worst = 0.0;
  for (const auto& s : bundled_corpus()) {
    const double cap = gap(s.map) / 4.0;
    for (int j = 0; j < 16; ++j) {
      const double h = cap * (1.0 - 1e-9) * std::pow(10.0, -3.0 * j / 15.0);
      for (int k = 0; k < 32; ++k) {
        const auto r = upper_bound_check(s.map, (1.0 - h) * std::polar(1.0, 2 * pi * k / 32));
        ++n;
        if (!r.pass) ++bad;
        if (r.warning) ++warn;
        if (r.rhs > 0) worst = std::max(worst, r.lhs / r.rhs);
      }
    }
  }
  return {bad == 0 && n == 9 * 512, std::to_string(bad) + " violations / " + std::to_string(n) +
                                         ", max lhs/rhs " + fmt("%.3e", worst) + ", resolution warnings " +
                                         std::to_string(warn)};
}

Outcome ac4() {
  long n = 0, bad = 0, warn = 0;
  double worst = 0.0;
  for (const auto& s : bundled_corpus()) {
    const double cap = gap(s.map) / 16.0;
    for (int j = 1; j <= 6; ++j) {
      const double h = cap * std::ldexp(1.0, -j + 1) * (1.0 - 1e-9);
      for (int k = 0; k < 16; ++k) {
        const auto r = lower_bound_check(s.map, std::polar(1.0, 2 * pi * (k + 0.25) / 16), h);
        ++n;
        if (!r.pass) ++bad;
        if (r.warning) ++warn;
        if (r.rhs > 0) worst = std::max(worst, r.lhs / r.rhs);
      }
    }
  }
  return {bad == 0, std::to_string(bad) + " violations / " + std::to_string(n) + ", max lhs/rhs " +
                        fmt("%.3e", worst) + ", resolution warnings " + std::to_string(warn)};
}

Outcome ac5() {
  const auto corpus = bundled_corpus();
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> pick(0, corpus.size() - 1);
  long n = 0, bad = 0, tries = 0;
  double worst = 0.0;
  while (n < 10000 && tries < 10'000'000) {
    ++tries;
    const auto& s = corpus[pick(rng)];
    const cplx z = random_in_disk(rng);
    const double h = 1.0 - std::abs(s.map.value(z));
    if (!(h > 0.0 && h <= 0.25)) continue;
    const auto r = preparatory_lemma_check(s.map, z);
    ++n;
    if (!r.pass) ++bad;
    if (r.rhs > 0) worst = std::max(worst, r.lhs / r.rhs);
  }
  return {bad == 0 && n == 10000, std::to_string(bad) + " violations / " + std::to_string(n) +
                                       " sampled (symbol, z), max lhs/rhs " + fmt("%.3e", worst)};
}

Outcome ac6() {
  const SchurMap lens = SchurMap::polynomial({0.5, 0.5});
  std::mt19937_64 rng(6);
  double err = 0.0;
  for (int k = 0; k < 1000; ++k) {
    // points of phi(D) = D(1/2, 1/2), away from phi(0) = 1/2
    cplx v = random_in_disk(rng, 1.0 - 1e-9);
    if (std::abs(v) < 1e-6) v = 0.3;
    const cplx w = 0.5 + 0.5 * v;
    err = std::max(err, std::abs(counting_function(lens, w) - std::log(1 / std::abs(2.0 * w - 1.0))));
  }
  double rlo = 1e300, rhi = 0, nlo = 1e300, nhi = 0;
  for (int k = 4; k <= 14; ++k) {
    const double h = std::ldexp(1.0, -k);
    const double r = rho(lens, h).value / h, v = nu(lens, h).value / h;
    rlo = std::min(rlo, r);
    rhi = std::max(rhi, r);
    nlo = std::min(nlo, v);
    nhi = std::max(nhi, v);
  }
  std::vector<double> hs;
  for (int k = 10; k <= 20; ++k) hs.push_back(std::ldexp(1.0, -k));
  bool slit_ok = true;
  std::string slit;
  for (double a : {1.0, 1.5, 2.0}) {
    const double ah = slit_example_exponent(a, hs).alpha_hat;
    slit_ok = slit_ok && std::abs(ah - a) <= 0.1 * a;
    slit += fmt(" %.4f", ah);
  }
  const bool ok = err <= 1e-10 && rhi / rlo <= 4.0 && nhi / nlo <= 4.0 && slit_ok;
  return {ok, "max |N - log 1/|2w-1|| = " + fmt("%.2e", err) + "; rho/h in [" + fmt("%.4f", rlo) + ", " +
                  fmt("%.4f", rhi) + "], nu/h in [" + fmt("%.4f", nlo) + ", " + fmt("%.4f", nhi) +
                  "]; alpha_hat for 1, 1.5, 2:" + slit};
}

Outcome ac7() {
  const std::vector<double> eps = {0.5, 0.25, 0.125};
  double k_max = 0.0, id_lo = 1e300, id_hi = 0.0;
  int vacuous = 0;
  bool finite = true;
  for (const auto& s : bundled_corpus()) {
    for (int j = 1; j <= 3; ++j) {
      const double t = gap(s.map) / 64.0 * std::ldexp(1.0, -j);
      try {
        const auto r = homogeneity_check(s.map, t, eps);
        finite = finite && std::isfinite(r.k_hat);
        k_max = std::max(k_max, r.k_hat);
        if (s.name == "identity") {
          id_lo = std::min(id_lo, r.k_hat);
          id_hi = std::max(id_hi, r.k_hat);
        }
      } catch (const ZeroMaximalError&) {
        ++vacuous;
      }
    }
  }
  return {finite && k_max <= 16.0 && id_lo >= 0.9 && id_hi <= 1.1,
          "max K_hat " + fmt("%.4f", k_max) + " (<= 16); identity K_hat in [" + fmt("%.4f", id_lo) + ", " +
              fmt("%.4f", id_hi) + "]; vacuous (nu = 0) cases " + std::to_string(vacuous)};
}

Outcome ac8() {
  const auto corpus = bundled_corpus();
  const auto psi = OrliczFunction::power(2);
  using V = CompactnessVerdict::Verdict;
  const std::vector<std::pair<std::string, V>> expect = {{"half_z", V::compact_consistent},
                                                         {"lens", V::noncompact_consistent},
                                                         {"z2", V::noncompact_consistent},
                                                         {"moebius_half", V::noncompact_consistent}};
  bool ok = true;
  std::string detail;
  for (const auto& [name, want] : expect) {
    const SchurMap& phi = by_name(corpus, name);
    std::vector<double> hs;
    for (int k = 0; k < 8; ++k) hs.push_back(gap(phi) / 32.0 * std::ldexp(1.0, -k));
    const auto a = compactness_diagnostic(phi, psi, hs);
    const auto b = compactness_diagnostic(phi, psi, hs);
    ok = ok && a.verdict == want && a.verdict == b.verdict && a.ratio_trace == b.ratio_trace;
    detail += name + "=" + to_string(a.verdict) + " ";
  }
  return {ok, detail + "(repeat runs identical)"};
}

Outcome ac9() {
  const auto corpus = bundled_corpus();
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  long windows = 0, outside = 0;
  double worst_z = 0.0;
  for (const auto& s : corpus) {
    const BoundaryTable tab = make_boundary_table(s.map, BoundaryRes{}.n_seed);
    for (int k = 0; k < 20; ++k) {
      const double h = std::exp(std::log(0.005) + u(rng) * std::log(0.6 / 0.005));
      const CarlesonWindow w(std::polar(1.0, 2 * pi * u(rng)), h);
      const double m = pullback_window_mass(s.map, w, tab, BoundaryRes{}).mass;
      const auto mc = monte_carlo_pullback_mass(s.map, w, 1'000'000, 0x5EED);
      const double p = std::max(m, 1.0 / mc.samples);
      const double se = std::sqrt(p * (1 - p) / mc.samples);
      const double z = std::abs(m - mc.estimate) / se;
      worst_z = std::max(worst_z, z);
      ++windows;
      if (z > 3.0) ++outside;
    }
  }
  long pairs = 0;
  double inv = 0.0;
  std::uniform_int_distribution<std::size_t> pick(0, corpus.size() - 1);
  while (pairs < 500) {
    const auto& s = corpus[pick(rng)];
    const cplx a = random_in_disk(rng, 0.95);
    const cplx w = random_in_disk(rng, 0.999);
    if (std::abs(w - s.map.at_zero()) < 1e-6) continue;
    const SchurMap conj = SchurMap::compose(SchurMap::moebius(a), s.map);
    const cplx wa = (a - w) / (1.0 - std::conj(a) * w);
    inv = std::max(inv, std::abs(counting_function(conj, wa) - counting_function(s.map, w)));
    ++pairs;
  }
  return {outside == 0 && inv <= 1e-8,
          std::to_string(outside) + " / " + std::to_string(windows) + " windows beyond 3 SE (max " +
              fmt("%.2f", worst_z) + " SE); Moebius invariance max error " + fmt("%.2e", inv) + " over 500 pairs"};
}

Outcome ac10() {
  const auto r = choa_kim_diagnostic(SchurMap::identity(), 0.9);
  const double err = std::abs(r.kernel_integral - 1.0 / (1.0 - 0.81));
  return {err <= 1e-6 && r.lhs_exceeds_bound,
          "kernel " + fmt("%.9f", r.kernel_integral) + " (|err| " + fmt("%.1e", err) + "), N " +
              fmt("%.4f", r.n_value) + " > bound " + fmt("%.4f", r.stated_bound) + " flagged: " +
              (r.lhs_exceeds_bound ? "yes" : "no") + ", best constant " + fmt("%.4f", r.best_constant)};
}

}  // namespace

int main() {
  const std::vector<Criterion> all = {
      {"AC1", "closed-form exactness", 5, ac1},
      {"AC2", "Littlewood-Paley / Stanton", 60, ac2},
      {"AC3", "upper bound sweep", 180, ac3},
      {"AC4", "lower bound sweep", 180, ac4},
      {"AC5", "preparatory lemma", 120, ac5},
      {"AC6", "worked example (1+z)/2", 120, ac6},
      {"AC7", "homogeneity", 120, ac7},
      {"AC8", "compactness diagnostics", 60, ac8},
      {"AC9", "oracle agreement", 180, ac9},
      {"AC10", "Choa-Kim diagnostic", 5, ac10},
  };
  int failed = 0;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.limit_seconds;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::printf("%-4s %s  %s: %s; %.1fs (limit %.0fs)\n", c.id, pass ? "PASS" : "FAIL", c.title, o.detail.c_str(),
                secs, c.limit_seconds);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
