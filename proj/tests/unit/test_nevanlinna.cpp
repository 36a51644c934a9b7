#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include <schur_scope/nevanlinna.hpp>
#include <schur_scope/quadrature.hpp>
#include <schur_scope/symbol_io.hpp>

using namespace schur_scope;
using std::numbers::pi;

namespace {

SchurMap lens() { return SchurMap::polynomial({0.5, 0.5}); }
SchurMap z2() { return SchurMap::polynomial({0.0, 0.0, 1.0}); }
SchurMap half() { return SchurMap::polynomial({0.0, 0.5}); }

// Oracle: Newton on phi(z) - w from a dense polar grid of starts, using only
// evaluations of phi. Distinct converged roots in the open disk are summed.
double newton_oracle(const SchurMap& phi, cplx w) {
  std::vector<cplx> found;
  for (int i = 1; i <= 24; ++i) {
    for (int j = 0; j < 48; ++j) {
      cplx z = std::polar(i / 24.5, 2 * pi * j / 48);
      for (int it = 0; it < 100; ++it) {
        const double hstep = 1e-7;
        const cplx f = phi.value(z) - w;
        const cplx d = (phi.value(z + hstep) - phi.value(z - hstep)) / (2 * hstep);
        if (d == cplx{}) break;
        cplx step = f / d;
        if (std::abs(step) > 0.2) step *= 0.2 / std::abs(step);
        z -= step;
        if (std::abs(z) > 1.5) break;
        if (std::abs(step) < 1e-15) break;
      }
      if (std::abs(z) < 1.0 - 1e-9 && std::abs(phi.value(z) - w) < 1e-12) {
        bool dup = false;
        for (cplx r : found) dup = dup || std::abs(r - z) < 1e-7;
        if (!dup) found.push_back(z);
      }
    }
  }
  double n = 0.0;
  for (cplx r : found) n += std::log(1.0 / std::abs(r));
  return n;
}

cplx moebius_involution(cplx a, cplx z) { return (a - z) / (1.0 - std::conj(a) * z); }

}  // namespace

TEST(Preimages, Examples) {
  auto p = preimages(SchurMap::identity(), 0.5);
  ASSERT_EQ(p.roots.size(), 1u);
  EXPECT_NEAR(std::abs(p.roots[0].z - 0.5), 0.0, 1e-15);
  EXPECT_EQ(p.roots[0].multiplicity, 1);

  p = preimages(z2(), 0.25);
  ASSERT_EQ(p.roots.size(), 2u);
  std::vector<double> re = {p.roots[0].z.real(), p.roots[1].z.real()};
  std::sort(re.begin(), re.end());
  EXPECT_NEAR(re[0], -0.5, 1e-14);
  EXPECT_NEAR(re[1], 0.5, 1e-14);

  p = preimages(lens(), 0.75);
  ASSERT_EQ(p.roots.size(), 1u);
  EXPECT_NEAR(std::abs(p.roots[0].z - 0.5), 0.0, 1e-15);
}

TEST(Preimages, MultipleRootsAreMerged) {
  // (z - 0.3)^2 / 1.69 has a double root at 0.3.
  const SchurMap sq = SchurMap::polynomial({0.09 / 1.69, -0.6 / 1.69, 1.0 / 1.69});  // (z - 0.3)^2 / 1.69
  const auto p = preimages(sq, 0.0);
  ASSERT_EQ(p.roots.size(), 1u);
  EXPECT_EQ(p.roots[0].multiplicity, 2);
  EXPECT_NEAR(counting_function(sq, cplx{1e-12}), 2 * std::log(1 / 0.3), 1e-5);
}

TEST(Preimages, Invariants) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& s : bundled_corpus()) {
    for (int k = 0; k < 50; ++k) {
      const cplx w = 0.999 * std::sqrt(u(rng)) * std::polar(1.0, 2 * pi * u(rng));
      const auto p = preimages(s.map, w);
      EXPECT_LE(p.total_multiplicity(), s.map.degree());
      for (const auto& r : p.roots) {
        EXPECT_LT(std::abs(r.z), 1.0);
        EXPECT_LE(std::abs(s.map.value(r.z) - w), 1e-12 * (1 + s.map.degree()) + 1e-9 * (r.multiplicity > 1));
      }
    }
  }
}

TEST(Counting, Examples) {
  EXPECT_NEAR(counting_function(SchurMap::identity(), 0.5), std::log(2.0), 1e-15);
  EXPECT_NEAR(counting_function(lens(), 0.75), std::log(2.0), 1e-15);
  EXPECT_NEAR(counting_function(z2(), 0.25), 2 * std::log(2.0), 1e-14);
  EXPECT_EQ(counting_function(half(), 0.7), 0.0);
}

TEST(Counting, Errors) {
  EXPECT_THROW(counting_function(lens(), 0.5), BasePointError);
  EXPECT_THROW(counting_function(lens(), 0.5 + 1e-10), BasePointError);
  EXPECT_THROW(counting_function(lens(), 1.0), DomainError);
  EXPECT_THROW(preimages(SchurMap::polynomial({0.3}), 0.3), DegenerateError);
  EXPECT_EQ(counting_function(SchurMap::polynomial({0.3}), 0.6), 0.0);
}

TEST(Counting, AgreesWithNewtonOracle) {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& s : bundled_corpus()) {
    for (int k = 0; k < 12; ++k) {
      const cplx w = 0.97 * std::sqrt(u(rng)) * std::polar(1.0, 2 * pi * u(rng));
      if (std::abs(w - s.map.at_zero()) < 1e-3) continue;
      EXPECT_NEAR(counting_function(s.map, w), newton_oracle(s.map, w), 1e-9) << s.name << " " << w;
    }
  }
}

TEST(Counting, MoebiusConjugationInvariance) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& s : bundled_corpus()) {
    for (int k = 0; k < 40; ++k) {
      const cplx a = 0.9 * std::sqrt(u(rng)) * std::polar(1.0, 2 * pi * u(rng));
      const cplx w = 0.95 * std::sqrt(u(rng)) * std::polar(1.0, 2 * pi * u(rng));
      if (std::abs(w - s.map.at_zero()) < 1e-6) continue;
      const SchurMap conj = SchurMap::compose(SchurMap::moebius(a), s.map);
      EXPECT_NEAR(counting_function(conj, moebius_involution(a, w)), counting_function(s.map, w), 1e-8)
          << s.name;
    }
  }
}

TEST(Counting, LittlewoodBoundForCentredSymbols) {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  long bad = 0;
  for (const auto& s : bundled_corpus()) {
    if (std::abs(s.map.at_zero()) > 0.0) continue;
    for (int k = 0; k < 400; ++k) {
      const cplx w = std::sqrt(u(rng)) * std::polar(1.0, 2 * pi * u(rng));
      if (std::abs(w) < 1e-6) continue;
      if (counting_function(s.map, w) > std::log(1 / std::abs(w)) * (1 + 1e-12) + 1e-14) ++bad;
    }
  }
  EXPECT_EQ(bad, 0);
}

TEST(Counting, BasePointLemma) {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& s : bundled_corpus()) {
    const double gap = 1 - std::abs(s.map.at_zero());
    for (int k = 0; k < 200; ++k) {
      const double h = gap / 4 * u(rng) * (1 - 1e-12);
      if (h <= 0) continue;
      const cplx a = (1 - h) * std::polar(1.0, 2 * pi * u(rng));
      EXPECT_GT(std::abs(moebius_involution(a, s.map.at_zero())), 1.0 / 3.0) << s.name;
    }
  }
}

TEST(Nu, Examples) {
  auto s = nu(SchurMap::identity(), 0.3);
  EXPECT_NEAR(s.value, std::log(1 / 0.7), 1e-12);
  EXPECT_NEAR(std::abs(s.argmax_w), 0.7, 1e-12);
  EXPECT_EQ(nu(half(), 0.3).value, 0.0);
  s = nu(lens(), 0.01);
  EXPECT_NEAR(s.value, std::log(1 / 0.98), 1e-6);
  EXPECT_NEAR(std::abs(s.argmax_w - 0.99), 0.0, 1e-3);
}

TEST(NuWindow, Examples) {
  EXPECT_NEAR(nu_window(SchurMap::identity(), 1.0, 0.1).value, std::log(1 / 0.9), 1e-12);
  EXPECT_EQ(nu_window(half(), 1.0, 0.3).value, 0.0);
  // N_{z^2}(w) = log 1/|w|: two roots of modulus |w|^{1/2}; the window sup sits at |w| = 0.9.
  EXPECT_NEAR(nu_window(z2(), 1.0, 0.1).value, std::log(1 / 0.9), 1e-12);
  EXPECT_NEAR(counting_function(z2(), 0.81), 2 * std::log(1 / 0.9), 1e-14);
}

TEST(NuSector, Examples) {
  EXPECT_NEAR(nu_sector(SchurMap::identity(), 1.0, 0.1).value, std::log(1 / 0.9), 1e-12);
  EXPECT_EQ(nu_sector(half(), 1.0, 0.4).value, 0.0);
  EXPECT_NEAR(nu_sector(lens(), 1.0, 0.02).value, std::log(1 / 0.96), 1e-9);
}

TEST(Nu, RefinementNeverLowersTheValue) {
  for (const auto& s : bundled_corpus()) {
    const auto r = nu_window(s.map, std::polar(1.0, 0.4), 0.2);
    for (std::size_t k = 1; k < r.level_values.size(); ++k)
      EXPECT_GE(r.level_values[k], r.level_values[k - 1]) << s.name;
    if (r.value > 0) EXPECT_NEAR(counting_function(s.map, r.argmax_w), r.value, 1e-12);
  }
}

TEST(Nu, MonotoneInT) {
  // Grid lower bounds are not nested, so monotonicity holds up to the grid gap.
  for (const auto& s : bundled_corpus()) {
    double prev = 0.0;
    for (double t : {0.01, 0.02, 0.05, 0.1, 0.2, 0.4}) {
      const double v = nu(s.map, t).value;
      EXPECT_GE(v, prev * (1 - 1e-3) - 1e-9) << s.name << " t=" << t;
      prev = std::max(prev, v);
    }
    prev = 0.0;
    for (double h : {0.01, 0.03, 0.1, 0.3, 1.0}) {
      const double v = nu_window(s.map, std::polar(1.0, 1.0), h).value;
      EXPECT_GE(v, prev * (1 - 1e-3) - 1e-9) << s.name << " h=" << h;
      prev = std::max(prev, v);
    }
  }
}

TEST(Subaveraging, Examples) {
  const auto r = subaveraging_check(SchurMap::identity(), 0.5, 0.2);
  EXPECT_NEAR(r.lhs, std::log(2.0), 1e-15);
  EXPECT_GE(r.rhs, r.lhs * (1 - 1e-6));
  EXPECT_TRUE(r.pass);
  EXPECT_TRUE(subaveraging_check(z2(), 0.25, 0.1).pass);
  EXPECT_THROW(subaveraging_check(SchurMap::identity(), 0.05, 0.2), PreconditionError);
  EXPECT_THROW(subaveraging_check(SchurMap::identity(), 0.9, 0.2), PreconditionError);
}

TEST(Subaveraging, HarmonicMeanValueForIdentity) {
  // log 1/|w| is harmonic off 0: the disk mean equals the centre value.
  const auto r = subaveraging_check(SchurMap::identity(), cplx{0.3, 0.4}, 0.25);
  EXPECT_NEAR(r.rhs, r.lhs, 1e-8);
}

TEST(Subaveraging, HoldsAcrossCorpus) {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& s : bundled_corpus()) {
    for (int k = 0; k < 3; ++k) {
      const double rad = 0.05 + 0.1 * u(rng);
      const cplx w0 = (0.85 - rad) * std::sqrt(u(rng)) * std::polar(1.0, 2 * pi * u(rng));
      if (std::abs(w0 - s.map.at_zero()) <= rad * 1.01) continue;
      EXPECT_TRUE(subaveraging_check(s.map, w0, rad).pass) << s.name << " " << w0;
    }
  }
}
