#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include <schur_scope/symbol.hpp>
#include <schur_scope/symbol_io.hpp>

using namespace schur_scope;
using std::numbers::pi;

namespace {

const cplx I{0.0, 1.0};

SchurMap lens() { return SchurMap::polynomial({0.5, 0.5}); }

// Direct nested evaluation used as an oracle for composite symbols.
cplx moebius_oracle(cplx a, double rot, cplx z) { return std::polar(1.0, rot) * (a - z) / (1.0 - std::conj(a) * z); }

}  // namespace

TEST(Evaluate, Examples) {
  EXPECT_NEAR(std::abs(evaluate(lens(), 1.0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(evaluate(SchurMap::moebius(0.5), 0.5)), 0.0, 1e-15);
  const cplx v = evaluate(SchurMap::blaschke({0.0, 0.0}), cplx{0.3, 0.4});
  EXPECT_NEAR(v.real(), -0.07, 1e-15);
  EXPECT_NEAR(v.imag(), 0.24, 1e-15);
}

TEST(Evaluate, RejectsPointsOutsideClosedDisk) {
  EXPECT_THROW(evaluate(lens(), 1.01), DomainError);
  EXPECT_THROW(evaluate_derivative(lens(), cplx{0.0, 1.2}), DomainError);
  EXPECT_NO_THROW(evaluate(lens(), 1.0 + 1e-11));
}

TEST(Derivative, Examples) {
  EXPECT_NEAR(std::abs(evaluate_derivative(lens(), cplx{0.2, -0.3}) - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(evaluate_derivative(SchurMap::blaschke({0.0, 0.0}), 0.5) - 1.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(evaluate_derivative(SchurMap::moebius(0.5), 0.0) - (-0.75)), 0.0, 1e-15);
}

TEST(BoundaryValue, LensHalfAngleForm) {
  for (double t : {-3.0, -1.0, -0.2, 0.0, 0.7, 2.5, 3.1}) {
    const cplx expect = std::cos(t / 2) * std::polar(1.0, t / 2);
    EXPECT_NEAR(std::abs(boundary_value(lens(), t) - expect), 0.0, 1e-15) << t;
  }
  EXPECT_NEAR(std::abs(boundary_value(SchurMap::identity(), pi) + 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(boundary_value(SchurMap::blaschke({0.0, 0.0}), pi / 2) + 1.0), 0.0, 1e-15);
  // reduction mod 2 pi
  EXPECT_NEAR(std::abs(boundary_value(lens(), 0.3 + 4 * pi) - boundary_value(lens(), 0.3)), 0.0, 1e-13);
}

TEST(ClearToPolynomial, Examples) {
  auto c = clear_to_polynomial(SchurMap::identity(), 0.5);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_NEAR(std::abs(c[0] + 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(c[1] - 1.0), 0.0, 1e-15);

  c = clear_to_polynomial(lens(), 0.75);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_NEAR(std::abs(c[0] + 0.25), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(c[1] - 0.5), 0.0, 1e-15);

  // (0.5 - z) - 0.2 (1 - 0.5 z) expanded by hand
  c = clear_to_polynomial(SchurMap::moebius(0.5), 0.2);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_NEAR(std::abs(c[0] - 0.3), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(c[1] + 0.9), 0.0, 1e-15);
}

TEST(ClearToPolynomial, ConstantMapIsDegenerate) {
  EXPECT_THROW(clear_to_polynomial(SchurMap::polynomial({0.3}), 0.3), DegenerateError);
  EXPECT_THROW(clear_to_polynomial(lens(), 1.0), DomainError);
}

TEST(Validate, Examples) {
  auto r = validate_self_map(SchurMap::identity(), 256, 1e-12);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.max_boundary_modulus, 1.0, 1e-15);
  r = validate_self_map(SchurMap::polynomial({0.6, 0.6}), 256, 1e-12);
  EXPECT_FALSE(r.pass);
  EXPECT_NEAR(r.max_boundary_modulus, 1.2, 1e-14);
  r = validate_self_map(lens(), 256, 1e-12);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.max_boundary_modulus, 1.0, 1e-15);
  EXPECT_THROW(validate_self_map(lens(), 32, 1e-12), PreconditionError);
}

TEST(Degree, MatchesClearedPolynomial) {
  for (const auto& s : bundled_corpus()) {
    const auto c = clear_to_polynomial(s.map, cplx{0.123, -0.456});
    EXPECT_EQ(static_cast<int>(c.size()) - 1, s.map.degree()) << s.name;
  }
  EXPECT_EQ(SchurMap::compose(SchurMap::blaschke({0.3, -0.5 * I}), SchurMap::moebius(0.5)).degree(), 2);
}

TEST(Degree, CompositionBeyondCapIsALoadError) {
  Coeffs z9(10, 0.0), z8(9, 0.0);
  z9[9] = 1.0;
  z8[8] = 1.0;
  EXPECT_THROW(SchurMap::compose(SchurMap::polynomial(z9), SchurMap::polynomial(z8)), LoadError);
}

TEST(Composition, MatchesNestedEvaluation) {
  const cplx a = 0.5;
  const SchurMap b = SchurMap::blaschke({0.3, -0.5 * I}, 0.4);
  const SchurMap m = SchurMap::moebius(a, -0.7);
  const SchurMap c = SchurMap::compose(b, m);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const cplx z = std::sqrt(u(rng)) * std::polar(1.0, 2 * pi * u(rng));
    const cplx inner = moebius_oracle(a, -0.7, z);
    cplx outer = std::polar(1.0, 0.4);
    for (cplx zk : {cplx{0.3}, -0.5 * I}) outer *= (inner - zk) / (1.0 - std::conj(zk) * inner);
    EXPECT_NEAR(std::abs(c.value(z) - outer), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(c.value(z) - b.value(m.value(z))), 0.0, 1e-15);
  }
}

TEST(Derivative, AgreesWithCentralDifferences) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double step = 1e-6;
  for (const auto& s : bundled_corpus()) {
    for (int k = 0; k < 100; ++k) {
      const cplx z = 0.95 * std::sqrt(u(rng)) * std::polar(1.0, 2 * pi * u(rng));
      const cplx fd = (s.map.value(z + step) - s.map.value(z - step)) / (2 * step);
      const cplx d = evaluate_derivative(s.map, z);
      EXPECT_LE(std::abs(d - fd), 1e-6 * (1.0 + std::abs(d))) << s.name;
    }
  }
}

TEST(InnerMaps, UnimodularOnTheCircle) {
  const std::vector<SchurMap> inner = {SchurMap::moebius(0.5), SchurMap::moebius(cplx{-0.3, 0.8}, 1.0),
                                       SchurMap::blaschke({0.3, -0.5 * I}),
                                       SchurMap::blaschke({0.9, 0.9, cplx{0.1, 0.2}}, 2.0)};
  for (const auto& phi : inner) {
    EXPECT_TRUE(phi.is_inner());
    for (int k = 0; k < 4096; ++k) {
      EXPECT_NEAR(std::abs(phi.value(std::polar(1.0, 2 * pi * k / 4096))), 1.0, 1e-12);
    }
  }
}

TEST(ClearToPolynomial, RootsInsideAreGenuinePreimages) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& s : bundled_corpus()) {
    for (int k = 0; k < 30; ++k) {
      const cplx w = 0.98 * std::sqrt(u(rng)) * std::polar(1.0, 2 * pi * u(rng));
      for (cplx z : poly::roots(clear_to_polynomial(s.map, w)))
        if (std::abs(z) < 1.0) EXPECT_LE(std::abs(s.map.value(z) - w), 1e-9) << s.name;
    }
  }
}

TEST(Corpus, EveryBundledSymbolIsASelfMap) {
  const auto c = bundled_corpus();
  EXPECT_EQ(c.size(), 9u);
  for (const auto& s : c) EXPECT_TRUE(validate_self_map(s.map).pass) << s.name;
}
