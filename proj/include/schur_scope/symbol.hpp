#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "polynomial.hpp"

namespace schur_scope {

/// Default slack on |phi| <= 1 over the boundary validation grid.
inline constexpr double kTolSelfMap = 1e-10;
/// Largest admissible degree of the cleared preimage polynomial.
inline constexpr int kMaxDegree = 64;

inline cplx unit(double theta) { return std::polar(1.0, theta); }

namespace detail {
struct Node;
}

/*!
  Analytic self-map of the unit disk from the rational class: polynomials,
  disk automorphisms, finite Blaschke products and finite compositions of
  these. Every member is holomorphic on a neighbourhood of the closed disk,
  so boundary values are plain evaluations and the preimages of a point are
  the roots of one polynomial.

  Immutable; copies share the same underlying node.
*/
class SchurMap {
 public:
  /// phi(z) = sum c_k z^k.
  static SchurMap polynomial(Coeffs coeffs);
  /// phi(z) = e^{i rotation} (a - z) / (1 - conj(a) z).
  static SchurMap moebius(cplx a, double rotation = 0.0);
  /// phi(z) = e^{i rotation} prod (z - a_k) / (1 - conj(a_k) z).
  static SchurMap blaschke(std::vector<cplx> zeros, double rotation = 0.0);
  /// outer o inner.
  static SchurMap compose(const SchurMap& outer, const SchurMap& inner);
  static SchurMap identity() { return polynomial({cplx{0.0}, cplx{1.0}}); }
  /// e^{i alpha} phi.
  static SchurMap rotated(const SchurMap& phi, double alpha) {
    return compose(polynomial({cplx{}, unit(alpha)}), phi);
  }

  /// Evaluation without the domain check (used on neighbourhoods of the circle).
  cplx value(cplx z) const;
  cplx derivative(cplx z) const;
  std::pair<cplx, cplx> value_and_derivative(cplx z) const;

  cplx at_zero() const;
  int degree() const;
  /// Numerator and denominator of phi as a reduced-free rational function.
  const Coeffs& numerator() const;
  const Coeffs& denominator() const;
  /// Sampled upper bound of |phi'| on the unit circle (with a safety factor).
  double boundary_lipschitz() const;
  /// True for Moebius and Blaschke variants (unimodular boundary values).
  bool is_inner() const;
  /// Short human-readable form, e.g. "compose(blaschke[2], moebius)".
  std::string describe() const;

  const detail::Node& node() const { return *node_; }

 private:
  explicit SchurMap(std::shared_ptr<const detail::Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const detail::Node> node_;
};

struct PolynomialSymbol {
  Coeffs coeffs;
};
struct MoebiusSymbol {
  cplx a;
  double rotation = 0.0;
};
struct BlaschkeSymbol {
  std::vector<cplx> zeros;
  double rotation = 0.0;
};
struct CompositionSymbol {
  SchurMap outer;
  SchurMap inner;
};

namespace detail {

struct Node {
  std::variant<PolynomialSymbol, MoebiusSymbol, BlaschkeSymbol, CompositionSymbol> kind;
  int degree = 0;
  cplx at_zero{};
  Coeffs num;
  Coeffs den;
  double lipschitz = 0.0;
};

inline cplx eval_node(const Node& n, cplx z) {
  return std::visit(
      [z](const auto& s) -> cplx {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PolynomialSymbol>) {
          return poly::eval(s.coeffs, z);
        } else if constexpr (std::is_same_v<T, MoebiusSymbol>) {
          return unit(s.rotation) * (s.a - z) / (1.0 - std::conj(s.a) * z);
        } else if constexpr (std::is_same_v<T, BlaschkeSymbol>) {
          cplx acc = unit(s.rotation);
          for (const auto& a : s.zeros) acc *= (z - a) / (1.0 - std::conj(a) * z);
          return acc;
        } else {
          return s.outer.value(s.inner.value(z));
        }
      },
      n.kind);
}

inline std::pair<cplx, cplx> eval_node_d(const Node& n, cplx z) {
  return std::visit(
      [z](const auto& s) -> std::pair<cplx, cplx> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PolynomialSymbol>) {
          return poly::eval_with_derivative(s.coeffs, z);
        } else if constexpr (std::is_same_v<T, MoebiusSymbol>) {
          const cplx r = unit(s.rotation);
          const cplx d = 1.0 - std::conj(s.a) * z;
          return {r * (s.a - z) / d, -r * (1.0 - std::norm(s.a)) / (d * d)};
        } else if constexpr (std::is_same_v<T, BlaschkeSymbol>) {
          // Product rule through prefix/suffix products, valid at the zeros too.
          const std::size_t m = s.zeros.size();
          std::vector<cplx> f(m), df(m);
          for (std::size_t k = 0; k < m; ++k) {
            const cplx a = s.zeros[k];
            const cplx d = 1.0 - std::conj(a) * z;
            f[k] = (z - a) / d;
            df[k] = (1.0 - std::norm(a)) / (d * d);
          }
          std::vector<cplx> suffix(m + 1, cplx{1.0});
          for (std::size_t k = m; k-- > 0;) suffix[k] = suffix[k + 1] * f[k];
          cplx prefix{1.0}, deriv{};
          for (std::size_t k = 0; k < m; ++k) {
            deriv += prefix * df[k] * suffix[k + 1];
            prefix *= f[k];
          }
          const cplx r = unit(s.rotation);
          return {r * prefix, r * deriv};
        } else {
          const auto [gi, dgi] = s.inner.value_and_derivative(z);
          const auto [fo, dfo] = s.outer.value_and_derivative(gi);
          return {fo, dfo * dgi};
        }
      },
      n.kind);
}

inline std::shared_ptr<const Node> finish(Node n) {
  if (n.degree > kMaxDegree)
    throw LoadError("symbol degree " + std::to_string(n.degree) + " exceeds the cap of " +
                    std::to_string(kMaxDegree));
  n.at_zero = eval_node(n, cplx{});
  constexpr int kSamples = 8192;
  double lip = 0.0;
  for (int k = 0; k < kSamples; ++k) {
    const double t = 2.0 * std::numbers::pi * k / kSamples;
    lip = std::max(lip, std::abs(eval_node_d(n, unit(t)).second));
  }
  n.lipschitz = 1.05 * lip + 1e-12;
  return std::make_shared<const Node>(std::move(n));
}

}  // namespace detail

inline SchurMap SchurMap::polynomial(Coeffs coeffs) {
  poly::trim(coeffs);
  if (coeffs.empty()) coeffs.push_back(cplx{});
  detail::Node n;
  n.degree = std::max(0, poly::degree(coeffs));
  n.num = coeffs;
  n.den = {cplx{1.0}};
  n.kind = PolynomialSymbol{std::move(coeffs)};
  return SchurMap(detail::finish(std::move(n)));
}

inline SchurMap SchurMap::moebius(cplx a, double rotation) {
  if (!(std::abs(a) < 1.0)) throw DomainError("moebius parameter must satisfy |a| < 1");
  detail::Node n;
  n.degree = 1;
  const cplx r = unit(rotation);
  n.num = {r * a, -r};
  n.den = {cplx{1.0}, -std::conj(a)};
  n.kind = MoebiusSymbol{a, rotation};
  return SchurMap(detail::finish(std::move(n)));
}

inline SchurMap SchurMap::blaschke(std::vector<cplx> zeros, double rotation) {
  for (const auto& a : zeros)
    if (!(std::abs(a) < 1.0)) throw DomainError("blaschke zeros must lie in the open disk");
  detail::Node n;
  n.degree = static_cast<int>(zeros.size());
  Coeffs num{unit(rotation)}, den{cplx{1.0}};
  for (const auto& a : zeros) {
    const Coeffs f{-a, cplx{1.0}};
    const Coeffs g{cplx{1.0}, -std::conj(a)};
    num = poly::multiply(num, f);
    den = poly::multiply(den, g);
  }
  n.num = std::move(num);
  n.den = std::move(den);
  n.kind = BlaschkeSymbol{std::move(zeros), rotation};
  return SchurMap(detail::finish(std::move(n)));
}

inline SchurMap SchurMap::compose(const SchurMap& outer, const SchurMap& inner) {
  const long long deg = static_cast<long long>(outer.degree()) * std::max(1, inner.degree());
  if (deg > kMaxDegree)
    throw LoadError("composition degree " + std::to_string(deg) + " exceeds the cap of " +
                    std::to_string(kMaxDegree));
  detail::Node n;
  n.degree = outer.degree() * inner.degree();
  // outer = N/D of degree d, inner = p/q:
  //   outer(p/q) = sum N_k p^k q^{d-k} / sum D_k p^k q^{d-k}.
  const int d = outer.degree();
  const Coeffs& p = inner.numerator();
  const Coeffs& q = inner.denominator();
  Coeffs num, den;
  for (int k = 0; k <= d; ++k) {
    const Coeffs term = poly::multiply(poly::power(p, k), poly::power(q, d - k));
    if (k < static_cast<int>(outer.numerator().size()))
      num = poly::add(num, poly::scale(term, outer.numerator()[k]));
    if (k < static_cast<int>(outer.denominator().size()))
      den = poly::add(den, poly::scale(term, outer.denominator()[k]));
  }
  n.num = std::move(num);
  n.den = std::move(den);
  n.kind = CompositionSymbol{outer, inner};
  return SchurMap(detail::finish(std::move(n)));
}

inline cplx SchurMap::value(cplx z) const { return detail::eval_node(*node_, z); }
inline cplx SchurMap::derivative(cplx z) const { return detail::eval_node_d(*node_, z).second; }
inline std::pair<cplx, cplx> SchurMap::value_and_derivative(cplx z) const {
  return detail::eval_node_d(*node_, z);
}
inline cplx SchurMap::at_zero() const { return node_->at_zero; }
inline int SchurMap::degree() const { return node_->degree; }
inline const Coeffs& SchurMap::numerator() const { return node_->num; }
inline const Coeffs& SchurMap::denominator() const { return node_->den; }
inline double SchurMap::boundary_lipschitz() const { return node_->lipschitz; }
inline bool SchurMap::is_inner() const {
  return std::holds_alternative<MoebiusSymbol>(node_->kind) ||
         std::holds_alternative<BlaschkeSymbol>(node_->kind);
}

inline std::string SchurMap::describe() const {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PolynomialSymbol>)
          return "polynomial[" + std::to_string(s.coeffs.size() - 1) + "]";
        else if constexpr (std::is_same_v<T, MoebiusSymbol>)
          return "moebius";
        else if constexpr (std::is_same_v<T, BlaschkeSymbol>)
          return "blaschke[" + std::to_string(s.zeros.size()) + "]";
        else
          return "compose(" + s.outer.describe() + ", " + s.inner.describe() + ")";
      },
      node_->kind);
}

// ---------------------------------------------------------------------------
// Free-function surface.

inline void check_closed_disk(cplx z, double tol = kTolSelfMap) {
  if (!(std::abs(z) <= 1.0 + tol))
    throw DomainError("point outside the closed unit disk: |z| = " + std::to_string(std::abs(z)));
}

inline cplx evaluate(const SchurMap& phi, cplx z) {
  check_closed_disk(z);
  return phi.value(z);
}

inline cplx evaluate_derivative(const SchurMap& phi, cplx z) {
  check_closed_disk(z);
  return phi.derivative(z);
}

/// phi*(e^{i theta}); exact because the class is continuous up to the circle.
inline cplx boundary_value(const SchurMap& phi, double theta) {
  return phi.value(unit(std::remainder(theta, 2.0 * std::numbers::pi)));
}

/// Polynomial whose roots in the closed disk are exactly the solutions of phi(z) = w:
/// numerator(z) - w denominator(z), with negligible leading terms dropped.
inline Coeffs clear_to_polynomial(const SchurMap& phi, cplx w) {
  if (!(std::abs(w) < 1.0)) throw DomainError("target must lie in the open disk");
  Coeffs c = poly::add(phi.numerator(), poly::scale(phi.denominator(), -w));
  poly::trim(c, 1e-13);
  if (c.empty()) throw DegenerateError("phi is the constant map equal to the target");
  return c;
}

struct ValidationReport {
  double max_boundary_modulus = 0.0;
  bool pass = false;
};

inline ValidationReport validate_self_map(const SchurMap& phi, int n_samples = 4096,
                                          double tol = kTolSelfMap) {
  if (n_samples < 64) throw PreconditionError("validation grid needs at least 64 samples");
  ValidationReport r;
  for (int k = 0; k < n_samples; ++k) {
    const double t = 2.0 * std::numbers::pi * k / n_samples;
    r.max_boundary_modulus = std::max(r.max_boundary_modulus, std::abs(phi.value(unit(t))));
  }
  r.pass = r.max_boundary_modulus <= 1.0 + tol;
  return r;
}

}  // namespace schur_scope
