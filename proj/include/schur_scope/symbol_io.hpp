#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "symbol.hpp"

namespace schur_scope {

namespace detail {

inline cplx complex_from_json(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError(std::string(what) + ": expected [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline double number_field(const nlohmann::json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ParseError(std::string(key) + ": expected a number");
  return j.at(key).get<double>();
}

inline std::pair<long, long> line_and_column(const std::string& text, std::size_t byte) {
  long line = 1, col = 1;
  for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace detail

/// Builds a symbol from its JSON description. No self-map validation here.
inline SchurMap symbol_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
    throw ParseError("symbol: object with a string \"type\" expected");
  const std::string type = j.at("type").get<std::string>();
  if (type == "polynomial") {
    if (!j.contains("coeffs") || !j.at("coeffs").is_array() || j.at("coeffs").empty())
      throw ParseError("polynomial: non-empty \"coeffs\" array expected");
    Coeffs c;
    for (const auto& e : j.at("coeffs")) c.push_back(detail::complex_from_json(e, "coeffs"));
    return SchurMap::polynomial(std::move(c));
  }
  if (type == "moebius") {
    if (!j.contains("a")) throw ParseError("moebius: \"a\" expected");
    const cplx a = detail::complex_from_json(j.at("a"), "a");
    if (!(std::abs(a) < 1.0)) throw LoadError("moebius: need |a| < 1");
    return SchurMap::moebius(a, detail::number_field(j, "rotation", 0.0));
  }
  if (type == "blaschke") {
    if (!j.contains("zeros") || !j.at("zeros").is_array() || j.at("zeros").empty())
      throw ParseError("blaschke: non-empty \"zeros\" array expected");
    std::vector<cplx> zs;
    for (const auto& e : j.at("zeros")) {
      zs.push_back(detail::complex_from_json(e, "zeros"));
      if (!(std::abs(zs.back()) < 1.0)) throw LoadError("blaschke: zeros must lie in the open disk");
    }
    return SchurMap::blaschke(std::move(zs), detail::number_field(j, "rotation", 0.0));
  }
  if (type == "compose") {
    if (!j.contains("outer") || !j.contains("inner"))
      throw ParseError("compose: \"outer\" and \"inner\" expected");
    return SchurMap::compose(symbol_from_json(j.at("outer")), symbol_from_json(j.at("inner")));
  }
  throw ParseError("unknown symbol type \"" + type + "\"");
}

inline nlohmann::json symbol_to_json(const SchurMap& phi) {
  auto pair = [](cplx z) { return nlohmann::json::array({z.real(), z.imag()}); };
  return std::visit(
      [&](const auto& s) -> nlohmann::json {
        using T = std::decay_t<decltype(s)>;
        nlohmann::json j;
        if constexpr (std::is_same_v<T, PolynomialSymbol>) {
          j["type"] = "polynomial";
          j["coeffs"] = nlohmann::json::array();
          for (cplx c : s.coeffs) j["coeffs"].push_back(pair(c));
        } else if constexpr (std::is_same_v<T, MoebiusSymbol>) {
          j["type"] = "moebius";
          j["a"] = pair(s.a);
          j["rotation"] = s.rotation;
        } else if constexpr (std::is_same_v<T, BlaschkeSymbol>) {
          j["type"] = "blaschke";
          j["zeros"] = nlohmann::json::array();
          for (cplx z : s.zeros) j["zeros"].push_back(pair(z));
          j["rotation"] = s.rotation;
        } else {
          j["type"] = "compose";
          j["outer"] = symbol_to_json(s.outer);
          j["inner"] = symbol_to_json(s.inner);
        }
        return j;
      },
      phi.node().kind);
}

/// Parses text; syntax errors carry line and column.
inline SchurMap parse_symbol(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = detail::line_and_column(text, e.byte);
    throw ParseError("malformed symbol JSON at line " + std::to_string(line) + ", column " +
                     std::to_string(col) + " (byte " + std::to_string(e.byte) + ")");
  }
  return symbol_from_json(j);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Parse and certify: a symbol failing the boundary validation is a LoadError.
inline SchurMap load_symbol(const std::string& path, double tol = kTolSelfMap) {
  SchurMap phi = parse_symbol(read_text_file(path));
  const auto v = validate_self_map(phi, 4096, tol);
  if (!v.pass)
    throw LoadError(path + ": not a self-map of the disk (max boundary modulus " +
                    std::to_string(v.max_boundary_modulus) + ")");
  return phi;
}

struct NamedSymbol {
  std::string name;
  SchurMap map;
};

/// The nine reference symbols shipped with the tool.
inline std::vector<NamedSymbol> bundled_corpus() {
  const cplx i{0.0, 1.0};
  const SchurMap b = SchurMap::blaschke({cplx{0.3}, -0.5 * i});
  const SchurMap m = SchurMap::moebius(cplx{0.5});
  return {
      {"identity", SchurMap::identity()},
      {"z2", SchurMap::polynomial({0.0, 0.0, 1.0})},
      {"z3", SchurMap::polynomial({0.0, 0.0, 0.0, 1.0})},
      {"half_z", SchurMap::polynomial({0.0, 0.5})},
      {"lens", SchurMap::polynomial({0.5, 0.5})},
      {"z_plus_z2_half", SchurMap::polynomial({0.0, 0.5, 0.5})},
      {"moebius_half", m},
      {"blaschke2", b},
      {"blaschke2_moebius", SchurMap::compose(b, m)},
  };
}

}  // namespace schur_scope
