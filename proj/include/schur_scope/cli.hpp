#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "carleson.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "identities.hpp"
#include "nevanlinna.hpp"
#include "orlicz.hpp"
#include "symbol.hpp"
#include "symbol_io.hpp"

namespace schur_scope::cli {

inline constexpr const char* kToolName = "schur-scope";
inline constexpr const char* kToolVersion = "1.0.0";

enum class Command { validate, nevanlinna, carleson, verify, compactness, plotdata };

inline const char* to_string(Command c) {
  switch (c) {
    case Command::validate: return "validate";
    case Command::nevanlinna: return "nevanlinna";
    case Command::carleson: return "carleson";
    case Command::verify: return "verify";
    case Command::compactness: return "compactness";
    default: return "plotdata";
  }
}

struct RunConfig {
  Command command = Command::validate;
  std::string symbol_path;
  std::vector<double> h_list;   // sorted decreasing on normalize()
  std::vector<double> xi_list;  // window centres as angles in radians
  std::vector<cplx> w_list;
  int grid = 256;
  std::uint64_t seed = 0x5EED;
  double tol = kTolSelfMap;
  std::string psi = "power:2";
  bool fit = false;
  std::string out_path;
  std::string format = "json";

  void normalize() {
    if (!(tol > 0.0)) throw PreconditionError("--tol must be positive");
    if (grid < 16) throw PreconditionError("--grid must be at least 16");
    if (format != "json" && format != "csv") throw PreconditionError("--format is json or csv");
    for (double h : h_list)
      if (!(h > 0.0) || !std::isfinite(h)) throw PreconditionError("--h values must be positive");
    std::sort(h_list.begin(), h_list.end(), std::greater<>());
    h_list.erase(std::unique(h_list.begin(), h_list.end()), h_list.end());
  }

  GridSpec grid_spec() const {
    GridSpec g;
    g.n_angular = grid;
    g.n_radial = std::max(8, grid / 8);
    return g;
  }
  CenterRes center_res() const {
    CenterRes c;
    c.n_centers = grid;
    return c;
  }
};

/// "power:p" or "exp:a".
inline OrliczFunction parse_psi(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw PreconditionError("--psi expects family:parameter");
  const std::string fam = s.substr(0, colon);
  double v = 0.0;
  const char* b = s.data() + colon + 1;
  const char* e = s.data() + s.size();
  const auto r = std::from_chars(b, e, v);
  if (r.ec != std::errc{} || r.ptr != e) throw PreconditionError("--psi: bad parameter");
  if (fam == "power") return OrliczFunction::power(v);
  if (fam == "exp") return OrliczFunction::exp_power(v);
  throw PreconditionError("--psi family is power or exp");
}

// ---------------------------------------------------------------------------
// Records and reports.

struct Field {
  std::string key;
  std::variant<double, std::string, bool> value;
};

struct Record {
  std::string symbol;
  std::string check;
  std::string status = "pass";  // pass | fail | vacuous | skipped | error
  bool warning = false;
  std::string note;
  std::vector<Field> fields;

  Record& num(std::string k, double v) {
    fields.push_back({std::move(k), v});
    return *this;
  }
  Record& text(std::string k, std::string v) {
    fields.push_back({std::move(k), std::move(v)});
    return *this;
  }
  Record& flag(std::string k, bool v) {
    fields.push_back({std::move(k), v});
    return *this;
  }
};

struct Report {
  RunConfig config;
  std::vector<Record> records;
  /// Filled by plotdata; written as the fixed-column CSV.
  std::vector<EquivalenceRow> plot_rows;

  long n_pass() const {
    return std::count_if(records.begin(), records.end(),
                         [](const Record& r) { return r.status == "pass" || r.status == "vacuous"; });
  }
  long n_fail() const {
    return std::count_if(records.begin(), records.end(),
                         [](const Record& r) { return r.status == "fail"; });
  }
  long n_warn() const {
    return std::count_if(records.begin(), records.end(), [](const Record& r) {
      return r.warning || r.status == "skipped" || r.status == "error";
    });
  }
};

/// Warnings never turn success into failure.
inline int exit_code(const Report& r) { return r.n_fail() > 0 ? 1 : 0; }

inline Record from_inequality(const std::string& symbol, const InequalityRecord& ir) {
  Record r;
  r.symbol = symbol;
  r.check = ir.name;
  r.status = ir.pass ? "pass" : "fail";
  r.warning = ir.warning;
  r.num("lhs", ir.lhs).num("rhs", ir.rhs).num("slack", ir.slack);
  for (const auto& [k, v] : ir.params) r.num(k, v);
  return r;
}

// ---------------------------------------------------------------------------
// Output.

/// 17 significant digits, '.' decimal point, independent of the locale.
inline std::string format_number(double x) {
  if (std::isnan(x)) return "null";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

/// JSON value for a double: null when not finite, a string beyond 2^53.
inline nlohmann::ordered_json json_number(double x) {
  if (!std::isfinite(x)) return nullptr;
  if (std::abs(x) > 9007199254740992.0) return format_number(x);
  return x;
}

inline nlohmann::ordered_json config_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["command"] = to_string(c.command);
  j["symbol"] = c.symbol_path;
  j["h"] = nlohmann::ordered_json::array();
  for (double h : c.h_list) j["h"].push_back(json_number(h));
  j["xi"] = nlohmann::ordered_json::array();
  for (double x : c.xi_list) j["xi"].push_back(json_number(x));
  j["w"] = nlohmann::ordered_json::array();
  for (cplx w : c.w_list)
    j["w"].push_back(nlohmann::ordered_json::array({json_number(w.real()), json_number(w.imag())}));
  j["grid"] = c.grid;
  if (c.seed > (std::uint64_t{1} << 53))
    j["seed"] = std::to_string(c.seed);
  else
    j["seed"] = c.seed;
  j["tol"] = json_number(c.tol);
  j["psi"] = c.psi;
  j["fit"] = c.fit;
  j["format"] = c.format;
  return j;
}

inline std::string to_json(const Report& rep) {
  nlohmann::ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["config"] = config_json(rep.config);
  j["records"] = nlohmann::ordered_json::array();
  for (const auto& r : rep.records) {
    nlohmann::ordered_json o;
    o["symbol"] = r.symbol;
    o["check"] = r.check;
    o["status"] = r.status;
    o["warning"] = r.warning;
    if (!r.note.empty()) o["note"] = r.note;
    nlohmann::ordered_json vals = nlohmann::ordered_json::object();
    for (const auto& f : r.fields) {
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>)
              vals[f.key] = json_number(v);
            else
              vals[f.key] = v;
          },
          f.value);
    }
    o["values"] = vals;
    j["records"].push_back(o);
  }
  j["summary"] = {{"n_pass", rep.n_pass()}, {"n_fail", rep.n_fail()}, {"n_warn", rep.n_warn()}};
  return j.dump(2) + "\n";
}

namespace detail {
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string o = "\"";
  for (char c : s) {
    if (c == '"') o += '"';
    o += c;
  }
  return o + "\"";
}
}  // namespace detail

/// The plot table: one row per h, h descending.
inline std::string plot_csv(std::vector<EquivalenceRow> rows) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const EquivalenceRow& a, const EquivalenceRow& b) { return a.h > b.h; });
  std::string out = "h,rho,nu,ratio_up,ratio_down\n";
  for (const auto& r : rows) {
    out += format_number(r.h) + "," + format_number(r.rho) + "," + format_number(r.nu) + "," +
           (std::isfinite(r.ratio_up) ? format_number(r.ratio_up) : "null") + "," +
           (std::isfinite(r.ratio_down) ? format_number(r.ratio_down) : "null") + "\n";
  }
  return out;
}

/// Long-format CSV for every other command: one line per record field.
inline std::string to_csv(const Report& rep) {
  if (rep.config.command == Command::plotdata) return plot_csv(rep.plot_rows);
  std::string out = "symbol,check,status,warning,key,value\n";
  for (const auto& r : rep.records) {
    const std::string head = detail::csv_field(r.symbol) + "," + detail::csv_field(r.check) + "," +
                             r.status + "," + (r.warning ? "true" : "false") + ",";
    if (r.fields.empty()) out += head + ",\n";
    for (const auto& f : r.fields) {
      std::string v = std::visit(
          [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, double>)
              return std::isfinite(x) ? format_number(x) : "null";
            else if constexpr (std::is_same_v<T, bool>)
              return x ? "true" : "false";
            else
              return detail::csv_field(x);
          },
          f.value);
      out += head + detail::csv_field(f.key) + "," + v + "\n";
    }
  }
  return out;
}

inline std::string render(const Report& rep) {
  return rep.config.format == "csv" ? to_csv(rep) : to_json(rep);
}

// ---------------------------------------------------------------------------
// Commands.

namespace detail {

inline double gap_of(const SchurMap& phi) { return 1.0 - std::abs(phi.at_zero()); }

/// Dyadic sizes 2^{-k} strictly below `cap`, `count` of them.
inline std::vector<double> dyadic_below(double cap, int count) {
  std::vector<double> h;
  int k = 1;
  while (std::ldexp(1.0, -k) >= cap) ++k;
  for (int i = 0; i < count; ++i) h.push_back(std::ldexp(1.0, -(k + i)));
  return h;
}

inline std::string symbol_label(const RunConfig& c) {
  return std::filesystem::path(c.symbol_path).stem().string();
}

}  // namespace detail

inline Report cmd_validate(const RunConfig& cfg) {
  Report rep{cfg, {}, {}};
  const SchurMap phi = parse_symbol(read_text_file(cfg.symbol_path));
  const auto v = validate_self_map(phi, std::max(64, 16 * cfg.grid), cfg.tol);
  Record r;
  r.symbol = detail::symbol_label(cfg);
  r.check = "validate_self_map";
  r.status = v.pass ? "pass" : "fail";
  r.text("form", phi.describe())
      .num("max_boundary_modulus", v.max_boundary_modulus)
      .num("tol", cfg.tol)
      .num("degree", phi.degree());
  rep.records.push_back(r);
  return rep;
}

inline Report cmd_nevanlinna(const RunConfig& cfg) {
  Report rep{cfg, {}, {}};
  const SchurMap phi = load_symbol(cfg.symbol_path, cfg.tol);
  const std::string name = detail::symbol_label(cfg);
  for (cplx w : cfg.w_list) {
    Record r;
    r.symbol = name;
    r.check = "counting_function";
    const auto pre = preimages(phi, w);
    r.num("w_re", w.real()).num("w_im", w.imag()).num("value", counting_function(phi, w));
    r.num("preimages", static_cast<double>(pre.total_multiplicity()))
        .num("excluded_near_boundary", static_cast<double>(pre.excluded_near_boundary));
    rep.records.push_back(r);
  }
  std::vector<double> hs = cfg.h_list;
  if (hs.empty() && cfg.w_list.empty()) hs = {0.5, 0.25, 0.125};
  const GridSpec g = cfg.grid_spec();
  for (double h : hs) {
    if (cfg.xi_list.empty()) {
      const auto s = nu(phi, h, g);
      Record r;
      r.symbol = name;
      r.check = "nu";
      r.num("t", h).num("value", s.value).num("argmax_re", s.argmax_w.real()).num("argmax_im",
                                                                                 s.argmax_w.imag());
      rep.records.push_back(r);
    }
    for (double a : cfg.xi_list) {
      const auto s = nu_window(phi, unit(a), h, g);
      Record r;
      r.symbol = name;
      r.check = "nu_window";
      r.num("xi_arg", a).num("h", h).num("value", s.value).num("argmax_re", s.argmax_w.real())
          .num("argmax_im", s.argmax_w.imag());
      rep.records.push_back(r);
    }
  }
  return rep;
}

inline Report cmd_carleson(const RunConfig& cfg) {
  Report rep{cfg, {}, {}};
  const SchurMap phi = load_symbol(cfg.symbol_path, cfg.tol);
  const std::string name = detail::symbol_label(cfg);
  const CenterRes cres = cfg.center_res();
  std::vector<double> hs = cfg.h_list;
  if (hs.empty()) hs = {0.5, 0.25, 0.125, 0.0625};
  for (double h : hs) {
    if (cfg.xi_list.empty()) {
      const auto s = rho(phi, h, cres);
      Record r;
      r.symbol = name;
      r.check = "rho";
      r.warning = s.resolution_warning;
      r.num("h", h).num("value", s.value).num("argmax_xi_arg", std::arg(s.argmax_xi));
      rep.records.push_back(r);
    }
    for (double a : cfg.xi_list) {
      const auto arcs = pullback_window_mass(phi, CarlesonWindow(unit(a), h), cres.boundary);
      Record r;
      r.symbol = name;
      r.check = "window_mass";
      r.warning = arcs.resolution_warning;
      r.num("xi_arg", a).num("h", h).num("value", arcs.mass)
          .num("arcs", static_cast<double>(arcs.arcs.size()));
      rep.records.push_back(r);
    }
  }
  if (cfg.fit) {
    Record r;
    r.symbol = name;
    r.check = "carleson_exponent_fit";
    std::vector<double> fh = cfg.h_list.size() >= 6 ? cfg.h_list
                                                     : detail::dyadic_below(detail::gap_of(phi), 8);
    try {
      const auto f = carleson_exponent_fit(phi, fh, cres);
      r.num("alpha", f.alpha).num("c", f.c).num("residual", f.residual);
    } catch (const FitError& e) {
      r.status = "error";
      r.note = e.what();
    }
    r.num("h_max", fh.front()).num("h_min", fh.back()).num("points", static_cast<double>(fh.size()));
    rep.records.push_back(r);
  }
  return rep;
}

/// Full inequality suite for one certified symbol.
inline void verify_symbol(const std::string& name, const SchurMap& phi, const RunConfig& cfg,
                          std::vector<Record>& out) {
  const double gap = detail::gap_of(phi);
  const GridSpec g = cfg.grid_spec();
  const CenterRes cres = cfg.center_res();
  const BoundaryRes bres = cres.boundary;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  for (double h : {gap / 8.0, gap / 32.0})
    for (int k = 0; k < 8; ++k)
      out.push_back(from_inequality(name, upper_bound_check(phi, (1.0 - h) * unit(kTwoPi * k / 8), bres)));
  for (double h : {gap / 8.0, gap / 32.0})
    for (int k = 0; k < 4; ++k)
      out.push_back(from_inequality(name, window_sup_upper_check(phi, unit(kTwoPi * k / 4), h, g, bres)));
  for (double h : {gap / 32.0, gap / 128.0})
    for (int k = 0; k < 4; ++k)
      out.push_back(from_inequality(name, lower_bound_check(phi, unit(kTwoPi * k / 4), h, g, bres)));
  for (int k = 0; k < 2; ++k)
    out.push_back(from_inequality(name, average_bound_check(phi, unit(std::numbers::pi * k), gap / 16.0,
                                                            QuadSpec{}, bres)));

  for (const auto& row : equivalence_sweep(phi, {gap / 32.0, gap / 64.0, gap / 128.0}, g, cres)) {
    Record r;
    r.symbol = name;
    r.check = "equivalence";
    r.status = row.pass_up && row.pass_down ? "pass" : "fail";
    r.warning = row.warning;
    r.num("h", row.h).num("rho", row.rho).num("nu", row.nu).num("rho_h_over_64", row.rho_small)
        .num("rho_24h", row.rho_large).num("ratio_up", row.ratio_up).num("ratio_down", row.ratio_down);
    out.push_back(r);
  }

  // Preparatory lemma at random points with 1 - |phi(z)| <= 1/4.
  int found = 0;
  for (int attempt = 0; attempt < 4000 && found < 8; ++attempt) {
    const double rad = 0.5 + 0.5 * std::sqrt(unif(rng)) * (1.0 - 1e-9);
    const cplx z = rad * unit(kTwoPi * unif(rng));
    const double h = 1.0 - std::abs(phi.value(z));
    if (!(h > 0.0 && h <= 0.25)) continue;
    out.push_back(from_inequality(name, preparatory_lemma_check(phi, z, bres)));
    ++found;
  }
  if (found == 0) {
    Record r;
    r.symbol = name;
    r.check = "preparatory_lemma";
    r.status = "vacuous";
    r.note = "no sampled point has 1 - |phi(z)| <= 1/4";
    out.push_back(r);
  }

  {
    const auto c = containment_selftest(0.05, 0.02, unit(0.03), cplx{1.0}, 20000, cfg.seed);
    Record r;
    r.symbol = name;
    r.check = "containment_selftest";
    r.status = c.all() ? "pass" : "fail";
    r.num("t", 0.05).num("s", 0.02).num("zeta_arg", 0.03)
        .num("counterexamples", static_cast<double>(c.counterexamples));
    out.push_back(r);
  }
  {
    double worst = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 200; ++k) {
      const double h = 0.5 * unif(rng) + 1e-3;
      const cplx xi = unit(kTwoPi * unif(rng));
      const cplx z = std::sqrt(unif(rng)) * unit(kTwoPi * unif(rng));
      const auto kb = kernel_lower_bound(xi, h, z);
      worst = std::min(worst, kb.lhs - kb.rhs);
    }
    Record r;
    r.symbol = name;
    r.check = "kernel_lower_bound";
    r.status = worst >= -1e-12 ? "pass" : "fail";
    r.num("min_slack", worst).num("samples", 200);
    out.push_back(r);
  }
  {
    double worst = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 8; ++k)
      worst = std::min(worst, base_point_image(phi, (1.0 - gap / 8.0) * unit(kTwoPi * k / 8)));
    Record r;
    r.symbol = name;
    r.check = "base_point_lemma";
    r.status = worst > 1.0 / 3.0 ? "pass" : "fail";
    r.num("min_modulus", worst).num("h", gap / 8.0);
    out.push_back(r);
  }
  {
    const cplx p = phi.at_zero();
    const cplx w0 = std::abs(p) > 0.0 ? -0.5 * p / std::abs(p) : cplx{0.5};
    const auto s = subaveraging_check(phi, w0, 0.2, QuadSpec{});
    Record r;
    r.symbol = name;
    r.check = "subaveraging";
    r.status = s.pass ? "pass" : "fail";
    r.num("lhs", s.lhs).num("rhs", s.rhs).num("w0_re", w0.real()).num("w0_im", w0.imag())
        .num("radius", 0.2);
    out.push_back(r);
  }
  {
    Record r;
    r.symbol = name;
    r.check = "homogeneity";
    const double t = gap / 128.0;
    r.num("t", t);
    try {
      const auto hc = homogeneity_check(phi, t, {0.5, 0.25, 0.125}, g);
      r.status = hc.k_hat <= 16.0 ? "pass" : "fail";
      r.num("k_hat", hc.k_hat).num("nu_t", hc.nu_t);
    } catch (const ZeroMaximalError&) {
      r.status = "vacuous";
      r.note = "nu_phi(t) = 0";
    }
    out.push_back(r);
  }
}

inline Report cmd_verify(const RunConfig& cfg) {
  Report rep{cfg, {}, {}};
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  if (fs::is_directory(cfg.symbol_path)) {
    for (const auto& e : fs::directory_iterator(cfg.symbol_path))
      if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(cfg.symbol_path);
  }
  for (const auto& f : files) {
    const std::string name = f.stem().string();
    SchurMap phi = SchurMap::identity();
    try {
      phi = load_symbol(f.string(), cfg.tol);
    } catch (const Error& e) {
      if (!dynamic_cast<const LoadError*>(&e) && !dynamic_cast<const ParseError*>(&e)) throw;
      Record r;
      r.symbol = name;
      r.check = "load";
      r.status = "skipped";
      r.note = e.what();
      rep.records.push_back(r);
      continue;
    }
    verify_symbol(name, phi, cfg, rep.records);
  }
  return rep;
}

inline Report cmd_compactness(const RunConfig& cfg) {
  Report rep{cfg, {}, {}};
  const SchurMap phi = load_symbol(cfg.symbol_path, cfg.tol);
  const std::string name = detail::symbol_label(cfg);
  const OrliczFunction psi = parse_psi(cfg.psi);
  const std::vector<double> hs =
      cfg.h_list.empty() ? detail::dyadic_below(detail::gap_of(phi) / 16.0, 8) : cfg.h_list;
  const auto v = compactness_diagnostic(phi, psi, hs, cfg.grid_spec());
  for (const auto& [h, ratio] : v.ratio_trace) {
    Record r;
    r.symbol = name;
    r.check = "compactness_ratio";
    r.num("h", h).num("ratio", ratio);
    rep.records.push_back(r);
  }
  Record r;
  r.symbol = name;
  r.check = "compactness_diagnostic";
  r.text("psi", cfg.psi).text("verdict", to_string(v.verdict)).num("trend_stat", v.trend_stat);
  rep.records.push_back(r);
  const auto sweep = angular_ratio_sweep(phi, cplx{1.0}, psi, 16);
  Record a;
  a.symbol = name;
  a.check = "angular_ratio_sweep";
  a.num("r_first", sweep.trace.front().first).num("ratio_first", sweep.trace.front().second)
      .num("r_last", sweep.trace.back().first).num("ratio_last", sweep.trace.back().second)
      .flag("grows", sweep.grows);
  rep.records.push_back(a);
  return rep;
}

inline Report cmd_plotdata(const RunConfig& cfg) {
  Report rep{cfg, {}, {}};
  const SchurMap phi = load_symbol(cfg.symbol_path, cfg.tol);
  const std::string name = detail::symbol_label(cfg);
  const std::vector<double> hs =
      cfg.h_list.empty() ? detail::dyadic_below(detail::gap_of(phi) / 16.0, 6) : cfg.h_list;
  rep.plot_rows = equivalence_sweep(phi, hs, cfg.grid_spec(), cfg.center_res());
  for (const auto& row : rep.plot_rows) {
    Record r;
    r.symbol = name;
    r.check = "equivalence";
    r.status = row.pass_up && row.pass_down ? "pass" : "fail";
    r.warning = row.warning;
    r.num("h", row.h).num("rho", row.rho).num("nu", row.nu).num("ratio_up", row.ratio_up)
        .num("ratio_down", row.ratio_down);
    rep.records.push_back(r);
  }
  return rep;
}

inline Report run(const RunConfig& cfg) {
  switch (cfg.command) {
    case Command::validate: return cmd_validate(cfg);
    case Command::nevanlinna: return cmd_nevanlinna(cfg);
    case Command::carleson: return cmd_carleson(cfg);
    case Command::verify: return cmd_verify(cfg);
    case Command::compactness: return cmd_compactness(cfg);
    default: return cmd_plotdata(cfg);
  }
}

/// Exit status for an exception escaping a command.
inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const SolverError*>(&e) || dynamic_cast<const DegenerateError*>(&e)) return 3;
  return 2;
}

}  // namespace schur_scope::cli
