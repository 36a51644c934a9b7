#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <schur_scope/cli.hpp>

namespace cli = schur_scope::cli;

namespace {

schur_scope::cplx parse_point(const std::string& s) {
  const auto comma = s.find(',');
  try {
    if (comma == std::string::npos) return {std::stod(s), 0.0};
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
  } catch (const std::exception&) {
    throw schur_scope::PreconditionError("--w expects re or re,im");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nevanlinna counting function and Carleson measure diagnostics for self-maps of the disk",
               "schur-scope"};
  app.require_subcommand(1, 1);

  cli::RunConfig cfg;
  std::vector<std::string> w_text;

  const std::vector<std::pair<std::string, cli::Command>> commands = {
      {"validate", cli::Command::validate},       {"nevanlinna", cli::Command::nevanlinna},
      {"carleson", cli::Command::carleson},       {"verify", cli::Command::verify},
      {"compactness", cli::Command::compactness}, {"plotdata", cli::Command::plotdata}};
  for (const auto& [name, cmd] : commands) {
    auto* sub = app.add_subcommand(name);
    sub->set_help_flag("--help", "Print this help message and exit");
    sub->add_option("--symbol", cfg.symbol_path, "symbol JSON file (verify: file or directory)")
        ->required();
    sub->add_option("--h", cfg.h_list, "window sizes / annulus widths");
    sub->add_option("--xi", cfg.xi_list, "window centres as angles in radians");
    sub->add_option("--w", w_text, "points re,im for N_phi");
    sub->add_option("--grid", cfg.grid, "angular grid size")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    sub->add_option("--tol", cfg.tol, "self-map tolerance")->capture_default_str();
    sub->add_option("--psi", cfg.psi, "Orlicz function power:p or exp:a")->capture_default_str();
    sub->add_flag("--fit", cfg.fit, "fit rho_phi(h) ~ c h^alpha");
    sub->add_option("--out", cfg.out_path, "output file")->required();
    sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->callback([&cfg, c = cmd]() { cfg.command = c; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    for (const auto& w : w_text) cfg.w_list.push_back(parse_point(w));
    cfg.normalize();
    const cli::Report rep = cli::run(cfg);
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) {
      std::cerr << "schur-scope: cannot write " << cfg.out_path << "\n";
      return 2;
    }
    out << cli::render(rep);
    out.close();
    std::cerr << cli::to_string(cfg.command) << ": " << rep.n_pass() << " pass, " << rep.n_fail()
              << " fail, " << rep.n_warn() << " warn\n";
    return cli::exit_code(rep);
  } catch (const schur_scope::Error& e) {
    std::cerr << "schur-scope: " << e.what() << "\n";
    return cli::exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "schur-scope: " << e.what() << "\n";
    return 3;
  }
}
