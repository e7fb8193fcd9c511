// Command-line entry point: verify | table | generate | check | determining.
//
// Exit codes: 0 all checks pass, 1 verification failure or refutation,
// 2 usage/config error, 3 inconclusive results.
#include "fpsym/report.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace fpsym;

Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(Integer(s));
    return Rational(Integer(s.substr(0, slash)), Integer(s.substr(slash + 1)));
  } catch (const std::exception&) {
    throw Error(Error::Kind::config, "expected a rational number p or p/q, got '" + s + "'");
  }
}

GridSpec parse_grid(const std::string& s) {
  std::vector<double> parts;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) parts.push_back(std::stod(tok));
  if (parts.size() != 6)
    throw Error(Error::Kind::config, "grid must be x0,x1,t0,t1,h,levels");
  GridSpec g;
  g.x0 = parts[0];
  g.x1 = parts[1];
  g.t0 = parts[2];
  g.t1 = parts[3];
  g.h = parts[4];
  g.levels = static_cast<int>(parts[5]);
  return g;
}

struct CliOptions {
  std::string a1, a2, grid;
  double tol = 1e-6;
  unsigned long long seed = 20240501ull;
  std::string format = "text";
  bool strict = false;
};

void apply_config_file(CliOptions& opt) {
  const char* path = std::getenv("FPSYM_CONFIG");
  if (!path || !*path) return;
  std::ifstream in(path);
  if (!in) throw Error(Error::Kind::config, std::string("cannot read config file ") + path);
  nlohmann::json j = nlohmann::json::parse(in);
  if (j.contains("a1")) opt.a1 = j["a1"].get<std::string>();
  if (j.contains("a2")) opt.a2 = j["a2"].get<std::string>();
  if (j.contains("grid")) opt.grid = j["grid"].get<std::string>();
  if (j.contains("tol")) opt.tol = j["tol"].get<double>();
  if (j.contains("seed")) opt.seed = j["seed"].get<unsigned long long>();
  if (j.contains("format")) opt.format = j["format"].get<std::string>();
  if (j.contains("strict")) opt.strict = j["strict"].get<bool>();
}

RunConfig to_config(const CliOptions& opt) {
  RunConfig cfg;
  if (!opt.a1.empty()) cfg.a1 = parse_rational(opt.a1);
  if (!opt.a2.empty()) cfg.a2 = parse_rational(opt.a2);
  if (!opt.grid.empty()) cfg.grid = parse_grid(opt.grid);
  cfg.tol_num = opt.tol;
  cfg.rng_seed = opt.seed;
  cfg.strict = opt.strict;
  if (opt.format == "text")
    cfg.format = RunConfig::Format::text;
  else if (opt.format == "structured")
    cfg.format = RunConfig::Format::structured;
  else
    throw Error(Error::Kind::config, "format must be text or structured");
  return cfg;
}

int emit(const Report& rep, const RunConfig& cfg) {
  if (cfg.format == RunConfig::Format::structured)
    std::cout << rep.to_json().dump(2) << "\n";
  else
    std::cout << rep.to_text();
  return rep.exit_code();
}

} // namespace

int main(int argc, char** argv) {
  using namespace fpsym;

  CLI::App app{"Lie symmetry engine and verification toolkit for a "
               "drift-diffusion equation family"};
  app.require_subcommand(1);

  CliOptions opt;
  try {
    apply_config_file(opt);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  app.add_option("--a1", opt.a1, "drift offset a1 (rational, e.g. 1 or 1/2)");
  app.add_option("--a2", opt.a2, "drift slope a2 (rational, nonzero)");
  app.add_option("--grid", opt.grid, "grid as x0,x1,t0,t1,h,levels");
  app.add_option("--tol", opt.tol, "numeric verification tolerance");
  app.add_option("--seed-rng", opt.seed, "seed for randomized sampling");
  app.add_option("--format", opt.format, "output format: text|structured");
  app.add_flag("--strict", opt.strict, "treat informational mismatches as failures");

  std::string target = "all";
  CLI::App* verify = app.add_subcommand("verify", "verify the symmetry generator catalog");
  verify->fallthrough();
  verify->add_option("--target", target, "point|potential|all");

  CLI::App* table = app.add_subcommand("table", "compute and diff the commutator table");
  table->fallthrough();

  std::string seed_expr;
  std::string ops_csv;
  CLI::App* generate = app.add_subcommand("generate", "chain solution operators from a seed");
  generate->fallthrough();
  generate->add_option("--seed", seed_expr, "seed expression")->required();
  generate->add_option("--ops", ops_csv, "comma-separated operator ids F1..F5")->required();

  std::string check_expr, check_claim;
  CLI::App* check = app.add_subcommand("check", "adjudicate a closed-form candidate");
  check->fallthrough();
  check->add_option("--expr", check_expr, "candidate expression");
  check->add_option("--claim", check_claim, "claim registry id");

  std::string system_id;
  CLI::App* determining =
      app.add_subcommand("determining", "derive determining equations and compare");
  determining->fallthrough();
  determining->add_option("--system", system_id, "fpe|auxiliary")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    RunConfig cfg = to_config(opt);
    if (verify->parsed()) return emit(cmd_verify(target, cfg), cfg);
    if (table->parsed()) return emit(cmd_table(cfg), cfg);
    if (generate->parsed()) {
      std::vector<std::string> ops;
      std::stringstream ss(ops_csv);
      std::string tok;
      while (std::getline(ss, tok, ',')) ops.push_back(tok);
      return emit(cmd_generate(seed_expr, ops, cfg), cfg);
    }
    if (check->parsed()) {
      if (check_expr.empty() == check_claim.empty())
        throw Error(Error::Kind::config, "check needs exactly one of --expr or --claim");
      Report rep = check_expr.empty() ? cmd_check_claim(check_claim, cfg)
                                      : cmd_check_expr(check_expr, cfg);
      return emit(rep, cfg);
    }
    if (determining->parsed()) return emit(cmd_determining(system_id, cfg), cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind) {
      case Error::Kind::parse:
      case Error::Kind::undeclared:
      case Error::Kind::config:
        return 2;
      default:
        return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
