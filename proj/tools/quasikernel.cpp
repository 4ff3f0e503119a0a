#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "quasikernel/checks.hpp"

using namespace quasikernel;
using checks::Check;
using checks::Config;
using checks::Outcome;
using checks::Report;
using checks::Status;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error(errc::invalid_argument, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs body on the elaborated file; read and elaboration failures become a
// single failed check.
Report with_env(const std::string& file, const std::function<Report(const surface::ElabEnv&)>& body) {
  surface::ElabEnv env;
  try {
    env = surface::elaborate(read_file(file));
  } catch (const error& e) {
    return {Check{"elaborate", Status::fail, e.what()}};
  }
  return body(env);
}

Report cmd_elaborate(const std::string& file) {
  std::vector<surface::Decl> decls;
  try {
    decls = surface::parse(read_file(file));
  } catch (const error& e) {
    return {Check{"elaborate", Status::fail, e.what()}};
  }
  return with_env(file, [&](const surface::ElabEnv& env) {
    Report out;
    out.push_back(Check{"elaborate", Status::pass,
                        std::to_string(env.order.size()) + " types, " + std::to_string(env.definitions.size()) +
                            " definitions"});
    out.push_back(checks::run("declarations.round_trip", [&](Outcome& fail) {
      std::string text = surface::pretty(decls);
      if (!(surface::parse(text) == decls)) fail = "pretty-printed declarations parse differently:\n" + text;
      return text.empty() ? std::string("no declarations") : text.substr(0, text.size() - 1);
    }));
    for (const auto& name : env.order) {
      const auto& info = env.type(name);
      std::string nf = info.normal_form();
      std::string kind = info.is_free() ? "free type" : "cotype";
      std::string head = name;
      for (const auto& v : info.variables) head += " " + v;
      out.push_back(Check{"type." + name + ".normal_form", Status::pass, kind + " " + head + ": " + nf});
      out.push_back(checks::run("type." + name + ".round_trip", [&](Outcome& fail) {
        SigFunctor back = parse_functor(nf);
        if (back.show() != nf) fail = "reprinted as " + back.show();
        else if (info.is_free() ? !(to_poly_nf(back) == to_poly_nf(info.functor))
                                : !(to_extpoly_nf(back) == to_extpoly_nf(info.functor)))
          fail = "reparsed normal form differs: " + back.show();
        return nf + " reparses to the same normal form";
      }));
    }
    return out;
  });
}

Report cmd_eval(const std::string& file, const std::string& expr, const Config& cfg) {
  return with_env(file, [&](const surface::ElabEnv& env) {
    return Report{checks::run("eval", [&](Outcome&) {
      Fuel fuel(cfg.fuel);
      return show(surface::evaluate(env, expr, fuel, cfg.obs_depth));
    })};
  });
}

Report cmd_check(const std::string& file, const std::string& suite, const Config& cfg) {
  return with_env(file, [&](const surface::ElabEnv& env) {
    Report out;
    auto add = [&](Report r) { out.insert(out.end(), r.begin(), r.end()); };
    if (suite == "initial" || suite == "all") add(checks::initial_suite(env, cfg));
    if (suite == "final" || suite == "all") add(checks::final_suite(env, cfg));
    if (suite == "cpo" || suite == "all") add(checks::cpo_suite(env, cfg));
    return out;
  });
}

nlohmann::ordered_json to_json(const std::string& command, const Config& cfg, const Report& r, long long ms) {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["config"] = {{"fuel", cfg.fuel}, {"obs_depth", cfg.obs_depth}, {"chain_bound", cfg.chain_bound}, {"seed", cfg.seed}};
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : r)
    j["checks"].push_back({{"name", c.name}, {"status", checks::to_string(c.status)}, {"detail", c.detail}});
  j["elapsed_ms"] = ms;
  return j;
}

void print_text(std::ostream& os, const std::string& command, const Config& cfg, const Report& r, long long ms) {
  os << "command: " << command << "\n";
  os << "config: fuel=" << cfg.fuel << " obs-depth=" << cfg.obs_depth << " chain-bound=" << cfg.chain_bound
     << " seed=" << cfg.seed << "\n";
  std::size_t counts[3] = {0, 0, 0};
  for (const auto& c : r) {
    ++counts[static_cast<int>(c.status)];
    std::string status = checks::to_string(c.status);
    for (auto& ch : status) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    os << status << "  " << c.name;
    if (!c.detail.empty()) {
      std::string d = c.detail;
      for (std::size_t p = d.find('\n'); p != std::string::npos; p = d.find('\n', p + 1)) d.replace(p, 1, "\n      ");
      os << ": " << d;
    }
    os << "\n";
  }
  os << counts[0] << " passed, " << counts[1] << " failed, " << counts[2] << " skipped\n";
  os << "elapsed_ms: " << ms << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Datatypes from initial algebras and final coalgebras: elaboration, evaluation and checks"};
  app.require_subcommand(1);
  Config cfg;
  std::string format = "text";
  app.add_option("--fuel", cfg.fuel, "Evaluation steps per item")->capture_default_str();
  app.add_option("--obs-depth", cfg.obs_depth, "Tree depth and observation path length")->capture_default_str();
  app.add_option("--chain-bound", cfg.chain_bound, "Iterations read from each chain")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Seed for sampled algebras and objects")->capture_default_str();
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}))->capture_default_str();

  std::string file, expr, suite = "all", which;
  auto* elab = app.add_subcommand("elaborate", "Parse, check positivity and print normal forms");
  elab->add_option("FILE", file)->required();
  auto* ev = app.add_subcommand("eval", "Evaluate an expression against a declaration file");
  ev->add_option("FILE", file)->required();
  ev->add_option("-e,--expr", expr, "Expression")->required();
  auto* chk = app.add_subcommand("check", "Run the property suites for the declared types");
  chk->add_option("FILE", file)->required();
  chk->add_option("--suite", suite)->check(CLI::IsMember({"initial", "final", "cpo", "all"}))->capture_default_str();
  auto* lab = app.add_subcommand("lab", "Finite quasitopos certifications");
  lab->add_option("WHICH", which)->required()->check(CLI::IsMember({"rere", "spap", "mtypes"}));
  for (auto* s : {elab, ev, chk, lab}) s->fallthrough();

  CLI11_PARSE(app, argc, argv);

  std::string command;
  for (int i = 1; i < argc; ++i) command += (i > 1 ? " " : "") + std::string(argv[i]);

  auto start = std::chrono::steady_clock::now();
  Report report;
  if (*elab) report = cmd_elaborate(file);
  else if (*ev) report = cmd_eval(file, expr, cfg);
  else if (*chk) report = cmd_check(file, suite, cfg);
  else report = checks::lab_suite(which, cfg);
  checks::sort_checks(report);
  long long ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();

  if (format == "json") std::cout << to_json(command, cfg, report, ms).dump(2) << "\n";
  else print_text(std::cout, command, cfg, report, ms);
  return checks::all_pass(report) ? 0 : 1;
}
