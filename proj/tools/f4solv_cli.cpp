// SPDX-License-Identifier: Apache-2.0
//
// f4solv command-line front end; talks to the library only through the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "f4solv/f4solv.h"

namespace {

struct Settings {
  std::string model = "rational";
  std::string nu = "1";
  std::string mu = "1";
  std::string omega = "1";
  std::string beta2 = "1";
  std::string params_file;
  int level = -1;
  std::string frame = "native";
  std::string charvec = "1,2,2,3";
  unsigned long long seed = 0;
  int points = 20;
  int bound = 6;
  std::string format;
  std::string out;
};

using ParamsPtr = std::unique_ptr<f4_params, decltype(&f4_params_destroy)>;
using ReportPtr = std::unique_ptr<f4_report, decltype(&f4_report_destroy)>;

int report_error(f4_status s) {
  std::cerr << "f4solv: " << f4_last_error() << "\n";
  return static_cast<int>(s);
}

int run(const Settings& s, const std::string& command, const std::string& suite) {
  f4_params* raw = nullptr;
  f4_status st;
  if (!s.params_file.empty()) {
    std::ifstream in(s.params_file);
    if (!in) {
      std::cerr << "f4solv: cannot read " << s.params_file << "\n";
      return F4_USAGE;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    st = f4_params_from_json(buf.str().c_str(), &raw);
  } else {
    const bool rational = s.model == "rational";
    st = f4_params_create(s.model.c_str(), s.nu.c_str(), s.mu.c_str(), rational ? s.omega.c_str() : nullptr,
                          rational ? nullptr : s.beta2.c_str(), &raw);
  }
  if (st != F4_OK) return report_error(st);
  ParamsPtr params(raw, &f4_params_destroy);

  f4_options opts;
  f4_options_init(&opts);
  opts.frame = s.frame.c_str();
  opts.charvec = s.charvec.c_str();
  opts.level = s.level;
  opts.seed = s.seed;
  opts.points = s.points;
  opts.bound = s.bound;
  std::string format = s.format;
  if (format.empty()) format = command == "spectrum" ? "table" : "json";
  opts.format = format.c_str();

  f4_report* rep = nullptr;
  if (command == "spectrum") st = f4_spectrum(params.get(), &opts, &rep);
  else if (command == "eigenfunctions") st = f4_eigenfunctions(params.get(), &opts, &rep);
  else if (command == "verify") st = f4_verify(params.get(), suite.c_str(), &opts, &rep);
  else if (command == "scan-flags") st = f4_scan_flags(params.get(), &opts, &rep);
  else st = f4_dump_operator(params.get(), &opts, &rep);
  if (!rep) return report_error(st);
  ReportPtr report(rep, &f4_report_destroy);

  if (s.out.empty()) {
    std::cout << f4_report_text(report.get());
  } else {
    std::ofstream file(s.out, std::ios::binary);
    if (!file) {
      std::cerr << "f4solv: cannot write " << s.out << "\n";
      return F4_USAGE;
    }
    file << f4_report_text(report.get());
  }
  return static_cast<int>(f4_report_verdict(report.get()));
}

void add_common(CLI::App* cmd, Settings& s) {
  cmd->add_option("--model", s.model, "rational or trig")->check(CLI::IsMember({"rational", "trig"}));
  cmd->add_option("--nu", s.nu, "nu as num/den");
  cmd->add_option("--mu", s.mu, "mu as num/den");
  cmd->add_option("--omega", s.omega, "omega as num/den (rational model)");
  cmd->add_option("--beta2", s.beta2, "beta^2 as num/den (trig model)");
  cmd->add_option("--params", s.params_file, "JSON parameter file; overrides the flags above");
  cmd->add_option("--level", s.level, "flag level n");
  cmd->add_option("--frame", s.frame, "native or rho")
      ->check(CLI::IsMember({"native", "rho", "t", "tau"}));
  cmd->add_option("--charvec", s.charvec, "characteristic vector, e.g. 2,2,3");
  cmd->add_option("--seed", s.seed, "seed for random points");
  cmd->add_option("--points", s.points, "number of oracle points");
  cmd->add_option("--bound", s.bound, "scan bound per component");
  cmd->add_option("--format", s.format, "table, json or csv")->check(CLI::IsMember({"table", "json", "csv"}));
  cmd->add_option("--out", s.out, "write output to this file");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact F4 rational and trigonometric models in algebraic form"};
  app.require_subcommand(1);
  Settings s;
  std::string suite;

  auto* spectrum = app.add_subcommand("spectrum", "spectrum table with closed-form comparison");
  auto* eigen = app.add_subcommand("eigenfunctions", "exact eigenpairs on the flag space");
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  auto* scan = app.add_subcommand("scan-flags", "scan characteristic vectors");
  auto* dump = app.add_subcommand("dump-operator", "print the operator coefficients");
  for (auto* c : {spectrum, eigen, verify, scan, dump}) add_common(c, s);
  verify->add_option("suite", suite, "flag, triangular, oracle, limit, a66 or scan")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return F4_USAGE;
  }

  std::string command;
  for (auto* c : app.get_subcommands()) command = c->get_name();
  return run(s, command, suite);
}
