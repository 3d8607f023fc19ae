// metaffine: run scenario files and the built-in self check.

#include "metaffine/metaffine_c.h"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

namespace {

struct Output {
  std::string path;
  bool json = false;
  bool timing = false;
};

int emit(maf_report *report, const Output &o) {
  const char *text = nullptr;
  const maf_status st = o.json ? maf_report_json(report, o.timing, &text) : maf_report_text(report, o.timing, &text);
  if (st != MAF_OK) {
    std::cerr << "metaffine: " << maf_last_error() << "\n";
    return 2;
  }
  if (o.path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(o.path, std::ios::binary);
    if (!out || !(out << text)) {
      std::cerr << "metaffine: cannot write '" << o.path << "'\n";
      return 2;
    }
  }
  int code = 0;
  maf_report_exit_code(report, &code);
  return code;
}

int run(const std::string &file, const maf_run_options &opts, const Output &o) {
  maf_scenario *s = nullptr;
  if (maf_scenario_load(file.c_str(), &s) != MAF_OK) {
    std::cerr << file;
    if (maf_last_error_line())
      std::cerr << ":" << maf_last_error_line() << ":" << maf_last_error_column();
    std::cerr << ": error: " << maf_last_error() << "\n";
    return 2;
  }
  maf_report *r = nullptr;
  const maf_status st = maf_scenario_run(s, &opts, &r);
  maf_scenario_free(s);
  if (st != MAF_OK) {
    std::cerr << "metaffine: " << maf_last_error() << "\n";
    return 2;
  }
  const int code = emit(r, o);
  maf_report_free(r);
  return code;
}

int selfcheck(const maf_run_options &opts, unsigned flags, const Output &o) {
  maf_report *r = nullptr;
  if (maf_selfcheck(&opts, flags, &r) != MAF_OK) {
    std::cerr << "metaffine: " << maf_last_error() << "\n";
    return 2;
  }
  const int code = emit(r, o);
  maf_report_free(r);
  return code;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Symbolic tensor calculus for metric-affine gauge gravitation"};
  app.set_version_flag("--version", std::string(maf_version()));
  app.require_subcommand(1);

  maf_run_options opts;
  maf_run_options_init(&opts);
  Output out;
  std::string file;
  bool serial = false;
  bool tamper = false;

  auto *run_cmd = app.add_subcommand("run", "Run a scenario file");
  run_cmd->add_option("file", file, "Scenario file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out", out.path, "Write the report to PATH");
  run_cmd->add_flag("--json", out.json, "Emit JSON");
  run_cmd->add_option("--seed", opts.seed, "Sampling seed");
  run_cmd->add_option("--samples", opts.samples, "Sample points per probabilistic zero test")
      ->check(CLI::Range(1, 100000));
  run_cmd->add_flag("--serial", serial, "Run tasks sequentially");
  run_cmd->add_flag("--timing", out.timing, "Include wall times (not deterministic)");

  auto *check_cmd = app.add_subcommand("selfcheck", "Run the built-in identity suite");
  check_cmd->add_flag("--json", out.json, "Emit JSON");
  check_cmd->add_option("--out", out.path, "Write the report to PATH");
  check_cmd->add_option("--seed", opts.seed, "Sampling seed");
  check_cmd->add_flag("--timing", out.timing, "Include wall times (not deterministic)");
  check_cmd->add_flag("--tamper-gamma", tamper, "Test hook: perturb one gamma matrix")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 64;
  }
  opts.serial = serial ? 1 : 0;
  if (*run_cmd)
    return run(file, opts, out);
  return selfcheck(opts, tamper ? MAF_SELFCHECK_TAMPER_GAMMA : 0u, out);
}
