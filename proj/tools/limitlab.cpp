// limitlab — ideal-convergence diagnostics and the finite functional lab.
//
// Verbs: analyze, extract, lab, validate. Configuration comes from a
// key-value tree file (see configs/ for samples); --horizon/--tol/--seed
// override the file. Exit codes: 0 all commands succeeded, 1 any
// command-level failure, 2 configuration error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "limitlab/runner.hpp"

namespace {

struct Options {
  std::string config_path;
  std::string out_path;
  std::string format = "json";
  std::optional<std::uint64_t> horizon;
  std::optional<double> tol;
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool timings = false;
};

int fail_config(const std::vector<limitlab::Diagnostic>& diags) {
  for (const auto& d : diags) {
    if (d.line > 0)
      std::cerr << "config:" << d.line << ":" << d.col << ": " << d.message << "\n";
    else
      std::cerr << "config: " << d.message << "\n";
  }
  return 2;
}

int run_command(limitlab::Command cmd, const Options& opt) {
  limitlab::AnalysisConfig cfg;
  if (!opt.config_path.empty()) {
    std::ifstream in(opt.config_path, std::ios::binary);
    if (!in) {
      std::cerr << "config: cannot open '" << opt.config_path << "'\n";
      return 2;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    auto parsed = limitlab::parse_config(buf.str());
    if (!parsed.diagnostics.empty()) return fail_config(parsed.diagnostics);
    cfg = std::move(*parsed.config);
  } else if (cmd != limitlab::Command::Validate) {
    std::cerr << "config: " << limitlab::command_name(cmd) << " requires --config\n";
    return 2;
  }

  if (opt.horizon) {
    if (*opt.horizon < 64) {
      std::cerr << "config: horizon must be >= 64\n";
      return 2;
    }
    cfg.horizon = *opt.horizon;
  }
  if (opt.tol) {
    if (!(*opt.tol > 0.0 && *opt.tol < 1.0)) {
      std::cerr << "config: tol must lie in (0,1)\n";
      return 2;
    }
    cfg.tol = *opt.tol;
  }
  if (opt.seed_given) cfg.seed = opt.seed;

  // The verb selects the command; a config's own command list applies to
  // library-level run() calls.
  cfg.commands = {cmd};
  if ((cmd == limitlab::Command::Analyze || cmd == limitlab::Command::Extract) &&
      (!cfg.sequence || !cfg.ideal)) {
    std::cerr << "config: " << limitlab::command_name(cmd)
              << " requires 'sequence' and 'ideal'\n";
    return 2;
  }
  if (cmd == limitlab::Command::Lab && !cfg.lab) {
    std::cerr << "config: lab requires a lab { ... } section\n";
    return 2;
  }

  if (opt.format != "json" && opt.format != "csv") {
    std::cerr << "config: --format must be json or csv\n";
    return 2;
  }
  if (opt.format == "csv" &&
      (cmd == limitlab::Command::Lab || cmd == limitlab::Command::Validate)) {
    std::cerr << "config: csv output covers score traces only (analyze, extract)\n";
    return 2;
  }

  limitlab::RunOutput out = limitlab::run(cfg, opt.timings);
  std::string payload =
      opt.format == "csv" ? limitlab::csv_score_traces(out.document) : out.to_string();

  if (opt.out_path.empty()) {
    std::cout << payload;
  } else {
    std::ofstream f(opt.out_path, std::ios::binary);
    if (!f) {
      std::cerr << "config: cannot write '" << opt.out_path << "'\n";
      return 2;
    }
    f << payload;
  }
  return out.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ideal-convergence diagnostics and finite functional lab"};
  app.require_subcommand(1);

  Options opt;
  limitlab::Command selected = limitlab::Command::Analyze;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "configuration file (key-value tree)");
    sub->add_option("--horizon", opt.horizon, "override the evaluation horizon (>= 64)");
    sub->add_option("--tol", opt.tol, "override the membership tolerance in (0,1)");
    sub->add_option("--out", opt.out_path, "write the report to a file instead of stdout");
    sub->add_option("--format", opt.format, "report format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_flag("--timings", opt.timings, "include per-command wall clocks in the report");
    sub->add_option_function<std::uint64_t>(
           "--seed",
           [&](const std::uint64_t& s) {
             opt.seed = s;
             opt.seed_given = true;
           },
           "seed for the randomized oracle suites (default 0)");
  };

  add_common(app.add_subcommand("analyze",
                                "cluster set, limsup/liminf, convergence verdict, distance, approximants"));
  add_common(app.add_subcommand("extract", "F-sigma limit-point extraction"));
  add_common(app.add_subcommand("lab", "finite functional lab"));
  add_common(app.add_subcommand("validate", "run every oracle cross-check suite"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (app.get_subcommand("analyze")->parsed()) selected = limitlab::Command::Analyze;
  else if (app.get_subcommand("extract")->parsed()) selected = limitlab::Command::Extract;
  else if (app.get_subcommand("lab")->parsed()) selected = limitlab::Command::Lab;
  else selected = limitlab::Command::Validate;

  try {
    return run_command(selected, opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
