// Experiment driver: one subcommand per experiment kind, flat key=value
// configs in, CSV out.  Exit codes: 0 success, 2 configuration error,
// 3 module precondition violation.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "loosehc/experiments.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitPrecondition = 3;

int default_threads() {
  if (const char* env = std::getenv("LOOSEHC_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v >= 1) return v;
    } catch (const std::exception&) {
      // fall through to the default
    }
  }
  return 1;
}

struct CommonArgs {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials_override;
  int threads = 1;
};

void attach_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("--config", args.config_path, "experiment config file (key = value lines)")
      ->required();
  sub->add_option("--out", args.out_path,
                  "output CSV path (overrides the config's 'out'; '-' or empty: stdout)");
  sub->add_option("--seed", args.seed, "master seed override");
  sub->add_option("--threads", args.threads, "worker thread count")
      ->check(CLI::PositiveNumber);
  sub->add_option("--trials-override", args.trials_override, "trials-per-cell override")
      ->check(CLI::PositiveNumber);
}

int run(const std::string& kind, const CommonArgs& args) {
  loosehc::ExperimentConfig cfg = loosehc::ExperimentConfig::parse_file(args.config_path);
  if (cfg.kind != kind) {
    throw loosehc::ConfigError("config kind '" + cfg.kind + "' does not match subcommand '" +
                               kind + "'");
  }
  cfg.validate();
  loosehc::RunOptions opts;
  opts.threads = args.threads;
  opts.trials_override = args.trials_override;
  opts.seed_override = args.seed;
  const std::string csv = loosehc::run_experiment(cfg, opts);

  std::string out_path = args.out_path.empty() ? cfg.out : args.out_path;
  if (out_path.empty() || out_path == "-") {
    std::cout << csv;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw loosehc::ConfigError("cannot open output file: " + out_path);
    out << csv;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"loose Hamilton cycle experiment driver"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> kinds = {
      {"threshold-sweep", "loose-Hamilton-cycle and isolated-vertex frequencies vs p"},
      {"spoiled-stats", "spoiled pair/block statistics of random configurations"},
      {"lambda-hamilton", "restricted Hamiltonicity frequency of sampled multigraphs"},
      {"matching-success", "perfect matching frequency in random pattern graphs"},
      {"analysis-report", "rate-function critical point and variance bound report"},
  };

  CommonArgs args;
  args.threads = default_threads();
  for (const auto& [name, desc] : kinds) {
    attach_common(app.add_subcommand(name, desc), args);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  const std::string kind = app.get_subcommands().front()->get_name();
  try {
    return run(kind, args);
  } catch (const loosehc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const loosehc::PreconditionError& e) {
    std::cerr << "precondition violation: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const std::invalid_argument& e) {
    std::cerr << "precondition violation: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const std::domain_error& e) {
    std::cerr << "precondition violation: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
