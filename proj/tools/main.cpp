#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mdcs/commands.hpp"
#include "mdcs/version.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string output_dir;
  std::string format;
  std::int64_t seed = -1;
  bool has_seed = false;
};

void add_common(CLI::App* sub, CommonFlags& flags) {
  sub->add_option("--config", flags.config_path, "Config file (JSON)");
  sub->add_option("--out", flags.output_dir, "Output directory override");
  sub->add_option("--format", flags.format, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--seed", flags.seed, "Seed override (replaces the seed list)")
      ->check(CLI::NonNegativeNumber);
}

mdcs::RunConfig build_config(const CommonFlags& flags,
                             mdcs::ExperimentKind kind) {
  mdcs::RunConfig cfg = flags.config_path.empty()
                            ? mdcs::default_config(kind)
                            : mdcs::load_config(flags.config_path, kind);
  if (!flags.output_dir.empty()) cfg.output_dir = flags.output_dir;
  if (!flags.format.empty()) {
    cfg.format = flags.format == "json" ? mdcs::OutputFormat::Json
                                        : mdcs::OutputFormat::Csv;
  }
  if (flags.seed >= 0) {
    cfg.seeds = {static_cast<std::uint64_t>(flags.seed)};
    cfg.attack.seed = static_cast<std::uint64_t>(flags.seed);
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Box-constrained sign-based attack optimizers and the "
               "capped-step variants, with a verification harness"};
  app.set_version_flag("--version", std::string("mdcs ") + mdcs::kVersion);
  app.require_subcommand(1);

  struct Verb {
    const char* name;
    const char* help;
    mdcs::ExperimentKind kind;
  };
  const Verb verbs[] = {
      {"converge", "Suboptimality-vs-budget sweep with the rate fit and bounds",
       mdcs::ExperimentKind::Converge},
      {"stability", "Transfer success-rate curves over iteration budgets",
       mdcs::ExperimentKind::Stability},
      {"stepdyn", "Per-iteration effective step sizes of a tracked coordinate",
       mdcs::ExperimentKind::StepDyn},
      {"ablate", "Sweep gamma or epsilon and report ASR plus distortion",
       mdcs::ExperimentKind::AblateGamma},
      {"counterexample", "Run the oscillation or stochastic fixtures",
       mdcs::ExperimentKind::Counterexample},
      {"bench", "Deterministic per-algorithm workload summary",
       mdcs::ExperimentKind::Bench},
  };

  CommonFlags flags[6];
  CLI::App* subs[6];
  for (int i = 0; i < 6; ++i) {
    subs[i] = app.add_subcommand(verbs[i].name, verbs[i].help);
    add_common(subs[i], flags[i]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    for (int i = 0; i < 6; ++i) {
      if (subs[i]->parsed()) {
        const mdcs::RunConfig cfg = build_config(flags[i], verbs[i].kind);
        const mdcs::CommandResult result = mdcs::run_command(cfg);
        for (const std::string& f : result.files) {
          std::cout << "wrote " << f << "\n";
        }
        return result.exit_code;
      }
    }
  } catch (const mdcs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
