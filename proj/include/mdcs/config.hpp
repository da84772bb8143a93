#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdcs/optimizers.hpp"

namespace mdcs {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind {
  Converge,
  Oscillate,
  Counterexample,
  Stability,
  Transfer,
  AblateGamma,
  AblateEps,
  Bench,
  StepDyn,
};

std::string experiment_name(ExperimentKind k);
ExperimentKind experiment_from_name(const std::string& name);

enum class OutputFormat { Csv, Json };

/// Which objective an experiment optimizes.
struct ProblemSpec {
  std::string kind = "quadratic";  // quadratic | powerlaw | reddi
  std::size_t dim = 10;
  double scale = 1.0;              // quadratic curvature
  std::vector<double> target;      // explicit quadratic target; generated if empty
  double target_offset = 0.05;     // per-coordinate offset used when generating
  double coefficient = 1.0;        // powerlaw synthetic suboptimality: c * T^e
  double exponent = -0.5;
  double reddi_c = 3.0;
  double reddi_p = 0.4;
};

/// Blobs dataset plus surrogate/target training settings.
struct TransferSpec {
  std::size_t dim = 20;
  int n_classes = 3;
  int n_per_class = 100;
  double separation = 6.0;
  int surrogate_hidden = 32;
  int target_hidden = 48;
  int epochs = 300;
  int batch_size = 32;
  double learning_rate = 0.5;
  std::string activation = "relu";
  double init_scale = 0.1;
  int max_examples = 64;
  std::uint64_t data_seed = 12345;
};

/// Full description of a deterministic experiment: config plus code version
/// fixes the outputs byte for byte.
struct RunConfig {
  ExperimentKind experiment = ExperimentKind::Converge;
  AttackConfig attack;
  ProblemSpec problem;
  TransferSpec transfer;
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::vector<int> t_values = {2, 5, 10, 20, 50, 100};
  std::vector<double> gamma_values = {0.25, 0.5, 1.0, 2.0, 4.0, 10.0};
  std::vector<double> eps_values = {4.0 / 255.0, 8.0 / 255.0, 16.0 / 255.0,
                                    32.0 / 255.0};
  std::vector<std::string> algorithms = {"ifgsm", "mi_fgsm", "mdcs_mi"};
  std::string fixture = "sign_oscillation";
  std::string output_dir = "out";
  OutputFormat format = OutputFormat::Csv;
};

/// Built-in defaults for each experiment.
RunConfig default_config(ExperimentKind kind);

/// Strict parse: unknown keys anywhere in the file are fatal, named in the
/// error. `expected` is the CLI verb's experiment family; a config naming an
/// incompatible experiment is rejected.
RunConfig load_config(const std::string& path, ExperimentKind expected);

/// Canonical serialization of every field, used for the output config hash.
std::string canonical_json(const RunConfig& cfg);
std::string config_hash(const RunConfig& cfg);

}  // namespace mdcs
