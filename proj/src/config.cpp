#include "mdcs/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "mdcs/persist.hpp"

namespace mdcs {

using ordered_json = nlohmann::ordered_json;

std::string experiment_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Converge: return "converge";
    case ExperimentKind::Oscillate: return "oscillate";
    case ExperimentKind::Counterexample: return "counterexample";
    case ExperimentKind::Stability: return "stability";
    case ExperimentKind::Transfer: return "transfer";
    case ExperimentKind::AblateGamma: return "ablate_gamma";
    case ExperimentKind::AblateEps: return "ablate_eps";
    case ExperimentKind::Bench: return "bench";
    case ExperimentKind::StepDyn: return "stepdyn";
  }
  return "unknown";
}

ExperimentKind experiment_from_name(const std::string& name) {
  for (ExperimentKind k :
       {ExperimentKind::Converge, ExperimentKind::Oscillate,
        ExperimentKind::Counterexample, ExperimentKind::Stability,
        ExperimentKind::Transfer, ExperimentKind::AblateGamma,
        ExperimentKind::AblateEps, ExperimentKind::Bench,
        ExperimentKind::StepDyn}) {
    if (experiment_name(k) == name) return k;
  }
  throw ConfigError("unknown experiment '" + name + "'");
}

namespace {

void check_keys(const ordered_json& j, const std::string& prefix,
                const std::set<std::string>& allowed) {
  for (const auto& item : j.items()) {
    if (allowed.find(item.key()) == allowed.end()) {
      throw ConfigError("unknown key '" + prefix + item.key() + "'");
    }
  }
}

template <typename T>
void read_field(const ordered_json& j, const std::string& prefix,
                const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("bad value for key '" + prefix + key + "'");
  }
}

StepSchedule schedule_from_name(const std::string& s) {
  if (s == "practice") return StepSchedule::Practice;
  if (s == "theorem") return StepSchedule::Theorem;
  throw ConfigError("bad value for key 'attack.schedule': '" + s + "'");
}

BetaMode beta_mode_from_name(const std::string& s) {
  if (s == "decay") return BetaMode::Decay;
  if (s == "constant") return BetaMode::Constant;
  throw ConfigError("bad value for key 'attack.beta_mode': '" + s + "'");
}

void parse_attack(const ordered_json& j, AttackConfig& a) {
  check_keys(j, "attack.",
             {"algorithm", "epsilon", "total_iters", "gamma", "beta", "lambda",
              "mu", "schedule", "beta_mode", "seed", "tracked_coord",
              "mdcs_clamp", "adam_beta1", "adam_beta2", "mef", "ops"});
  if (j.contains("algorithm")) {
    try {
      a.algorithm = algorithm_from_name(j.at("algorithm").get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("attack.algorithm: ") + e.what());
    }
  }
  read_field(j, "attack.", "epsilon", a.epsilon);
  read_field(j, "attack.", "total_iters", a.total_iters);
  read_field(j, "attack.", "gamma", a.gamma);
  read_field(j, "attack.", "beta", a.beta);
  read_field(j, "attack.", "lambda", a.lambda);
  read_field(j, "attack.", "mu", a.mu);
  if (j.contains("schedule")) {
    a.schedule = schedule_from_name(j.at("schedule").get<std::string>());
  }
  if (j.contains("beta_mode")) {
    a.beta_mode = beta_mode_from_name(j.at("beta_mode").get<std::string>());
  }
  read_field(j, "attack.", "seed", a.seed);
  read_field(j, "attack.", "tracked_coord", a.tracked_coord);
  read_field(j, "attack.", "mdcs_clamp", a.mdcs_clamp);
  read_field(j, "attack.", "adam_beta1", a.adam_beta1);
  read_field(j, "attack.", "adam_beta2", a.adam_beta2);
  if (j.contains("mef")) {
    const auto& m = j.at("mef");
    check_keys(m, "attack.mef.",
               {"n_samples", "xi", "explore_radius", "mu_inner", "mu_outer"});
    read_field(m, "attack.mef.", "n_samples", a.mef.n_samples);
    read_field(m, "attack.mef.", "xi", a.mef.xi);
    read_field(m, "attack.mef.", "explore_radius", a.mef.explore_radius);
    read_field(m, "attack.mef.", "mu_inner", a.mef.mu_inner);
    read_field(m, "attack.mef.", "mu_outer", a.mef.mu_outer);
  }
  if (j.contains("ops")) {
    const auto& o = j.at("ops");
    check_keys(o, "attack.ops.", {"n_ops", "n_perturb", "perturb_radius"});
    read_field(o, "attack.ops.", "n_ops", a.ops.n_ops);
    read_field(o, "attack.ops.", "n_perturb", a.ops.n_perturb);
    read_field(o, "attack.ops.", "perturb_radius", a.ops.perturb_radius);
  }
}

void parse_problem(const ordered_json& j, ProblemSpec& p) {
  check_keys(j, "problem.",
             {"kind", "dim", "scale", "target", "target_offset", "coefficient",
              "exponent", "reddi_c", "reddi_p"});
  read_field(j, "problem.", "kind", p.kind);
  if (p.kind != "quadratic" && p.kind != "powerlaw" && p.kind != "reddi") {
    throw ConfigError("bad value for key 'problem.kind': '" + p.kind + "'");
  }
  read_field(j, "problem.", "dim", p.dim);
  read_field(j, "problem.", "scale", p.scale);
  read_field(j, "problem.", "target", p.target);
  read_field(j, "problem.", "target_offset", p.target_offset);
  read_field(j, "problem.", "coefficient", p.coefficient);
  read_field(j, "problem.", "exponent", p.exponent);
  read_field(j, "problem.", "reddi_c", p.reddi_c);
  read_field(j, "problem.", "reddi_p", p.reddi_p);
}

void parse_transfer(const ordered_json& j, TransferSpec& t) {
  check_keys(j, "transfer.",
             {"dim", "n_classes", "n_per_class", "separation",
              "surrogate_hidden", "target_hidden", "epochs", "batch_size",
              "learning_rate", "activation", "init_scale", "max_examples",
              "data_seed"});
  read_field(j, "transfer.", "dim", t.dim);
  read_field(j, "transfer.", "n_classes", t.n_classes);
  read_field(j, "transfer.", "n_per_class", t.n_per_class);
  read_field(j, "transfer.", "separation", t.separation);
  read_field(j, "transfer.", "surrogate_hidden", t.surrogate_hidden);
  read_field(j, "transfer.", "target_hidden", t.target_hidden);
  read_field(j, "transfer.", "epochs", t.epochs);
  read_field(j, "transfer.", "batch_size", t.batch_size);
  read_field(j, "transfer.", "learning_rate", t.learning_rate);
  read_field(j, "transfer.", "activation", t.activation);
  if (t.activation != "relu" && t.activation != "tanh") {
    throw ConfigError("bad value for key 'transfer.activation': '" +
                      t.activation + "'");
  }
  read_field(j, "transfer.", "init_scale", t.init_scale);
  read_field(j, "transfer.", "max_examples", t.max_examples);
  read_field(j, "transfer.", "data_seed", t.data_seed);
}

bool compatible(ExperimentKind requested, ExperimentKind verb) {
  if (requested == verb) return true;
  switch (verb) {
    case ExperimentKind::Counterexample:
      return requested == ExperimentKind::Oscillate;
    case ExperimentKind::Stability:
      return requested == ExperimentKind::Transfer;
    case ExperimentKind::AblateGamma:
    case ExperimentKind::AblateEps:
      return requested == ExperimentKind::AblateGamma ||
             requested == ExperimentKind::AblateEps;
    default:
      return false;
  }
}

}  // namespace

RunConfig default_config(ExperimentKind kind) {
  RunConfig cfg;
  cfg.experiment = kind;
  switch (kind) {
    case ExperimentKind::Converge:
      cfg.attack.algorithm = Algorithm::MdcsMi;
      cfg.attack.schedule = StepSchedule::Theorem;
      cfg.attack.epsilon = 0.1;
      cfg.attack.gamma = 0.05;
      cfg.attack.beta = 0.999;
      cfg.attack.lambda = 0.999;
      cfg.t_values = {16, 64, 256, 1024, 4096};
      cfg.problem.kind = "quadratic";
      cfg.problem.dim = 10;
      cfg.seeds = {0};
      break;
    case ExperimentKind::Oscillate:
    case ExperimentKind::Counterexample:
      cfg.attack.total_iters = 10000;
      cfg.attack.schedule = StepSchedule::Theorem;
      cfg.attack.gamma = 1.0;
      cfg.attack.adam_beta1 = 0.0;
      cfg.attack.adam_beta2 = 0.1;  // 1/(1+C^2) for C = 3
      cfg.problem.kind = "reddi";
      cfg.fixture = kind == ExperimentKind::Oscillate ? "sign_oscillation"
                                                      : "reddi";
      cfg.algorithms = {"adam", "amsgrad"};
      cfg.seeds.resize(20);
      for (std::size_t i = 0; i < cfg.seeds.size(); ++i) cfg.seeds[i] = i;
      break;
    case ExperimentKind::Stability:
    case ExperimentKind::Transfer:
      cfg.attack.epsilon = 0.1;
      cfg.attack.gamma = 1.0;
      cfg.algorithms = {"ifgsm", "mi_fgsm", "mdcs_mi"};
      break;
    case ExperimentKind::AblateGamma:
    case ExperimentKind::AblateEps:
      cfg.attack.epsilon = 0.1;
      cfg.attack.algorithm = Algorithm::MdcsMi;
      cfg.attack.total_iters = 10;
      break;
    case ExperimentKind::Bench:
      cfg.attack.epsilon = 0.1;
      cfg.algorithms = {"ifgsm", "mi_fgsm", "mdcs_mi", "adam", "amsgrad"};
      cfg.problem.kind = "quadratic";
      cfg.seeds = {0};
      break;
    case ExperimentKind::StepDyn:
      cfg.attack.epsilon = 0.1;
      cfg.attack.total_iters = 20;
      cfg.attack.schedule = StepSchedule::Theorem;
      cfg.attack.gamma = 1.0;
      cfg.transfer.activation = "tanh";
      cfg.seeds = {0};
      break;
  }
  return cfg;
}

RunConfig load_config(const std::string& path, ExperimentKind expected) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config parse error in '" + path + "': " + e.what());
  }

  ExperimentKind kind = expected;
  if (j.contains("experiment")) {
    kind = experiment_from_name(j.at("experiment").get<std::string>());
    if (!compatible(kind, expected)) {
      throw ConfigError("config experiment '" + experiment_name(kind) +
                        "' does not match the requested command '" +
                        experiment_name(expected) + "'");
    }
  }
  RunConfig cfg = default_config(kind);

  check_keys(j, "",
             {"experiment", "attack", "problem", "transfer", "seeds",
              "t_values", "gamma_values", "eps_values", "algorithms",
              "fixture", "output_dir", "format"});
  if (j.contains("attack")) parse_attack(j.at("attack"), cfg.attack);
  if (j.contains("problem")) parse_problem(j.at("problem"), cfg.problem);
  if (j.contains("transfer")) parse_transfer(j.at("transfer"), cfg.transfer);
  read_field(j, "", "seeds", cfg.seeds);
  read_field(j, "", "t_values", cfg.t_values);
  read_field(j, "", "gamma_values", cfg.gamma_values);
  read_field(j, "", "eps_values", cfg.eps_values);
  read_field(j, "", "algorithms", cfg.algorithms);
  read_field(j, "", "fixture", cfg.fixture);
  read_field(j, "", "output_dir", cfg.output_dir);
  if (j.contains("format")) {
    const std::string f = j.at("format").get<std::string>();
    if (f == "csv") {
      cfg.format = OutputFormat::Csv;
    } else if (f == "json") {
      cfg.format = OutputFormat::Json;
    } else {
      throw ConfigError("bad value for key 'format': '" + f + "'");
    }
  }
  for (const std::string& a : cfg.algorithms) {
    algorithm_from_name(a);  // validate early
  }
  if (cfg.fixture != "sign_oscillation" && cfg.fixture != "reddi") {
    throw ConfigError("unknown fixture '" + cfg.fixture + "'");
  }
  try {
    cfg.attack.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

std::string canonical_json(const RunConfig& cfg) {
  ordered_json j;
  j["experiment"] = experiment_name(cfg.experiment);
  ordered_json a;
  a["algorithm"] = algorithm_name(cfg.attack.algorithm);
  a["epsilon"] = cfg.attack.epsilon;
  a["total_iters"] = cfg.attack.total_iters;
  a["gamma"] = cfg.attack.gamma;
  a["beta"] = cfg.attack.beta;
  a["lambda"] = cfg.attack.lambda;
  a["mu"] = cfg.attack.mu;
  a["schedule"] =
      cfg.attack.schedule == StepSchedule::Practice ? "practice" : "theorem";
  a["beta_mode"] =
      cfg.attack.beta_mode == BetaMode::Decay ? "decay" : "constant";
  a["seed"] = cfg.attack.seed;
  a["tracked_coord"] = cfg.attack.tracked_coord;
  a["mdcs_clamp"] = cfg.attack.mdcs_clamp;
  a["adam_beta1"] = cfg.attack.adam_beta1;
  a["adam_beta2"] = cfg.attack.adam_beta2;
  a["mef"] = {{"n_samples", cfg.attack.mef.n_samples},
              {"xi", cfg.attack.mef.xi},
              {"explore_radius", cfg.attack.mef.explore_radius},
              {"mu_inner", cfg.attack.mef.mu_inner},
              {"mu_outer", cfg.attack.mef.mu_outer}};
  a["ops"] = {{"n_ops", cfg.attack.ops.n_ops},
              {"n_perturb", cfg.attack.ops.n_perturb},
              {"perturb_radius", cfg.attack.ops.perturb_radius}};
  j["attack"] = a;
  j["problem"] = {{"kind", cfg.problem.kind},
                  {"dim", cfg.problem.dim},
                  {"scale", cfg.problem.scale},
                  {"target", cfg.problem.target},
                  {"target_offset", cfg.problem.target_offset},
                  {"coefficient", cfg.problem.coefficient},
                  {"exponent", cfg.problem.exponent},
                  {"reddi_c", cfg.problem.reddi_c},
                  {"reddi_p", cfg.problem.reddi_p}};
  j["transfer"] = {{"dim", cfg.transfer.dim},
                   {"n_classes", cfg.transfer.n_classes},
                   {"n_per_class", cfg.transfer.n_per_class},
                   {"separation", cfg.transfer.separation},
                   {"surrogate_hidden", cfg.transfer.surrogate_hidden},
                   {"target_hidden", cfg.transfer.target_hidden},
                   {"epochs", cfg.transfer.epochs},
                   {"batch_size", cfg.transfer.batch_size},
                   {"learning_rate", cfg.transfer.learning_rate},
                   {"activation", cfg.transfer.activation},
                   {"init_scale", cfg.transfer.init_scale},
                   {"max_examples", cfg.transfer.max_examples},
                   {"data_seed", cfg.transfer.data_seed}};
  j["seeds"] = cfg.seeds;
  j["t_values"] = cfg.t_values;
  j["gamma_values"] = cfg.gamma_values;
  j["eps_values"] = cfg.eps_values;
  j["algorithms"] = cfg.algorithms;
  j["fixture"] = cfg.fixture;
  j["format"] = cfg.format == OutputFormat::Csv ? "csv" : "json";
  return j.dump();
}

std::string config_hash(const RunConfig& cfg) {
  return hex32(fnv1a32(canonical_json(cfg)));
}

}  // namespace mdcs
