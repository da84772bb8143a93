#include "mdcs/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>

#include <json.hpp>

#include "mdcs/analysis.hpp"
#include "mdcs/parallel.hpp"
#include "mdcs/persist.hpp"
#include "mdcs/version.hpp"

namespace mdcs {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) { return format_double(v); }

/// Rows are accumulated as formatted strings and written in one pass so that
/// reruns with the same config produce byte-identical files.
class Report {
 public:
  Report(std::string name, std::vector<std::string> columns)
      : name_(std::move(name)), columns_(std::move(columns)) {}

  void add_row(std::vector<std::string> values) {
    rows_.push_back(std::move(values));
  }

  std::string write(const RunConfig& cfg) const {
    fs::create_directories(cfg.output_dir);
    const std::string hash = config_hash(cfg);
    const bool csv = cfg.format == OutputFormat::Csv;
    const std::string path =
        (fs::path(cfg.output_dir) / (name_ + (csv ? ".csv" : ".json")))
            .string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    if (csv) {
      out << "# mdcs v" << kVersion << " config=" << hash << "\n";
      for (std::size_t c = 0; c < columns_.size(); ++c) {
        out << columns_[c] << (c + 1 == columns_.size() ? "\n" : ",");
      }
      for (const auto& row : rows_) {
        for (std::size_t c = 0; c < row.size(); ++c) {
          out << row[c] << (c + 1 == row.size() ? "\n" : ",");
        }
      }
    } else {
      nlohmann::ordered_json j;
      j["version"] = kVersion;
      j["config"] = hash;
      j["columns"] = columns_;
      j["rows"] = rows_;
      out << j.dump(1) << "\n";
    }
    return path;
  }

 private:
  std::string name_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

// ---------------------------------------------------------------------------
// Problem construction

Point converge_target(const ProblemSpec& p) {
  if (!p.target.empty()) return Point(p.target);
  // Off-center interior target with varied per-coordinate offsets.
  Point c(p.dim);
  for (std::size_t i = 0; i < p.dim; ++i) {
    const double mag = 0.25 + 0.75 * static_cast<double>(i + 1) /
                                  static_cast<double>(p.dim);
    c[i] = (i % 2 == 0 ? 1.0 : -1.0) * p.target_offset * mag;
  }
  return c;
}

BoxConstraint converge_box(const ProblemSpec& p, double epsilon) {
  return BoxConstraint(Point(p.dim, 0.0), epsilon, -1.0, 1.0);
}

// ---------------------------------------------------------------------------
// Transfer harness

struct TransferSetup {
  Dataset data;
  ToyClassifier surrogate;
  ToyClassifier target;
  std::vector<std::size_t> idx;  // attacked examples
  double surrogate_accuracy = 0.0;
  double target_accuracy = 0.0;
};

Activation activation_from_name(const std::string& s) {
  return s == "tanh" ? Activation::Tanh : Activation::ReLU;
}

TransferSetup make_transfer_setup(const TransferSpec& spec,
                                  std::uint64_t seed) {
  SeededRng data_rng(spec.data_seed + seed, /*stream_id=*/501);
  TransferSetup setup;
  setup.data = make_blobs(data_rng, spec.n_per_class, spec.n_classes, spec.dim,
                          spec.separation);

  TrainHyper hyper;
  hyper.epochs = spec.epochs;
  hyper.batch_size = spec.batch_size;
  hyper.learning_rate = spec.learning_rate;
  hyper.activation = activation_from_name(spec.activation);
  hyper.init_scale = spec.init_scale;

  hyper.hidden = spec.surrogate_hidden;
  hyper.seed = seed * 1000 + 1;
  TrainResult sur = train_classifier(ClassifierKind::Mlp, setup.data, hyper);
  hyper.hidden = spec.target_hidden;
  hyper.seed = seed * 1000 + 2;
  TrainResult tgt = train_classifier(ClassifierKind::Mlp, setup.data, hyper);
  setup.surrogate = std::move(sur.model);
  setup.target = std::move(tgt.model);
  setup.surrogate_accuracy = sur.train_accuracy;
  setup.target_accuracy = tgt.train_accuracy;

  // Attacks start from examples both models classify correctly.
  for (std::size_t i = 0; i < setup.data.size(); ++i) {
    if (static_cast<int>(setup.idx.size()) >= spec.max_examples) break;
    const Point& x = setup.data.inputs[i];
    const int y = setup.data.labels[i];
    if (setup.surrogate.predict(x) == y && setup.target.predict(x) == y) {
      setup.idx.push_back(i);
    }
  }
  return setup;
}

struct CraftResult {
  std::vector<Point> clean;
  std::vector<int> labels;
  std::vector<Point> adversarials;
  double mean_whitebox_loss = 0.0;
};

CraftResult craft_attack(const TransferSetup& setup, Algorithm alg,
                         AttackConfig acfg, std::uint64_t seed) {
  CraftResult out;
  double loss_sum = 0.0;
  for (std::size_t k = 0; k < setup.idx.size(); ++k) {
    const std::size_t i = setup.idx[k];
    const Point& x = setup.data.inputs[i];
    const int y = setup.data.labels[i];
    BoxConstraint box(x, acfg.epsilon, 0.0, 1.0);
    acfg.algorithm = alg;
    acfg.seed = seed * 1000003 + k;
    const GradientOracle oracle =
        classifier_attack_oracle(setup.surrogate, x, y);
    Trajectory traj = run(alg, oracle, box, acfg);
    out.clean.push_back(x);
    out.labels.push_back(y);
    out.adversarials.push_back(traj.points.back());
    loss_sum += setup.surrogate.loss_and_input_grad(traj.points.back(), y).loss;
  }
  out.mean_whitebox_loss =
      out.clean.empty() ? 0.0
                        : loss_sum / static_cast<double>(out.clean.size());
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

CommandResult cmd_converge(const RunConfig& cfg) {
  CommandResult result;
  Report table("converge_subopt",
               {"T", "subopt_avg", "subopt_last", "bound_printed",
                "bound_corrected", "grad_l1_max", "within_bound"});
  std::map<int, double> subopt_by_t;
  bool all_within = true;
  double m_hat_max = 0.0;

  if (cfg.problem.kind == "powerlaw") {
    for (int T : cfg.t_values) {
      const double s = cfg.problem.coefficient *
                       std::pow(static_cast<double>(T), cfg.problem.exponent);
      subopt_by_t[T] = s;
      table.add_row({std::to_string(T), fmt(s), fmt(s), "nan", "nan", "nan",
                     "1"});
    }
  } else if (cfg.problem.kind == "quadratic") {
    const BoxConstraint box = converge_box(cfg.problem, cfg.attack.epsilon);
    const ZooProblem problem =
        quadratic_oracle(converge_target(cfg.problem), cfg.problem.scale);
    struct Cell {
      double avg, last, printed, corrected, m_hat;
      bool within;
    };
    std::vector<Cell> cells(cfg.t_values.size());
    parallel_for(cfg.t_values.size(), [&](std::size_t k) {
      AttackConfig acfg = cfg.attack;
      acfg.total_iters = cfg.t_values[k];
      const Trajectory traj =
          run(cfg.attack.algorithm, problem.oracle, box, acfg);
      const double avg = suboptimality(problem, box, traj, /*averaged=*/true);
      const double last =
          suboptimality(problem, box, traj, /*averaged=*/false);
      const TheoremConstants k_meas =
          measured_constants(traj.audit.grad_l1_max, acfg, box);
      const BoundPair bound = theorem_bound(k_meas, acfg.total_iters);
      cells[k] = Cell{avg, last, bound.printed, bound.corrected,
                      traj.audit.grad_l1_max, avg <= bound.corrected};
    });
    for (std::size_t k = 0; k < cells.size(); ++k) {
      const Cell& c = cells[k];
      subopt_by_t[cfg.t_values[k]] = c.avg;
      m_hat_max = std::max(m_hat_max, c.m_hat);
      all_within = all_within && c.within;
      table.add_row({std::to_string(cfg.t_values[k]), fmt(c.avg), fmt(c.last),
                     fmt(c.printed), fmt(c.corrected), fmt(c.m_hat),
                     c.within ? "1" : "0"});
    }
  } else {
    throw ConfigError("converge requires a concave problem, got '" +
                      cfg.problem.kind + "'");
  }
  result.files.push_back(table.write(cfg));

  Report fit_report("converge_fit",
                    {"exponent", "coefficient", "r_squared", "n_used", "M_hat",
                     "M2", "G", "dim", "gamma", "beta", "lambda",
                     "bound_holds"});
  bool fit_ok = true;
  try {
    const RateFit fit = fit_rate(subopt_by_t);
    const TheoremConstants k = measured_constants(
        m_hat_max, cfg.attack, converge_box(cfg.problem, cfg.attack.epsilon));
    fit_report.add_row({fmt(fit.exponent), fmt(fit.coefficient),
                        fmt(fit.r_squared), std::to_string(fit.n_used),
                        fmt(k.M), fmt(k.M2), fmt(k.G), std::to_string(k.dim),
                        fmt(k.gamma), fmt(k.beta), fmt(k.lambda),
                        all_within ? "1" : "0"});
  } catch (const std::runtime_error& e) {
    fit_ok = false;
    fit_report.add_row({"nan", "nan", "nan", "0", fmt(m_hat_max), "nan",
                        "nan", std::to_string(cfg.problem.dim), "nan", "nan",
                        "nan", all_within ? "1" : "0"});
    std::cerr << "converge: rate fit failed: " << e.what() << "\n";
  }
  result.files.push_back(fit_report.write(cfg));

  if (!all_within) {
    std::cerr << "converge: empirical suboptimality exceeded the corrected "
                 "bound\n";
  }
  result.exit_code = (all_within && fit_ok) ? 0 : 1;
  return result;
}

CommandResult cmd_stability(const RunConfig& cfg) {
  CommandResult result;
  std::vector<Algorithm> algs;
  for (const std::string& name : cfg.algorithms) {
    algs.push_back(algorithm_from_name(name));
  }

  struct SeedRows {
    // per algorithm, per T: white asr, transfer asr, white loss
    std::vector<std::vector<std::array<double, 3>>> cells;
  };
  std::vector<SeedRows> by_seed(cfg.seeds.size());

  parallel_for(cfg.seeds.size(), [&](std::size_t s) {
    const std::uint64_t seed = cfg.seeds[s];
    const TransferSetup setup = make_transfer_setup(cfg.transfer, seed);
    if (setup.idx.empty()) {
      throw std::runtime_error(
          "stability: no example is correctly classified by both models");
    }
    SeedRows rows;
    rows.cells.resize(algs.size());
    for (std::size_t a = 0; a < algs.size(); ++a) {
      for (int T : cfg.t_values) {
        AttackConfig acfg = cfg.attack;
        acfg.total_iters = T;
        const CraftResult craft = craft_attack(setup, algs[a], acfg, seed);
        const double white = attack_success_rate(
            setup.surrogate, craft.clean, craft.labels, craft.adversarials);
        const double transfer = attack_success_rate(
            setup.target, craft.clean, craft.labels, craft.adversarials);
        rows.cells[a].push_back({white, transfer, craft.mean_whitebox_loss});
      }
    }
    by_seed[s] = std::move(rows);
  });

  Report curve("stability_curve", {"algorithm", "seed", "T", "white_box_asr",
                                   "transfer_asr", "white_box_loss"});
  Report summary("stability_report",
                 {"algorithm", "seed", "peak", "trough", "max_drawdown"});
  for (std::size_t a = 0; a < algs.size(); ++a) {
    for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
      std::map<int, double> transfer_curve;
      for (std::size_t k = 0; k < cfg.t_values.size(); ++k) {
        const auto& cell = by_seed[s].cells[a][k];
        transfer_curve[cfg.t_values[k]] = cell[1];
        curve.add_row({cfg.algorithms[a], std::to_string(cfg.seeds[s]),
                       std::to_string(cfg.t_values[k]), fmt(cell[0]),
                       fmt(cell[1]), fmt(cell[2])});
      }
      const StabilityReport rep = stability_report(transfer_curve);
      summary.add_row({cfg.algorithms[a], std::to_string(cfg.seeds[s]),
                       fmt(rep.peak), fmt(rep.trough), fmt(rep.max_drawdown)});
    }
  }
  result.files.push_back(curve.write(cfg));
  result.files.push_back(summary.write(cfg));
  return result;
}

CommandResult cmd_stepdyn(const RunConfig& cfg) {
  CommandResult result;
  const TransferSetup setup = make_transfer_setup(cfg.transfer, cfg.seeds.at(0));
  if (setup.idx.empty()) {
    throw std::runtime_error("stepdyn: no correctly classified example");
  }
  const Point& x = setup.data.inputs[setup.idx[0]];
  const int y = setup.data.labels[setup.idx[0]];
  if (cfg.attack.tracked_coord >= x.size()) {
    throw ConfigError("tracked_coord " +
                      std::to_string(cfg.attack.tracked_coord) +
                      " out of range for dim " + std::to_string(x.size()));
  }
  const GradientOracle oracle = classifier_attack_oracle(setup.surrogate, x, y);
  const BoxConstraint box(x, cfg.attack.epsilon, 0.0, 1.0);

  auto tracked_column = [&](Algorithm alg, StepSchedule schedule) {
    AttackConfig acfg = cfg.attack;
    acfg.algorithm = alg;
    acfg.schedule = schedule;
    if (alg != Algorithm::MdcsMi) acfg.gamma = 1.0;
    const Trajectory traj = run(alg, oracle, box, acfg);
    std::vector<double> column;
    for (const StepRecord& rec : traj.step_records) {
      column.push_back(rec.step_tracked);
    }
    return column;
  };

  const auto ifgsm_col = tracked_column(Algorithm::Ifgsm, StepSchedule::Practice);
  const auto mi_col = tracked_column(Algorithm::MiFgsm, StepSchedule::Practice);
  const auto mdcs_col = tracked_column(Algorithm::MdcsMi, cfg.attack.schedule);

  Report table("stepdyn", {"t", "ifgsm", "mi_fgsm", "mdcs_mi"});
  for (std::size_t t = 0; t < mdcs_col.size(); ++t) {
    table.add_row({std::to_string(t + 1), fmt(ifgsm_col[t]), fmt(mi_col[t]),
                   fmt(mdcs_col[t])});
  }
  result.files.push_back(table.write(cfg));

  int mdcs_increases = 0;
  for (std::size_t t = 1; t < mdcs_col.size(); ++t) {
    if (mdcs_col[t] > mdcs_col[t - 1]) ++mdcs_increases;
  }
  int ifgsm_increases = 0;
  for (std::size_t t = 1; t < ifgsm_col.size(); ++t) {
    if (ifgsm_col[t] > ifgsm_col[t - 1]) ++ifgsm_increases;
  }
  Report verdict("stepdyn_verdict",
                 {"check", "value", "pass"});
  const bool monotone_applies = cfg.attack.schedule == StepSchedule::Theorem;
  const bool monotone_ok = !monotone_applies || mdcs_increases == 0;
  verdict.add_row({"mdcs_monotone_nonincreasing",
                   std::to_string(mdcs_increases),
                   monotone_ok ? "1" : "0"});
  verdict.add_row({"ifgsm_has_increase", std::to_string(ifgsm_increases),
                   ifgsm_increases > 0 ? "1" : "0"});
  result.files.push_back(verdict.write(cfg));
  result.exit_code = monotone_ok ? 0 : 1;
  return result;
}

CommandResult cmd_ablate(const RunConfig& cfg) {
  CommandResult result;
  const bool over_gamma = cfg.experiment == ExperimentKind::AblateGamma;
  const std::vector<double>& values =
      over_gamma ? cfg.gamma_values : cfg.eps_values;
  if (values.empty()) throw ConfigError("ablate: empty sweep grid");
  for (double v : values) {
    if (!(v > 0.0)) {
      throw ConfigError("ablate: sweep values must be positive");
    }
  }

  struct Cell {
    double asr, ald2, aldinf, psnr_db;
  };
  std::vector<Cell> cells(values.size() * cfg.seeds.size());
  parallel_for(cells.size(), [&](std::size_t job) {
    const std::size_t vi = job / cfg.seeds.size();
    const std::size_t si = job % cfg.seeds.size();
    const std::uint64_t seed = cfg.seeds[si];
    const TransferSetup setup = make_transfer_setup(cfg.transfer, seed);
    if (setup.idx.empty()) {
      throw std::runtime_error("ablate: no correctly classified example");
    }
    AttackConfig acfg = cfg.attack;
    if (over_gamma) {
      acfg.gamma = values[vi];
    } else {
      acfg.epsilon = values[vi];
    }
    const CraftResult craft =
        craft_attack(setup, cfg.attack.algorithm, acfg, seed);
    cells[job] = Cell{
        attack_success_rate(setup.target, craft.clean, craft.labels,
                            craft.adversarials),
        ald(craft.clean, craft.adversarials, DistortionNorm::Two),
        ald(craft.clean, craft.adversarials, DistortionNorm::Inf),
        psnr(craft.clean, craft.adversarials, 1.0)};
  });

  Report table("ablate", {"param", "value", "seed", "transfer_asr", "ald_2",
                          "ald_inf", "psnr"});
  const std::string param = over_gamma ? "gamma" : "epsilon";
  for (std::size_t vi = 0; vi < values.size(); ++vi) {
    for (std::size_t si = 0; si < cfg.seeds.size(); ++si) {
      const Cell& c = cells[vi * cfg.seeds.size() + si];
      table.add_row({param, fmt(values[vi]), std::to_string(cfg.seeds[si]),
                     fmt(c.asr), fmt(c.ald2), fmt(c.aldinf), fmt(c.psnr_db)});
    }
  }
  result.files.push_back(table.write(cfg));
  return result;
}

namespace {

CommandResult counterexample_oscillation(const RunConfig& cfg) {
  CommandResult result;
  const OscillationFixture fx = sign_oscillation_fixture();
  Report traj_table("counterexample_trajectory",
                    {"fixture", "algorithm", "T", "t", "x", "loss"});
  Report verdict("counterexample_verdict", {"check", "value", "pass"});

  auto ifgsm_cfg = [&](int T) {
    AttackConfig acfg = cfg.attack;
    acfg.algorithm = Algorithm::Ifgsm;
    acfg.schedule = StepSchedule::Practice;
    acfg.epsilon = fx.box.radius;
    acfg.total_iters = T;
    acfg.gamma = fx.alpha * T / fx.box.radius;  // pins alpha_t = fx.alpha
    return acfg;
  };

  bool all_ok = true;
  std::vector<Trajectory> ifgsm_runs;
  for (int T : {10, 11}) {
    const AttackConfig acfg = ifgsm_cfg(T);
    const Trajectory traj =
        run(Algorithm::Ifgsm, fx.problem.oracle, fx.box, acfg);
    for (std::size_t t = 0; t < traj.points.size(); ++t) {
      traj_table.add_row({"sign_oscillation", "ifgsm", std::to_string(T),
                          std::to_string(t), fmt(traj.points[t][0]),
                          fmt(traj.losses[t])});
    }
    const double sub = suboptimality(fx.problem, fx.box, traj,
                                     /*averaged=*/false);
    const bool ok = std::abs(sub - fx.ifgsm_suboptimality) <= 1e-12;
    all_ok = all_ok && ok;
    verdict.add_row({"ifgsm_T" + std::to_string(T) + "_suboptimality",
                     fmt(sub), ok ? "1" : "0"});
    ifgsm_runs.push_back(traj);
  }

  // Exact period-2 cycling from step 4 on (T = 11 run covers both parities).
  const Trajectory& long_run = ifgsm_runs[1];
  bool periodic = true;
  for (std::size_t t = 4; t + 2 < long_run.points.size(); ++t) {
    if (!(long_run.points[t] == long_run.points[t + 2])) periodic = false;
  }
  all_ok = all_ok && periodic;
  verdict.add_row({"ifgsm_period2_after_step4", periodic ? "1" : "0",
                   periodic ? "1" : "0"});

  AttackConfig mdcs_cfg = cfg.attack;
  mdcs_cfg.algorithm = Algorithm::MdcsMi;
  mdcs_cfg.schedule = StepSchedule::Practice;
  mdcs_cfg.epsilon = fx.box.radius;
  mdcs_cfg.total_iters = 50;
  mdcs_cfg.gamma = 1.0;
  mdcs_cfg.beta = 0.999;
  mdcs_cfg.lambda = 0.999;
  mdcs_cfg.beta_mode = BetaMode::Decay;
  const Trajectory mdcs_traj =
      run(Algorithm::MdcsMi, fx.problem.oracle, fx.box, mdcs_cfg);
  for (std::size_t t = 0; t < mdcs_traj.points.size(); ++t) {
    traj_table.add_row({"sign_oscillation", "mdcs_mi", "50", std::to_string(t),
                        fmt(mdcs_traj.points[t][0]), fmt(mdcs_traj.losses[t])});
  }
  const double mdcs_sub =
      suboptimality(fx.problem, fx.box, mdcs_traj, /*averaged=*/false);
  const bool mdcs_ok = mdcs_sub < fx.ifgsm_suboptimality;
  all_ok = all_ok && mdcs_ok;
  verdict.add_row({"mdcs_T50_suboptimality", fmt(mdcs_sub),
                   mdcs_ok ? "1" : "0"});

  result.files.push_back(traj_table.write(cfg));
  result.files.push_back(verdict.write(cfg));
  result.exit_code = all_ok ? 0 : 1;
  return result;
}

CommandResult counterexample_reddi(const RunConfig& cfg) {
  CommandResult result;
  const BoxConstraint box = reddi_box();
  Report table("counterexample_iterates",
               {"algorithm", "seed", "averaged_iterate", "last_iterate"});

  std::map<std::string, std::vector<double>> averaged;
  struct Row {
    std::string alg;
    std::uint64_t seed;
    double avg, last;
  };
  std::vector<Row> rows(cfg.algorithms.size() * cfg.seeds.size());
  parallel_for(rows.size(), [&](std::size_t job) {
    const std::size_t a = job / cfg.seeds.size();
    const std::size_t s = job % cfg.seeds.size();
    const Algorithm alg = algorithm_from_name(cfg.algorithms[a]);
    AttackConfig acfg = cfg.attack;
    acfg.algorithm = alg;
    acfg.epsilon = box.radius;
    acfg.seed = cfg.seeds[s];
    const GradientOracle oracle = reddi_counterexample(
        cfg.problem.reddi_c, cfg.problem.reddi_p, cfg.seeds[s]);
    const Trajectory traj = run(alg, oracle, box, acfg);
    rows[job] = Row{cfg.algorithms[a], cfg.seeds[s],
                    averaged_iterate(traj)[0], traj.points.back()[0]};
  });
  for (const Row& r : rows) {
    averaged[r.alg].push_back(r.avg);
    table.add_row({r.alg, std::to_string(r.seed), fmt(r.avg), fmt(r.last)});
  }
  result.files.push_back(table.write(cfg));

  Report verdict("counterexample_verdict", {"check", "value", "pass"});
  bool all_ok = true;
  const bool have_pair = averaged.count("adam") && averaged.count("amsgrad");
  if (have_pair) {
    const auto& ams = averaged.at("amsgrad");
    const auto& adam = averaged.at("adam");
    const std::size_t n = ams.size();
    const std::size_t need = (3 * n + 3) / 4;  // ceil(0.75 n)
    std::size_t ams_close = 0;
    std::size_t adam_worse = 0;
    for (std::size_t s = 0; s < n; ++s) {
      if (std::abs(1.0 - ams[s]) <= 0.2) ++ams_close;
      if (ams[s] - adam[s] >= 0.3) ++adam_worse;
    }
    const bool ok1 = ams_close >= need;
    const bool ok2 = adam_worse >= need;
    all_ok = ok1 && ok2;
    verdict.add_row({"amsgrad_within_0.2_of_optimum",
                     std::to_string(ams_close) + "/" + std::to_string(n),
                     ok1 ? "1" : "0"});
    verdict.add_row({"adam_at_least_0.3_worse",
                     std::to_string(adam_worse) + "/" + std::to_string(n),
                     ok2 ? "1" : "0"});
  }
  result.files.push_back(verdict.write(cfg));
  result.exit_code = all_ok ? 0 : 1;
  return result;
}

}  // namespace

CommandResult cmd_counterexample(const RunConfig& cfg) {
  if (cfg.fixture == "sign_oscillation") return counterexample_oscillation(cfg);
  if (cfg.fixture == "reddi") return counterexample_reddi(cfg);
  throw ConfigError("unknown fixture '" + cfg.fixture + "'");
}

CommandResult cmd_bench(const RunConfig& cfg) {
  CommandResult result;
  const BoxConstraint box = converge_box(cfg.problem, cfg.attack.epsilon);
  const ZooProblem problem =
      quadratic_oracle(converge_target(cfg.problem), cfg.problem.scale);

  Report table("bench", {"algorithm", "T", "oracle_calls", "final_loss"});
  for (const std::string& name : cfg.algorithms) {
    const Algorithm alg = algorithm_from_name(name);
    std::size_t calls = 0;
    GradientOracle counted = problem.oracle;
    const auto inner = problem.oracle.eval;
    counted.eval = [&calls, inner](const Point& z) {
      ++calls;
      return inner(z);
    };
    const auto start = std::chrono::steady_clock::now();
    const Trajectory traj = run(alg, counted, box, cfg.attack);
    const auto stop = std::chrono::steady_clock::now();
    const double ms =
        std::chrono::duration<double, std::milli>(stop - start).count();
    // Wall time goes to the console only; the report stays deterministic.
    std::cout << "bench " << name << ": " << ms << " ms\n";
    table.add_row({name, std::to_string(cfg.attack.total_iters),
                   std::to_string(calls), fmt(traj.losses.back())});
  }
  result.files.push_back(table.write(cfg));
  return result;
}

CommandResult run_command(const RunConfig& cfg) {
  switch (cfg.experiment) {
    case ExperimentKind::Converge:
      return cmd_converge(cfg);
    case ExperimentKind::Oscillate:
    case ExperimentKind::Counterexample:
      return cmd_counterexample(cfg);
    case ExperimentKind::Stability:
    case ExperimentKind::Transfer:
      return cmd_stability(cfg);
    case ExperimentKind::AblateGamma:
    case ExperimentKind::AblateEps:
      return cmd_ablate(cfg);
    case ExperimentKind::Bench:
      return cmd_bench(cfg);
    case ExperimentKind::StepDyn:
      return cmd_stepdyn(cfg);
  }
  throw ConfigError("unhandled experiment kind");
}

}  // namespace mdcs
