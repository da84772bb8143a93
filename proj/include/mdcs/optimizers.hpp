#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mdcs/constraints.hpp"
#include "mdcs/point.hpp"
#include "mdcs/problems.hpp"
#include "mdcs/rng.hpp"

namespace mdcs {

enum class Algorithm {
  Fgsm,
  Ifgsm,
  Pgd,
  MiFgsm,
  MdcsMi,
  Adam,
  Amsgrad,
  MdcsMef,
  MdcsOps,
};

std::string algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

/// Practice: the constant eps*gamma/T used in experiments.
/// Theorem: the decaying gamma/sqrt(t) used in the convergence analysis.
enum class StepSchedule { Practice, Theorem };

/// Momentum factor for the capped methods: the decaying beta*lambda^(t-1)
/// schedule the analysis assumes, or a constant mu as in the momentum
/// baseline. Both parameterizations are exposed.
enum class BetaMode { Decay, Constant };

struct MefParams {
  int n_samples = 8;
  double xi = 0.0;
  double explore_radius = 0.0;
  double mu_inner = 0.0;
  double mu_outer = 0.999;
};

struct OpsParams {
  int n_ops = 0;
  int n_perturb = 0;
  double perturb_radius = 0.0;
};

/// An input transformation applied before a gradient evaluation; draws any
/// randomness from the supplied stream.
struct InputOperator {
  std::string name;
  std::function<Point(const Point&, SeededRng&)> apply;
};
using OperatorSet = std::vector<InputOperator>;

/// Built-in transformations: identity, additive noise, coordinate scaling
/// and coordinate masking, all parameterized by one magnitude.
OperatorSet builtin_operators(double magnitude);

struct AttackConfig {
  double epsilon = 16.0 / 255.0;
  int total_iters = 10;
  double gamma = 1.0;
  double beta = 0.999;
  double lambda = 0.999;
  double mu = 1.0;
  StepSchedule schedule = StepSchedule::Practice;
  BetaMode beta_mode = BetaMode::Decay;
  Algorithm algorithm = Algorithm::MdcsMi;
  std::uint64_t seed = 0;
  std::size_t tracked_coord = 0;

  /// Off-switch for the running-minimum cap; used only by the equivalence
  /// diagnostics, never by experiments.
  bool mdcs_clamp = true;

  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;

  MefParams mef;
  OpsParams ops;

  void validate() const;

  /// alpha_t for 1-based iteration t.
  double step_size(int t) const;

  /// beta_t for 1-based iteration t (Decay: beta*lambda^(t-1); Constant: mu).
  double momentum_decay(int t) const;
};

struct OptimizerState {
  Point m;      // momentum
  Point d;      // per-coordinate step caps, nonincreasing from 1
  Point v;      // second-moment diagonal
  Point v_hat;  // running max of v
  int iter = 0; // completed steps

  static OptimizerState init(std::size_t dim);
};

/// Per-iteration summary of the effective per-coordinate step sizes plus the
/// raw value of one tracked coordinate.
struct StepRecord {
  int iter = 0;
  double alpha = 0.0;
  double step_min = 0.0;
  double step_max = 0.0;
  double step_mean = 0.0;
  double step_tracked = 0.0;
  int clamped_coords = 0;  // projection events this iteration
};

/// Counters accumulated while a run executes; all violation counts must stay
/// zero for the capped methods.
struct RunAudit {
  double m_inf_max = 0.0;
  double d_min = 1.0;
  double grad_l1_max = 0.0;  // observed bound on ||grad||_1
  int d_monotone_violations = 0;
  int d_range_violations = 0;
  int displacement_violations = 0;
  int membership_violations = 0;
};

struct Trajectory {
  std::vector<Point> points;   // length T+1, points[0] is the start
  std::vector<double> losses;  // length T+1, evaluated at each point
  std::vector<StepRecord> step_records;  // length T
  AttackConfig config;
  RunAudit audit;
  bool valid = true;  // false if the oracle failed mid-run
};

/// Single full-budget step: clip(box, x + eps * sign(grad J(x))).
Point fgsm(const GradientOracle& oracle, const BoxConstraint& box,
           const AttackConfig& cfg);

/// Uniform start in the eps-ball around the center, then clamped to the
/// global value bounds.
Point pgd_init(const BoxConstraint& box, SeededRng& rng);

// One update of each iterative rule. `x` is the current iterate and `grad`
// the oracle gradient at it; `state.iter` counts completed steps and is
// advanced by the call. Effective per-coordinate step sizes are written to
// `rec` when non-null.
Point ifgsm_step(OptimizerState& state, const Point& x, const Point& grad,
                 const BoxConstraint& box, const AttackConfig& cfg,
                 StepRecord* rec = nullptr);
Point mi_step(OptimizerState& state, const Point& x, const Point& grad,
              const BoxConstraint& box, const AttackConfig& cfg,
              StepRecord* rec = nullptr);
Point mdcs_mi_step(OptimizerState& state, const Point& x, const Point& grad,
                   const BoxConstraint& box, const AttackConfig& cfg,
                   StepRecord* rec = nullptr, RunAudit* audit = nullptr);
Point adam_step(OptimizerState& state, const Point& x, const Point& grad,
                const BoxConstraint& box, const AttackConfig& cfg,
                StepRecord* rec = nullptr);
Point amsgrad_step(OptimizerState& state, const Point& x, const Point& grad,
                   const BoxConstraint& box, const AttackConfig& cfg,
                   StepRecord* rec = nullptr);

/// Sampled-neighborhood variant: per iteration, N points are drawn uniformly
/// in the explore ball around the iterate, offset by xi * sign of their slot's
/// inner momentum, and their normalized gradients are averaged into an outer
/// momentum that drives the capped update.
Trajectory mdcs_mef_run(const GradientOracle& oracle, const BoxConstraint& box,
                        const AttackConfig& cfg, const MefParams& mef);

/// Operator-sampling variant: the gradient at the iterate is averaged with
/// gradients at n_perturb x n_ops transformed points, then fed through the
/// capped momentum update.
Trajectory mdcs_ops_run(const GradientOracle& oracle, const BoxConstraint& box,
                        const AttackConfig& cfg, const OpsParams& ops,
                        const OperatorSet& operators);

/// Uniform driver: T steps of the configured rule from the box center (or a
/// random start for Pgd), recording loss, point and step summaries each
/// iteration. An oracle failure aborts with the partial trajectory flagged
/// invalid.
Trajectory run(Algorithm algorithm, const GradientOracle& oracle,
               const BoxConstraint& box, const AttackConfig& cfg);

/// Arithmetic mean of iterates 1..T (the start point excluded).
Point averaged_iterate(const Trajectory& traj);

}  // namespace mdcs
