#include "mdcs/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mdcs {

namespace {

constexpr double kAdamFloor = 1e-12;
constexpr std::uint64_t kStreamPgdInit = 101;
constexpr std::uint64_t kStreamMefSampling = 102;
constexpr std::uint64_t kStreamOpsSampling = 103;

void summarize_steps(StepRecord* rec, const std::vector<double>& steps,
                     std::size_t tracked) {
  if (rec == nullptr) return;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  double sum = 0.0;
  std::size_t finite = 0;
  for (double s : steps) {
    if (!std::isfinite(s)) continue;
    lo = std::min(lo, s);
    hi = std::max(hi, s);
    sum += s;
    ++finite;
  }
  rec->step_min = finite ? lo : 0.0;
  rec->step_max = hi;
  rec->step_mean = finite ? sum / static_cast<double>(finite) : 0.0;
  rec->step_tracked = tracked < steps.size() ? steps[tracked] : 0.0;
}

int count_clamped(const Point& proposed, const Point& projected) {
  int n = 0;
  for (std::size_t i = 0; i < proposed.size(); ++i) {
    if (proposed[i] != projected[i]) ++n;
  }
  return n;
}

// Proposed displacement for the capped methods, given the already-updated
// momentum. Per coordinate the magnitude is alpha * min(1, |m| * d_prev),
// which equals alpha * d_new * |m| in exact arithmetic but can never exceed
// alpha even after rounding; the sign m/|m| is exact. The caps d are updated
// in place to min(1/|m|, d_prev) and left untouched where m is zero, so they
// stay monotone and the frozen coordinate receives no displacement.
void capped_displacement(const Point& m, Point& d, double alpha, bool clamp,
                         Point& disp) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double mi = m[i];
    if (mi == 0.0) {
      disp[i] = 0.0;
      continue;
    }
    const double ami = std::abs(mi);
    const double s = mi / ami;
    double mag;
    if (clamp) {
      mag = std::min(1.0, ami * d[i]);
      d[i] = std::min(1.0 / ami, d[i]);
    } else {
      mag = 1.0;
      d[i] = 1.0 / ami;
    }
    disp[i] = alpha * (s * mag);
  }
}

Point sign_step(const Point& x, const Point& direction, double alpha,
                const BoxConstraint& box, StepRecord* rec) {
  Point proposed = x;
  const Point s = sign(direction);
  for (std::size_t i = 0; i < x.size(); ++i) {
    proposed[i] = x[i] + alpha * s[i];
  }
  Point next = clip(box, proposed);
  if (rec != nullptr) rec->clamped_coords = count_clamped(proposed, next);
  return next;
}

std::vector<double> reciprocal_steps(double alpha, const Point& v) {
  std::vector<double> steps(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    steps[i] = a == 0.0 ? std::numeric_limits<double>::infinity() : alpha / a;
  }
  return steps;
}

}  // namespace

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::Fgsm: return "fgsm";
    case Algorithm::Ifgsm: return "ifgsm";
    case Algorithm::Pgd: return "pgd";
    case Algorithm::MiFgsm: return "mi_fgsm";
    case Algorithm::MdcsMi: return "mdcs_mi";
    case Algorithm::Adam: return "adam";
    case Algorithm::Amsgrad: return "amsgrad";
    case Algorithm::MdcsMef: return "mdcs_mef";
    case Algorithm::MdcsOps: return "mdcs_ops";
  }
  return "unknown";
}

Algorithm algorithm_from_name(const std::string& name) {
  for (Algorithm a :
       {Algorithm::Fgsm, Algorithm::Ifgsm, Algorithm::Pgd, Algorithm::MiFgsm,
        Algorithm::MdcsMi, Algorithm::Adam, Algorithm::Amsgrad,
        Algorithm::MdcsMef, Algorithm::MdcsOps}) {
    if (algorithm_name(a) == name) return a;
  }
  throw std::invalid_argument("unknown algorithm '" + name + "'");
}

void AttackConfig::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("config: epsilon must be > 0");
  if (total_iters < 0) throw std::invalid_argument("config: total_iters must be >= 0");
  if (!(gamma > 0.0)) throw std::invalid_argument("config: gamma must be > 0");
  if (!(beta > 0.0)) throw std::invalid_argument("config: beta must be > 0");
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw std::invalid_argument("config: lambda must be in (0, 1)");
  }
  if (!(mu >= 0.0)) throw std::invalid_argument("config: mu must be >= 0");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) ||
      !(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
    throw std::invalid_argument("config: adam betas must be in [0, 1)");
  }
}

double AttackConfig::step_size(int t) const {
  if (schedule == StepSchedule::Practice) {
    return epsilon * gamma / static_cast<double>(total_iters);
  }
  return gamma / std::sqrt(static_cast<double>(t));
}

double AttackConfig::momentum_decay(int t) const {
  if (beta_mode == BetaMode::Constant) return mu;
  return beta * std::pow(lambda, t - 1);
}

OptimizerState OptimizerState::init(std::size_t dim) {
  OptimizerState st;
  st.m = Point(dim, 0.0);
  st.d = Point(dim, 1.0);
  st.v = Point(dim, 0.0);
  st.v_hat = Point(dim, 0.0);
  st.iter = 0;
  return st;
}

OperatorSet builtin_operators(double magnitude) {
  OperatorSet ops;
  ops.push_back({"identity", [](const Point& x, SeededRng&) { return x; }});
  ops.push_back({"add_noise", [magnitude](const Point& x, SeededRng& rng) {
                   Point out = x;
                   for (double& v : out) v += rng.uniform(-magnitude, magnitude);
                   return out;
                 }});
  ops.push_back({"scale_coords", [magnitude](const Point& x, SeededRng& rng) {
                   Point out = x;
                   for (double& v : out) {
                     v *= 1.0 + rng.uniform(-magnitude, magnitude);
                   }
                   return out;
                 }});
  const double mask_prob = std::min(0.5, magnitude);
  ops.push_back({"mask_coords", [mask_prob](const Point& x, SeededRng& rng) {
                   Point out = x;
                   for (double& v : out) {
                     if (rng.uniform() < mask_prob) v = 0.0;
                   }
                   return out;
                 }});
  return ops;
}

Point fgsm(const GradientOracle& oracle, const BoxConstraint& box,
           const AttackConfig& cfg) {
  if (cfg.epsilon != box.radius) {
    throw std::invalid_argument("fgsm: cfg.epsilon must equal box.radius");
  }
  const LossGrad lg = oracle.eval(box.center);
  return sign_step(box.center, lg.grad, cfg.epsilon, box, nullptr);
}

Point pgd_init(const BoxConstraint& box, SeededRng& rng) {
  Point x = box.center;
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = box.center[i] + rng.uniform(-box.radius, box.radius);
    x[i] = std::clamp(x[i], box.value_lo, box.value_hi);
  }
  return x;
}

Point ifgsm_step(OptimizerState& state, const Point& x, const Point& grad,
                 const BoxConstraint& box, const AttackConfig& cfg,
                 StepRecord* rec) {
  const int t = state.iter + 1;
  const double alpha = cfg.step_size(t);
  if (rec != nullptr) {
    rec->iter = t;
    rec->alpha = alpha;
    summarize_steps(rec, reciprocal_steps(alpha, grad), cfg.tracked_coord);
  }
  state.iter = t;
  return sign_step(x, grad, alpha, box, rec);
}

Point mi_step(OptimizerState& state, const Point& x, const Point& grad,
              const BoxConstraint& box, const AttackConfig& cfg,
              StepRecord* rec) {
  const int t = state.iter + 1;
  const double alpha = cfg.step_size(t);
  const Point g_hat = l1_normalize(grad);
  for (std::size_t i = 0; i < state.m.size(); ++i) {
    state.m[i] = cfg.mu * state.m[i] + g_hat[i];
  }
  if (rec != nullptr) {
    rec->iter = t;
    rec->alpha = alpha;
    summarize_steps(rec, reciprocal_steps(alpha, state.m), cfg.tracked_coord);
  }
  state.iter = t;
  return sign_step(x, state.m, alpha, box, rec);
}

Point mdcs_mi_step(OptimizerState& state, const Point& x, const Point& grad,
                   const BoxConstraint& box, const AttackConfig& cfg,
                   StepRecord* rec, RunAudit* audit) {
  const int t = state.iter + 1;
  const double alpha = cfg.step_size(t);
  const double beta_t = cfg.momentum_decay(t);
  const Point g_hat = l1_normalize(grad);
  for (std::size_t i = 0; i < state.m.size(); ++i) {
    state.m[i] = beta_t * state.m[i] + g_hat[i];
  }

  const Point d_prev = state.d;
  Point disp(x.size());
  capped_displacement(state.m, state.d, alpha, cfg.mdcs_clamp, disp);

  if (audit != nullptr) {
    audit->m_inf_max = std::max(audit->m_inf_max, linf_norm(state.m));
    for (std::size_t i = 0; i < state.d.size(); ++i) {
      audit->d_min = std::min(audit->d_min, state.d[i]);
      if (state.d[i] > d_prev[i]) ++audit->d_monotone_violations;
      if (cfg.mdcs_clamp && (state.d[i] > 1.0 || !(state.d[i] > 0.0))) {
        ++audit->d_range_violations;
      }
      if (std::abs(disp[i]) > alpha) ++audit->displacement_violations;
    }
  }

  Point proposed = x;
  for (std::size_t i = 0; i < x.size(); ++i) proposed[i] = x[i] + disp[i];
  Point next = project_diag(box, DiagScaling(state.d), proposed);

  if (rec != nullptr) {
    rec->iter = t;
    rec->alpha = alpha;
    std::vector<double> steps(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) steps[i] = alpha * state.d[i];
    summarize_steps(rec, steps, cfg.tracked_coord);
    rec->clamped_coords = count_clamped(proposed, next);
  }
  state.iter = t;
  return next;
}

namespace {

Point adaptive_step(OptimizerState& state, const Point& x, const Point& grad,
                    const BoxConstraint& box, const AttackConfig& cfg,
                    StepRecord* rec, bool running_max) {
  const int t = state.iter + 1;
  const double alpha = cfg.step_size(t);
  const double b1 = cfg.adam_beta1;
  const double b2 = cfg.adam_beta2;
  Point proposed = x;
  std::vector<double> steps(x.size());
  Point scaling(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    state.m[i] = b1 * state.m[i] + (1.0 - b1) * grad[i];
    state.v[i] = b2 * state.v[i] + (1.0 - b2) * grad[i] * grad[i];
    if (running_max) state.v_hat[i] = std::max(state.v_hat[i], state.v[i]);
    const double second = running_max ? state.v_hat[i] : state.v[i];
    const double denom = std::sqrt(second) + kAdamFloor;
    steps[i] = alpha / denom;
    scaling[i] = denom * denom;
    proposed[i] = x[i] + alpha * (state.m[i] / denom);
  }
  Point next = project_diag(box, DiagScaling(scaling), proposed);
  if (rec != nullptr) {
    rec->iter = t;
    rec->alpha = alpha;
    summarize_steps(rec, steps, cfg.tracked_coord);
    rec->clamped_coords = count_clamped(proposed, next);
  }
  state.iter = t;
  return next;
}

}  // namespace

Point adam_step(OptimizerState& state, const Point& x, const Point& grad,
                const BoxConstraint& box, const AttackConfig& cfg,
                StepRecord* rec) {
  return adaptive_step(state, x, grad, box, cfg, rec, /*running_max=*/false);
}

Point amsgrad_step(OptimizerState& state, const Point& x, const Point& grad,
                   const BoxConstraint& box, const AttackConfig& cfg,
                   StepRecord* rec) {
  return adaptive_step(state, x, grad, box, cfg, rec, /*running_max=*/true);
}

namespace {

// Common bookkeeping for the capped sampled-gradient runs (MEF/OPS): momentum
// already updated by the caller, applies the capped displacement, projects,
// records, audits and appends to the trajectory.
Point capped_advance(OptimizerState& state, const Point& x,
                     const BoxConstraint& box, const AttackConfig& cfg, int t,
                     Trajectory& traj) {
  const double alpha = cfg.step_size(t);
  const Point d_prev = state.d;
  Point disp(x.size());
  capped_displacement(state.m, state.d, alpha, /*clamp=*/true, disp);

  RunAudit& audit = traj.audit;
  audit.m_inf_max = std::max(audit.m_inf_max, linf_norm(state.m));
  for (std::size_t i = 0; i < state.d.size(); ++i) {
    audit.d_min = std::min(audit.d_min, state.d[i]);
    if (state.d[i] > d_prev[i]) ++audit.d_monotone_violations;
    if (state.d[i] > 1.0 || !(state.d[i] > 0.0)) ++audit.d_range_violations;
    if (std::abs(disp[i]) > alpha) ++audit.displacement_violations;
  }

  Point proposed = x;
  for (std::size_t i = 0; i < x.size(); ++i) proposed[i] = x[i] + disp[i];
  Point next = project_diag(box, DiagScaling(state.d), proposed);

  StepRecord rec;
  rec.iter = t;
  rec.alpha = alpha;
  std::vector<double> steps(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) steps[i] = alpha * state.d[i];
  summarize_steps(&rec, steps, cfg.tracked_coord);
  rec.clamped_coords = count_clamped(proposed, next);

  if (!membership(box, next)) ++audit.membership_violations;
  traj.points.push_back(next);
  traj.step_records.push_back(rec);
  state.iter = t;
  return next;
}

}  // namespace

Trajectory mdcs_mef_run(const GradientOracle& oracle, const BoxConstraint& box,
                        const AttackConfig& cfg, const MefParams& mef) {
  cfg.validate();
  if (mef.n_samples < 1) {
    throw std::invalid_argument("mdcs_mef_run: n_samples must be >= 1");
  }
  if (mef.xi < 0.0 || mef.explore_radius < 0.0) {
    throw std::invalid_argument("mdcs_mef_run: radii must be nonnegative");
  }
  SeededRng rng(cfg.seed, kStreamMefSampling);

  Trajectory traj;
  traj.config = cfg;
  traj.config.algorithm = Algorithm::MdcsMef;

  const std::size_t dim = box.dim();
  OptimizerState state = OptimizerState::init(dim);
  std::vector<Point> inner(static_cast<std::size_t>(mef.n_samples),
                           Point(dim, 0.0));
  Point x = box.center;
  traj.points.push_back(x);

  for (int t = 1; t <= cfg.total_iters; ++t) {
    LossGrad at_x;
    try {
      at_x = oracle.eval(x);
    } catch (const std::exception&) {
      traj.valid = false;
      return traj;
    }
    traj.losses.push_back(at_x.loss);
    traj.audit.grad_l1_max =
        std::max(traj.audit.grad_l1_max, l1_norm(at_x.grad));

    Point outer_accum(dim, 0.0);
    for (int n = 0; n < mef.n_samples; ++n) {
      Point probe = x;
      for (std::size_t i = 0; i < dim; ++i) {
        probe[i] = x[i] + rng.uniform(-mef.explore_radius, mef.explore_radius);
      }
      const Point inner_sign = sign(inner[n]);
      for (std::size_t i = 0; i < dim; ++i) {
        probe[i] += mef.xi * inner_sign[i];
      }
      LossGrad lg;
      try {
        lg = oracle.eval(probe);
      } catch (const std::exception&) {
        traj.valid = false;
        return traj;
      }
      traj.audit.grad_l1_max =
          std::max(traj.audit.grad_l1_max, l1_norm(lg.grad));
      const Point g_hat = l1_normalize(lg.grad);
      for (std::size_t i = 0; i < dim; ++i) {
        inner[n][i] = g_hat[i] - mef.mu_inner * inner[n][i];
        outer_accum[i] += g_hat[i];
      }
    }
    for (std::size_t i = 0; i < dim; ++i) {
      state.m[i] = mef.mu_outer * state.m[i] +
                   outer_accum[i] / static_cast<double>(mef.n_samples);
    }
    x = capped_advance(state, x, box, cfg, t, traj);
  }

  try {
    traj.losses.push_back(oracle.eval(x).loss);
  } catch (const std::exception&) {
    traj.valid = false;
  }
  return traj;
}

Trajectory mdcs_ops_run(const GradientOracle& oracle, const BoxConstraint& box,
                        const AttackConfig& cfg, const OpsParams& ops,
                        const OperatorSet& operators) {
  cfg.validate();
  if (ops.n_ops < 0 || ops.n_perturb < 0 || ops.perturb_radius < 0.0) {
    throw std::invalid_argument("mdcs_ops_run: parameters must be nonnegative");
  }
  if (ops.n_ops > 0 && operators.empty()) {
    throw std::invalid_argument(
        "mdcs_ops_run: operator set is empty but n_ops > 0");
  }
  SeededRng rng(cfg.seed, kStreamOpsSampling);

  Trajectory traj;
  traj.config = cfg;
  traj.config.algorithm = Algorithm::MdcsOps;

  const std::size_t dim = box.dim();
  OptimizerState state = OptimizerState::init(dim);
  Point x = box.center;
  traj.points.push_back(x);

  const int total = ops.n_perturb * ops.n_ops + 1;
  for (int t = 1; t <= cfg.total_iters; ++t) {
    LossGrad at_x;
    try {
      at_x = oracle.eval(x);
    } catch (const std::exception&) {
      traj.valid = false;
      return traj;
    }
    traj.losses.push_back(at_x.loss);
    traj.audit.grad_l1_max =
        std::max(traj.audit.grad_l1_max, l1_norm(at_x.grad));

    Point g_bar = at_x.grad;
    for (int e = 0; e < ops.n_perturb; ++e) {
      Point shifted = x;
      for (std::size_t i = 0; i < dim; ++i) {
        shifted[i] =
            x[i] + rng.uniform(-ops.perturb_radius, ops.perturb_radius);
      }
      for (int p = 0; p < ops.n_ops; ++p) {
        const InputOperator& op = operators[rng.uniform_int(operators.size())];
        const Point transformed = op.apply(shifted, rng);
        LossGrad lg;
        try {
          lg = oracle.eval(transformed);
        } catch (const std::exception&) {
          traj.valid = false;
          return traj;
        }
        traj.audit.grad_l1_max =
            std::max(traj.audit.grad_l1_max, l1_norm(lg.grad));
        for (std::size_t i = 0; i < dim; ++i) g_bar[i] += lg.grad[i];
      }
    }
    for (std::size_t i = 0; i < dim; ++i) {
      g_bar[i] /= static_cast<double>(total);
    }
    const Point g_hat = l1_normalize(g_bar);
    for (std::size_t i = 0; i < dim; ++i) {
      state.m[i] = cfg.mu * state.m[i] + g_hat[i];
    }
    x = capped_advance(state, x, box, cfg, t, traj);
  }

  try {
    traj.losses.push_back(oracle.eval(x).loss);
  } catch (const std::exception&) {
    traj.valid = false;
  }
  return traj;
}

Trajectory run(Algorithm algorithm, const GradientOracle& oracle,
               const BoxConstraint& box, const AttackConfig& cfg) {
  cfg.validate();
  if (cfg.epsilon != box.radius) {
    throw std::invalid_argument("run: cfg.epsilon must equal box.radius");
  }
  if (algorithm == Algorithm::MdcsMef) {
    return mdcs_mef_run(oracle, box, cfg, cfg.mef);
  }
  if (algorithm == Algorithm::MdcsOps) {
    return mdcs_ops_run(oracle, box, cfg, cfg.ops,
                        builtin_operators(cfg.epsilon));
  }

  Trajectory traj;
  traj.config = cfg;
  traj.config.algorithm = algorithm;

  Point x = box.center;
  if (algorithm == Algorithm::Pgd) {
    SeededRng rng(cfg.seed, kStreamPgdInit);
    x = pgd_init(box, rng);
  }
  OptimizerState state = OptimizerState::init(box.dim());
  traj.points.push_back(x);
  if (!membership(box, x)) ++traj.audit.membership_violations;

  const int iters = algorithm == Algorithm::Fgsm ? std::min(1, cfg.total_iters)
                                                 : cfg.total_iters;
  for (int t = 1; t <= iters; ++t) {
    LossGrad lg;
    try {
      lg = oracle.eval(x);
    } catch (const std::exception&) {
      traj.valid = false;
      return traj;
    }
    traj.losses.push_back(lg.loss);
    traj.audit.grad_l1_max =
        std::max(traj.audit.grad_l1_max, l1_norm(lg.grad));

    StepRecord rec;
    switch (algorithm) {
      case Algorithm::Fgsm:
        rec.iter = t;
        rec.alpha = cfg.epsilon;
        summarize_steps(&rec, reciprocal_steps(cfg.epsilon, lg.grad),
                        cfg.tracked_coord);
        x = sign_step(x, lg.grad, cfg.epsilon, box, &rec);
        state.iter = t;
        break;
      case Algorithm::Ifgsm:
      case Algorithm::Pgd:
        x = ifgsm_step(state, x, lg.grad, box, cfg, &rec);
        break;
      case Algorithm::MiFgsm:
        x = mi_step(state, x, lg.grad, box, cfg, &rec);
        break;
      case Algorithm::MdcsMi:
        x = mdcs_mi_step(state, x, lg.grad, box, cfg, &rec, &traj.audit);
        break;
      case Algorithm::Adam:
        x = adam_step(state, x, lg.grad, box, cfg, &rec);
        break;
      case Algorithm::Amsgrad:
        x = amsgrad_step(state, x, lg.grad, box, cfg, &rec);
        break;
      default:
        throw std::logic_error("run: unhandled algorithm");
    }
    if (!membership(box, x)) ++traj.audit.membership_violations;
    traj.points.push_back(x);
    traj.step_records.push_back(rec);
  }

  try {
    traj.losses.push_back(oracle.eval(x).loss);
  } catch (const std::exception&) {
    traj.valid = false;
  }
  return traj;
}

Point averaged_iterate(const Trajectory& traj) {
  if (traj.points.size() < 2) {
    throw std::invalid_argument(
        "averaged_iterate: trajectory contains no iterates");
  }
  const std::size_t dim = traj.points[0].size();
  const std::size_t n = traj.points.size() - 1;
  Point mean(dim, 0.0);
  std::vector<double> comp(dim, 0.0);
  for (std::size_t k = 1; k < traj.points.size(); ++k) {
    for (std::size_t i = 0; i < dim; ++i) {
      const double y = traj.points[k][i] - comp[i];
      const double t = mean[i] + y;
      comp[i] = (t - mean[i]) - y;
      mean[i] = t;
    }
  }
  for (std::size_t i = 0; i < dim; ++i) {
    mean[i] /= static_cast<double>(n);
  }
  return mean;
}

}  // namespace mdcs
