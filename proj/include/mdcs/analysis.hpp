#pragma once

#include <map>
#include <vector>

#include "mdcs/optimizers.hpp"
#include "mdcs/problems.hpp"

namespace mdcs {

/// Constants entering the convergence bound. M is the gradient L1 bound
/// (observed or assumed), M2 = 1 + beta/(1 - lambda) the momentum bound, G
/// the L2 diameter of the feasible set.
struct TheoremConstants {
  double M = 1.0;
  double M2 = 1.0;
  double G = 1.0;
  std::size_t dim = 1;
  double gamma = 1.0;
  double beta = 0.999;
  double lambda = 0.999;
};

/// Constants for a run: M from the observed max ||grad||_1, M2 from the
/// closed-form geometric sum, G = 2 eps sqrt(dim) (the exact box diameter
/// when the global bounds do not bind).
TheoremConstants measured_constants(double observed_grad_l1_max,
                                    const AttackConfig& cfg,
                                    const BoxConstraint& box);

struct BoundPair {
  /// The bound exactly as typeset: the middle term is T-independent.
  double printed;
  /// Same expression with the middle term divided by T, which restores the
  /// 1/sqrt(T) decay the surrounding derivation implies. Used for acceptance.
  double corrected;
};

BoundPair theorem_bound(const TheoremConstants& k, int T);

/// J(x*) - J at the averaged (default) or last iterate; requires a problem
/// whose constrained maximizer is known in closed form.
double suboptimality(const ZooProblem& problem, const BoxConstraint& box,
                     const Trajectory& traj, bool averaged = true);

struct RateFit {
  double exponent = 0.0;
  double coefficient = 0.0;
  double r_squared = 0.0;
  std::size_t n_used = 0;
};

/// Least-squares power-law fit on (log T, log suboptimality). Entries that
/// are nonpositive or below 1e-14 (machine-noise floor) are dropped; fewer
/// than 5 survivors is an error.
RateFit fit_rate(const std::map<int, double>& subopt_by_T);

/// Fraction of adversarials the target model misclassifies. Precondition:
/// the clean examples are all correctly classified by the target.
double attack_success_rate(const ToyClassifier& target,
                           const std::vector<Point>& examples,
                           const std::vector<int>& labels,
                           const std::vector<Point>& adversarials);

enum class DistortionNorm { Two, Inf };

/// Mean over the batch of ||adv - clean||_p.
double ald(const std::vector<Point>& clean, const std::vector<Point>& adv,
           DistortionNorm p);

/// 10 log10(peak^2 / MSE) over the batch; +infinity when the batches are
/// identical (distinct return, not an error).
double psnr(const std::vector<Point>& clean, const std::vector<Point>& adv,
            double peak);

struct StabilityReport {
  std::map<int, double> asr_by_T;
  double peak = 0.0;
  double trough = 0.0;
  double max_drawdown = 0.0;  // running peak minus later trough
};

/// Drawdown statistics of an ASR-vs-budget curve (keys ascending).
StabilityReport stability_report(const std::map<int, double>& asr_by_T);

/// Reruns the attack from scratch at each budget via the callback and
/// summarizes the resulting curve.
StabilityReport stability_sweep(const std::function<double(int)>& asr_for_T,
                                const std::vector<int>& t_values);

/// Secant test on the gradient along a trajectory: counts consecutive pairs
/// with <grad(x2) - grad(x1), x2 - x1> > tol, which a concave objective
/// never produces. Reported, never asserted.
int concavity_violations(const GradientOracle& oracle, const Trajectory& traj,
                         double tol = 1e-10);

}  // namespace mdcs
