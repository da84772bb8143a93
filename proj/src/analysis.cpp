#include "mdcs/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mdcs {

TheoremConstants measured_constants(double observed_grad_l1_max,
                                    const AttackConfig& cfg,
                                    const BoxConstraint& box) {
  TheoremConstants k;
  k.M = observed_grad_l1_max;
  k.M2 = 1.0 + cfg.beta / (1.0 - cfg.lambda);
  k.G = 2.0 * box.radius * std::sqrt(static_cast<double>(box.dim()));
  k.dim = box.dim();
  k.gamma = cfg.gamma;
  k.beta = cfg.beta;
  k.lambda = cfg.lambda;
  return k;
}

BoundPair theorem_bound(const TheoremConstants& k, int T) {
  if (T < 1) throw std::invalid_argument("theorem_bound: T must be >= 1");
  const double d = static_cast<double>(k.dim);
  const double sqrt_t = std::sqrt(static_cast<double>(T));
  const double first = d * k.M2 * k.G * k.G / (2.0 * k.gamma * sqrt_t);
  const double middle =
      k.beta * k.G * k.G / (2.0 * k.gamma * (1.0 - k.lambda) * (1.0 - k.lambda));
  const double third = 2.0 * k.gamma * k.M2 * k.M2 / sqrt_t;
  return BoundPair{k.M * (first + middle + third),
                   k.M * (first + middle / static_cast<double>(T) + third)};
}

double suboptimality(const ZooProblem& problem, const BoxConstraint& box,
                     const Trajectory& traj, bool averaged) {
  if (!problem.argmax) {
    throw std::invalid_argument(
        "suboptimality: oracle has no closed-form optimum");
  }
  const Point best = problem.argmax(box);
  const double j_star = problem.oracle.eval(best).loss;
  const Point at = averaged ? averaged_iterate(traj) : traj.points.back();
  return j_star - problem.oracle.eval(at).loss;
}

RateFit fit_rate(const std::map<int, double>& subopt_by_T) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& [t, s] : subopt_by_T) {
    if (!(s > 1e-14)) continue;  // below machine-noise floor
    xs.push_back(std::log(static_cast<double>(t)));
    ys.push_back(std::log(s));
  }
  if (xs.size() < 5) {
    throw std::runtime_error(
        "fit_rate: fewer than 5 positive suboptimality values");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  RateFit fit;
  fit.exponent = sxy / sxx;
  fit.coefficient = std::exp(my - fit.exponent * mx);
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double pred = my + fit.exponent * (xs[i] - mx);
    ss_res += (ys[i] - pred) * (ys[i] - pred);
  }
  fit.r_squared = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
  fit.n_used = xs.size();
  return fit;
}

double attack_success_rate(const ToyClassifier& target,
                           const std::vector<Point>& examples,
                           const std::vector<int>& labels,
                           const std::vector<Point>& adversarials) {
  if (examples.empty()) {
    throw std::invalid_argument("attack_success_rate: empty example set");
  }
  if (examples.size() != labels.size() ||
      examples.size() != adversarials.size()) {
    throw std::invalid_argument("attack_success_rate: batch size mismatch");
  }
  for (std::size_t i = 0; i < examples.size(); ++i) {
    if (target.predict(examples[i]) != labels[i]) {
      throw std::invalid_argument(
          "attack_success_rate: clean example not correctly classified by "
          "the target");
    }
  }
  std::size_t fooled = 0;
  for (std::size_t i = 0; i < adversarials.size(); ++i) {
    if (target.predict(adversarials[i]) != labels[i]) ++fooled;
  }
  return static_cast<double>(fooled) / static_cast<double>(examples.size());
}

double ald(const std::vector<Point>& clean, const std::vector<Point>& adv,
           DistortionNorm p) {
  if (clean.size() != adv.size() || clean.empty()) {
    throw std::invalid_argument("ald: batches must be nonempty and equal length");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < clean.size(); ++k) {
    require_same_size(clean[k], adv[k], "ald");
    Point diff = adv[k];
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= clean[k][i];
    sum += p == DistortionNorm::Two ? l2_norm(diff) : linf_norm(diff);
  }
  return sum / static_cast<double>(clean.size());
}

double psnr(const std::vector<Point>& clean, const std::vector<Point>& adv,
            double peak) {
  if (clean.size() != adv.size() || clean.empty()) {
    throw std::invalid_argument("psnr: batches must be nonempty and equal length");
  }
  double se = 0.0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < clean.size(); ++k) {
    require_same_size(clean[k], adv[k], "psnr");
    for (std::size_t i = 0; i < clean[k].size(); ++i) {
      const double r = adv[k][i] - clean[k][i];
      se += r * r;
    }
    n += clean[k].size();
  }
  const double mse = se / static_cast<double>(n);
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

StabilityReport stability_report(const std::map<int, double>& asr_by_T) {
  StabilityReport report;
  report.asr_by_T = asr_by_T;
  double running_peak = -std::numeric_limits<double>::infinity();
  double best_peak = 0.0;
  double best_trough = 0.0;
  double max_dd = 0.0;
  double global_max = 0.0;
  for (const auto& [t, asr] : asr_by_T) {
    running_peak = std::max(running_peak, asr);
    global_max = std::max(global_max, asr);
    const double dd = running_peak - asr;
    if (dd > max_dd) {
      max_dd = dd;
      best_peak = running_peak;
      best_trough = asr;
    }
  }
  report.max_drawdown = max_dd;
  report.peak = max_dd > 0.0 ? best_peak : global_max;
  report.trough = max_dd > 0.0 ? best_trough : global_max;
  return report;
}

StabilityReport stability_sweep(const std::function<double(int)>& asr_for_T,
                                const std::vector<int>& t_values) {
  std::map<int, double> curve;
  for (int t : t_values) curve[t] = asr_for_T(t);
  return stability_report(curve);
}

int concavity_violations(const GradientOracle& oracle, const Trajectory& traj,
                         double tol) {
  int violations = 0;
  for (std::size_t k = 0; k + 1 < traj.points.size(); ++k) {
    const Point& a = traj.points[k];
    const Point& b = traj.points[k + 1];
    const Point ga = oracle.eval(a).grad;
    const Point gb = oracle.eval(b).grad;
    double inner = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      inner += (gb[i] - ga[i]) * (b[i] - a[i]);
    }
    if (inner > tol) ++violations;
  }
  return violations;
}

}  // namespace mdcs
