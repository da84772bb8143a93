#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "mdcs/constraints.hpp"
#include "mdcs/point.hpp"
#include "mdcs/rng.hpp"

namespace mdcs {

struct LossGrad {
  double loss;
  Point grad;
};

/// A loss-and-gradient evaluator. Analytic problems, known counterexamples
/// and toy classifiers all present this interface. Deterministic oracles are
/// pure; stochastic oracles own a SeededRng and are single-owner per run.
struct GradientOracle {
  std::size_t dim = 0;
  std::string description;
  std::function<LossGrad(const Point&)> eval;
};

/// An oracle whose constrained maximizer is known in closed form, so
/// suboptimality can be measured exactly.
struct ZooProblem {
  GradientOracle oracle;
  std::function<Point(const BoxConstraint&)> argmax;
};

/// J(z) = -a * ||z - c||^2, gradient -2a (z - c). Concave everywhere; the
/// constrained maximizer is the per-coordinate clamp of c onto the box.
ZooProblem quadratic_oracle(Point target, double scale);

/// The 1-D fixture on which plain sign descent enters a period-2 cycle.
struct OscillationFixture {
  ZooProblem problem;  // 1-D quadratic, target 0.35, scale 1
  BoxConstraint box;   // center 0, radius 1, wide value bounds
  double alpha;        // pinned step 0.1, independent of the budget T
  int period;          // 2
  double cycle_lo;     // 0.3
  double cycle_hi;     // 0.4
  double ifgsm_suboptimality;  // 0.0025
};
OscillationFixture sign_oscillation_fixture();

/// Stochastic online fixture on [-1, 1]: gradient +C with probability p and
/// -1 otherwise, with p C > 1 - p so the expected loss is maximized at +1.
/// Exponential-average methods can be driven away from the optimum by the
/// rare large gradient; the running-max variant is not.
GradientOracle reddi_counterexample(double C, double p, std::uint64_t seed);

/// The [-1, 1] box the counterexample runs in.
BoxConstraint reddi_box();

struct Dataset {
  std::vector<Point> inputs;
  std::vector<int> labels;
  int n_classes = 0;

  std::size_t size() const { return inputs.size(); }
  std::size_t dim() const { return inputs.empty() ? 0 : inputs[0].size(); }
};

/// Gaussian clusters at rejection-sampled centers (pairwise distance at
/// least separation standard deviations), affinely mapped into
/// [value_lo, value_hi]. Deterministic given the rng.
Dataset make_blobs(SeededRng& rng, int n_per_class, int n_classes,
                   std::size_t dim, double separation, double value_lo = 0.0,
                   double value_hi = 1.0);

enum class ClassifierKind { Logistic, Mlp };
enum class Activation { ReLU, Tanh };

/// Softmax classifier with hand-rolled forward and backward passes:
/// either plain logistic regression or one hidden layer.
struct ToyClassifier {
  ClassifierKind kind = ClassifierKind::Logistic;
  Activation activation = Activation::ReLU;
  // Logistic: {W (classes x dim), b}. Mlp: {W1 (hidden x dim), b1,
  // W2 (classes x hidden), b2}. Matrices are row-major.
  std::vector<Point> weights;

  std::size_t input_dim() const;
  int n_classes() const;

  std::vector<double> logits(const Point& x) const;
  int predict(const Point& x) const;

  /// Cross-entropy at (x, label) and its gradient with respect to the input.
  LossGrad loss_and_input_grad(const Point& x, int label) const;
};

struct TrainHyper {
  int epochs = 200;
  int batch_size = 32;
  double learning_rate = 0.5;
  int hidden = 32;
  Activation activation = Activation::ReLU;
  double init_scale = 0.1;
  std::uint64_t seed = 0;
};

struct TrainResult {
  ToyClassifier model;
  double train_accuracy = 0.0;
  double final_loss = 0.0;
};

/// Mini-batch gradient descent on cross-entropy. Deterministic given the
/// hyper seed. Throws std::runtime_error with diagnostics if the loss
/// diverges to NaN.
TrainResult train_classifier(ClassifierKind kind, const Dataset& data,
                             const TrainHyper& hyper);

/// Cross-entropy attack objective for one (example, label) pair: the loss is
/// evaluated at the queried point and the gradient flows through the network
/// to the input.
GradientOracle classifier_attack_oracle(const ToyClassifier& model,
                                        const Point& x, int label);

}  // namespace mdcs
