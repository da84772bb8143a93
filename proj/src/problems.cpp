#include "mdcs/problems.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mdcs {

ZooProblem quadratic_oracle(Point target, double scale) {
  if (!(scale > 0.0)) {
    throw std::invalid_argument("quadratic_oracle: scale must be positive");
  }
  GradientOracle oracle;
  oracle.dim = target.size();
  oracle.description = "concave quadratic";
  oracle.eval = [target, scale](const Point& z) {
    require_same_size(target, z, "quadratic_oracle");
    double loss = 0.0;
    Point grad(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
      const double r = z[i] - target[i];
      loss -= scale * r * r;
      grad[i] = -2.0 * scale * r;
    }
    return LossGrad{loss, grad};
  };

  ZooProblem problem;
  problem.oracle = oracle;
  problem.argmax = [target](const BoxConstraint& box) {
    return clip(box, target);
  };
  return problem;
}

OscillationFixture sign_oscillation_fixture() {
  OscillationFixture fx{
      quadratic_oracle(Point(std::vector<double>{0.35}), 1.0),
      BoxConstraint(Point(1, 0.0), 1.0, -10.0, 10.0),
      0.1,
      2,
      0.3,
      0.4,
      0.0025,
  };
  return fx;
}

GradientOracle reddi_counterexample(double C, double p, std::uint64_t seed) {
  if (!(C > 2.0)) {
    throw std::invalid_argument("reddi_counterexample: requires C > 2");
  }
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("reddi_counterexample: requires 0 < p < 1");
  }
  if (!(p * C > 1.0 - p)) {
    throw std::invalid_argument(
        "reddi_counterexample: requires p*C > 1-p so the expected gradient "
        "is positive");
  }
  auto rng = std::make_shared<SeededRng>(seed, /*stream_id=*/701);
  GradientOracle oracle;
  oracle.dim = 1;
  oracle.description = "stochastic online counterexample";
  oracle.eval = [C, p, rng](const Point& z) {
    if (rng->uniform() < p) {
      return LossGrad{C * z[0], Point(std::vector<double>{C})};
    }
    return LossGrad{-z[0], Point(std::vector<double>{-1.0})};
  };
  return oracle;
}

BoxConstraint reddi_box() {
  return BoxConstraint(Point(1, 0.0), 1.0, -1.0, 1.0);
}

Dataset make_blobs(SeededRng& rng, int n_per_class, int n_classes,
                   std::size_t dim, double separation, double value_lo,
                   double value_hi) {
  if (!(separation > 0.0)) {
    throw std::invalid_argument("make_blobs: separation must be positive");
  }
  if (n_per_class < 1 || n_classes < 1 || dim < 1) {
    throw std::invalid_argument("make_blobs: sizes must be positive");
  }

  // Centers uniform in a cube two separations wide, redrawn until every pair
  // is at least `separation` sigmas apart (sigma = 1 before rescaling).
  const double span = 2.0 * separation;
  std::vector<Point> centers;
  while (static_cast<int>(centers.size()) < n_classes) {
    Point c(dim);
    for (std::size_t i = 0; i < dim; ++i) c[i] = rng.uniform(0.0, span);
    bool ok = true;
    for (const Point& other : centers) {
      double d2 = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        const double r = c[i] - other[i];
        d2 += r * r;
      }
      if (std::sqrt(d2) < separation) {
        ok = false;
        break;
      }
    }
    if (ok) centers.push_back(c);
  }

  Dataset data;
  data.n_classes = n_classes;
  for (int k = 0; k < n_classes; ++k) {
    for (int j = 0; j < n_per_class; ++j) {
      Point x(dim);
      for (std::size_t i = 0; i < dim; ++i) {
        x[i] = centers[k][i] + rng.normal();
      }
      data.inputs.push_back(std::move(x));
      data.labels.push_back(k);
    }
  }

  // Single affine map into the value bounds, preserving the geometry.
  double vmin = data.inputs[0][0];
  double vmax = vmin;
  for (const Point& x : data.inputs) {
    for (double v : x) {
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
  }
  const double scale = (value_hi - value_lo) / (vmax - vmin);
  for (Point& x : data.inputs) {
    for (double& v : x) {
      v = std::clamp(value_lo + (v - vmin) * scale, value_lo, value_hi);
    }
  }
  return data;
}

std::size_t ToyClassifier::input_dim() const {
  return weights.at(0).shape().at(1);
}

int ToyClassifier::n_classes() const {
  const Point& w_out = kind == ClassifierKind::Logistic ? weights.at(0)
                                                        : weights.at(2);
  return static_cast<int>(w_out.shape().at(0));
}

namespace {

void matvec(const Point& w, const std::vector<double>& x,
            std::vector<double>& out) {
  const std::size_t rows = w.shape().at(0);
  const std::size_t cols = w.shape().at(1);
  out.assign(rows, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < cols; ++c) s += w[r * cols + c] * x[c];
    out[r] = s;
  }
}

double activate(double pre, Activation act) {
  return act == Activation::ReLU ? std::max(0.0, pre) : std::tanh(pre);
}

double activate_deriv(double pre, double post, Activation act) {
  return act == Activation::ReLU ? (pre > 0.0 ? 1.0 : 0.0) : 1.0 - post * post;
}

// Stable softmax probabilities and the cross-entropy at `label`.
double softmax_ce(const std::vector<double>& logits, int label,
                  std::vector<double>& probs) {
  const double m = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  probs.resize(logits.size());
  for (std::size_t j = 0; j < logits.size(); ++j) {
    probs[j] = std::exp(logits[j] - m);
    z += probs[j];
  }
  for (double& pj : probs) pj /= z;
  return -(logits[label] - m - std::log(z));
}

struct ForwardPass {
  std::vector<double> hidden_pre;
  std::vector<double> hidden;
  std::vector<double> logits;
};

ForwardPass forward(const ToyClassifier& model, const double* x,
                    std::size_t dim) {
  ForwardPass fp;
  std::vector<double> in(x, x + dim);
  if (model.kind == ClassifierKind::Logistic) {
    matvec(model.weights[0], in, fp.logits);
    const Point& b = model.weights[1];
    for (std::size_t j = 0; j < fp.logits.size(); ++j) fp.logits[j] += b[j];
    return fp;
  }
  matvec(model.weights[0], in, fp.hidden_pre);
  const Point& b1 = model.weights[1];
  fp.hidden.resize(fp.hidden_pre.size());
  for (std::size_t j = 0; j < fp.hidden_pre.size(); ++j) {
    fp.hidden_pre[j] += b1[j];
    fp.hidden[j] = activate(fp.hidden_pre[j], model.activation);
  }
  matvec(model.weights[2], fp.hidden, fp.logits);
  const Point& b2 = model.weights[3];
  for (std::size_t j = 0; j < fp.logits.size(); ++j) fp.logits[j] += b2[j];
  return fp;
}

}  // namespace

std::vector<double> ToyClassifier::logits(const Point& x) const {
  return forward(*this, x.data().data(), x.size()).logits;
}

int ToyClassifier::predict(const Point& x) const {
  const auto l = logits(x);
  return static_cast<int>(std::max_element(l.begin(), l.end()) - l.begin());
}

LossGrad ToyClassifier::loss_and_input_grad(const Point& x, int label) const {
  if (label < 0 || label >= n_classes()) {
    throw std::invalid_argument("loss_and_input_grad: label out of range");
  }
  const ForwardPass fp = forward(*this, x.data().data(), x.size());
  std::vector<double> probs;
  const double loss = softmax_ce(fp.logits, label, probs);

  std::vector<double> dlogits(probs);
  dlogits[label] -= 1.0;

  Point grad(x.size());
  if (kind == ClassifierKind::Logistic) {
    const Point& w = weights[0];
    const std::size_t cols = w.shape().at(1);
    for (std::size_t j = 0; j < dlogits.size(); ++j) {
      for (std::size_t c = 0; c < cols; ++c) {
        grad[c] += dlogits[j] * w[j * cols + c];
      }
    }
    return LossGrad{loss, grad};
  }

  const Point& w1 = weights[0];
  const Point& w2 = weights[2];
  const std::size_t hidden = fp.hidden.size();
  const std::size_t cols2 = w2.shape().at(1);
  std::vector<double> dhidden(hidden, 0.0);
  for (std::size_t j = 0; j < dlogits.size(); ++j) {
    for (std::size_t h = 0; h < hidden; ++h) {
      dhidden[h] += dlogits[j] * w2[j * cols2 + h];
    }
  }
  const std::size_t cols1 = w1.shape().at(1);
  for (std::size_t h = 0; h < hidden; ++h) {
    const double dpre =
        dhidden[h] * activate_deriv(fp.hidden_pre[h], fp.hidden[h], activation);
    for (std::size_t c = 0; c < cols1; ++c) {
      grad[c] += dpre * w1[h * cols1 + c];
    }
  }
  return LossGrad{loss, grad};
}

TrainResult train_classifier(ClassifierKind kind, const Dataset& data,
                             const TrainHyper& hyper) {
  if (data.inputs.empty()) {
    throw std::invalid_argument("train_classifier: dataset is empty");
  }
  const std::size_t dim = data.dim();
  const std::size_t classes = static_cast<std::size_t>(data.n_classes);
  const std::size_t hidden = static_cast<std::size_t>(hyper.hidden);
  SeededRng rng(hyper.seed, /*stream_id=*/801);

  auto init_tensor = [&](std::size_t rows, std::size_t cols) {
    Point w(std::vector<double>(rows * cols),
            std::vector<std::size_t>{rows, cols});
    for (double& v : w) v = rng.uniform(-hyper.init_scale, hyper.init_scale);
    return w;
  };

  ToyClassifier model;
  model.kind = kind;
  model.activation = hyper.activation;
  if (kind == ClassifierKind::Logistic) {
    model.weights = {init_tensor(classes, dim),
                     Point(std::vector<double>(classes, 0.0),
                           std::vector<std::size_t>{classes, 1})};
  } else {
    model.weights = {init_tensor(hidden, dim),
                     Point(std::vector<double>(hidden, 0.0),
                           std::vector<std::size_t>{hidden, 1}),
                     init_tensor(classes, hidden),
                     Point(std::vector<double>(classes, 0.0),
                           std::vector<std::size_t>{classes, 1})};
  }

  const std::size_t n = data.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;

  std::vector<Point> grads;
  for (const Point& w : model.weights) {
    grads.emplace_back(std::vector<double>(w.size(), 0.0), w.shape());
  }

  double mean_loss = 0.0;
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    // Fisher-Yates with the owned stream; deterministic across platforms.
    for (std::size_t i = n - 1; i > 0; --i) {
      const std::size_t j = rng.uniform_int(i + 1);
      std::swap(order[i], order[j]);
    }
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n;
         start += static_cast<std::size_t>(hyper.batch_size)) {
      const std::size_t stop =
          std::min(n, start + static_cast<std::size_t>(hyper.batch_size));
      for (Point& g : grads) {
        for (double& v : g) v = 0.0;
      }
      for (std::size_t k = start; k < stop; ++k) {
        const Point& x = data.inputs[order[k]];
        const int y = data.labels[order[k]];
        const ForwardPass fp = forward(model, x.data().data(), dim);
        std::vector<double> probs;
        epoch_loss += softmax_ce(fp.logits, y, probs);
        std::vector<double> dlogits(probs);
        dlogits[y] -= 1.0;

        if (kind == ClassifierKind::Logistic) {
          for (std::size_t j = 0; j < classes; ++j) {
            for (std::size_t c = 0; c < dim; ++c) {
              grads[0][j * dim + c] += dlogits[j] * x[c];
            }
            grads[1][j] += dlogits[j];
          }
        } else {
          std::vector<double> dhidden(hidden, 0.0);
          for (std::size_t j = 0; j < classes; ++j) {
            for (std::size_t h = 0; h < hidden; ++h) {
              dhidden[h] += dlogits[j] * model.weights[2][j * hidden + h];
              grads[2][j * hidden + h] += dlogits[j] * fp.hidden[h];
            }
            grads[3][j] += dlogits[j];
          }
          for (std::size_t h = 0; h < hidden; ++h) {
            const double dpre =
                dhidden[h] *
                activate_deriv(fp.hidden_pre[h], fp.hidden[h], hyper.activation);
            for (std::size_t c = 0; c < dim; ++c) {
              grads[0][h * dim + c] += dpre * x[c];
            }
            grads[1][h] += dpre;
          }
        }
      }
      const double step = hyper.learning_rate / static_cast<double>(stop - start);
      for (std::size_t wi = 0; wi < model.weights.size(); ++wi) {
        for (std::size_t v = 0; v < model.weights[wi].size(); ++v) {
          model.weights[wi][v] -= step * grads[wi][v];
        }
      }
    }
    mean_loss = epoch_loss / static_cast<double>(n);
    if (!std::isfinite(mean_loss)) {
      throw std::runtime_error("train_classifier: loss diverged to non-finite "
                               "at epoch " +
                               std::to_string(epoch) +
                               " (learning_rate=" +
                               std::to_string(hyper.learning_rate) + ")");
    }
  }

  std::size_t correct = 0;
  double loss_sum = 0.0;
  std::vector<double> probs;
  for (std::size_t i = 0; i < n; ++i) {
    const ForwardPass fp = forward(model, data.inputs[i].data().data(), dim);
    loss_sum += softmax_ce(fp.logits, data.labels[i], probs);
    const int pred = static_cast<int>(
        std::max_element(fp.logits.begin(), fp.logits.end()) -
        fp.logits.begin());
    if (pred == data.labels[i]) ++correct;
  }
  return TrainResult{std::move(model),
                     static_cast<double>(correct) / static_cast<double>(n),
                     loss_sum / static_cast<double>(n)};
}

GradientOracle classifier_attack_oracle(const ToyClassifier& model,
                                        const Point& x, int label) {
  if (label < 0 || label >= model.n_classes()) {
    throw std::invalid_argument("classifier_attack_oracle: label out of range");
  }
  GradientOracle oracle;
  oracle.dim = x.size();
  oracle.description = "cross-entropy attack objective";
  oracle.eval = [model, label](const Point& z) {
    return model.loss_and_input_grad(z, label);
  };
  return oracle;
}

}  // namespace mdcs
