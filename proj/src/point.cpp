#include "mdcs/point.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mdcs {

namespace {

std::size_t shape_product(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t s : shape) n *= s;
  return n;
}

// Kahan-compensated accumulator. Keeps reductions at a few ulps even for
// long vectors, which the normalization contract relies on.
struct Kahan {
  double sum = 0.0;
  double c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

Point::Point(std::vector<double> data)
    : data_(std::move(data)), shape_{data_.size()} {}

Point::Point(std::vector<double> data, std::vector<std::size_t> shape)
    : data_(std::move(data)), shape_(std::move(shape)) {
  if (shape_product(shape_) != data_.size()) {
    throw std::invalid_argument("Point: shape product " +
                                std::to_string(shape_product(shape_)) +
                                " does not match data length " +
                                std::to_string(data_.size()));
  }
}

double l1_norm(const Point& v) {
  Kahan acc;
  for (double x : v) acc.add(std::abs(x));
  return acc.sum;
}

double l2_norm(const Point& v) {
  Kahan acc;
  for (double x : v) acc.add(x * x);
  return std::sqrt(acc.sum);
}

double linf_norm(const Point& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double dot(const Point& a, const Point& b) {
  require_same_size(a, b, "dot");
  Kahan acc;
  for (std::size_t i = 0; i < a.size(); ++i) acc.add(a[i] * b[i]);
  return acc.sum;
}

Point l1_normalize(const Point& v) {
  const double norm = l1_norm(v);
  if (norm == 0.0) return v;
  Point out = v;
  for (double& x : out) x /= norm;
  return out;
}

Point sign(const Point& v) {
  Point out = v;
  for (double& x : out) x = (x > 0.0) ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
  return out;
}

bool all_finite(const Point& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

void require_same_size(const Point& a, const Point& b, const char* what) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(std::string(what) + ": size mismatch (" +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  }
}

}  // namespace mdcs
