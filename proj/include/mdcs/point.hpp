#pragma once

#include <cstddef>
#include <vector>

namespace mdcs {

/// Flat real64 vector with shape metadata. The optimization variable,
/// gradients, and per-coordinate state all live in this type.
class Point {
 public:
  Point() = default;
  explicit Point(std::size_t dim, double value = 0.0)
      : data_(dim, value), shape_{dim} {}
  Point(std::vector<double> data);
  Point(std::vector<double> data, std::vector<std::size_t> shape);

  std::size_t size() const { return data_.size(); }
  const std::vector<std::size_t>& shape() const { return shape_; }

  double operator[](std::size_t i) const { return data_[i]; }
  double& operator[](std::size_t i) { return data_[i]; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

  friend bool operator==(const Point& a, const Point& b) {
    return a.data_ == b.data_;
  }

 private:
  std::vector<double> data_;
  std::vector<std::size_t> shape_;
};

/// Sum of absolute values, compensated summation.
double l1_norm(const Point& v);
double l2_norm(const Point& v);
double linf_norm(const Point& v);
double dot(const Point& a, const Point& b);

/// v / ||v||_1. A zero vector is returned unchanged: at a stationary point
/// the momentum recursion degenerates gracefully and the iterate freezes.
Point l1_normalize(const Point& v);

/// Entrywise sign with sign(0) = 0; entries are exactly -1, 0 or +1.
Point sign(const Point& v);

bool all_finite(const Point& v);

/// Throws std::invalid_argument unless both points have the same length.
void require_same_size(const Point& a, const Point& b, const char* what);

}  // namespace mdcs
