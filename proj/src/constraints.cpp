#include "mdcs/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mdcs {

BoxConstraint::BoxConstraint(Point center_, double radius_, double value_lo_,
                             double value_hi_)
    : center(std::move(center_)),
      radius(radius_),
      value_lo(value_lo_),
      value_hi(value_hi_) {
  if (!(radius > 0.0)) {
    throw std::invalid_argument("BoxConstraint: radius must be positive");
  }
  if (!(value_lo < value_hi)) {
    throw std::invalid_argument("BoxConstraint: value_lo must be < value_hi");
  }
  if (!all_finite(center)) {
    throw std::invalid_argument("BoxConstraint: center must be finite");
  }
  for (double c : center) {
    if (c < value_lo || c > value_hi) {
      throw std::invalid_argument(
          "BoxConstraint: center entries must lie within the value bounds");
    }
  }
}

double BoxConstraint::lo(std::size_t i) const {
  return std::max(value_lo, center[i] - radius);
}

double BoxConstraint::hi(std::size_t i) const {
  return std::min(value_hi, center[i] + radius);
}

DiagScaling::DiagScaling(Point d_) : d(std::move(d_)) {
  for (double x : d) {
    if (!(x > 0.0)) {
      throw std::invalid_argument(
          "DiagScaling: all entries must be strictly positive");
    }
  }
}

Point clip(const BoxConstraint& box, const Point& z) {
  require_same_size(box.center, z, "clip");
  Point out = z;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::min(std::min(box.value_hi, box.center[i] + box.radius),
                      std::max(std::max(box.value_lo, box.center[i] - box.radius),
                               z[i]));
  }
  return out;
}

Point project_diag(const BoxConstraint& box, const DiagScaling& scaling,
                   const Point& z) {
  require_same_size(box.center, scaling.d, "project_diag");
  // The weighted objective sum_i d_i^-1 (z_i - w_i)^2 splits per coordinate
  // and each one-dimensional term is minimized by clamping onto the interval,
  // independently of the weight.
  return clip(box, z);
}

bool membership(const BoxConstraint& box, const Point& z, double tol) {
  require_same_size(box.center, z, "membership");
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (std::abs(z[i] - box.center[i]) > box.radius + tol) return false;
    if (z[i] < box.value_lo - tol || z[i] > box.value_hi + tol) return false;
  }
  return true;
}

Point scaled_clip_diagnostic(const BoxConstraint& box,
                             const DiagScaling& scaling, const Point& z) {
  require_same_size(box.center, scaling.d, "scaled_clip_diagnostic");
  Point rescaled = z;
  for (std::size_t i = 0; i < rescaled.size(); ++i) {
    rescaled[i] = z[i] / std::sqrt(scaling.d[i]);
  }
  return clip(box, rescaled);
}

}  // namespace mdcs
