#pragma once

#include "mdcs/point.hpp"

namespace mdcs {

/// The feasible set: the L-inf ball of given radius around a center example,
/// intersected with global value bounds (e.g. [0, 1] for image data).
struct BoxConstraint {
  Point center;
  double radius;
  double value_lo;
  double value_hi;

  BoxConstraint(Point center, double radius, double value_lo, double value_hi);

  std::size_t dim() const { return center.size(); }

  /// Per-coordinate feasible interval endpoints.
  double lo(std::size_t i) const;
  double hi(std::size_t i) const;
};

/// Strictly positive per-coordinate weights: the diagonal of the step metric.
struct DiagScaling {
  Point d;
  explicit DiagScaling(Point d);
};

inline constexpr double kMembershipTol = 1e-12;

/// Per-coordinate clamp onto the feasible set. Idempotent.
Point clip(const BoxConstraint& box, const Point& z);

/// Nearest point of the box in the weighted metric diag(d)^-1. For an
/// axis-aligned box with a diagonal metric the problem is separable and the
/// minimizer is the plain clamp, for every positive scaling.
Point project_diag(const BoxConstraint& box, const DiagScaling& scaling,
                   const Point& z);

/// Feasibility predicate with tolerance to absorb round-off at the faces.
bool membership(const BoxConstraint& box, const Point& z,
                double tol = kMembershipTol);

/// Literal transcription of the scaled-clip update variant: clamps the
/// proposal after rescaling by d^-1/2. Diagnostic only; no optimizer uses it
/// and it is excluded from all acceptance checks.
Point scaled_clip_diagnostic(const BoxConstraint& box,
                             const DiagScaling& scaling, const Point& z);

}  // namespace mdcs
