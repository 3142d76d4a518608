#pragma once

#include "scpmppi/types.hpp"

namespace scpmppi {

struct DegenerateKnots : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Natural cubic spline through the sparse control points, one polynomial
// per segment and axis: s_i(t) = a + b*u + c*u^2 + d*u^3 with u = t - knot[i].
struct SplineCoefficients {
  Eigen::MatrixX3d a, b, c, d;    // (M-1) x 3
  std::vector<int> knot_indices;  // M

  int segments() const { return static_cast<int>(a.rows()); }

  // Segment owning time t: the last segment whose left knot is <= t,
  // clamped to [0, M-2]. Times outside the knot span extrapolate.
  int segment_of(double t) const;

  Eigen::Vector3d value(double t) const;
  Eigen::Vector3d first_derivative(double t) const;
  Eigen::Vector3d second_derivative(double t) const;

  // Evaluate a specific segment's polynomial at absolute time t (used to
  // compare the two sides of an interior knot).
  Eigen::Vector3d value_on(int seg, double t) const;
  Eigen::Vector3d first_derivative_on(int seg, double t) const;
  Eigen::Vector3d second_derivative_on(int seg, double t) const;
};

// Evenly spread M knot indices over [0, T-1] (round(i*(T-1)/(M-1))),
// always including both endpoints.
std::vector<int> uniform_knots(int M, int T);

// Natural boundary conditions: zero second derivative at both end knots.
// Interpolates the points exactly at the knots.
SplineCoefficients fit_natural_cubic(const SparseControlPoints& points);

// Expand M sparse points to a dense T-step sequence. Entries at knot
// indices are copied from the points verbatim, so M = T reproduces the
// input exactly.
ControlSequence interpolate(const SparseControlPoints& points, int T);

// The interpolation is linear in the knot values: a T x M matrix B with
// interpolate(points, T) == B * points for fixed knots (column m is the
// interpolant of the m-th unit knot vector). Lets batch scorers reuse one
// fit across many candidates.
Eigen::MatrixXd interpolation_matrix(const std::vector<int>& knot_indices, int T);

}  // namespace scpmppi
