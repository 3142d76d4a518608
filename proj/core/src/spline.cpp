#include "scpmppi/spline.hpp"

#include <algorithm>
#include <cmath>

namespace scpmppi {

int SplineCoefficients::segment_of(double t) const {
  auto it = std::upper_bound(knot_indices.begin(), knot_indices.end(), t);
  int seg = static_cast<int>(it - knot_indices.begin()) - 1;
  return std::clamp(seg, 0, segments() - 1);
}

Eigen::Vector3d SplineCoefficients::value_on(int seg, double t) const {
  const double u = t - knot_indices[seg];
  return a.row(seg).transpose() + u * (b.row(seg).transpose() +
         u * (c.row(seg).transpose() + u * d.row(seg).transpose()));
}

Eigen::Vector3d SplineCoefficients::first_derivative_on(int seg, double t) const {
  const double u = t - knot_indices[seg];
  return b.row(seg).transpose() + u * (2.0 * c.row(seg).transpose() +
         u * 3.0 * d.row(seg).transpose());
}

Eigen::Vector3d SplineCoefficients::second_derivative_on(int seg, double t) const {
  const double u = t - knot_indices[seg];
  return 2.0 * c.row(seg).transpose() + u * 6.0 * d.row(seg).transpose();
}

Eigen::Vector3d SplineCoefficients::value(double t) const {
  return value_on(segment_of(t), t);
}

Eigen::Vector3d SplineCoefficients::first_derivative(double t) const {
  return first_derivative_on(segment_of(t), t);
}

Eigen::Vector3d SplineCoefficients::second_derivative(double t) const {
  return second_derivative_on(segment_of(t), t);
}

std::vector<int> uniform_knots(int M, int T) {
  if (M < 2 || M > T) {
    throw std::invalid_argument("uniform_knots requires 2 <= M <= T");
  }
  std::vector<int> knots(M);
  for (int i = 0; i < M; ++i) {
    knots[i] = static_cast<int>(std::lround(static_cast<double>(i) * (T - 1) / (M - 1)));
  }
  knots.front() = 0;
  knots.back() = T - 1;
  return knots;
}

SplineCoefficients fit_natural_cubic(const SparseControlPoints& points) {
  const int M = points.count();
  if (M < 2 || static_cast<int>(points.knot_indices.size()) != M) {
    throw std::invalid_argument("fit_natural_cubic requires M >= 2 points with matching knots");
  }
  for (int i = 0; i + 1 < M; ++i) {
    if (points.knot_indices[i + 1] <= points.knot_indices[i]) {
      throw DegenerateKnots("knot indices must be strictly increasing");
    }
  }

  const int n = M - 1;  // segments
  Eigen::VectorXd h(n);
  for (int i = 0; i < n; ++i) {
    h(i) = points.knot_indices[i + 1] - points.knot_indices[i];
  }

  // Second derivatives at the knots; natural boundary pins both ends to 0.
  // Interior values solve the standard tridiagonal system (Thomas algorithm).
  Eigen::MatrixX3d sigma = Eigen::MatrixX3d::Zero(M, 3);
  const int interior = M - 2;
  if (interior > 0) {
    Eigen::VectorXd diag(interior), lower(interior), upper(interior);
    Eigen::MatrixX3d rhs(interior, 3);
    for (int i = 1; i <= interior; ++i) {
      lower(i - 1) = h(i - 1);
      diag(i - 1) = 2.0 * (h(i - 1) + h(i));
      upper(i - 1) = h(i);
      rhs.row(i - 1) =
          6.0 * ((points.points.row(i + 1) - points.points.row(i)) / h(i) -
                 (points.points.row(i) - points.points.row(i - 1)) / h(i - 1));
    }
    for (int i = 1; i < interior; ++i) {
      const double w = lower(i) / diag(i - 1);
      diag(i) -= w * upper(i - 1);
      rhs.row(i) -= w * rhs.row(i - 1);
    }
    sigma.row(interior) = rhs.row(interior - 1) / diag(interior - 1);
    for (int i = interior - 1; i >= 1; --i) {
      sigma.row(i) = (rhs.row(i - 1) - upper(i - 1) * sigma.row(i + 1)) / diag(i - 1);
    }
  }

  SplineCoefficients coeffs;
  coeffs.knot_indices = points.knot_indices;
  coeffs.a.resize(n, 3);
  coeffs.b.resize(n, 3);
  coeffs.c.resize(n, 3);
  coeffs.d.resize(n, 3);
  for (int i = 0; i < n; ++i) {
    coeffs.a.row(i) = points.points.row(i);
    coeffs.b.row(i) = (points.points.row(i + 1) - points.points.row(i)) / h(i) -
                      h(i) * (2.0 * sigma.row(i) + sigma.row(i + 1)) / 6.0;
    coeffs.c.row(i) = sigma.row(i) / 2.0;
    coeffs.d.row(i) = (sigma.row(i + 1) - sigma.row(i)) / (6.0 * h(i));
  }
  return coeffs;
}

ControlSequence interpolate(const SparseControlPoints& points, int T) {
  const int M = points.count();
  if (M < 2 || points.knot_indices.front() != 0 || points.knot_indices.back() != T - 1) {
    throw std::invalid_argument("interpolate requires knots spanning [0, T-1]");
  }

  ControlSequence seq;
  seq.inputs.resize(T, 3);
  if (M == T) {
    // Knots at every step: the interpolant is the points themselves.
    seq.inputs = points.points;
    return seq;
  }

  const SplineCoefficients coeffs = fit_natural_cubic(points);
  int seg = 0;
  int next_knot = 1;
  for (int t = 0; t < T; ++t) {
    while (next_knot < M - 1 && points.knot_indices[next_knot] <= t) {
      ++next_knot;
      ++seg;
    }
    if (t == points.knot_indices[seg]) {
      seq.inputs.row(t) = points.points.row(seg);  // exact at knots
    } else if (t == points.knot_indices[seg + 1]) {
      seq.inputs.row(t) = points.points.row(seg + 1);
    } else {
      seq.inputs.row(t) = coeffs.value_on(seg, t).transpose();
    }
  }
  return seq;
}

Eigen::MatrixXd interpolation_matrix(const std::vector<int>& knot_indices, int T) {
  const int M = static_cast<int>(knot_indices.size());
  Eigen::MatrixXd basis(T, M);
  SparseControlPoints unit;
  unit.knot_indices = knot_indices;
  for (int m = 0; m < M; ++m) {
    unit.points = Eigen::MatrixX3d::Zero(M, 3);
    unit.points(m, 0) = 1.0;
    basis.col(m) = interpolate(unit, T).inputs.col(0);
  }
  return basis;
}

}  // namespace scpmppi
