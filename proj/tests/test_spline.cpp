#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "scpmppi/spline.hpp"

#include "oracles.hpp"

#include <random>

using namespace scpmppi;

namespace {

SparseControlPoints make_points(const std::vector<int>& knots,
                                const std::vector<Eigen::Vector3d>& values) {
  SparseControlPoints p;
  p.knot_indices = knots;
  p.points.resize(static_cast<int>(values.size()), 3);
  for (size_t i = 0; i < values.size(); ++i) p.points.row(static_cast<int>(i)) = values[i];
  return p;
}

}  // namespace

TEST_CASE("uniform knots spread evenly with pinned endpoints") {
  CHECK(uniform_knots(4, 150) == std::vector<int>{0, 50, 99, 149});
  CHECK(uniform_knots(2, 10) == std::vector<int>{0, 9});
  CHECK(uniform_knots(5, 5) == std::vector<int>{0, 1, 2, 3, 4});
  CHECK_THROWS_AS(uniform_knots(1, 10), std::invalid_argument);
  CHECK_THROWS_AS(uniform_knots(11, 10), std::invalid_argument);
}

TEST_CASE("constant points yield constant coefficients") {
  const Eigen::Vector3d v(1.0, 1.0, 1.0);
  const auto points = make_points(uniform_knots(4, 150), {v, v, v, v});
  const SplineCoefficients coeffs = fit_natural_cubic(points);
  for (int seg = 0; seg < coeffs.segments(); ++seg) {
    CHECK((coeffs.a.row(seg).transpose() - v).norm() == doctest::Approx(0.0));
    CHECK(coeffs.b.row(seg).norm() == doctest::Approx(0.0));
    CHECK(coeffs.c.row(seg).norm() == doctest::Approx(0.0));
    CHECK(coeffs.d.row(seg).norm() == doctest::Approx(0.0));
  }
}

TEST_CASE("affine data reproduces the line") {
  const auto knots = uniform_knots(4, 100);
  std::vector<Eigen::Vector3d> values;
  for (int k : knots) values.push_back(Eigen::Vector3d(0.03 * k, -0.01 * k + 2.0, 1.0));
  const auto points = make_points(knots, values);
  const ControlSequence seq = interpolate(points, 100);
  for (int t = 0; t < 100; ++t) {
    const Eigen::Vector3d expected(0.03 * t, -0.01 * t + 2.0, 1.0);
    CHECK((seq.at(t) - expected).norm() < 1e-9);
  }
}

TEST_CASE("coefficients match the dense linear-system oracle") {
  const std::vector<int> knots{0, 50, 99, 149};
  const auto points = make_points(
      knots, {Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, 2, -1), Eigen::Vector3d(0, 1, 3),
              Eigen::Vector3d(1, -1, 0)});
  const SplineCoefficients coeffs = fit_natural_cubic(points);

  const std::vector<double> kx(knots.begin(), knots.end());
  for (int axis = 0; axis < 3; ++axis) {
    std::vector<double> y;
    for (int i = 0; i < points.count(); ++i) y.push_back(points.points(i, axis));
    const oracles::AxisSpline ref = oracles::natural_spline_dense(kx, y);
    for (int seg = 0; seg < coeffs.segments(); ++seg) {
      CHECK(coeffs.a(seg, axis) == doctest::Approx(ref.a[seg]).epsilon(1e-12));
      CHECK(coeffs.b(seg, axis) == doctest::Approx(ref.b[seg]).epsilon(1e-12));
      CHECK(coeffs.c(seg, axis) == doctest::Approx(ref.c[seg]).epsilon(1e-12));
      CHECK(coeffs.d(seg, axis) == doctest::Approx(ref.d[seg]).epsilon(1e-12));
    }
  }
}

TEST_CASE("interpolated interior values match the oracle") {
  const std::vector<int> knots{0, 50, 99, 149};
  const auto points = make_points(
      knots, {Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 0, 0),
              Eigen::Vector3d(1, 0, 0)});
  const ControlSequence seq = interpolate(points, 150);

  const std::vector<double> kx(knots.begin(), knots.end());
  const oracles::AxisSpline ref = oracles::natural_spline_dense(kx, {0, 1, 0, 1});
  for (int t : {25, 75, 125}) {
    CHECK(seq.at(t).x() ==
          doctest::Approx(oracles::eval_axis_spline(ref, kx, t)).epsilon(1e-12));
  }
}

TEST_CASE("interpolation hits every knot exactly") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    const int M = 2 + static_cast<int>(rng() % 7);
    const int T = 150;
    const auto knots = uniform_knots(M, T);
    SparseControlPoints points;
    points.knot_indices = knots;
    points.points.resize(M, 3);
    for (int i = 0; i < M; ++i) {
      for (int axis = 0; axis < 3; ++axis) points.points(i, axis) = noise(rng);
    }
    const ControlSequence seq = interpolate(points, T);
    for (int i = 0; i < M; ++i) {
      CHECK((seq.at(knots[i]) - row3(points.points, i)).norm() == 0.0);
    }
    CHECK(seq.inputs.allFinite());
  }
}

TEST_CASE("M = T returns the points verbatim") {
  const int T = 8;
  SparseControlPoints points;
  points.knot_indices = uniform_knots(T, T);
  points.points = Eigen::MatrixX3d::Random(T, 3);
  const ControlSequence seq = interpolate(points, T);
  CHECK(seq.inputs == points.points);
}

TEST_CASE("C2 continuity at interior knots") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> noise(0.0, 2.0);
  for (int rep = 0; rep < 20; ++rep) {
    SparseControlPoints points;
    points.knot_indices = uniform_knots(6, 150);
    points.points.resize(6, 3);
    for (int i = 0; i < 6; ++i) {
      for (int axis = 0; axis < 3; ++axis) points.points(i, axis) = noise(rng);
    }
    const SplineCoefficients coeffs = fit_natural_cubic(points);
    for (int seg = 0; seg + 1 < coeffs.segments(); ++seg) {
      const double t = points.knot_indices[seg + 1];
      CHECK((coeffs.value_on(seg, t) - coeffs.value_on(seg + 1, t)).norm() < 1e-6);
      CHECK((coeffs.first_derivative_on(seg, t) - coeffs.first_derivative_on(seg + 1, t))
                .norm() < 1e-6);
      CHECK((coeffs.second_derivative_on(seg, t) - coeffs.second_derivative_on(seg + 1, t))
                .norm() < 1e-6);
    }
  }
}

TEST_CASE("natural boundary: zero second derivative at the ends") {
  SparseControlPoints points;
  points.knot_indices = uniform_knots(5, 80);
  points.points = 3.0 * Eigen::MatrixX3d::Random(5, 3);
  const SplineCoefficients coeffs = fit_natural_cubic(points);
  CHECK(coeffs.second_derivative_on(0, 0).norm() < 1e-9);
  CHECK(coeffs.second_derivative_on(coeffs.segments() - 1, 79).norm() < 1e-9);
}

TEST_CASE("axes are interpolated independently") {
  SparseControlPoints joint;
  joint.knot_indices = uniform_knots(4, 60);
  joint.points = Eigen::MatrixX3d::Random(4, 3);
  const ControlSequence all = interpolate(joint, 60);

  for (int axis = 0; axis < 3; ++axis) {
    SparseControlPoints single = joint;
    for (int other = 0; other < 3; ++other) {
      if (other != axis) single.points.col(other).setZero();
    }
    const ControlSequence one = interpolate(single, 60);
    CHECK((one.inputs.col(axis) - all.inputs.col(axis)).norm() == doctest::Approx(0.0));
  }
}

TEST_CASE("interpolation matrix reproduces the interpolant") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> noise(0.0, 1.5);
  for (int M : {2, 4, 8}) {
    const int T = 90;
    SparseControlPoints points;
    points.knot_indices = uniform_knots(M, T);
    points.points.resize(M, 3);
    for (int i = 0; i < M; ++i) {
      for (int a = 0; a < 3; ++a) points.points(i, a) = noise(rng);
    }
    const Eigen::MatrixXd basis = interpolation_matrix(points.knot_indices, T);
    const Eigen::MatrixX3d product = basis * points.points;
    const ControlSequence direct = interpolate(points, T);
    CHECK((product - direct.inputs).lpNorm<Eigen::Infinity>() < 1e-12);
    // Knot rows of the basis are exact unit rows.
    for (int i = 0; i < M; ++i) {
      CHECK(basis(points.knot_indices[i], i) == 1.0);
      CHECK(basis.row(points.knot_indices[i]).sum() == 1.0);
    }
  }
  // Dense knots: exactly the identity.
  const Eigen::MatrixXd dense = interpolation_matrix(uniform_knots(6, 6), 6);
  CHECK(dense == Eigen::MatrixXd::Identity(6, 6));
}

TEST_CASE("degenerate knots are rejected") {
  SparseControlPoints points;
  points.knot_indices = {0, 10, 10, 29};
  points.points = Eigen::MatrixX3d::Zero(4, 3);
  CHECK_THROWS_AS(fit_natural_cubic(points), DegenerateKnots);
}
