#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tonekit/ambient.hpp"
#include "tonekit/fields.hpp"
#include "tonekit/sampling.hpp"

#include "oracles.hpp"

#include <cmath>

using namespace tonekit;

namespace {
Vector vec2(double x, double y) { return (Vector(2) << x, y).finished(); }
}  // namespace

TEST_CASE("euclidean covariant derivative of the position field is the direction") {
  AmbientSpace space = AmbientSpace::euclidean(2);
  AmbientField field = AmbientField::position(space, Vector::Zero(2));
  const Vector v = vec2(1.0, 0.0);
  const Vector d = covariant_derivative(space, field, vec2(0.3, -1.2), v);
  CHECK(d.isApprox(v, 1e-12));
}

TEST_CASE("euclidean covariant derivative of a constant field vanishes") {
  AmbientSpace space = AmbientSpace::euclidean(2);
  AmbientField field =
      AmbientField::custom(space, [](const Vector&) { return vec2(1.0, 0.0); });
  const Vector d = covariant_derivative(space, field, vec2(0.7, 0.1), vec2(0.4, 0.9));
  CHECK(d.norm() < 1e-9);
}

TEST_CASE("hyperbolic covariant derivative matches the finite-difference oracle") {
  AmbientSpace space = AmbientSpace::hyperbolic_ball(2);
  AmbientField field = AmbientField::position(space, Vector::Zero(2));
  const Vector p = vec2(0.5, 0.0);
  const Vector v = vec2(0.0, 1.0);

  // Oracle: partial derivatives of the closed-form field plus christoffels
  // rebuilt from metric finite differences.
  const double step = 1e-6;
  Matrix jac(2, 2);
  for (int j = 0; j < 2; ++j) {
    Vector pp = p, pm = p;
    pp[j] += step;
    pm[j] -= step;
    jac.col(j) = (field.value_at(pp) - field.value_at(pm)) / (2.0 * step);
  }
  auto metric = [&](const Vector& q) { return space.metric_at(q); };
  const Christoffel gamma = christoffel_from_metric_fd(metric, p, 1e-5);
  Vector expected = jac * v;
  const Vector x = field.value_at(p);
  for (int k = 0; k < 2; ++k) expected[k] += v.dot(gamma[k] * x);

  const Vector got = covariant_derivative(space, field, p, v);
  CHECK((got - expected).norm() < 1e-6);
}

TEST_CASE("covariant derivative outside the chart throws") {
  AmbientSpace space = AmbientSpace::hyperbolic_ball(2);
  AmbientField field = AmbientField::position(space, Vector::Zero(2));
  CHECK_THROWS_AS(covariant_derivative(space, field, vec2(1.5, 0.0), vec2(1.0, 0.0)),
                  ChartDomainError);
}

TEST_CASE("euclidean distance") {
  AmbientSpace space = AmbientSpace::euclidean(2);
  CHECK(space.distance_from_point(Vector::Zero(2), vec2(3.0, 4.0)) == doctest::Approx(5.0));
}

TEST_CASE("hyperbolic distance from origin matches the radial length oracle") {
  AmbientSpace space = AmbientSpace::hyperbolic_ball(2);
  const double rho_c = 0.5;
  const double expected = oracle::radial_length(
      [](double s) { return 2.0 / (1.0 - s * s); }, rho_c);
  const double got = space.distance_from_point(Vector::Zero(2), vec2(rho_c, 0.0));
  CHECK(got == doctest::Approx(2.0 * std::atanh(rho_c)).epsilon(1e-12));
  CHECK(got == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("spherical distance from origin matches the radial length oracle") {
  AmbientSpace space = AmbientSpace::spherical_cap(2);
  const double rho_c = 0.4;
  const double expected = oracle::radial_length(
      [](double s) { return 2.0 / (1.0 + s * s); }, rho_c);
  CHECK(space.distance_from_point(Vector::Zero(2), vec2(rho_c, 0.0)) ==
        doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("product distance to the totally convex slice is the factor distance") {
  AmbientSpace space =
      AmbientSpace::product(AmbientSpace::euclidean(2), AmbientSpace::euclidean(1));
  Vector p(3);
  p << 3.0, 4.0, 7.0;
  CHECK(space.distance_to_totally_convex(Vector::Zero(2), p) == doctest::Approx(5.0));
  CHECK(space.convex_distance_half_square(Vector::Zero(2), p) == doctest::Approx(12.5));

  Vector on_sigma(3);
  on_sigma << 0.0, 0.0, 42.0;
  CHECK(space.distance_to_totally_convex(Vector::Zero(2), on_sigma) == doctest::Approx(0.0));
}

TEST_CASE("hyperbolic x euclidean product: rho cross-checks the factor distance") {
  AmbientSpace hyp = AmbientSpace::hyperbolic_ball(2);
  AmbientSpace space = AmbientSpace::product(hyp, AmbientSpace::euclidean(1));
  AmbientSpace hyp2 = AmbientSpace::hyperbolic_ball(2);
  HaltonSampler sampler(3, 7);
  for (int s = 0; s < 50; ++s) {
    Vector u = sampler.next();
    Vector p(3);
    p << 0.8 * (u[0] - 0.5), 0.8 * (u[1] - 0.5), 3.0 * u[2];
    CHECK(space.distance_to_totally_convex(Vector::Zero(2), p) ==
          doctest::Approx(hyp2.distance_from_point(Vector::Zero(2), p.head(2))));
  }
}

TEST_CASE("non-product space rejects distance_to_totally_convex") {
  AmbientSpace space = AmbientSpace::euclidean(3);
  CHECK_THROWS_AS(space.distance_to_totally_convex(Vector::Zero(2), Vector::Zero(3)),
                  UnsupportedOperation);
}

TEST_CASE("custom space without a registered distance is unsupported") {
  AmbientSpace space = AmbientSpace::custom(
      2, [](const Vector&) { return Matrix::Identity(2, 2); }, {0.0, 0.0});
  CHECK_THROWS_AS(space.distance_from_point(Vector::Zero(2), vec2(1.0, 0.0)),
                  UnsupportedOperation);
}

TEST_CASE("levi-civita compatibility of built-in christoffels at random points") {
  std::vector<AmbientSpace> spaces;
  spaces.push_back(AmbientSpace::hyperbolic_ball(2));
  spaces.push_back(AmbientSpace::spherical_cap(2));
  spaces.push_back(AmbientSpace::product(AmbientSpace::hyperbolic_ball(2),
                                         AmbientSpace::euclidean(1)));
  for (const auto& space : spaces) {
    HaltonSampler sampler(space.dim(), 3);
    for (int s = 0; s < 25; ++s) {
      Vector p = 0.5 * (sampler.next().array() - 0.5).matrix();
      auto metric = [&](const Vector& q) { return space.metric_at(q); };
      const Christoffel expected = christoffel_from_metric_fd(metric, p, 1e-5);
      const Christoffel got = space.christoffel_at(p);
      for (int k = 0; k < space.dim(); ++k) {
        CHECK((got[k] - expected[k]).norm() < 1e-7);
        CHECK((got[k] - got[k].transpose()).norm() < 1e-12);  // symmetric lower indices
      }
    }
  }
}

TEST_CASE("distance gradients are unit at random points away from the base") {
  std::vector<AmbientSpace> spaces;
  spaces.push_back(AmbientSpace::euclidean(3));
  spaces.push_back(AmbientSpace::hyperbolic_ball(2));
  spaces.push_back(AmbientSpace::spherical_cap(2));
  for (const auto& space : spaces) {
    HaltonSampler sampler(space.dim(), 11);
    for (int s = 0; s < 25; ++s) {
      Vector p = 0.6 * (sampler.next().array() - 0.5).matrix();
      if (p.norm() < 0.05) continue;
      const Vector grad = space.distance_gradient(Vector::Zero(space.dim()), p);
      const double norm = std::sqrt(grad.dot(space.metric_at(p) * grad));
      CHECK(norm == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
}

TEST_CASE("metric is symmetric positive definite at sampled points") {
  AmbientSpace space = AmbientSpace::product(AmbientSpace::hyperbolic_ball(2),
                                             AmbientSpace::spherical_cap(2, 2.0));
  HaltonSampler sampler(4, 5);
  for (int s = 0; s < 25; ++s) {
    Vector p = 0.4 * (sampler.next().array() - 0.5).matrix();
    const Matrix g = space.metric_at(p);
    CHECK((g - g.transpose()).norm() < 1e-14);
    Eigen::LLT<Matrix> llt(g);
    CHECK(llt.info() == Eigen::Success);
  }
}

TEST_CASE("curvature bounds of built-ins are exact") {
  CHECK(AmbientSpace::euclidean(3).curvature_bounds().kappa_plus == 0.0);
  CHECK(AmbientSpace::hyperbolic_ball(2, -2.0).curvature_bounds().kappa_minus == -2.0);
  CHECK(AmbientSpace::spherical_cap(2, 0.5).curvature_bounds().kappa_plus == 0.5);
  const AmbientSpace prod = AmbientSpace::product(AmbientSpace::hyperbolic_ball(2),
                                                  AmbientSpace::euclidean(1));
  CHECK(prod.curvature_bounds().kappa_minus == -1.0);
  CHECK(prod.curvature_bounds().kappa_plus == 0.0);
}

TEST_CASE("product metric is block diagonal with no cross-block christoffels") {
  AmbientSpace space = AmbientSpace::product(AmbientSpace::hyperbolic_ball(2),
                                             AmbientSpace::euclidean(2));
  Vector p(4);
  p << 0.2, -0.1, 3.0, 4.0;
  const Matrix g = space.metric_at(p);
  CHECK(g.topRightCorner(2, 2).norm() == 0.0);
  const Christoffel gamma = space.christoffel_at(p);
  for (int k = 0; k < 4; ++k) {
    CHECK(gamma[k].topRightCorner(2, 2).norm() == 0.0);
    CHECK(gamma[k].bottomLeftCorner(2, 2).norm() == 0.0);
  }
  // christoffels of the flat block vanish entirely
  for (int k = 2; k < 4; ++k) CHECK(gamma[k].norm() == 0.0);
}

TEST_CASE("geodesic ball admissibility") {
  AmbientSpace sph = AmbientSpace::spherical_cap(2, 1.0);
  CHECK_NOTHROW(GeodesicBallSpec(Vector::Zero(2), 1.0, sph));
  CHECK_THROWS_AS(GeodesicBallSpec(Vector::Zero(2), 1.6, sph), std::invalid_argument);
  CHECK_THROWS_AS(GeodesicBallSpec(Vector::Zero(2), -1.0, sph), std::invalid_argument);
}

TEST_CASE("custom grid metric interpolates the identity exactly") {
  std::vector<Matrix> values(9, Matrix::Identity(2, 2));
  AmbientSpace space = AmbientSpace::custom_grid(
      2, Vector::Zero(2), Vector::Ones(2), {3, 3}, values, {0.0, 0.0});
  CHECK(space.metric_at(vec2(0.37, 0.81)).isApprox(Matrix::Identity(2, 2), 1e-14));
  CHECK_THROWS_AS(space.metric_at(vec2(2.0, 0.0)), ChartDomainError);
}
