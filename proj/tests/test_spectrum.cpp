#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tonekit/spectrum.hpp"

#include "oracles.hpp"

#include <cmath>

using namespace tonekit;

namespace {

constexpr double kPi = 3.14159265358979323846;

double interval_lambda(int n) {
  AmbientSpace space = AmbientSpace::euclidean(1);
  Immersion imm = Immersion::interval(space, 1.0);
  DomainMesh mesh = interval_mesh(0.0, 1.0, n);
  return solve_mesh_eigenvalue(imm, mesh).lambda1;
}

}  // namespace

TEST_CASE("interval eigenvalue converges to pi^2 at second order") {
  const double exact = kPi * kPi;
  const double e1 = std::abs(interval_lambda(32) - exact);
  const double e2 = std::abs(interval_lambda(64) - exact);
  const double e3 = std::abs(interval_lambda(128) - exact);
  CHECK(e2 < exact * 0.01);
  const double order_a = std::log2(e1 / e2);
  const double order_b = std::log2(e2 / e3);
  CHECK(order_a >= 1.7);
  CHECK(order_a <= 2.3);
  CHECK(order_b >= 1.7);
  CHECK(order_b <= 2.3);
}

TEST_CASE("scaled interval eigenvalue is pi^2 / L^2") {
  AmbientSpace space = AmbientSpace::euclidean(1);
  Immersion imm = Immersion::interval(space, 3.0);
  DomainMesh mesh = interval_mesh(0.0, 3.0, 96);
  const double lambda = solve_mesh_eigenvalue(imm, mesh).lambda1;
  CHECK(lambda == doctest::Approx(kPi * kPi / 9.0).epsilon(1e-3));
}

TEST_CASE("unit disk eigenvalue converges to the squared bessel root") {
  const double j0 = oracle::bessel_j0_first_root();
  const double exact = j0 * j0;
  AmbientSpace space = AmbientSpace::euclidean(2);
  Immersion imm = Immersion::disk(space, 1.0);
  double errors[2];
  int idx = 0;
  for (int n : {12, 24}) {
    DomainMesh mesh = disk_mesh(1.0, n);
    errors[idx++] = std::abs(solve_mesh_eigenvalue(imm, mesh).lambda1 - exact);
  }
  CHECK(errors[1] < exact * 0.01);
  const double order = std::log2(errors[0] / errors[1]);
  CHECK(order >= 1.7);
  CHECK(order <= 2.3);
}

TEST_CASE("unit square eigenvalue is 2 pi^2") {
  AmbientSpace space = AmbientSpace::euclidean(2);
  Immersion imm = Immersion::disk(space, 2.0);
  DomainMesh mesh = rectangle_mesh(0.0, 1.0, 0.0, 1.0, 32, 32);
  const double lambda = solve_mesh_eigenvalue(imm, mesh).lambda1;
  CHECK(lambda == doctest::Approx(2.0 * kPi * kPi).epsilon(5e-3));
}

TEST_CASE("curved geometry: catenoid waist band against its flat comparison") {
  // The induced metric cosh^2(u)(du^2 + dv^2) is conformal to the flat strip;
  // in 2d the Dirichlet energy is conformally invariant while the mass gains
  // the cosh^2 factor, so lambda(catenoid band) < lambda(flat band).
  AmbientSpace space = AmbientSpace::euclidean(3);
  Immersion cat = Immersion::catenoid(space, 1.0, -0.8, 0.8, 0.0, 2.0);
  DomainMesh mesh_c = rectangle_mesh(-0.8, 0.8, 0.0, 2.0, 32, 40);
  const double lambda_cat = solve_mesh_eigenvalue(cat, mesh_c).lambda1;

  Immersion flat = Immersion::disk(AmbientSpace::euclidean(2), 3.0);
  DomainMesh mesh_f = rectangle_mesh(-0.8, 0.8, 0.0, 2.0, 32, 40);
  const double lambda_flat = solve_mesh_eigenvalue(flat, mesh_f).lambda1;
  CHECK(lambda_cat < lambda_flat);
  CHECK(lambda_cat > lambda_flat / std::pow(std::cosh(0.8), 2) - 1e-9);
}

TEST_CASE("rayleigh quotient upper-bounds lambda1 and is exact on the eigenfunction") {
  AmbientSpace space = AmbientSpace::euclidean(1);
  Immersion imm = Immersion::interval(space, 1.0);
  DomainMesh mesh = interval_mesh(0.0, 1.0, 64);
  auto [K, M] = assemble(imm, mesh);
  EigenResult res = smallest_dirichlet_eigenvalue(K, M, mesh.boundary);

  CHECK(rayleigh_quotient(K, M, mesh.boundary, res.eigenfunction) ==
        doctest::Approx(res.lambda1).epsilon(1e-10));

  // Hat-like competitor: u(x) = x(1-x).
  Vector f(mesh.vertex_count());
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    const double x = mesh.vertices[i][0];
    f[i] = x * (1.0 - x);
  }
  const double rq = rayleigh_quotient(K, M, mesh.boundary, f);
  CHECK(rq >= res.lambda1 - 1e-12);
  CHECK(rq == doctest::Approx(10.0).epsilon(1e-3));  // classical value for x(1-x)
}

TEST_CASE("eigenfunction is positive inside and zero on the boundary") {
  AmbientSpace space = AmbientSpace::euclidean(2);
  Immersion imm = Immersion::disk(space, 1.0);
  DomainMesh mesh = disk_mesh(1.0, 10);
  auto [K, M] = assemble(imm, mesh);
  EigenResult res = smallest_dirichlet_eigenvalue(K, M, mesh.boundary);
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    if (mesh.boundary[i])
      CHECK(res.eigenfunction[i] == 0.0);
    else
      CHECK(res.eigenfunction[i] > 0.0);
  }
  // L2 normalization.
  CHECK(res.eigenfunction.dot(M * res.eigenfunction) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("all-boundary mesh raises") {
  AmbientSpace space = AmbientSpace::euclidean(1);
  Immersion imm = Immersion::interval(space, 1.0);
  DomainMesh mesh = interval_mesh(0.0, 1.0, 2);
  mesh.boundary.assign(mesh.vertex_count(), true);
  auto [K, M] = assemble(imm, mesh);
  CHECK_THROWS_AS(smallest_dirichlet_eigenvalue(K, M, mesh.boundary), EmptyInteriorError);
}

TEST_CASE("nested domains: smaller domain has larger eigenvalue") {
  AmbientSpace space = AmbientSpace::euclidean(2);
  Immersion imm = Immersion::disk(space, 1.0);
  DomainMesh big = disk_mesh(1.0, 16);
  DomainMesh small = disk_mesh(0.5, 16);
  CHECK(solve_mesh_eigenvalue(imm, small).lambda1 >
        solve_mesh_eigenvalue(imm, big).lambda1);
}

TEST_CASE("barta probe sits near lambda1 on interval and disk") {
  AmbientSpace s1 = AmbientSpace::euclidean(1);
  Immersion interval = Immersion::interval(s1, 1.0);
  DomainMesh m1 = interval_mesh(0.0, 1.0, 128);
  const double l1 = solve_mesh_eigenvalue(interval, m1).lambda1;
  const double p1 = barta_equality_probe(interval, m1);
  CHECK(p1 <= l1 + 1e-9);  // Barta: inf c(X) <= lambda for any X
  CHECK(std::abs(p1 - l1) / l1 < 0.05);

  AmbientSpace s2 = AmbientSpace::euclidean(2);
  Immersion disk = Immersion::disk(s2, 1.0);
  DomainMesh m2 = disk_mesh(1.0, 24);
  const double l2 = solve_mesh_eigenvalue(disk, m2).lambda1;
  const double p2 = barta_equality_probe(disk, m2);
  CHECK(std::abs(p2 - l2) / l2 < 0.05);
}

TEST_CASE("exhaustion study: shrinking flat-disk bands push lambda up") {
  AmbientSpace space = AmbientSpace::euclidean(2);
  Immersion imm = Immersion::disk_polar(space, 1.0, 0.05);
  AmbientField field = AmbientField::position(space, Vector::Zero(2));
  const double R = 1.0;
  auto f = [](const Vector& u) { return u[0] * u[0]; };
  ExhaustionOptions opts;
  opts.n_across = 8;
  opts.n_along = 48;
  std::vector<ExhaustionRow> rows = exhaustion_study(
      imm, f, [R](double eps) { return R * R - eps * eps; }, {0.8, 0.4, 0.2},
      [&](double) { return windowed_tangent_field(imm, field, R, 1.0, 0.0); },
      [&](double eps) { return 4.0 / (eps * eps); }, opts);
  REQUIRE(rows.size() == 3);
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].c_inf >= rows[i].theory_bound - 1e-9);
    CHECK(rows[i].lambda_fem >= rows[i].c_inf - 1e-9);  // Barta lower bound
    if (i > 0) CHECK(rows[i].lambda_fem > rows[i - 1].lambda_fem);
  }
}

TEST_CASE("exhaustion study rejects a non-decreasing eps sequence") {
  AmbientSpace space = AmbientSpace::euclidean(2);
  Immersion imm = Immersion::disk_polar(space, 1.0, 0.05);
  AmbientField field = AmbientField::position(space, Vector::Zero(2));
  auto f = [](const Vector& u) { return u[0] * u[0]; };
  CHECK_THROWS_AS(
      exhaustion_study(
          imm, f, [](double eps) { return 1.0 - eps * eps; }, {0.4, 0.8},
          [&](double) { return windowed_tangent_field(imm, field, 1.0, 1.0, 0.0); },
          [](double eps) { return 4.0 / (eps * eps); }),
      std::invalid_argument);
}
