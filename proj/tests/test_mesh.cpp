#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tonekit/mesh.hpp"

#include <cmath>
#include <sstream>

using namespace tonekit;

namespace {
Vector vec2(double x, double y) { return (Vector(2) << x, y).finished(); }
}  // namespace

TEST_CASE("interval mesh counts, volume, boundary") {
  DomainMesh mesh = interval_mesh(0.0, 2.0, 10);
  CHECK(mesh.m == 1);
  CHECK(mesh.vertex_count() == 11);
  CHECK(mesh.cell_count() == 10);
  int n_boundary = 0;
  for (bool b : mesh.boundary) n_boundary += b ? 1 : 0;
  CHECK(n_boundary == 2);

  AmbientSpace space = AmbientSpace::euclidean(1);
  Immersion imm = Immersion::interval(space, 2.0);
  mesh.populate_cache(imm);
  CHECK(mesh.volume() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(mesh.mesh_size() == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("rectangle mesh volume and boundary count") {
  DomainMesh mesh = rectangle_mesh(0.0, 1.0, 0.0, 2.0, 4, 8);
  CHECK(mesh.m == 2);
  CHECK(mesh.vertex_count() == 5 * 9);
  CHECK(mesh.cell_count() == 2 * 4 * 8);
  AmbientSpace space = AmbientSpace::euclidean(2);
  Immersion imm = Immersion::disk(space, 4.0);  // identity chart
  mesh.populate_cache(imm);
  CHECK(mesh.volume() == doctest::Approx(2.0).epsilon(1e-12));
  int n_boundary = 0;
  for (bool b : mesh.boundary) n_boundary += b ? 1 : 0;
  CHECK(n_boundary == 2 * (4 + 8));
}

TEST_CASE("disk mesh area converges to pi R^2 and halving n halves h") {
  AmbientSpace space = AmbientSpace::euclidean(2);
  Immersion imm = Immersion::disk(space, 1.0);
  DomainMesh coarse = disk_mesh(1.0, 8);
  DomainMesh fine = disk_mesh(1.0, 16);
  coarse.populate_cache(imm);
  fine.populate_cache(imm);
  const double pi = 3.14159265358979323846;
  CHECK(std::abs(coarse.volume() - pi) < 0.02);
  CHECK(std::abs(fine.volume() - pi) < 0.006);
  CHECK(std::abs(fine.volume() - pi) < std::abs(coarse.volume() - pi));
  CHECK(fine.mesh_size() == doctest::Approx(0.5 * coarse.mesh_size()).epsilon(0.1));
  // Boundary = outer ring only.
  for (int i = 0; i < fine.vertex_count(); ++i)
    CHECK(fine.boundary[i] == (std::abs(fine.vertices[i].norm() - 1.0) < 1e-9));
}

TEST_CASE("curved immersion changes the quadrature volume") {
  AmbientSpace space = AmbientSpace::euclidean(3);
  // Catenoid patch area exceeds the parameter-box area: the induced metric
  // is cosh^2(u) (du^2 + dv^2) for c = 1.
  Immersion imm = Immersion::catenoid(space, 1.0, -0.5, 0.5, 0.0, 1.0);
  DomainMesh mesh = rectangle_mesh(-0.5, 0.5, 0.0, 1.0, 32, 32);
  mesh.populate_cache(imm);
  // integral of cosh^2(u) over [-1/2,1/2] = (1 + sinh(1))/2.
  const double exact = 0.5 * (1.0 + std::sinh(1.0));
  CHECK(mesh.volume() == doctest::Approx(exact).epsilon(1e-4));
}

TEST_CASE("inverted cell is reported with its index") {
  DomainMesh mesh = rectangle_mesh(0.0, 1.0, 0.0, 1.0, 2, 2);
  std::swap(mesh.cells[3][0], mesh.cells[3][1]);  // flip orientation
  AmbientSpace space = AmbientSpace::euclidean(2);
  Immersion imm = Immersion::disk(space, 2.0);
  CHECK_THROWS_WITH_AS(mesh.populate_cache(imm),
                       doctest::Contains("cell 3"), MeshError);
}

TEST_CASE("band mesh covers an annulus and flags its whole boundary") {
  AmbientSpace space = AmbientSpace::euclidean(2);
  Immersion imm = Immersion::disk_polar(space, 1.0, 0.05);
  auto f = [](const Vector& u) { return u[0]; };  // rho
  DomainMesh mesh = band_mesh(imm, f, 0.5, 8, 48);
  mesh.populate_cache(imm);
  const double pi = 3.14159265358979323846;
  CHECK(mesh.volume() == doctest::Approx(pi * (1.0 - 0.25)).epsilon(1e-2));
  CHECK(cells_inside_band(mesh, f, 0.5 - 1e-9, 1.0 + 1e-9));
  CHECK_FALSE(cells_inside_band(mesh, f, 0.6, 1.0));
}

TEST_CASE("band mesh errors when the level exceeds the range") {
  AmbientSpace space = AmbientSpace::euclidean(2);
  Immersion imm = Immersion::disk_polar(space, 1.0, 0.05);
  auto f = [](const Vector& u) { return u[0]; };
  CHECK_THROWS_AS(band_mesh(imm, f, 2.0, 8, 48), BandResolutionError);
}

TEST_CASE("mesh file roundtrip is exact") {
  DomainMesh mesh = disk_mesh(1.0, 4);
  std::stringstream ss;
  write_mesh(ss, mesh);
  DomainMesh back = read_mesh(ss);
  REQUIRE(back.vertex_count() == mesh.vertex_count());
  REQUIRE(back.cell_count() == mesh.cell_count());
  CHECK(back.m == mesh.m);
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    CHECK(back.vertices[i] == mesh.vertices[i]);  // bit-exact via max precision
    CHECK(back.boundary[i] == mesh.boundary[i]);
  }
  for (int c = 0; c < mesh.cell_count(); ++c) CHECK(back.cells[c] == mesh.cells[c]);
}

TEST_CASE("malformed mesh stream raises") {
  std::stringstream ss("mesh 2 3\n0 0\n");
  CHECK_THROWS_AS(read_mesh(ss), MeshError);
}
