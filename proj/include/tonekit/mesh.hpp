#pragma once

#include "tonekit/immersion.hpp"

#include <array>
#include <iosfwd>

namespace tonekit {

struct MeshError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BandResolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Triangulated (m=2) or segmented (m=1) parameter-space mesh with boundary
/// marking and induced-metric quadrature data.
struct DomainMesh {
  struct QuadPoint {
    Vector point;     // parameter coordinates
    double weight;    // parameter-measure quadrature weight
    Matrix g;         // induced metric at the point
    Matrix g_inv;
    double sqrt_det;  // sqrt(det g)
  };

  int m = 0;
  std::vector<Vector> vertices;
  std::vector<std::array<int, 3>> cells;  // segments use entries 0..1
  std::vector<bool> boundary;             // per vertex
  std::vector<std::vector<QuadPoint>> quadrature;  // per cell, after caching

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int cell_count() const { return static_cast<int>(cells.size()); }
  int verts_per_cell() const { return m + 1; }

  /// Fills the per-cell quadrature cache from the immersion's induced
  /// geometry (3-point midpoint rule on triangles, 2-point Gauss on
  /// segments). Throws MeshError on inverted cells.
  void populate_cache(const Immersion& imm);

  /// Longest cell edge in the induced metric (after populate_cache).
  double mesh_size() const;

  /// Riemannian area/volume sum of all quadrature weights.
  double volume() const;
};

/// Uniform mesh of the 1-d parameter interval [a, b] with n cells.
DomainMesh interval_mesh(double a, double b, int n);

/// Structured triangulated rectangle [a0,b0] x [a1,b1], (nx x ny) quads.
DomainMesh rectangle_mesh(double a0, double b0, double a1, double b1, int nx, int ny);

/// Structured polar disk mesh of radius R around the origin with n_r rings;
/// boundary = outer ring.
DomainMesh disk_mesh(double R, int n_r);

/// Band { f >= level } inside the parameter box, for f monotone increasing
/// along the first parameter axis on each line of constant remaining
/// parameters. Lower boundary vertices are projected onto the level set by
/// bisection along parameter lines. The whole band boundary is marked.
DomainMesh band_mesh(const Immersion& imm, const std::function<double(const Vector&)>& f,
                     double level, int n_across, int n_along = 0);

/// True when f(cell center) lies inside [lo, hi] for every cell.
bool cells_inside_band(const DomainMesh& mesh,
                       const std::function<double(const Vector&)>& f, double lo,
                       double hi);

/// Plain text mesh format: header with counts, then coordinates, simplices,
/// boundary flags.
void write_mesh(std::ostream& os, const DomainMesh& mesh);
DomainMesh read_mesh(std::istream& is);

}  // namespace tonekit
