#include "tonekit/mesh.hpp"

#include <cmath>
#include <istream>
#include <ostream>

namespace tonekit {

void DomainMesh::populate_cache(const Immersion& imm) {
  quadrature.assign(cells.size(), {});
  for (std::size_t c = 0; c < cells.size(); ++c) {
    std::vector<QuadPoint> qps;
    if (m == 1) {
      const Vector& p0 = vertices[cells[c][0]];
      const Vector& p1 = vertices[cells[c][1]];
      const double h = p1[0] - p0[0];
      if (h <= 0.0)
        throw MeshError("populate_cache: inverted segment cell " + std::to_string(c));
      const double offset = h / (2.0 * std::sqrt(3.0));
      for (double sgn : {-1.0, 1.0}) {
        QuadPoint qp;
        qp.point = 0.5 * (p0 + p1);
        qp.point[0] += sgn * offset;
        qp.weight = h / 2.0;
        qps.push_back(std::move(qp));
      }
    } else {
      const Vector& p0 = vertices[cells[c][0]];
      const Vector& p1 = vertices[cells[c][1]];
      const Vector& p2 = vertices[cells[c][2]];
      const double signed_area =
          0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]));
      if (signed_area <= 0.0)
        throw MeshError("populate_cache: inverted triangle cell " + std::to_string(c));
      // Edge-midpoint rule, exact to degree 2.
      for (int e = 0; e < 3; ++e) {
        QuadPoint qp;
        qp.point = 0.5 * (vertices[cells[c][e]] + vertices[cells[c][(e + 1) % 3]]);
        qp.weight = signed_area / 3.0;
        qps.push_back(std::move(qp));
      }
    }
    for (QuadPoint& qp : qps) {
      qp.g = imm.induced_metric(qp.point);
      Eigen::LLT<Matrix> llt(qp.g);
      if (llt.info() != Eigen::Success)
        throw MeshError("populate_cache: induced metric not positive definite at cell " +
                        std::to_string(c));
      qp.g_inv = qp.g.inverse();
      qp.sqrt_det = std::sqrt(qp.g.determinant());
    }
    quadrature[c] = std::move(qps);
  }
}

double DomainMesh::mesh_size() const {
  double h = 0.0;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const Matrix& g = quadrature.empty() ? Matrix() : quadrature[c].front().g;
    for (int a = 0; a < verts_per_cell(); ++a) {
      for (int b = a + 1; b < verts_per_cell(); ++b) {
        const Vector d = vertices[cells[c][a]] - vertices[cells[c][b]];
        const double len =
            quadrature.empty() ? d.norm() : std::sqrt(d.dot(g * d));
        h = std::max(h, len);
      }
    }
  }
  return h;
}

double DomainMesh::volume() const {
  double v = 0.0;
  for (const auto& qps : quadrature)
    for (const auto& qp : qps) v += qp.weight * qp.sqrt_det;
  return v;
}

DomainMesh interval_mesh(double a, double b, int n) {
  DomainMesh mesh;
  mesh.m = 1;
  for (int i = 0; i <= n; ++i) {
    mesh.vertices.push_back(Vector::Constant(1, a + (b - a) * i / n));
    mesh.boundary.push_back(i == 0 || i == n);
  }
  for (int i = 0; i < n; ++i) mesh.cells.push_back({i, i + 1, -1});
  return mesh;
}

DomainMesh rectangle_mesh(double a0, double b0, double a1, double b1, int nx, int ny) {
  DomainMesh mesh;
  mesh.m = 2;
  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      Vector p(2);
      p << a0 + (b0 - a0) * i / nx, a1 + (b1 - a1) * j / ny;
      mesh.vertices.push_back(p);
      mesh.boundary.push_back(i == 0 || i == nx || j == 0 || j == ny);
    }
  }
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      mesh.cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
      mesh.cells.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }
  }
  return mesh;
}

DomainMesh disk_mesh(double R, int n_r) {
  DomainMesh mesh;
  mesh.m = 2;
  const int n_theta = 6 * n_r;
  mesh.vertices.push_back(Vector::Zero(2));
  mesh.boundary.push_back(false);
  for (int r = 1; r <= n_r; ++r) {
    const double rho = R * r / n_r;
    for (int t = 0; t < n_theta; ++t) {
      const double theta = 2.0 * M_PI * t / n_theta;
      Vector p(2);
      p << rho * std::cos(theta), rho * std::sin(theta);
      mesh.vertices.push_back(p);
      mesh.boundary.push_back(r == n_r);
    }
  }
  auto ring = [n_theta](int r, int t) { return 1 + (r - 1) * n_theta + (t % n_theta); };
  for (int t = 0; t < n_theta; ++t)
    mesh.cells.push_back({0, ring(1, t), ring(1, t + 1)});
  for (int r = 1; r < n_r; ++r) {
    for (int t = 0; t < n_theta; ++t) {
      mesh.cells.push_back({ring(r, t), ring(r + 1, t), ring(r + 1, t + 1)});
      mesh.cells.push_back({ring(r, t), ring(r + 1, t + 1), ring(r, t + 1)});
    }
  }
  return mesh;
}

DomainMesh band_mesh(const Immersion& imm, const std::function<double(const Vector&)>& f,
                     double level, int n_across, int n_along) {
  const ParamBox& box = imm.param_domain();
  const int m = imm.m();
  if (n_along <= 0) n_along = (m == 1) ? 1 : 4 * n_across;

  auto bisect_line = [&](double v) {
    // Find u with f(u, v) = level on the first-axis line.
    Vector plo(m), phi(m);
    plo[0] = box.lo[0];
    phi[0] = box.hi[0];
    if (m == 2) plo[1] = phi[1] = v;
    double flo = f(plo) - level;
    double fhi = f(phi) - level;
    if (flo >= 0.0) return box.lo[0];  // whole line inside the band
    if (fhi <= 0.0)
      throw BandResolutionError("band_mesh: level set missing on a parameter line; "
                                "refine the band or check the level");
    double a = box.lo[0], b = box.hi[0];
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (a + b);
      Vector p = plo;
      p[0] = mid;
      if (f(p) - level < 0.0) a = mid; else b = mid;
    }
    return 0.5 * (a + b);
  };

  if (m == 1) {
    const double ustar = bisect_line(0.0);
    if (box.hi[0] - ustar < 1e-12 * std::max(1.0, box.scale()))
      throw BandResolutionError("band_mesh: empty band");
    return interval_mesh(ustar, box.hi[0], std::max(2, n_across));
  }

  DomainMesh mesh;
  mesh.m = 2;
  const int ns = std::max(2, n_across);
  auto vid = [ns](int i, int j) { return j * (ns + 1) + i; };
  for (int j = 0; j <= n_along; ++j) {
    const double v = box.lo[1] + (box.hi[1] - box.lo[1]) * j / n_along;
    const double ustar = bisect_line(v);
    if (box.hi[0] - ustar < 1e-12 * std::max(1.0, box.scale()))
      throw BandResolutionError("band_mesh: empty band on a parameter line");
    for (int i = 0; i <= ns; ++i) {
      Vector p(2);
      p << ustar + (box.hi[0] - ustar) * i / ns, v;
      mesh.vertices.push_back(p);
      mesh.boundary.push_back(i == 0 || i == ns || j == 0 || j == n_along);
    }
  }
  for (int j = 0; j < n_along; ++j) {
    for (int i = 0; i < ns; ++i) {
      mesh.cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
      mesh.cells.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }
  }
  return mesh;
}

bool cells_inside_band(const DomainMesh& mesh,
                       const std::function<double(const Vector&)>& f, double lo,
                       double hi) {
  for (const auto& cell : mesh.cells) {
    Vector center = Vector::Zero(mesh.vertices.front().size());
    for (int a = 0; a < mesh.verts_per_cell(); ++a) center += mesh.vertices[cell[a]];
    center /= mesh.verts_per_cell();
    const double v = f(center);
    if (v < lo || v > hi) return false;
  }
  return true;
}

void write_mesh(std::ostream& os, const DomainMesh& mesh) {
  os << mesh.m << ' ' << mesh.vertex_count() << ' ' << mesh.cell_count() << '\n';
  os.precision(17);
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    for (int d = 0; d < mesh.m; ++d) os << mesh.vertices[i][d] << (d + 1 < mesh.m ? " " : "");
    os << '\n';
  }
  for (const auto& cell : mesh.cells) {
    for (int a = 0; a < mesh.verts_per_cell(); ++a)
      os << cell[a] << (a + 1 < mesh.verts_per_cell() ? " " : "");
    os << '\n';
  }
  for (int i = 0; i < mesh.vertex_count(); ++i)
    os << (mesh.boundary[i] ? 1 : 0) << '\n';
}

DomainMesh read_mesh(std::istream& is) {
  DomainMesh mesh;
  int nv = 0, nc = 0;
  if (!(is >> mesh.m >> nv >> nc)) throw MeshError("read_mesh: bad header");
  if (mesh.m != 1 && mesh.m != 2) throw MeshError("read_mesh: unsupported dimension");
  mesh.vertices.resize(nv, Vector::Zero(mesh.m));
  for (int i = 0; i < nv; ++i)
    for (int d = 0; d < mesh.m; ++d)
      if (!(is >> mesh.vertices[i][d])) throw MeshError("read_mesh: bad vertex data");
  mesh.cells.assign(nc, {-1, -1, -1});
  for (int c = 0; c < nc; ++c)
    for (int a = 0; a < mesh.verts_per_cell(); ++a)
      if (!(is >> mesh.cells[c][a])) throw MeshError("read_mesh: bad cell data");
  mesh.boundary.resize(nv);
  for (int i = 0; i < nv; ++i) {
    int flag = 0;
    if (!(is >> flag)) throw MeshError("read_mesh: bad boundary flags");
    mesh.boundary[i] = flag != 0;
  }
  return mesh;
}

}  // namespace tonekit
