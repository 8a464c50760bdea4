#include "tonekit/spectrum.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>

namespace tonekit {

namespace {

// Barycentric hat values at a quadrature point of a cell.
Vector hat_values(const DomainMesh& mesh, int cell, const Vector& q) {
  if (mesh.m == 1) {
    const double x0 = mesh.vertices[mesh.cells[cell][0]][0];
    const double x1 = mesh.vertices[mesh.cells[cell][1]][0];
    Vector v(2);
    v << (x1 - q[0]) / (x1 - x0), (q[0] - x0) / (x1 - x0);
    return v;
  }
  const Vector& p0 = mesh.vertices[mesh.cells[cell][0]];
  const Vector& p1 = mesh.vertices[mesh.cells[cell][1]];
  const Vector& p2 = mesh.vertices[mesh.cells[cell][2]];
  Matrix T(2, 2);
  T.col(0) = p1 - p0;
  T.col(1) = p2 - p0;
  const Vector lam = T.partialPivLu().solve(q - p0);
  Vector v(3);
  v << 1.0 - lam[0] - lam[1], lam[0], lam[1];
  return v;
}

// Constant parameter-space gradients of the hat functions on a cell
// (m columns per vertex, stored as rows of an (m+1) x m matrix).
Matrix hat_gradients(const DomainMesh& mesh, int cell) {
  if (mesh.m == 1) {
    const double h = mesh.vertices[mesh.cells[cell][1]][0] -
                     mesh.vertices[mesh.cells[cell][0]][0];
    Matrix g(2, 1);
    g << -1.0 / h, 1.0 / h;
    return g;
  }
  const Vector& p0 = mesh.vertices[mesh.cells[cell][0]];
  const Vector& p1 = mesh.vertices[mesh.cells[cell][1]];
  const Vector& p2 = mesh.vertices[mesh.cells[cell][2]];
  Matrix T(2, 2);
  T.col(0) = p1 - p0;
  T.col(1) = p2 - p0;
  const Matrix Tinv = T.inverse();
  Matrix g(3, 2);
  g.row(1) = Tinv.row(0);
  g.row(2) = Tinv.row(1);
  g.row(0) = -g.row(1) - g.row(2);
  return g;
}

std::vector<int> interior_map(const std::vector<bool>& boundary, int& n_interior) {
  std::vector<int> map(boundary.size(), -1);
  n_interior = 0;
  for (std::size_t i = 0; i < boundary.size(); ++i)
    if (!boundary[i]) map[i] = n_interior++;
  return map;
}

SparseMatrix restrict_interior(const SparseMatrix& A, const std::vector<int>& map,
                               int n_interior) {
  std::vector<Eigen::Triplet<double>> trips;
  for (int k = 0; k < A.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(A, k); it; ++it) {
      const int i = map[it.row()];
      const int j = map[it.col()];
      if (i >= 0 && j >= 0) trips.emplace_back(i, j, it.value());
    }
  }
  SparseMatrix out(n_interior, n_interior);
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

}  // namespace

std::pair<SparseMatrix, SparseMatrix> assemble(const Immersion& imm, DomainMesh& mesh) {
  if (mesh.quadrature.empty()) mesh.populate_cache(imm);
  const int nv = mesh.vertex_count();
  const int vpc = mesh.verts_per_cell();
  std::vector<Eigen::Triplet<double>> kt, mt;
  for (int c = 0; c < mesh.cell_count(); ++c) {
    const Matrix grads = hat_gradients(mesh, c);
    Matrix ke = Matrix::Zero(vpc, vpc);
    Matrix me = Matrix::Zero(vpc, vpc);
    for (const auto& qp : mesh.quadrature[c]) {
      const Vector vals = hat_values(mesh, c, qp.point);
      const double w = qp.weight * qp.sqrt_det;
      ke += w * grads * qp.g_inv * grads.transpose();
      me += w * vals * vals.transpose();
    }
    for (int a = 0; a < vpc; ++a) {
      for (int b = 0; b < vpc; ++b) {
        kt.emplace_back(mesh.cells[c][a], mesh.cells[c][b], ke(a, b));
        mt.emplace_back(mesh.cells[c][a], mesh.cells[c][b], me(a, b));
      }
    }
  }
  SparseMatrix K(nv, nv), M(nv, nv);
  K.setFromTriplets(kt.begin(), kt.end());
  M.setFromTriplets(mt.begin(), mt.end());
  return {K, M};
}

EigenResult smallest_dirichlet_eigenvalue(const SparseMatrix& stiffness,
                                          const SparseMatrix& mass,
                                          const std::vector<bool>& boundary) {
  int n_interior = 0;
  const std::vector<int> map = interior_map(boundary, n_interior);
  if (n_interior < 1)
    throw EmptyInteriorError("smallest_dirichlet_eigenvalue: no interior dofs");

  const SparseMatrix K = restrict_interior(stiffness, map, n_interior);
  const SparseMatrix M = restrict_interior(mass, map, n_interior);

  Vector u(n_interior);
  double lambda = 0.0;
  if (n_interior <= 2000) {
    // Dense fallback for determinism at small sizes.
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> eig{Matrix(K), Matrix(M)};
    if (eig.info() != Eigen::Success)
      throw SolverError("smallest_dirichlet_eigenvalue: dense solver failed");
    lambda = eig.eigenvalues()[0];
    u = eig.eigenvectors().col(0);
  } else {
    // Shift-invert (shift 0) inverse iteration with factorized stiffness.
    Eigen::SimplicialLDLT<SparseMatrix> solver(K);
    if (solver.info() != Eigen::Success)
      throw SolverError("smallest_dirichlet_eigenvalue: stiffness factorization failed");
    u = Vector::Ones(n_interior);
    u /= std::sqrt(u.dot(M * u));
    double prev = 0.0;
    bool converged = false;
    for (int it = 0; it < 500; ++it) {
      Vector y = solver.solve(M * u);
      y /= std::sqrt(y.dot(M * y));
      u = y;
      lambda = u.dot(K * u) / u.dot(M * u);
      if (it > 2 && std::abs(lambda - prev) <= 1e-12 * lambda) {
        converged = true;
        break;
      }
      prev = lambda;
    }
    const double resid = (K * u - lambda * (M * u)).norm() / (K * u).norm();
    if (!converged && resid > 1e-8)
      throw SolverError("smallest_dirichlet_eigenvalue: inverse iteration did not "
                        "converge (residual " + std::to_string(resid) + ")");
  }

  EigenResult result;
  result.lambda1 = lambda;
  result.residual = (K * u - lambda * (M * u)).norm() / std::max(1e-300, (K * u).norm());
  // Sign convention: positive mass-weighted mean.
  if (u.sum() < 0.0) u = -u;
  u /= std::sqrt(u.dot(M * u));
  result.eigenfunction = Vector::Zero(boundary.size());
  for (std::size_t i = 0; i < boundary.size(); ++i)
    if (map[i] >= 0) result.eigenfunction[i] = u[map[i]];
  return result;
}

double rayleigh_quotient(const SparseMatrix& stiffness, const SparseMatrix& mass,
                         const std::vector<bool>& boundary, const Vector& f) {
  for (std::size_t i = 0; i < boundary.size(); ++i)
    if (boundary[i] && f[i] != 0.0)
      throw std::invalid_argument("rayleigh_quotient: f must vanish on the boundary");
  const double denom = f.dot(mass * f);
  if (denom <= 0.0)
    throw std::invalid_argument("rayleigh_quotient: zero function");
  return f.dot(stiffness * f) / denom;
}

EigenResult solve_mesh_eigenvalue(const Immersion& imm, DomainMesh& mesh) {
  auto [K, M] = assemble(imm, mesh);
  EigenResult result = smallest_dirichlet_eigenvalue(K, M, mesh.boundary);
  result.mesh_size_h = mesh.mesh_size();
  return result;
}

std::vector<ExhaustionRow> exhaustion_study(
    const Immersion& imm, const std::function<double(const Vector&)>& defining,
    const std::function<double(double)>& level_of_eps,
    const std::vector<double>& eps_sequence,
    const std::function<CandidateField(double)>& field_of_eps,
    const std::function<double(double)>& theory_bound_of_eps,
    const ExhaustionOptions& options) {
  for (std::size_t i = 1; i < eps_sequence.size(); ++i)
    if (eps_sequence[i] >= eps_sequence[i - 1])
      throw ParameterError("exhaustion_study: eps sequence must be decreasing");

  std::vector<ExhaustionRow> rows;
  double prev_lambda = -std::numeric_limits<double>::infinity();
  for (double eps : eps_sequence) {
    const double level = level_of_eps(eps);
    DomainMesh mesh = band_mesh(imm, defining, level, options.n_across, options.n_along);
    mesh.populate_cache(imm);

    // Regularity of the band level: |grad f| must be bounded away from zero
    // on the level-set boundary vertices.
    const double step = 1e-6 * std::max(1.0, imm.param_domain().scale());
    for (int i = 0; i < mesh.vertex_count(); ++i) {
      if (!mesh.boundary[i]) continue;
      if (std::abs(defining(mesh.vertices[i]) - level) > 1e-6 * std::max(1.0, std::abs(level)))
        continue;  // box-side boundary, not the level set
      Vector grad(imm.m());
      for (int a = 0; a < imm.m(); ++a) {
        Vector up = mesh.vertices[i], um = mesh.vertices[i];
        up[a] += step;
        um[a] -= step;
        grad[a] = (defining(up) - defining(um)) / (2.0 * step);
      }
      if (grad.norm() <= options.regularity_threshold)
        throw ParameterError("exhaustion_study: level is not a regular value");
    }

    ExhaustionRow row;
    row.eps = eps;
    EigenResult eig = solve_mesh_eigenvalue(imm, mesh);
    row.lambda_fem = eig.lambda1;
    ExhaustionDomain dom;
    dom.epsilon = eps;
    dom.mesh = std::move(mesh);
    row.c_inf = c_of_field(imm, field_of_eps(eps), dom);
    row.theory_bound = theory_bound_of_eps(eps);
    row.margin = row.lambda_fem - row.c_inf;
    if (row.lambda_fem < prev_lambda)
      throw SolverError("exhaustion_study: lambda failed to grow as eps decreased");
    prev_lambda = row.lambda_fem;
    rows.push_back(row);
  }
  return rows;
}

double barta_equality_probe(const Immersion& imm, DomainMesh& mesh) {
  auto [K, M] = assemble(imm, mesh);
  EigenResult eig = smallest_dirichlet_eigenvalue(K, M, mesh.boundary);
  const Vector& phi = eig.eigenfunction;
  const int nv = mesh.vertex_count();
  const int m = mesh.m;

  for (int i = 0; i < nv; ++i)
    if (!mesh.boundary[i] && phi[i] <= 0.0)
      throw ProbeDegeneracyError("barta_equality_probe: eigenfunction not positive at an "
                                 "interior vertex; refine the mesh");

  // Area-weighted nodal recovery of the intrinsic gradient of phi.
  std::vector<Vector> nodal_grad(nv, Vector::Zero(m));
  std::vector<double> nodal_weight(nv, 0.0);
  for (int c = 0; c < mesh.cell_count(); ++c) {
    const Matrix grads = hat_gradients(mesh, c);
    Vector grad_param = Vector::Zero(m);
    for (int a = 0; a < mesh.verts_per_cell(); ++a)
      grad_param += phi[mesh.cells[c][a]] * grads.row(a).transpose();
    double w = 0.0;
    for (const auto& qp : mesh.quadrature[c]) w += qp.weight * qp.sqrt_det;
    for (int a = 0; a < mesh.verts_per_cell(); ++a) {
      nodal_grad[mesh.cells[c][a]] += w * grad_param;
      nodal_weight[mesh.cells[c][a]] += w;
    }
  }
  std::vector<Vector> xstar(nv, Vector::Zero(m));
  for (int i = 0; i < nv; ++i) {
    if (mesh.boundary[i] || phi[i] <= 0.0) continue;
    const Matrix g = imm.induced_metric(mesh.vertices[i]);
    xstar[i] = -g.ldlt().solve(nodal_grad[i] / nodal_weight[i]) / phi[i];
  }

  // c(X*) on quadrature points of fully interior cells; X* interpolated P1.
  const double fd_step = 1e-6 * std::max(1.0, imm.param_domain().scale());
  double inf = std::numeric_limits<double>::infinity();
  int interior_cells = 0;
  for (int c = 0; c < mesh.cell_count(); ++c) {
    bool interior = true;
    for (int a = 0; a < mesh.verts_per_cell(); ++a)
      if (mesh.boundary[mesh.cells[c][a]]) interior = false;
    if (!interior) continue;
    ++interior_cells;
    const Matrix grads = hat_gradients(mesh, c);
    // d_a X^b constant on the cell.
    Matrix dX = Matrix::Zero(m, m);
    for (int a = 0; a < mesh.verts_per_cell(); ++a)
      dX += grads.row(a).transpose() * xstar[mesh.cells[c][a]].transpose();
    const double div_flat = dX.trace();
    for (const auto& qp : mesh.quadrature[c]) {
      const Vector vals = hat_values(mesh, c, qp.point);
      Vector x = Vector::Zero(m);
      for (int a = 0; a < mesh.verts_per_cell(); ++a)
        x += vals[a] * xstar[mesh.cells[c][a]];
      // div = d_a X^a + X^a d_a log sqrt(det g)
      double div = div_flat;
      for (int a = 0; a < m; ++a) {
        Vector up = qp.point, um = qp.point;
        up[a] += fd_step;
        um[a] -= fd_step;
        const double dlog = (std::log(imm.induced_metric(up).determinant()) -
                             std::log(imm.induced_metric(um).determinant())) /
                            (4.0 * fd_step);
        div += x[a] * dlog;
      }
      inf = std::min(inf, div - x.dot(qp.g * x));
    }
  }
  if (interior_cells == 0)
    throw ProbeDegeneracyError("barta_equality_probe: no fully interior cells");
  return inf;
}

}  // namespace tonekit
