#pragma once

#include "tonekit/tone.hpp"

#include <Eigen/Sparse>

namespace tonekit {

struct EmptyInteriorError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ProbeDegeneracyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Piecewise-linear stiffness/mass pair on all mesh vertices:
/// K = int g^{ab} d_a phi d_b psi sqrt(det g),  M = int phi psi sqrt(det g).
std::pair<SparseMatrix, SparseMatrix> assemble(const Immersion& imm, DomainMesh& mesh);

struct EigenResult {
  double lambda1 = 0.0;
  Vector eigenfunction;  // full vertex vector, zero on boundary, L2-normalized
  double residual = 0.0;
  double mesh_size_h = 0.0;
  std::optional<double> refinement_estimate;
};

/// Smallest eigenvalue of K u = lambda M u restricted to interior dofs
/// (Dirichlet by restriction, never penalties). Dense below 2000 interior
/// dofs for determinism; shift-invert inverse iteration above.
EigenResult smallest_dirichlet_eigenvalue(const SparseMatrix& stiffness,
                                          const SparseMatrix& mass,
                                          const std::vector<bool>& boundary);

/// Discrete Rayleigh quotient of vertex values f (must vanish on the
/// boundary and not be identically zero).
double rayleigh_quotient(const SparseMatrix& stiffness, const SparseMatrix& mass,
                         const std::vector<bool>& boundary, const Vector& f);

/// Convenience: mesh -> assemble -> solve.
EigenResult solve_mesh_eigenvalue(const Immersion& imm, DomainMesh& mesh);

struct ExhaustionRow {
  double eps = 0.0;
  double lambda_fem = 0.0;
  double c_inf = 0.0;
  double theory_bound = 0.0;
  double margin = 0.0;  // lambda_fem - c_inf
};

struct ExhaustionOptions {
  int n_across = 12;            // cells across the band
  int n_along = 48;             // cells along the band (m = 2)
  double regularity_threshold = 1e-6;  // min |grad f| on the level set
};

/// Meshes each band D_eps = { f > level(eps) }, solves the Dirichlet problem,
/// and evaluates c_inf of the candidate field plus the theoretical lower bound.
/// eps_sequence must be decreasing and consist of regular band levels.
std::vector<ExhaustionRow> exhaustion_study(
    const Immersion& imm, const std::function<double(const Vector&)>& defining,
    const std::function<double(double)>& level_of_eps,
    const std::vector<double>& eps_sequence,
    const std::function<CandidateField(double)>& field_of_eps,
    const std::function<double(double)>& theory_bound_of_eps,
    const ExhaustionOptions& options = {});

/// Builds X* = -grad log(phi_1) from the first Dirichlet eigenfunction
/// (gradient recovered at vertices, interpolated per cell) and returns
/// inf c(X*) over quadrature points of fully interior cells. Within 5% of
/// lambda1 on interior-refined meshes of compact-closure domains.
double barta_equality_probe(const Immersion& imm, DomainMesh& mesh);

}  // namespace tonekit
