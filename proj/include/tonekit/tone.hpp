#pragma once

#include "tonekit/mesh.hpp"

namespace tonekit {

struct DomainViolationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct SweepError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class CandidateKind { WindowedTangent, GapGradient, Custom };

/// Intrinsic tangent field on M, parameter-coordinate components. When a
/// closed-form pointwise c(X) is known (gap-gradient construction) it is carried
/// alongside and used instead of the finite-difference divergence.
struct CandidateField {
  CandidateKind kind = CandidateKind::Custom;
  std::function<Vector(const Vector&)> value;    // param point -> X^a
  std::function<double(const Vector&)> c_at;     // optional closed-form c(X)

  static CandidateField custom(std::function<Vector(const Vector&)> value) {
    return CandidateField{CandidateKind::Custom, std::move(value), nullptr};
  }
};

/// Exhaustion band D_eps with its mesh and the defining inequality.
struct ExhaustionDomain {
  double epsilon = 0.0;
  std::string defining_function;  // "norm_X_top" or "h_composed"
  double band_lo = 0.0;           // f(cell centers) must stay in [band_lo, band_hi]
  double band_hi = 0.0;
  DomainMesh mesh;
};

enum class Verdict { Holds, Violated, Inconclusive };

std::string to_string(Verdict v);

struct InequalityCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
  Verdict verdict = Verdict::Inconclusive;
};

/// Bundle of lambda estimates, c(X) infima, Cheeger sweep values, and
/// inequality-chain verdicts with margins.
struct ToneReport {
  std::optional<double> lambda_fem;
  std::optional<double> c_inf;
  std::optional<double> bound_theory;
  std::optional<double> cheeger_sweep_upper;
  double cheeger_lower_bound = 0.0;
  std::vector<InequalityCheck> checks;
  bool incomplete = false;
};

/// inf over the domain's quadrature points of div_g X - |X|_g^2. Divergence
/// of intrinsic fields uses the coordinate formula
/// (1/sqrt(det g)) d_a (sqrt(det g) X^a) with central differences, unless the
/// field carries a closed-form c.
double c_of_field(const Immersion& imm, const CandidateField& X,
                  const ExhaustionDomain& domain);

/// Pointwise c(X) at a parameter point (same evaluation as c_of_field).
double c_of_field_at(const Immersion& imm, const CandidateField& X, const Vector& u);

/// X = [C / (R^2 - t^2)] X-bar^T with t = |X-bar^T| and C = 2(alpha - alpha').
/// Requires alpha' < alpha and R above the sampled sup of t.
CandidateField windowed_tangent_field(const Immersion& imm, const AmbientField& field, double R,
                           double alpha, double alpha_prime);

/// X = grad(h o F) / (R - h o F); c(X) evaluated through the Laplacian
/// identity c(X) = Lap(h o F) / (R - h o F).
CandidateField gap_gradient_field(const Immersion& imm, const ConvexFunctionSpec& spec,
                          double R);

/// Minimum over sweep thresholds t of A(boundary D_t) / V(D_t) for sub-level
/// domains of the sweep function: an upper bound on the Cheeger constant of
/// the meshed region, provided the sweep function attains its maximum on the
/// boundary (so sub-level sets are compactly contained and their relative
/// boundary is the whole boundary). Areas and volumes use induced-metric
/// quadrature; level-set lengths come from per-cell linear interpolation.
double cheeger_sweep(const Immersion& imm, const DomainMesh& mesh,
                     const std::function<double(const Vector&)>& sweep_function,
                     int n_thresholds = 128);

/// Estimated scenario quantities feeding the inequality chains.
struct ScenarioBounds {
  int m = 0;
  double alpha = 0.0;
  double sup_xf = 0.0;       // sup |X-bar_F|
  double sup_xtop = 0.0;     // sup |X-bar^T|
  double sup_mean_curv = 0.0;
  double R = 0.0;            // sup |X-bar^T| (or sup h o F) feeding mh alpha / R
  std::optional<double> lambda_fem;
  std::optional<double> cheeger_sweep;
  std::optional<double> sup_rho;  // product scenarios: sup rho o F
  double uncertainty = 1e-6;      // estimator uncertainty band
  bool minimal = false;
};

/// Evaluates the isoperimetric / fundamental-tone inequality chains with the
/// estimated quantities, emitting margin = rhs - lhs per check. A check is
/// never reported Violated when the estimator uncertainty bands overlap.
ToneReport inequality_report(const ScenarioBounds& bounds);

}  // namespace tonekit
