#pragma once

#include "tonekit/ambient.hpp"
#include "tonekit/sampling.hpp"

namespace tonekit {

struct AdmissibilityError : std::domain_error {
  using std::domain_error::domain_error;
};
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The three-branch conformality constant of the position field on a
/// geodesic ball of radius R in constant curvature kappa:
///   R sqrt(kappa) cot(sqrt(kappa) R)    kappa > 0, R < pi / (2 sqrt(kappa))
///   1                                   kappa = 0
///   R sqrt(-kappa) coth(sqrt(-kappa) R) kappa < 0
double alpha_kappa(double R, double kappa);

enum class FieldKind { Position, GradientOf, Custom };

/// Nonnegative convex function on the ambient space with Hessian access.
/// Built-ins (half r^2, half rho^2) carry analytic gradients and Hessians;
/// custom specs fall back to central finite differences.
class ConvexFunctionSpec {
public:
  using ScalarFn = std::function<double(const Vector&)>;
  using VectorFn = std::function<Vector(const Vector&)>;
  using MatrixFn = std::function<Matrix(const Vector&)>;

  /// h = r^2 / 2 with r the distance to `base` (base must be the chart
  /// origin for curved built-ins).
  static ConvexFunctionSpec half_r_squared(const AmbientSpace& space, Vector base);
  /// Product spaces: h = rho^2 / 2 with rho the distance to {x0} x Sigma.
  static ConvexFunctionSpec half_rho_squared(const AmbientSpace& space, Vector x0);
  static ConvexFunctionSpec custom(const AmbientSpace& space, ScalarFn h,
                                   std::optional<double> alpha_claimed = std::nullopt);

  double h_at(const Vector& p) const { return h_(p); }
  /// Metric gradient (nabla-bar h) in chart components.
  Vector gradient_at(const Vector& p) const;
  /// Covariant Hessian in chart components (lower indices), symmetric.
  Matrix hessian_at(const Vector& p) const;

  const AmbientSpace& space() const { return *space_; }
  std::optional<double> alpha_claimed() const { return alpha_claimed_; }

private:
  const AmbientSpace* space_ = nullptr;
  ScalarFn h_;
  VectorFn gradient_;   // optional analytic
  MatrixFn hessian_;    // optional analytic
  std::optional<double> alpha_claimed_;
};

/// Ambient vector field X-bar with derivative access. Values and jacobians
/// are chart components; jacobians default to central differences.
class AmbientField {
public:
  using VectorFn = std::function<Vector(const Vector&)>;
  using MatrixFn = std::function<Matrix(const Vector&)>;

  /// Position field r d/dr of the distance to `base`. Curved built-ins
  /// require base at the chart origin.
  static AmbientField position(const AmbientSpace& space, Vector base);
  static AmbientField gradient_of(ConvexFunctionSpec spec);
  static AmbientField custom(const AmbientSpace& space, VectorFn value,
                             MatrixFn jacobian = nullptr);

  Vector value_at(const Vector& p) const { return value_(p); }
  /// Partial derivatives d X^i / d x^j in chart components.
  Matrix jacobian_at(const Vector& p) const;

  FieldKind kind() const { return kind_; }
  const AmbientSpace& space() const { return *space_; }
  const ConvexFunctionSpec* convex_spec() const {
    return spec_ ? &*spec_ : nullptr;
  }

private:
  const AmbientSpace* space_ = nullptr;
  FieldKind kind_ = FieldKind::Custom;
  VectorFn value_;
  MatrixFn jacobian_;
  std::optional<ConvexFunctionSpec> spec_;
};

/// Unbounded beta marker distinct from any float sentinel.
struct ConformalityEstimate {
  double alpha_est = 0.0;
  double beta_est = 0.0;
  bool beta_unbounded = false;
  int sample_count = 0;
  std::string region;
};

/// L_X-bar g-bar (Y, Z) = gbar(nabla_Y X, Z) + gbar(nabla_Z X, Y) at p.
double lie_derivative_metric(const AmbientSpace& space, const AmbientField& field,
                             const Vector& p, const Vector& Y, const Vector& Z);

/// Full chart-component matrix of (1/2) L_X-bar g-bar at p.
Matrix half_lie_derivative_matrix(const AmbientSpace& space, const AmbientField& field,
                                  const Vector& p);

/// Samples the region with a deterministic low-discrepancy sequence and
/// returns min/max relative eigenvalues of (1/2) L_X g against g.
ConformalityEstimate estimate_conformality(const AmbientSpace& space,
                                           const AmbientField& field,
                                           const GeodesicBallSpec& region,
                                           int n_samples = 4096,
                                           unsigned seed = 0);

/// Covariant Hessian of the spec at p (delegates to the spec).
Matrix hessian_of(const AmbientSpace& space, const ConvexFunctionSpec& spec,
                  const Vector& p);

/// Kasue comparison lower bound gbar(sigma'_p(l), Y)^2 for h = rho^2/2 on a
/// nonpositively curved product, where sigma'_p(l) = nabla-bar rho at p.
double kasue_lower_bound(const AmbientSpace& space, const Vector& x0,
                         const Vector& p, const Vector& Y);

}  // namespace tonekit
