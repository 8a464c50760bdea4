#pragma once

#include <Eigen/Dense>

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tonekit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Connection coefficients at a point: christoffel[k](i,j) = Gamma^k_ij.
using Christoffel = std::vector<Matrix>;

struct ChartDomainError : std::domain_error {
  using std::domain_error::domain_error;
};
struct UnsupportedOperation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SpaceKind {
  Euclidean,
  HyperbolicBallModel,
  SphericalCap,
  Product,
  Custom,
};

/// Sectional-curvature bounds (kappa_minus, kappa_plus) valid on the declared
/// region. Unbounded sides use +-infinity.
struct CurvatureBounds {
  double kappa_minus = 0.0;
  double kappa_plus = 0.0;
};

/// Chart-based Riemannian manifold. One global chart per space; built-in
/// model geometries are conformal to the flat chart (Poincare ball,
/// stereographic spherical cap) or block products thereof.
class AmbientSpace {
public:
  using MetricFn = std::function<Matrix(const Vector&)>;
  using ChristoffelFn = std::function<Christoffel(const Vector&)>;

  static AmbientSpace euclidean(int dim);
  /// Poincare ball model of constant curvature kappa < 0; chart domain is the
  /// open ball of radius 1/sqrt(-kappa).
  static AmbientSpace hyperbolic_ball(int dim, double kappa = -1.0);
  /// Stereographic chart of the round sphere of curvature kappa > 0,
  /// restricted to the cap around the chart origin (cut-locus free).
  static AmbientSpace spherical_cap(int dim, double kappa = 1.0);
  static AmbientSpace product(AmbientSpace first, AmbientSpace second);
  /// Custom space from a metric function; christoffels fall back to central
  /// finite differences of the metric through the Levi-Civita formula.
  static AmbientSpace custom(int dim, MetricFn metric, CurvatureBounds bounds,
                             double fd_scale = 1.0);
  /// Custom metric from a coefficient table on a regular grid, interpolation
  /// order 1. `lo`/`hi` bound the grid box, `values[i]` is the metric at the
  /// i-th grid node in row-major order.
  static AmbientSpace custom_grid(int dim, const Vector& lo, const Vector& hi,
                                  const std::vector<int>& shape,
                                  const std::vector<Matrix>& values,
                                  CurvatureBounds bounds);

  int dim() const { return dim_; }
  SpaceKind kind() const { return kind_; }
  const CurvatureBounds& curvature_bounds() const { return bounds_; }

  Matrix metric_at(const Vector& p) const;
  Christoffel christoffel_at(const Vector& p) const;

  /// True when the point lies in the chart domain.
  bool contains(const Vector& p) const;

  /// Geodesic distance r(p) from `base`, closed form for built-in kinds.
  /// Throws UnsupportedOperation for custom spaces without a registered
  /// distance.
  double distance_from_point(const Vector& base, const Vector& p) const;

  /// Metric gradient of the distance function from `base`, unit in g-bar.
  Vector distance_gradient(const Vector& base, const Vector& p) const;

  /// Product spaces only: distance rho(p) = d_{Sigma'}(x, x0) to the totally
  /// convex slice {x0} x Sigma, where p = (x, y).
  double distance_to_totally_convex(const Vector& x0, const Vector& p) const;
  /// Companion accessor h(p) = rho(p)^2 / 2.
  double convex_distance_half_square(const Vector& x0, const Vector& p) const;

  /// Product accessors (throw UnsupportedOperation for non-products).
  const AmbientSpace& factor_first() const;
  const AmbientSpace& factor_second() const;

private:
  AmbientSpace() = default;

  int dim_ = 0;
  SpaceKind kind_ = SpaceKind::Custom;
  CurvatureBounds bounds_{};
  double conformal_kappa_ = 0.0;  // built-in conformal charts
  MetricFn metric_;
  ChristoffelFn christoffel_;
  double fd_scale_ = 1.0;
  std::shared_ptr<const AmbientSpace> factor_a_, factor_b_;
};

/// Geodesic ball B_R(center). For spherical kinds the admissibility
/// sqrt(kappa+) * R < pi/2 is enforced at construction.
struct GeodesicBallSpec {
  Vector center;
  double radius = 0.0;
  const AmbientSpace* space = nullptr;

  GeodesicBallSpec(Vector c, double R, const AmbientSpace& s);
};

class AmbientField;  // fields.hpp

/// Covariant derivative (nabla-bar_v X) at p in chart components.
Vector covariant_derivative(const AmbientSpace& space, const AmbientField& field,
                            const Vector& p, const Vector& v);

/// Christoffels by central differences of the metric via the Levi-Civita
/// formula; used for custom spaces and as a test oracle for built-ins.
Christoffel christoffel_from_metric_fd(const AmbientSpace::MetricFn& metric,
                                       const Vector& p, double step);

}  // namespace tonekit
