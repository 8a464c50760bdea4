#include "tonekit/fields.hpp"

#include <cmath>

namespace tonekit {

namespace {

// x cot(x) and x coth(x) with stable small-argument branches.
double xcot(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 3.0;
  return x * std::cos(x) / std::sin(x);
}
double xcoth(double x) {
  if (std::abs(x) < 1e-8) return 1.0 + x * x / 3.0;
  return x * std::cosh(x) / std::sinh(x);
}

// Position-field radial profile: X(x) = profile(|x|) * x for the conformal
// built-in charts centered at the origin.
double position_profile(SpaceKind kind, double kappa, double s) {
  switch (kind) {
    case SpaceKind::Euclidean:
      return 1.0;
    case SpaceKind::HyperbolicBallModel: {
      const double c = std::sqrt(-kappa);
      const double cs = c * s;
      if (cs < 1e-10) return 1.0;
      return (1.0 - cs * cs) * std::atanh(cs) / cs;
    }
    case SpaceKind::SphericalCap: {
      const double c = std::sqrt(kappa);
      const double cs = c * s;
      if (cs < 1e-10) return 1.0;
      return (1.0 + cs * cs) * std::atan(cs) / cs;
    }
    default:
      throw UnsupportedOperation("position field: unsupported space kind");
  }
}

// d r / d |x| in the conformal chart.
double radial_distance_derivative(SpaceKind kind, double kappa, double s) {
  switch (kind) {
    case SpaceKind::Euclidean:
      return 1.0;
    case SpaceKind::HyperbolicBallModel:
      return 2.0 / (1.0 + kappa * s * s);
    case SpaceKind::SphericalCap:
      return 2.0 / (1.0 + kappa * s * s);
    default:
      throw UnsupportedOperation("radial chart: unsupported space kind");
  }
}

double distance_in_chart(SpaceKind kind, double kappa, double s) {
  switch (kind) {
    case SpaceKind::Euclidean:
      return s;
    case SpaceKind::HyperbolicBallModel: {
      const double c = std::sqrt(-kappa);
      return 2.0 * std::atanh(c * s) / c;
    }
    case SpaceKind::SphericalCap: {
      const double c = std::sqrt(kappa);
      return 2.0 * std::atan(c * s) / c;
    }
    default:
      throw UnsupportedOperation("radial chart: unsupported space kind");
  }
}

// Hessian of r^2/2 on a constant-curvature built-in centered at the origin:
// r * mu(r) (g - dr (x) dr) + dr (x) dr, where mu = sqrt(|k|) {cot, 1/r, coth}.
Matrix half_r_squared_hessian(const AmbientSpace& space, const Vector& p) {
  const int n = space.dim();
  const Matrix g = space.metric_at(p);
  const double s = p.norm();
  if (s < 1e-12) return g;  // Hess(r^2/2) = g at the center
  const double kappa = space.curvature_bounds().kappa_plus;  // constant here
  const double r = distance_in_chart(space.kind(), kappa, s);
  double r_mu;  // r * mu(r), the tangential relative eigenvalue
  switch (space.kind()) {
    case SpaceKind::Euclidean:
      r_mu = 1.0;
      break;
    case SpaceKind::HyperbolicBallModel:
      r_mu = xcoth(std::sqrt(-kappa) * r);
      break;
    case SpaceKind::SphericalCap:
      r_mu = xcot(std::sqrt(kappa) * r);
      break;
    default:
      throw UnsupportedOperation("half_r_squared: unsupported space kind");
  }
  const Vector dr = (radial_distance_derivative(space.kind(), kappa, s) / s) * p;
  const Matrix drdr = dr * dr.transpose();
  return r_mu * (g - drdr) + drdr;
}

void require_origin_base(const AmbientSpace& space, const Vector& base) {
  if (space.kind() != SpaceKind::Euclidean && base.norm() > 0.0)
    throw UnsupportedOperation("curved built-ins support base at the chart origin only");
}

}  // namespace

double alpha_kappa(double R, double kappa) {
  if (R < 0.0) throw AdmissibilityError("alpha_kappa: R must be nonnegative");
  if (kappa > 0.0) {
    const double c = std::sqrt(kappa);
    if (R >= M_PI / (2.0 * c))
      throw AdmissibilityError("alpha_kappa: R must stay below pi / (2 sqrt(kappa))");
    return xcot(c * R);
  }
  if (kappa == 0.0) return 1.0;
  return xcoth(std::sqrt(-kappa) * R);
}

ConvexFunctionSpec ConvexFunctionSpec::half_r_squared(const AmbientSpace& space,
                                                      Vector base) {
  require_origin_base(space, base);
  ConvexFunctionSpec spec;
  spec.space_ = &space;
  const SpaceKind kind = space.kind();
  const double kappa = space.curvature_bounds().kappa_plus;
  const AmbientSpace* sp = &space;
  Vector b = std::move(base);
  spec.h_ = [sp, b](const Vector& p) {
    const double r = sp->distance_from_point(b, p);
    return 0.5 * r * r;
  };
  spec.gradient_ = [kind, kappa, b](const Vector& p) {
    if (kind == SpaceKind::Euclidean) return Vector(p - b);
    return Vector(position_profile(kind, kappa, p.norm()) * p);
  };
  spec.hessian_ = [sp](const Vector& p) { return half_r_squared_hessian(*sp, p); };
  // alpha = alpha_{kappa+}(R) would need a radius; callers set it per region.
  return spec;
}

ConvexFunctionSpec ConvexFunctionSpec::half_rho_squared(const AmbientSpace& space,
                                                        Vector x0) {
  if (space.kind() != SpaceKind::Product)
    throw UnsupportedOperation("half_rho_squared: product spaces only");
  ConvexFunctionSpec spec;
  spec.space_ = &space;
  const AmbientSpace* sp = &space;
  const int da = space.factor_first().dim();
  const int dim = space.dim();
  ConvexFunctionSpec first = half_r_squared(space.factor_first(), x0);
  Vector b = std::move(x0);
  spec.h_ = [sp, b](const Vector& p) { return sp->convex_distance_half_square(b, p); };
  spec.gradient_ = [first, da, dim](const Vector& p) {
    Vector g = Vector::Zero(dim);
    g.head(da) = first.gradient_at(p.head(da));
    return g;
  };
  spec.hessian_ = [first, da, dim](const Vector& p) {
    Matrix h = Matrix::Zero(dim, dim);
    h.topLeftCorner(da, da) = first.hessian_at(p.head(da));
    return h;
  };
  return spec;
}

ConvexFunctionSpec ConvexFunctionSpec::custom(const AmbientSpace& space, ScalarFn h,
                                              std::optional<double> alpha_claimed) {
  ConvexFunctionSpec spec;
  spec.space_ = &space;
  spec.h_ = std::move(h);
  spec.alpha_claimed_ = alpha_claimed;
  return spec;
}

Vector ConvexFunctionSpec::gradient_at(const Vector& p) const {
  if (gradient_) return gradient_(p);
  const double step = 1e-6 * (1.0 + p.norm());
  Vector dh(space_->dim());
  for (int i = 0; i < space_->dim(); ++i) {
    Vector pp = p, pm = p;
    pp[i] += step;
    pm[i] -= step;
    dh[i] = (h_(pp) - h_(pm)) / (2.0 * step);
  }
  return space_->metric_at(p).ldlt().solve(dh);
}

Matrix ConvexFunctionSpec::hessian_at(const Vector& p) const {
  if (hessian_) return hessian_(p);
  const int n = space_->dim();
  const double step = 1e-4 * (1.0 + p.norm());
  // Covariant Hessian: partial_i partial_j h - Gamma^k_ij partial_k h.
  Vector dh(n);
  Matrix d2h(n, n);
  for (int i = 0; i < n; ++i) {
    Vector pp = p, pm = p;
    pp[i] += step;
    pm[i] -= step;
    dh[i] = (h_(pp) - h_(pm)) / (2.0 * step);
    for (int j = i; j < n; ++j) {
      Vector a = p, b = p, c = p, d = p;
      a[i] += step; a[j] += step;
      b[i] += step; b[j] -= step;
      c[i] -= step; c[j] += step;
      d[i] -= step; d[j] -= step;
      d2h(i, j) = d2h(j, i) = (h_(a) - h_(b) - h_(c) + h_(d)) / (4.0 * step * step);
    }
  }
  const Christoffel gamma = space_->christoffel_at(p);
  Matrix out = d2h;
  for (int k = 0; k < n; ++k) out -= dh[k] * gamma[k];
  return 0.5 * (out + out.transpose());
}

AmbientField AmbientField::position(const AmbientSpace& space, Vector base) {
  require_origin_base(space, base);
  if (space.kind() == SpaceKind::Product || space.kind() == SpaceKind::Custom)
    throw UnsupportedOperation("position field: use gradient_of(half_rho_squared) on products");
  AmbientField f;
  f.space_ = &space;
  f.kind_ = FieldKind::Position;
  const SpaceKind kind = space.kind();
  const double kappa = space.curvature_bounds().kappa_plus;
  Vector b = std::move(base);
  f.value_ = [kind, kappa, b](const Vector& p) {
    if (kind == SpaceKind::Euclidean) return Vector(p - b);
    return Vector(position_profile(kind, kappa, p.norm()) * p);
  };
  if (kind == SpaceKind::Euclidean) {
    const int n = space.dim();
    f.jacobian_ = [n](const Vector&) { return Matrix::Identity(n, n); };
  }
  return f;
}

AmbientField AmbientField::gradient_of(ConvexFunctionSpec spec) {
  AmbientField f;
  f.space_ = &spec.space();
  f.kind_ = FieldKind::GradientOf;
  f.spec_ = std::move(spec);
  f.value_ = [s = *f.spec_](const Vector& p) { return s.gradient_at(p); };
  return f;
}

AmbientField AmbientField::custom(const AmbientSpace& space, VectorFn value,
                                  MatrixFn jacobian) {
  AmbientField f;
  f.space_ = &space;
  f.kind_ = FieldKind::Custom;
  f.value_ = std::move(value);
  f.jacobian_ = std::move(jacobian);
  return f;
}

Matrix AmbientField::jacobian_at(const Vector& p) const {
  if (jacobian_) return jacobian_(p);
  const int n = space_->dim();
  const double step = 1e-6 * (1.0 + p.norm());
  Matrix jac(n, n);
  for (int j = 0; j < n; ++j) {
    Vector pp = p, pm = p;
    pp[j] += step;
    pm[j] -= step;
    jac.col(j) = (value_(pp) - value_(pm)) / (2.0 * step);
  }
  return jac;
}

Matrix half_lie_derivative_matrix(const AmbientSpace& space, const AmbientField& field,
                                  const Vector& p) {
  const int n = space.dim();
  const Matrix g = space.metric_at(p);
  const Matrix jac = field.jacobian_at(p);
  const Vector x = field.value_at(p);
  const Christoffel gamma = space.christoffel_at(p);
  // D^k_i = nabla_i X^k
  Matrix D = jac;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) D(k, i) += gamma[k].row(i).dot(x);
  const Matrix gd = g * D;
  return 0.5 * (gd + gd.transpose());
}

double lie_derivative_metric(const AmbientSpace& space, const AmbientField& field,
                             const Vector& p, const Vector& Y, const Vector& Z) {
  return 2.0 * Y.dot(half_lie_derivative_matrix(space, field, p) * Z);
}

ConformalityEstimate estimate_conformality(const AmbientSpace& space,
                                           const AmbientField& field,
                                           const GeodesicBallSpec& region,
                                           int n_samples, unsigned seed) {
  if (n_samples < 1) throw std::invalid_argument("estimate_conformality: n_samples >= 1");
  // Chart-ball radius covering the geodesic ball for the conformal built-ins.
  double chart_radius = region.radius;
  const double kappa = space.curvature_bounds().kappa_plus;
  if (space.kind() == SpaceKind::HyperbolicBallModel) {
    const double c = std::sqrt(-kappa);
    chart_radius = std::tanh(c * region.radius / 2.0) / c;
  } else if (space.kind() == SpaceKind::SphericalCap) {
    const double c = std::sqrt(kappa);
    chart_radius = std::tan(c * region.radius / 2.0) / c;
  }
  const bool has_distance = space.kind() != SpaceKind::Custom;

  HaltonSampler sampler(space.dim(), seed);
  ConformalityEstimate est;
  est.alpha_est = std::numeric_limits<double>::infinity();
  est.beta_est = -std::numeric_limits<double>::infinity();
  est.region = "geodesic ball R=" + std::to_string(region.radius);
  while (est.sample_count < n_samples) {
    const Vector p = sample_chart_ball(sampler, region.center, chart_radius);
    if (!space.contains(p)) continue;
    if (has_distance &&
        space.distance_from_point(region.center, p) > region.radius)
      continue;
    const Matrix g = space.metric_at(p);
    Eigen::LLT<Matrix> llt(g);
    if (llt.info() != Eigen::Success)
      throw NumericError("estimate_conformality: degenerate metric at sampled point");
    const Matrix half_lie = half_lie_derivative_matrix(space, field, p);
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> eig(half_lie, g,
                                                         Eigen::EigenvaluesOnly);
    est.alpha_est = std::min(est.alpha_est, eig.eigenvalues().minCoeff());
    est.beta_est = std::max(est.beta_est, eig.eigenvalues().maxCoeff());
    ++est.sample_count;
  }
  return est;
}

Matrix hessian_of(const AmbientSpace& space, const ConvexFunctionSpec& spec,
                  const Vector& p) {
  if (!space.contains(p)) throw ChartDomainError("hessian_of: point outside chart");
  return spec.hessian_at(p);
}

double kasue_lower_bound(const AmbientSpace& space, const Vector& x0, const Vector& p,
                         const Vector& Y) {
  if (space.kind() != SpaceKind::Product)
    throw UnsupportedOperation("kasue_lower_bound: product spaces only");
  if (space.curvature_bounds().kappa_plus > 0.0)
    throw UnsupportedOperation("kasue_lower_bound: requires nonpositive curvature");
  const double rho = space.distance_to_totally_convex(x0, p);
  if (rho < 1e-12)
    throw std::domain_error("kasue_lower_bound: degenerate foot, point lies on Sigma");
  const int da = space.factor_first().dim();
  Vector grad_rho = Vector::Zero(space.dim());
  grad_rho.head(da) = space.factor_first().distance_gradient(x0, p.head(da));
  const double pairing = Y.dot(space.metric_at(p) * grad_rho);
  return pairing * pairing;
}

}  // namespace tonekit
