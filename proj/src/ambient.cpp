#include "tonekit/ambient.hpp"

#include "tonekit/fields.hpp"

#include <cmath>

namespace tonekit {

namespace {

// Conformal factor phi with g = exp(2 phi) * I for the built-in models.
// kappa < 0: Poincare ball, exp(phi) = 2 / (1 - c^2 |x|^2), c = sqrt(-kappa).
// kappa > 0: stereographic sphere, exp(phi) = 2 / (1 + c^2 |x|^2).
double conformal_exp_phi(double kappa, const Vector& x) {
  return 2.0 / (1.0 + kappa * x.squaredNorm());
}

Vector conformal_grad_phi(double kappa, const Vector& x) {
  const double s2 = x.squaredNorm();
  // d/dx_i of -log(1 + kappa |x|^2) = -2 kappa x_i / (1 + kappa |x|^2);
  // the same expression covers both sign conventions above.
  return (-2.0 * kappa / (1.0 + kappa * s2)) * x;
}

Christoffel conformal_christoffel(double kappa, const Vector& x) {
  const int n = static_cast<int>(x.size());
  const Vector dphi = conformal_grad_phi(kappa, x);
  Christoffel gamma(n, Matrix::Zero(n, n));
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double v = 0.0;
        if (k == i) v += dphi[j];
        if (k == j) v += dphi[i];
        if (i == j) v -= dphi[k];
        gamma[k](i, j) = v;
      }
    }
  }
  return gamma;
}

}  // namespace

AmbientSpace AmbientSpace::euclidean(int dim) {
  AmbientSpace s;
  s.dim_ = dim;
  s.kind_ = SpaceKind::Euclidean;
  s.bounds_ = {0.0, 0.0};
  s.metric_ = [dim](const Vector&) { return Matrix::Identity(dim, dim); };
  s.christoffel_ = [dim](const Vector&) {
    return Christoffel(dim, Matrix::Zero(dim, dim));
  };
  return s;
}

AmbientSpace AmbientSpace::hyperbolic_ball(int dim, double kappa) {
  if (kappa >= 0.0) throw std::invalid_argument("hyperbolic_ball: kappa must be < 0");
  AmbientSpace s;
  s.dim_ = dim;
  s.kind_ = SpaceKind::HyperbolicBallModel;
  s.bounds_ = {kappa, kappa};
  s.conformal_kappa_ = kappa;
  s.metric_ = [dim, kappa](const Vector& p) {
    const double e = conformal_exp_phi(kappa, p);
    return Matrix(e * e * Matrix::Identity(dim, dim));
  };
  s.christoffel_ = [kappa](const Vector& p) { return conformal_christoffel(kappa, p); };
  return s;
}

AmbientSpace AmbientSpace::spherical_cap(int dim, double kappa) {
  if (kappa <= 0.0) throw std::invalid_argument("spherical_cap: kappa must be > 0");
  AmbientSpace s;
  s.dim_ = dim;
  s.kind_ = SpaceKind::SphericalCap;
  s.bounds_ = {kappa, kappa};
  s.conformal_kappa_ = kappa;
  s.metric_ = [dim, kappa](const Vector& p) {
    const double e = conformal_exp_phi(kappa, p);
    return Matrix(e * e * Matrix::Identity(dim, dim));
  };
  s.christoffel_ = [kappa](const Vector& p) { return conformal_christoffel(kappa, p); };
  return s;
}

AmbientSpace AmbientSpace::product(AmbientSpace first, AmbientSpace second) {
  AmbientSpace s;
  s.factor_a_ = std::make_shared<AmbientSpace>(std::move(first));
  s.factor_b_ = std::make_shared<AmbientSpace>(std::move(second));
  const auto a = s.factor_a_;
  const auto b = s.factor_b_;
  s.dim_ = a->dim() + b->dim();
  s.kind_ = SpaceKind::Product;
  // Mixed planes of a product are flat; the bounds must bracket zero.
  s.bounds_.kappa_minus =
      std::min({a->curvature_bounds().kappa_minus, b->curvature_bounds().kappa_minus, 0.0});
  s.bounds_.kappa_plus =
      std::max({a->curvature_bounds().kappa_plus, b->curvature_bounds().kappa_plus, 0.0});
  const int da = a->dim();
  const int db = b->dim();
  s.metric_ = [a, b, da, db](const Vector& p) {
    Matrix g = Matrix::Zero(da + db, da + db);
    g.topLeftCorner(da, da) = a->metric_at(p.head(da));
    g.bottomRightCorner(db, db) = b->metric_at(p.tail(db));
    return g;
  };
  s.christoffel_ = [a, b, da, db](const Vector& p) {
    Christoffel ga = a->christoffel_at(p.head(da));
    Christoffel gb = b->christoffel_at(p.tail(db));
    Christoffel out(da + db, Matrix::Zero(da + db, da + db));
    for (int k = 0; k < da; ++k) out[k].topLeftCorner(da, da) = ga[k];
    for (int k = 0; k < db; ++k) out[da + k].bottomRightCorner(db, db) = gb[k];
    return out;
  };
  return s;
}

AmbientSpace AmbientSpace::custom(int dim, MetricFn metric, CurvatureBounds bounds,
                                  double fd_scale) {
  AmbientSpace s;
  s.dim_ = dim;
  s.kind_ = SpaceKind::Custom;
  s.bounds_ = bounds;
  s.fd_scale_ = fd_scale;
  s.metric_ = std::move(metric);
  return s;
}

AmbientSpace AmbientSpace::custom_grid(int dim, const Vector& lo, const Vector& hi,
                                       const std::vector<int>& shape,
                                       const std::vector<Matrix>& values,
                                       CurvatureBounds bounds) {
  if (static_cast<int>(shape.size()) != dim)
    throw std::invalid_argument("custom_grid: shape rank mismatch");
  std::size_t total = 1;
  for (int n : shape) total *= static_cast<std::size_t>(n);
  if (values.size() != total)
    throw std::invalid_argument("custom_grid: value count mismatch");
  auto metric = [dim, lo, hi, shape, values](const Vector& p) {
    // Multilinear interpolation over the 2^dim cell corners.
    std::vector<int> idx(dim);
    std::vector<double> frac(dim);
    for (int d = 0; d < dim; ++d) {
      const double t = (p[d] - lo[d]) / (hi[d] - lo[d]) * (shape[d] - 1);
      if (t < 0.0 || t > shape[d] - 1)
        throw ChartDomainError("custom_grid: point outside grid box");
      idx[d] = std::min(static_cast<int>(t), shape[d] - 2);
      frac[d] = t - idx[d];
    }
    Matrix g = Matrix::Zero(dim, dim);
    const int corners = 1 << dim;
    for (int c = 0; c < corners; ++c) {
      double w = 1.0;
      std::size_t flat = 0;
      for (int d = 0; d < dim; ++d) {
        const int bit = (c >> d) & 1;
        w *= bit ? frac[d] : (1.0 - frac[d]);
        flat = flat * static_cast<std::size_t>(shape[d]) +
               static_cast<std::size_t>(idx[d] + bit);
      }
      g += w * values[flat];
    }
    return g;
  };
  return custom(dim, metric, bounds, (hi - lo).norm());
}

Matrix AmbientSpace::metric_at(const Vector& p) const {
  if (!contains(p)) throw ChartDomainError("metric_at: point outside chart domain");
  return metric_(p);
}

Christoffel AmbientSpace::christoffel_at(const Vector& p) const {
  if (!contains(p)) throw ChartDomainError("christoffel_at: point outside chart domain");
  if (christoffel_) return christoffel_(p);
  const double step = 1e-5 * fd_scale_ * (1.0 + p.norm());
  return christoffel_from_metric_fd(metric_, p, step);
}

bool AmbientSpace::contains(const Vector& p) const {
  if (p.size() != dim_) return false;
  switch (kind_) {
    case SpaceKind::HyperbolicBallModel:
      return p.squaredNorm() < 1.0 / (-conformal_kappa_);
    case SpaceKind::SphericalCap:
      // Stereographic chart covers the sphere minus the antipode; stay on the
      // cap strictly inside the equator image |x| = 1/sqrt(kappa).
      return p.squaredNorm() < 1.0 / conformal_kappa_;
    case SpaceKind::Product:
      return factor_a_->contains(p.head(factor_a_->dim())) &&
             factor_b_->contains(p.tail(factor_b_->dim()));
    default:
      return true;
  }
}

double AmbientSpace::distance_from_point(const Vector& base, const Vector& p) const {
  switch (kind_) {
    case SpaceKind::Euclidean:
      return (p - base).norm();
    case SpaceKind::HyperbolicBallModel: {
      const double c2 = -conformal_kappa_;
      const double c = std::sqrt(c2);
      const double num = 2.0 * c2 * (p - base).squaredNorm();
      const double den = (1.0 - c2 * base.squaredNorm()) * (1.0 - c2 * p.squaredNorm());
      return std::acosh(1.0 + num / den) / c;
    }
    case SpaceKind::SphericalCap: {
      const double c = std::sqrt(conformal_kappa_);
      auto embed = [&](const Vector& x) {
        // Inverse stereographic projection onto the sphere of radius 1/c.
        const double s2 = c * c * x.squaredNorm();
        Vector e(dim_ + 1);
        e.head(dim_) = 2.0 * x / (1.0 + s2);
        e[dim_] = (1.0 - s2) / (c * (1.0 + s2));
        return e;
      };
      Vector ea = embed(base);
      Vector eb = embed(p);
      double cosang = std::clamp(c * c * ea.dot(eb), -1.0, 1.0);
      return std::acos(cosang) / c;
    }
    case SpaceKind::Product: {
      const int da = factor_a_->dim();
      const double r1 = factor_a_->distance_from_point(base.head(da), p.head(da));
      const double r2 = factor_b_->distance_from_point(base.tail(dim_ - da),
                                                       p.tail(dim_ - da));
      return std::hypot(r1, r2);
    }
    case SpaceKind::Custom:
      throw UnsupportedOperation("distance_from_point: no registered distance for custom space");
  }
  throw UnsupportedOperation("distance_from_point: unknown kind");
}

Vector AmbientSpace::distance_gradient(const Vector& base, const Vector& p) const {
  // Central differences of the closed-form distance, index raised with g^-1.
  const double step = 1e-6 * (1.0 + p.norm());
  Vector dr(dim_);
  for (int i = 0; i < dim_; ++i) {
    Vector pp = p, pm = p;
    pp[i] += step;
    pm[i] -= step;
    dr[i] = (distance_from_point(base, pp) - distance_from_point(base, pm)) / (2.0 * step);
  }
  return metric_at(p).ldlt().solve(dr);
}

double AmbientSpace::distance_to_totally_convex(const Vector& x0, const Vector& p) const {
  if (kind_ != SpaceKind::Product)
    throw UnsupportedOperation("distance_to_totally_convex: product spaces only");
  return factor_a_->distance_from_point(x0, p.head(factor_a_->dim()));
}

double AmbientSpace::convex_distance_half_square(const Vector& x0, const Vector& p) const {
  const double rho = distance_to_totally_convex(x0, p);
  return 0.5 * rho * rho;
}

const AmbientSpace& AmbientSpace::factor_first() const {
  if (kind_ != SpaceKind::Product) throw UnsupportedOperation("factor_first: not a product");
  return *factor_a_;
}

const AmbientSpace& AmbientSpace::factor_second() const {
  if (kind_ != SpaceKind::Product) throw UnsupportedOperation("factor_second: not a product");
  return *factor_b_;
}

GeodesicBallSpec::GeodesicBallSpec(Vector c, double R, const AmbientSpace& s)
    : center(std::move(c)), radius(R), space(&s) {
  if (R <= 0.0) throw std::invalid_argument("GeodesicBallSpec: radius must be positive");
  const double kplus = std::max(0.0, s.curvature_bounds().kappa_plus);
  if (kplus > 0.0 && std::sqrt(kplus) * R >= M_PI / 2.0)
    throw std::invalid_argument("GeodesicBallSpec: sqrt(kappa+) R must stay below pi/2");
}

Vector covariant_derivative(const AmbientSpace& space, const AmbientField& field,
                            const Vector& p, const Vector& v) {
  if (!space.contains(p)) throw ChartDomainError("covariant_derivative: point outside chart");
  const Matrix jac = field.jacobian_at(p);
  const Vector x = field.value_at(p);
  Vector out = jac * v;
  const Christoffel gamma = space.christoffel_at(p);
  for (int k = 0; k < space.dim(); ++k) out[k] += v.dot(gamma[k] * x);
  return out;
}

Christoffel christoffel_from_metric_fd(const AmbientSpace::MetricFn& metric,
                                       const Vector& p, double step) {
  const int n = static_cast<int>(p.size());
  // dg[k] = partial_k g
  std::vector<Matrix> dg(n);
  for (int k = 0; k < n; ++k) {
    Vector pp = p, pm = p;
    pp[k] += step;
    pm[k] -= step;
    dg[k] = (metric(pp) - metric(pm)) / (2.0 * step);
  }
  const Matrix ginv = metric(p).inverse();
  Christoffel gamma(n, Matrix::Zero(n, n));
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double sum = 0.0;
        for (int l = 0; l < n; ++l)
          sum += ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        gamma[k](i, j) = 0.5 * sum;
      }
    }
  }
  return gamma;
}

}  // namespace tonekit
