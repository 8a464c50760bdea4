#include "tonekit/immersion.hpp"

#include <cmath>

namespace tonekit {

namespace {

Vector sample_param(HaltonSampler& sampler, const ParamBox& box) {
  return box.map_unit(sampler.next());
}

}  // namespace

bool ParamBox::contains(const Vector& u, double slack) const {
  for (int i = 0; i < dim(); ++i)
    if (u[i] < lo[i] - slack || u[i] > hi[i] + slack) return false;
  return true;
}

Vector ParamBox::map_unit(const Vector& t) const {
  return lo + (hi - lo).cwiseProduct(t);
}

Immersion::Immersion(const AmbientSpace& space, int m, ParamBox domain, MapFn F,
                     JacFn dF, bool minimal_claimed)
    : space_(&space),
      m_(m),
      domain_(std::move(domain)),
      F_(std::move(F)),
      dF_(std::move(dF)),
      minimal_claimed_(minimal_claimed) {}

Matrix Immersion::dF_at(const Vector& u) const {
  if (dF_) return dF_(u);
  const double step = 1e-6 * std::max(1.0, domain_.scale());
  Matrix jac(ambient_dim(), m_);
  for (int a = 0; a < m_; ++a) {
    Vector up = u, um = u;
    up[a] += step;
    um[a] -= step;
    jac.col(a) = (F_(up) - F_(um)) / (2.0 * step);
  }
  return jac;
}

std::vector<Matrix> Immersion::d2F_at(const Vector& u) const {
  const double step = 1e-4 * std::max(1.0, domain_.scale());
  std::vector<Matrix> out(m_);
  if (dF_) {
    for (int a = 0; a < m_; ++a) {
      Vector up = u, um = u;
      up[a] += step;
      um[a] -= step;
      out[a] = (dF_(up) - dF_(um)) / (2.0 * step);
    }
    return out;
  }
  const int dim = ambient_dim();
  for (int a = 0; a < m_; ++a) out[a] = Matrix(dim, m_);
  for (int a = 0; a < m_; ++a) {
    for (int b = a; b < m_; ++b) {
      Vector pp = u, pm = u, mp = u, mm = u;
      pp[a] += step; pp[b] += step;
      pm[a] += step; pm[b] -= step;
      mp[a] -= step; mp[b] += step;
      mm[a] -= step; mm[b] -= step;
      const Vector d2 = (F_(pp) - F_(pm) - F_(mp) + F_(mm)) / (4.0 * step * step);
      out[a].col(b) = d2;
      out[b].col(a) = d2;
    }
  }
  return out;
}

Matrix Immersion::induced_metric(const Vector& u) const {
  const Matrix jac = dF_at(u);
  return jac.transpose() * space_->metric_at(F_at(u)) * jac;
}

Immersion Immersion::spiral(const AmbientSpace& euclidean2, double a, double b,
                            double t0, double t1) {
  ParamBox box{Vector::Constant(1, t0), Vector::Constant(1, t1)};
  auto F = [a, b](const Vector& u) {
    const double t = u[0];
    const double theta = std::exp(a * b * t);
    Vector p(2);
    p << a * std::exp(t * b) * std::cos(theta), a * std::exp(t * b) * std::sin(theta);
    return p;
  };
  auto dF = [a, b](const Vector& u) {
    const double t = u[0];
    const double rad = a * std::exp(t * b);
    const double theta = std::exp(a * b * t);
    Matrix jac(2, 1);
    jac(0, 0) = b * rad * std::cos(theta) - rad * a * b * theta * std::sin(theta);
    jac(1, 0) = b * rad * std::sin(theta) + rad * a * b * theta * std::cos(theta);
    return jac;
  };
  return Immersion(euclidean2, 1, box, F, dF);
}

Immersion Immersion::catenoid(const AmbientSpace& euclidean3, double c, double u0,
                              double u1, double v0, double v1) {
  ParamBox box{(Vector(2) << u0, v0).finished(), (Vector(2) << u1, v1).finished()};
  auto F = [c](const Vector& u) {
    const double ch = c * std::cosh(u[0] / c);
    Vector p(3);
    p << ch * std::cos(u[1]), ch * std::sin(u[1]), u[0];
    return p;
  };
  auto dF = [c](const Vector& u) {
    const double ch = c * std::cosh(u[0] / c);
    const double sh = std::sinh(u[0] / c);
    Matrix jac(3, 2);
    jac << sh * std::cos(u[1]), -ch * std::sin(u[1]),
           sh * std::sin(u[1]),  ch * std::cos(u[1]),
           1.0,                  0.0;
    return jac;
  };
  return Immersion(euclidean3, 2, box, F, dF, /*minimal_claimed=*/true);
}

Immersion Immersion::sphere(const AmbientSpace& euclidean3, double rho0, double u0,
                            double u1, double v0, double v1) {
  ParamBox box{(Vector(2) << u0, v0).finished(), (Vector(2) << u1, v1).finished()};
  auto F = [rho0](const Vector& u) {
    Vector p(3);
    p << rho0 * std::sin(u[0]) * std::cos(u[1]),
         rho0 * std::sin(u[0]) * std::sin(u[1]),
         rho0 * std::cos(u[0]);
    return p;
  };
  auto dF = [rho0](const Vector& u) {
    Matrix jac(3, 2);
    jac << rho0 * std::cos(u[0]) * std::cos(u[1]), -rho0 * std::sin(u[0]) * std::sin(u[1]),
           rho0 * std::cos(u[0]) * std::sin(u[1]),  rho0 * std::sin(u[0]) * std::cos(u[1]),
          -rho0 * std::sin(u[0]),                   0.0;
    return jac;
  };
  return Immersion(euclidean3, 2, box, F, dF);
}

Immersion Immersion::plane(const AmbientSpace& euclidean3, double extent) {
  ParamBox box{Vector::Constant(2, -extent), Vector::Constant(2, extent)};
  auto F = [](const Vector& u) {
    Vector p(3);
    p << u[0], u[1], 0.0;
    return p;
  };
  auto dF = [](const Vector&) {
    Matrix jac(3, 2);
    jac << 1, 0, 0, 1, 0, 0;
    return jac;
  };
  return Immersion(euclidean3, 2, box, F, dF, /*minimal_claimed=*/true);
}

Immersion Immersion::interval(const AmbientSpace& euclidean1, double length) {
  ParamBox box{Vector::Zero(1), Vector::Constant(1, length)};
  auto F = [](const Vector& u) { return u; };
  auto dF = [](const Vector&) { return Matrix::Identity(1, 1); };
  return Immersion(euclidean1, 1, box, F, dF, /*minimal_claimed=*/true);
}

Immersion Immersion::disk(const AmbientSpace& euclidean2, double radius) {
  ParamBox box{Vector::Constant(2, -radius), Vector::Constant(2, radius)};
  auto F = [](const Vector& u) { return u; };
  auto dF = [](const Vector&) { return Matrix::Identity(2, 2); };
  return Immersion(euclidean2, 2, box, F, dF, /*minimal_claimed=*/true);
}

Immersion Immersion::disk_polar(const AmbientSpace& euclidean2, double radius,
                                double rho_min) {
  ParamBox box{(Vector(2) << rho_min, 0.0).finished(),
               (Vector(2) << radius, 2.0 * M_PI).finished()};
  auto F = [](const Vector& u) {
    Vector p(2);
    p << u[0] * std::cos(u[1]), u[0] * std::sin(u[1]);
    return p;
  };
  auto dF = [](const Vector& u) {
    Matrix jac(2, 2);
    jac << std::cos(u[1]), -u[0] * std::sin(u[1]),
           std::sin(u[1]),  u[0] * std::cos(u[1]);
    return jac;
  };
  return Immersion(euclidean2, 2, box, F, dF, /*minimal_claimed=*/true);
}

Immersion Immersion::graph_linear(const AmbientSpace& product, const Matrix& L,
                                  const ParamBox& base_box) {
  const int d1 = static_cast<int>(L.cols());
  const int d2 = static_cast<int>(L.rows());
  auto F = [L, d1, d2](const Vector& u) {
    Vector p(d1 + d2);
    p.head(d1) = u;
    p.tail(d2) = L * u;
    return p;
  };
  auto dF = [L, d1, d2](const Vector&) {
    Matrix jac(d1 + d2, d1);
    jac.topRows(d1) = Matrix::Identity(d1, d1);
    jac.bottomRows(d2) = L;
    return jac;
  };
  return Immersion(product, d1, base_box, F, dF);
}

SplitFrame split_frame(const Immersion& imm, const Vector& u) {
  const int dim = imm.ambient_dim();
  const int m = imm.m();
  const Vector p = imm.F_at(u);
  const Matrix g = imm.space().metric_at(p);
  const Matrix jac = imm.dF_at(u);

  auto gs_step = [&](const Matrix& basis, int count, Vector v) {
    // Two passes of classical Gram-Schmidt against the first `count` columns.
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i < count; ++i) v -= basis.col(i).dot(g * v) * basis.col(i);
    return v;
  };

  SplitFrame frame;
  frame.point = u;
  frame.tangent = Matrix(dim, m);
  for (int a = 0; a < m; ++a) {
    Vector v = gs_step(frame.tangent, a, jac.col(a));
    const double norm = std::sqrt(v.dot(g * v));
    if (norm < 1e-10 * (1.0 + jac.col(a).norm()))
      throw ImmersionDegeneracyError("split_frame: rank-deficient dF");
    frame.tangent.col(a) = v / norm;
  }

  const int n = dim - m;
  frame.normal = Matrix(dim, n);
  Matrix combined(dim, dim);
  combined.leftCols(m) = frame.tangent;
  int found = 0;
  std::vector<bool> used(dim, false);
  while (found < n) {
    // Pick the chart basis vector with the largest orthogonal residual.
    int best = -1;
    double best_norm = 0.0;
    Vector best_v;
    for (int k = 0; k < dim; ++k) {
      if (used[k]) continue;
      Vector v = gs_step(combined, m + found, Vector(Vector::Unit(dim, k)));
      const double norm = std::sqrt(v.dot(g * v));
      if (norm > best_norm) {
        best_norm = norm;
        best = k;
        best_v = v;
      }
    }
    if (best < 0 || best_norm < 1e-12)
      throw ImmersionDegeneracyError("split_frame: cannot complete normal basis");
    used[best] = true;
    frame.normal.col(found) = best_v / best_norm;
    combined.col(m + found) = frame.normal.col(found);
    ++found;
  }
  return frame;
}

PointGeometry second_fundamental_form(const Immersion& imm, const Vector& u) {
  PointGeometry geo;
  geo.frame = split_frame(imm, u);
  const int m = imm.m();
  const int n = imm.ambient_dim() - m;
  const Vector p = imm.F_at(u);
  const Matrix g = imm.space().metric_at(p);
  const Matrix jac = imm.dF_at(u);
  const std::vector<Matrix> d2F = imm.d2F_at(u);
  const Christoffel gamma = imm.space().christoffel_at(p);

  geo.B_coord.assign(n, Matrix::Zero(m, m));
  for (int a = 0; a < m; ++a) {
    for (int b = a; b < m; ++b) {
      Vector deriv = d2F[a].col(b);
      for (int k = 0; k < imm.ambient_dim(); ++k)
        deriv[k] += jac.col(a).dot(gamma[k] * jac.col(b));
      for (int nu = 0; nu < n; ++nu) {
        const double comp = geo.frame.normal.col(nu).dot(g * deriv);
        geo.B_coord[nu](a, b) = comp;
        geo.B_coord[nu](b, a) = comp;
      }
    }
  }

  const Matrix ginv = imm.induced_metric(u).inverse();
  geo.H = Vector::Zero(imm.ambient_dim());
  for (int nu = 0; nu < n; ++nu)
    geo.H += (ginv.cwiseProduct(geo.B_coord[nu]).sum() / m) * geo.frame.normal.col(nu);
  return geo;
}

std::pair<Vector, Vector> project_field(const Immersion& imm, const AmbientField& field,
                                        const Vector& u) {
  const SplitFrame frame = split_frame(imm, u);
  const Vector p = imm.F_at(u);
  const Matrix g = imm.space().metric_at(p);
  const Vector x = field.value_at(p);
  Vector x_top = Vector::Zero(imm.ambient_dim());
  for (int i = 0; i < imm.m(); ++i)
    x_top += frame.tangent.col(i).dot(g * x) * frame.tangent.col(i);
  return {x_top, x - x_top};
}

Vector evaluate_B(const Immersion& imm, const PointGeometry& geo, const Vector& v,
                  const Vector& w) {
  const Vector u = geo.frame.point;
  const Vector p = imm.F_at(u);
  const Matrix g = imm.space().metric_at(p);
  const Matrix jac = imm.dF_at(u);
  const Matrix ginduced = jac.transpose() * g * jac;
  // Coordinate coefficients of the tangential parts of v and w.
  const Vector cv = ginduced.ldlt().solve(jac.transpose() * (g * v));
  const Vector cw = ginduced.ldlt().solve(jac.transpose() * (g * w));
  Vector out = Vector::Zero(imm.ambient_dim());
  const int n = imm.ambient_dim() - imm.m();
  for (int nu = 0; nu < n; ++nu)
    out += (cv.transpose() * geo.B_coord[nu] * cw).value() * geo.frame.normal.col(nu);
  return out;
}

PointGeometry point_geometry(const Immersion& imm, const AmbientField& field,
                             const Vector& u) {
  PointGeometry geo = second_fundamental_form(imm, u);
  auto [x_top, x_bot] = project_field(imm, field, u);
  geo.X_top = x_top;
  geo.X_bot = x_bot;

  const Vector p = imm.F_at(u);
  const Matrix g = imm.space().metric_at(p);
  const Matrix half_lie = half_lie_derivative_matrix(imm.space(), field, p);
  double div = 0.0;
  for (int i = 0; i < imm.m(); ++i) {
    const Vector e = geo.frame.tangent.col(i);
    div += e.dot(half_lie * e);
    div += evaluate_B(imm, geo, e, e).dot(g * geo.X_bot);
  }
  geo.div_X_top = div;
  return geo;
}

double divergence_tangential(const Immersion& imm, const AmbientField& field,
                             const Vector& u) {
  return point_geometry(imm, field, u).div_X_top;
}

Vector xtop_intrinsic(const Immersion& imm, const AmbientField& field, const Vector& u) {
  const Vector p = imm.F_at(u);
  const Matrix g = imm.space().metric_at(p);
  const Matrix jac = imm.dF_at(u);
  const Matrix ginduced = jac.transpose() * g * jac;
  return ginduced.ldlt().solve(jac.transpose() * (g * field.value_at(p)));
}

double laplacian_h_composed(const Immersion& imm, const ConvexFunctionSpec& spec,
                            const Vector& u) {
  PointGeometry geo = second_fundamental_form(imm, u);
  const Vector p = imm.F_at(u);
  const Matrix hess = spec.hessian_at(p);
  double sum = 0.0;
  for (int i = 0; i < imm.m(); ++i) {
    const Vector e = geo.frame.tangent.col(i);
    sum += e.dot(hess * e);
  }
  const Matrix g = imm.space().metric_at(p);
  sum += imm.m() * spec.gradient_at(p).dot(g * geo.H);
  return sum;
}

std::pair<double, double> trace_conformality(const Immersion& imm,
                                             const AmbientField& field, int n_samples,
                                             unsigned seed) {
  HaltonSampler sampler(imm.m(), seed);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int s = 0; s < n_samples; ++s) {
    const Vector u = sample_param(sampler, imm.param_domain());
    const SplitFrame frame = split_frame(imm, u);
    const Vector p = imm.F_at(u);
    const Matrix half_lie = half_lie_derivative_matrix(imm.space(), field, p);
    double trace = 0.0;
    for (int i = 0; i < imm.m(); ++i) {
      const Vector e = frame.tangent.col(i);
      trace += e.dot(half_lie * e);
    }
    trace /= imm.m();
    lo = std::min(lo, trace);
    hi = std::max(hi, trace);
  }
  return {lo, hi};
}

PairingScanReport scan_pairing_bound(const Immersion& imm, const AmbientField& field,
                                  double alpha_prime_max, double threshold_frac,
                                  int n_samples, unsigned seed, double eps_floor_frac) {
  HaltonSampler sampler(imm.m(), seed);
  std::vector<Vector> points;
  points.reserve(n_samples);
  double sup = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    const Vector u = sample_param(sampler, imm.param_domain());
    points.push_back(u);
    auto [x_top, x_bot] = project_field(imm, field, u);
    const Matrix g = imm.space().metric_at(imm.F_at(u));
    sup = std::max(sup, std::sqrt(x_top.dot(g * x_top)));
  }

  PairingScanReport report;
  report.sup_xtop = sup;
  const double floor = eps_floor_frac * sup;
  const double threshold = threshold_frac * sup;
  for (const Vector& u : points) {
    PointGeometry geo = point_geometry(imm, field, u);
    const Matrix g = imm.space().metric_at(imm.F_at(u));
    const double t2 = geo.X_top.dot(g * geo.X_top);
    if (std::sqrt(t2) < std::max(floor, threshold)) {
      ++report.excluded;
      continue;
    }
    const double pairing =
        std::abs(evaluate_B(imm, geo, geo.X_top, geo.X_top).dot(g * geo.X_bot));
    report.alpha_prime_est = std::max(report.alpha_prime_est, pairing / t2);
    ++report.used;
  }
  if (report.used == 0)
    throw EmptyScanError("scan_pairing_bound: all sampled points below the floor");
  report.verdict = report.alpha_prime_est < alpha_prime_max;
  return report;
}

namespace {

SupEstimate refine_sup(const Immersion& imm, const std::function<double(const Vector&)>& f,
                       int n_samples, unsigned seed) {
  HaltonSampler sampler(imm.m(), seed);
  const ParamBox& box = imm.param_domain();
  SupEstimate est;
  est.value = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < n_samples; ++s) {
    const Vector u = sample_param(sampler, box);
    const double v = f(u);
    if (v > est.value) {
      est.value = v;
      est.argmax = u;
    }
  }
  // Coordinate-wise pattern search around the best sample.
  Vector step = (box.hi - box.lo) / 50.0;
  while (step.maxCoeff() > 1e-9 * std::max(1.0, box.scale())) {
    bool improved = false;
    for (int a = 0; a < imm.m(); ++a) {
      for (double sgn : {1.0, -1.0}) {
        Vector u = est.argmax;
        u[a] = std::clamp(u[a] + sgn * step[a], box.lo[a], box.hi[a]);
        const double v = f(u);
        if (v > est.value) {
          est.value = v;
          est.argmax = u;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  est.uncertainty = std::abs(est.value) * 1e-8 + 1e-12;
  return est;
}

}  // namespace

SupEstimate estimate_sup_xtop(const Immersion& imm, const AmbientField& field,
                              int n_samples, unsigned seed) {
  auto f = [&](const Vector& u) {
    auto [x_top, x_bot] = project_field(imm, field, u);
    const Matrix g = imm.space().metric_at(imm.F_at(u));
    return std::sqrt(x_top.dot(g * x_top));
  };
  return refine_sup(imm, f, n_samples, seed);
}

SupEstimate estimate_sup_h(const Immersion& imm, const ConvexFunctionSpec& spec,
                           int n_samples, unsigned seed) {
  auto f = [&](const Vector& u) { return spec.h_at(imm.F_at(u)); };
  return refine_sup(imm, f, n_samples, seed);
}

double graph_frame_bound(const std::vector<double>& df_singular_values,
                         const Vector& sigma_dir) {
  const int m = static_cast<int>(df_singular_values.size());
  if (sigma_dir.size() != m)
    throw std::invalid_argument("graph_frame_bound: dimension mismatch");
  if (std::abs(sigma_dir.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("graph_frame_bound: sigma_dir must be unit");
  for (double l : df_singular_values)
    if (l < 0.0) throw std::invalid_argument("graph_frame_bound: singular values >= 0");
  double sum = 0.0;
  for (int i = 0; i < m; ++i)
    sum += sigma_dir[i] * sigma_dir[i] / (1.0 + df_singular_values[i] * df_singular_values[i]);
  return sum;
}

}  // namespace tonekit
