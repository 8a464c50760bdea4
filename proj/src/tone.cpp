#include "tonekit/tone.hpp"

#include <cmath>
#include <sstream>

namespace tonekit {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Violated: return "violated";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

double c_of_field_at(const Immersion& imm, const CandidateField& X, const Vector& u) {
  if (X.c_at) return X.c_at(u);
  const int m = imm.m();
  const double step = 1e-5 * std::max(1.0, imm.param_domain().scale());
  auto weighted = [&](const Vector& v) {
    // sqrt(det g) X^a at v
    const double sd = std::sqrt(imm.induced_metric(v).determinant());
    return Vector(sd * X.value(v));
  };
  const double sqrt_det = std::sqrt(imm.induced_metric(u).determinant());
  double div = 0.0;
  for (int a = 0; a < m; ++a) {
    Vector up = u, um = u;
    up[a] += step;
    um[a] -= step;
    div += (weighted(up)[a] - weighted(um)[a]) / (2.0 * step);
  }
  div /= sqrt_det;
  const Vector x = X.value(u);
  return div - x.dot(imm.induced_metric(u) * x);
}

double c_of_field(const Immersion& imm, const CandidateField& X,
                  const ExhaustionDomain& domain) {
  double inf = std::numeric_limits<double>::infinity();
  for (const auto& qps : domain.mesh.quadrature)
    for (const auto& qp : qps) inf = std::min(inf, c_of_field_at(imm, X, qp.point));
  if (!std::isfinite(inf))
    throw DomainViolationError("c_of_field: no quadrature points (cache not populated?)");
  return inf;
}

CandidateField windowed_tangent_field(const Immersion& imm, const AmbientField& field, double R,
                           double alpha, double alpha_prime) {
  if (alpha_prime >= alpha)
    throw ParameterError("windowed_tangent_field: requires alpha' < alpha");
  const double C = 2.0 * (alpha - alpha_prime);
  const Immersion* im = &imm;
  const AmbientField* fd = &field;
  CandidateField X;
  X.kind = CandidateKind::WindowedTangent;
  X.value = [im, fd, R, C](const Vector& u) {
    const Vector xt = xtop_intrinsic(*im, *fd, u);
    const double t2 = xt.dot(im->induced_metric(u) * xt);
    if (t2 >= R * R) {
      std::ostringstream os;
      os << "windowed_tangent_field: |X^T| >= R at parameter point (" << u.transpose() << ")";
      throw DomainViolationError(os.str());
    }
    return Vector((C / (R * R - t2)) * xt);
  };
  return X;
}

CandidateField gap_gradient_field(const Immersion& imm, const ConvexFunctionSpec& spec,
                          double R) {
  const Immersion* im = &imm;
  auto hof = [im, spec](const Vector& u) { return spec.h_at(im->F_at(u)); };
  CandidateField X;
  X.kind = CandidateKind::GapGradient;
  X.value = [im, hof, R](const Vector& u) {
    const double h = hof(u);
    if (h >= R) {
      std::ostringstream os;
      os << "gap_gradient_field: h o F >= R at parameter point (" << u.transpose() << ")";
      throw DomainViolationError(os.str());
    }
    const int m = im->m();
    const double step = 1e-6 * std::max(1.0, im->param_domain().scale());
    Vector dh(m);
    for (int a = 0; a < m; ++a) {
      Vector up = u, um = u;
      up[a] += step;
      um[a] -= step;
      dh[a] = (hof(up) - hof(um)) / (2.0 * step);
    }
    return Vector(im->induced_metric(u).ldlt().solve(dh) / (R - h));
  };
  // div(grad u / (R-u)) - |grad u|^2/(R-u)^2 collapses to Lap(u)/(R-u).
  X.c_at = [im, spec, hof, R](const Vector& u) {
    const double h = hof(u);
    if (h >= R)
      throw DomainViolationError("gap_gradient_field: h o F >= R at quadrature point");
    return laplacian_h_composed(*im, spec, u) / (R - h);
  };
  return X;
}

double cheeger_sweep(const Immersion& imm, const DomainMesh& mesh,
                     const std::function<double(const Vector&)>& sweep_function,
                     int n_thresholds) {
  if (mesh.quadrature.empty())
    throw SweepError("cheeger_sweep: mesh cache not populated");
  std::vector<double> vertex_values(mesh.vertex_count());
  double smin = std::numeric_limits<double>::infinity();
  double smax = -smin;
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    vertex_values[i] = sweep_function(mesh.vertices[i]);
    smin = std::min(smin, vertex_values[i]);
    smax = std::max(smax, vertex_values[i]);
  }
  if (!(smax > smin)) throw SweepError("cheeger_sweep: constant sweep function");

  double best = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= n_thresholds; ++k) {
    const double t = smin + (smax - smin) * k / (n_thresholds + 1);
    double volume = 0.0;
    double area = 0.0;
    for (int c = 0; c < mesh.cell_count(); ++c) {
      for (const auto& qp : mesh.quadrature[c])
        if (sweep_function(qp.point) < t) volume += qp.weight * qp.sqrt_det;
      if (mesh.m == 1) {
        const double s0 = vertex_values[mesh.cells[c][0]];
        const double s1 = vertex_values[mesh.cells[c][1]];
        if ((s0 - t) * (s1 - t) < 0.0) area += 1.0;  // 0-d boundary: point count
      } else {
        // Level segment of the linear interpolant inside the triangle.
        std::vector<Vector> cuts;
        for (int e = 0; e < 3; ++e) {
          const int i0 = mesh.cells[c][e];
          const int i1 = mesh.cells[c][(e + 1) % 3];
          const double s0 = vertex_values[i0];
          const double s1 = vertex_values[i1];
          if ((s0 - t) * (s1 - t) < 0.0) {
            const double w = (t - s0) / (s1 - s0);
            cuts.push_back(mesh.vertices[i0] + w * (mesh.vertices[i1] - mesh.vertices[i0]));
          }
        }
        if (cuts.size() == 2) {
          const Vector d = cuts[1] - cuts[0];
          const Matrix g = imm.induced_metric(0.5 * (cuts[0] + cuts[1]));
          area += std::sqrt(d.dot(g * d));
        }
      }
    }
    if (volume > 0.0 && area > 0.0) best = std::min(best, area / volume);
  }
  if (!std::isfinite(best))
    throw SweepError("cheeger_sweep: every threshold produced an empty sub-level set");
  return best;
}

namespace {

InequalityCheck make_check(const std::string& name, double lhs, double rhs,
                           double uncertainty) {
  InequalityCheck c;
  c.name = name;
  c.lhs = lhs;
  c.rhs = rhs;
  c.margin = rhs - lhs;
  if (c.margin >= 0.0)
    c.verdict = Verdict::Holds;
  else if (c.margin >= -uncertainty)
    c.verdict = Verdict::Inconclusive;  // uncertainty bands overlap
  else
    c.verdict = Verdict::Violated;
  return c;
}

}  // namespace

ToneReport inequality_report(const ScenarioBounds& b) {
  ToneReport report;
  report.lambda_fem = b.lambda_fem;
  report.cheeger_sweep_upper = b.cheeger_sweep;
  report.cheeger_lower_bound = b.m * b.alpha / b.R;

  const double inv_alpha = 1.0 / b.alpha;
  // (3): (sup |X_F|)^-1 <= (1/alpha)((1/m) h-hat + sup |H|); h-hat replaced
  // by its sweep upper bound, so a failure here is a genuine violation.
  if (b.cheeger_sweep && b.sup_xf > 0.0) {
    report.checks.push_back(make_check(
        "isoperimetric_bound", 1.0 / b.sup_xf,
        inv_alpha * (*b.cheeger_sweep / b.m + b.sup_mean_curv), b.uncertainty));
  } else {
    report.incomplete = true;
  }
  // (4): minimal case, (sup |X^T|)^-1 <= (1/alpha)(1/m) h-hat.
  if (b.minimal && b.cheeger_sweep && b.sup_xtop > 0.0) {
    report.checks.push_back(make_check("minimal_isoperimetric", 1.0 / b.sup_xtop,
                                       inv_alpha * *b.cheeger_sweep / b.m,
                                       b.uncertainty));
  }
  // (5): (sup |X^T|)^-1 <= (1/alpha)(2/m) sqrt(lambda); lambda_fem upper side.
  if (b.minimal && b.lambda_fem && b.sup_xtop > 0.0) {
    report.checks.push_back(make_check("tone_lower_bound", 1.0 / b.sup_xtop,
                                       inv_alpha * 2.0 / b.m * std::sqrt(*b.lambda_fem),
                                       b.uncertainty));
  } else if (!b.lambda_fem) {
    report.incomplete = true;
  }
  // Cheeger sandwich: m alpha / R <= h-hat <= sweep upper bound.
  if (b.cheeger_sweep) {
    report.checks.push_back(make_check("cheeger_sandwich", report.cheeger_lower_bound,
                                       *b.cheeger_sweep, b.uncertainty));
  }
  // Product version: (sup rho o F)^-1 <= (1/m)(1/alpha) h-hat.
  if (b.sup_rho && b.cheeger_sweep && *b.sup_rho > 0.0) {
    report.checks.push_back(make_check("product_tone", 1.0 / *b.sup_rho,
                                       inv_alpha * *b.cheeger_sweep / b.m,
                                       b.uncertainty));
  }
  // Degenerate-field flag: a bounded minimal immersion cannot have X^T vanish everywhere.
  if (b.minimal && b.sup_xtop <= 1e-8 * std::max(1.0, b.sup_xf)) {
    InequalityCheck c;
    c.name = "xtop_nonvanishing";
    c.lhs = b.sup_xtop;
    c.rhs = 0.0;
    c.margin = 0.0;
    c.verdict = Verdict::Violated;
    report.checks.push_back(c);
  }
  return report;
}

}  // namespace tonekit
