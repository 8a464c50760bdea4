#pragma once

#include "tonekit/fields.hpp"

namespace tonekit {

struct ImmersionDegeneracyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptyScanError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Axis-aligned parameter box in R^m.
struct ParamBox {
  Vector lo;
  Vector hi;

  int dim() const { return static_cast<int>(lo.size()); }
  double scale() const { return (hi - lo).norm(); }
  bool contains(const Vector& u, double slack = 0.0) const;
  Vector map_unit(const Vector& t) const;  // unit cube -> box
};

/// Parametric immersion F : param box in R^m -> chart of the ambient space.
class Immersion {
public:
  using MapFn = std::function<Vector(const Vector&)>;
  using JacFn = std::function<Matrix(const Vector&)>;  // dim x m

  Immersion(const AmbientSpace& space, int m, ParamBox domain, MapFn F,
            JacFn dF = nullptr, bool minimal_claimed = false);

  // Built-in parametrizations.
  static Immersion spiral(const AmbientSpace& euclidean2, double a, double b,
                          double t0, double t1);
  static Immersion catenoid(const AmbientSpace& euclidean3, double c, double u0,
                            double u1, double v0, double v1);
  static Immersion sphere(const AmbientSpace& euclidean3, double rho0, double u0,
                          double u1, double v0, double v1);
  static Immersion plane(const AmbientSpace& euclidean3, double extent);
  /// Identity segment (0, L) in R^1, the flat FEM benchmark.
  static Immersion interval(const AmbientSpace& euclidean1, double length);
  /// Flat disk of radius `radius` in R^2 (identity immersion, bounding box).
  static Immersion disk(const AmbientSpace& euclidean2, double radius);
  /// Flat annulus/disk patch in polar parameters (rho, theta); |X^T| of the
  /// position field is monotone in the first parameter, which is what band
  /// meshing wants.
  static Immersion disk_polar(const AmbientSpace& euclidean2, double radius,
                              double rho_min);
  /// Graph u -> (u, L u) into a product space, L linear (d2 x d1).
  static Immersion graph_linear(const AmbientSpace& product, const Matrix& L,
                                const ParamBox& base_box);

  int m() const { return m_; }
  int ambient_dim() const { return space_->dim(); }
  const ParamBox& param_domain() const { return domain_; }
  const AmbientSpace& space() const { return *space_; }
  bool minimal_claimed() const { return minimal_claimed_; }

  Vector F_at(const Vector& u) const { return F_(u); }
  Matrix dF_at(const Vector& u) const;
  /// Second parameter derivatives d2F[a] = d/du_a (dF), dim x m each.
  std::vector<Matrix> d2F_at(const Vector& u) const;

  /// Induced metric g = F* g-bar at u (m x m, positive definite).
  Matrix induced_metric(const Vector& u) const;

private:
  const AmbientSpace* space_;
  int m_;
  ParamBox domain_;
  MapFn F_;
  JacFn dF_;
  bool minimal_claimed_;
};

/// g-bar-orthonormal tangent/normal frame at a parameter point.
struct SplitFrame {
  Vector point;    // parameter point
  Matrix tangent;  // dim x m, columns g-bar-orthonormal spanning dF
  Matrix normal;   // dim x n, completes the tangent basis
};

/// Pointwise extrinsic data along the immersion.
struct PointGeometry {
  SplitFrame frame;
  /// B_coord[nu](a,b) = gbar(nabla-bar_{T_a} T_b, n_nu), coordinate tangent
  /// basis T_a = dF columns, normal frame n_nu.
  std::vector<Matrix> B_coord;
  Vector H;      // mean curvature, ambient components
  Vector X_top;  // tangential projection of the field (ambient components)
  Vector X_bot;  // normal projection
  double div_X_top = 0.0;
};

SplitFrame split_frame(const Immersion& imm, const Vector& u);

/// Second fundamental form and mean curvature (fills frame, B_coord, H).
PointGeometry second_fundamental_form(const Immersion& imm, const Vector& u);

/// Tangential/normal split of the ambient field along F.
std::pair<Vector, Vector> project_field(const Immersion& imm, const AmbientField& field,
                                        const Vector& u);

/// B evaluated on ambient tangent vectors v, w (returns the ambient normal
/// vector), via their coordinate coefficients.
Vector evaluate_B(const Immersion& imm, const PointGeometry& geo, const Vector& v,
                  const Vector& w);

/// div_g(X-bar^T) = sum_i [ (1/2) L_X gbar(e_i, e_i) + gbar(B(e_i,e_i), X^perp) ].
double divergence_tangential(const Immersion& imm, const AmbientField& field,
                             const Vector& u);

/// Full pointwise bundle (frame, B, H, projections, tangential divergence).
PointGeometry point_geometry(const Immersion& imm, const AmbientField& field,
                             const Vector& u);

/// Intrinsic components of X-bar^T in the parameter coordinate basis:
/// t^a = g^{ab} gbar(X, T_b).
Vector xtop_intrinsic(const Immersion& imm, const AmbientField& field, const Vector& u);

/// Laplacian of h compose F at u:
/// sum_i Hess h(e_i, e_i) + m gbar(nabla-bar h, H).
double laplacian_h_composed(const Immersion& imm, const ConvexFunctionSpec& spec,
                            const Vector& u);

/// (alpha_trace, beta_trace): min/max over samples of (1/2m) Trace_g F* L_X gbar.
std::pair<double, double> trace_conformality(const Immersion& imm,
                                             const AmbientField& field,
                                             int n_samples = 4096, unsigned seed = 0);

struct PairingScanReport {
  double alpha_prime_est = 0.0;  // sup |gbar(B(Xt,Xt),Xp)| / |Xt|^2
  double sup_xtop = 0.0;         // sampled sup of |X-bar^T|
  int used = 0;                  // samples entering the ratio
  int excluded = 0;              // samples below the floor or threshold
  bool verdict = false;          // alpha_prime_est < alpha_prime_max
};

/// Scans the near-supremum region { |X^T| >= threshold_frac * sup } for the
/// second-fundamental-form pairing bound. Points with |X^T| below
/// eps_floor_frac * sup (relative floor) are excluded, never counted as
/// satisfying the bound.
PairingScanReport scan_pairing_bound(const Immersion& imm, const AmbientField& field,
                                  double alpha_prime_max,
                                  double threshold_frac = 0.8,
                                  int n_samples = 4096, unsigned seed = 0,
                                  double eps_floor_frac = 1e-8);

struct SupEstimate {
  double value = 0.0;
  double uncertainty = 0.0;  // width of the local-ascent refinement band
  Vector argmax;             // parameter point
};

/// Sampled supremum of |X-bar^T| with local ascent refinement.
SupEstimate estimate_sup_xtop(const Immersion& imm, const AmbientField& field,
                              int n_samples = 4096, unsigned seed = 0);

/// Sampled supremum of h compose F with local ascent refinement.
SupEstimate estimate_sup_h(const Immersion& imm, const ConvexFunctionSpec& spec,
                           int n_samples = 4096, unsigned seed = 0);

/// Graph frame bound: sum_i |<sigma, a_i>|^2 / (1 + lambda_i^2) for a
/// graph with singular values lambda_i; sigma_dir unit in the first factor,
/// expressed in the singular basis a_i.
double graph_frame_bound(const std::vector<double>& df_singular_values,
                         const Vector& sigma_dir);

}  // namespace tonekit
