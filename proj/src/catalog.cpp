#include "tonekit/catalog.hpp"

#include <cmath>
#include <cstdint>
#include <sstream>

namespace tonekit {

namespace {

using json = nlohmann::json;

constexpr double kPi = 3.14159265358979323846;
// First positive root of the Bessel function J0, squared: the Dirichlet
// eigenvalue of the unit disk.
constexpr double kDiskEigenvalue = 5.783185962946785;

json to_json(const InequalityCheck& c) {
  return json{{"name", c.name},
              {"lhs", c.lhs},
              {"rhs", c.rhs},
              {"margin", c.margin},
              {"verdict", to_string(c.verdict)}};
}

json to_json(const ToneReport& r) {
  json out;
  if (r.lambda_fem) out["lambda_fem"] = *r.lambda_fem;
  if (r.cheeger_sweep_upper) out["cheeger_sweep_upper"] = *r.cheeger_sweep_upper;
  out["cheeger_lower_bound"] = r.cheeger_lower_bound;
  out["incomplete"] = r.incomplete;
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  out["checks"] = checks;
  return out;
}

json convergence_series(const Immersion& imm,
                        const std::function<DomainMesh(int)>& mesh_of,
                        const std::vector<int>& sizes, double exact) {
  json rows = json::array();
  std::vector<double> errors;
  for (int n : sizes) {
    DomainMesh mesh = mesh_of(n);
    EigenResult res = solve_mesh_eigenvalue(imm, mesh);
    errors.push_back(std::abs(res.lambda1 - exact));
    rows.push_back(json{{"n", n},
                        {"h", res.mesh_size_h},
                        {"lambda", res.lambda1},
                        {"error", errors.back()}});
  }
  json orders = json::array();
  for (size_t i = 1; i < errors.size(); ++i)
    orders.push_back(std::log2(errors[i - 1] / errors[i]));
  return json{{"rows", rows}, {"orders", orders}};
}

json exhaustion_json(const std::vector<ExhaustionRow>& rows) {
  json out = json::array();
  for (const auto& r : rows)
    out.push_back(json{{"eps", r.eps},
                       {"lambda_fem", r.lambda_fem},
                       {"c_inf", r.c_inf},
                       {"theory_bound", r.theory_bound},
                       {"margin", r.margin}});
  return out;
}

json run_interval(const RunOptions& opts) {
  AmbientSpace space = AmbientSpace::euclidean(1);
  Immersion imm = Immersion::interval(space, 1.0);
  auto mesh_of = [](int n) { return interval_mesh(0.0, 1.0, n); };
  const int n0 = 8 * std::max(2, opts.resolution);
  json conv = convergence_series(imm, mesh_of, {n0, 2 * n0, 4 * n0}, kPi * kPi);

  DomainMesh fine = mesh_of(4 * n0);
  EigenResult res = solve_mesh_eigenvalue(imm, fine);
  const double probe = barta_equality_probe(imm, fine);
  const double sweep =
      cheeger_sweep(imm, fine, [](const Vector& u) { return std::abs(u[0] - 0.5); });

  ScenarioBounds b;
  b.m = 1;
  b.alpha = 1.0;
  b.sup_xtop = b.sup_xf = b.R = 1.0;  // position field from the left endpoint
  b.minimal = true;
  b.lambda_fem = res.lambda1;
  b.cheeger_sweep = sweep;

  return json{{"lambda", res.lambda1},
              {"exact", kPi * kPi},
              {"rel_error", std::abs(res.lambda1 - kPi * kPi) / (kPi * kPi)},
              {"convergence", conv},
              {"barta_probe", probe},
              {"barta_rel_gap", std::abs(probe - res.lambda1) / res.lambda1},
              {"tone", to_json(inequality_report(b))}};
}

json run_disk(const RunOptions& opts) {
  AmbientSpace space = AmbientSpace::euclidean(2);
  Immersion imm = Immersion::disk(space, 1.0);
  auto mesh_of = [](int n) { return disk_mesh(1.0, n); };
  const int n0 = std::max(4, opts.resolution);
  json conv = convergence_series(imm, mesh_of, {n0, 2 * n0, 4 * n0}, kDiskEigenvalue);

  DomainMesh fine = mesh_of(4 * n0);
  EigenResult res = solve_mesh_eigenvalue(imm, fine);
  const double probe = barta_equality_probe(imm, fine);
  const double sweep =
      cheeger_sweep(imm, fine, [](const Vector& u) { return u.norm(); });

  ScenarioBounds b;
  b.m = 2;
  b.alpha = 1.0;
  b.sup_xtop = b.sup_xf = b.R = 1.0;
  b.minimal = true;
  b.lambda_fem = res.lambda1;
  b.cheeger_sweep = sweep;

  return json{{"lambda", res.lambda1},
              {"exact", kDiskEigenvalue},
              {"rel_error", std::abs(res.lambda1 - kDiskEigenvalue) / kDiskEigenvalue},
              {"convergence", conv},
              {"barta_probe", probe},
              {"barta_rel_gap", std::abs(probe - res.lambda1) / res.lambda1},
              {"tone", to_json(inequality_report(b))}};
}

json run_square(const RunOptions& opts) {
  AmbientSpace space = AmbientSpace::euclidean(2);
  Immersion imm = Immersion::disk(space, 2.0);  // identity chart covering the square
  const int n0 = 8 * std::max(2, opts.resolution);
  auto mesh_of = [](int n) { return rectangle_mesh(0.0, 1.0, 0.0, 1.0, n, n); };
  json conv = convergence_series(imm, mesh_of, {n0 / 4, n0 / 2, n0}, 2.0 * kPi * kPi);
  DomainMesh fine = mesh_of(n0);
  EigenResult res = solve_mesh_eigenvalue(imm, fine);
  return json{{"lambda", res.lambda1},
              {"exact", 2.0 * kPi * kPi},
              {"rel_error", std::abs(res.lambda1 - 2.0 * kPi * kPi) / (2.0 * kPi * kPi)},
              {"convergence", conv}};
}

json run_spiral(const RunOptions& opts) {
  AmbientSpace space = AmbientSpace::euclidean(2);
  const double a = 2.0;
  const double b = 1.0;
  json rows = json::array();
  double prev = 0.0;
  double last_delta = 0.0;
  for (double T = 1.0; T <= 8.0; T += 1.0) {
    Immersion window = Immersion::spiral(space, a, b, 0.0, T);
    AmbientField field = AmbientField::position(space, Vector::Zero(2));
    SupEstimate sup = estimate_sup_xtop(window, field, opts.samples, opts.seed);
    last_delta = (T > 1.0) ? std::abs(sup.value - prev) : 0.0;
    prev = sup.value;
    rows.push_back(json{{"T", T},
                        {"sup_xtop", sup.value},
                        {"radius_ratio", std::exp(b * T)},
                        {"delta", last_delta}});
  }
  Immersion full = Immersion::spiral(space, a, b, 0.0, 8.0);
  AmbientField field = AmbientField::position(space, Vector::Zero(2));
  auto [alpha_tr, beta_tr] = trace_conformality(full, field, opts.samples, opts.seed);
  return json{{"sup_series", rows},
              {"sup_stabilized", last_delta < 1e-6},
              {"final_sup", prev},
              {"closed_form_sup", a / std::sqrt(1.0 + a * a)},
              {"trace_alpha", alpha_tr},
              {"trace_beta", beta_tr}};
}

json run_catenoid_divergence(const RunOptions& opts) {
  AmbientSpace space = AmbientSpace::euclidean(3);
  Immersion imm = Immersion::catenoid(space, 1.0, -1.0, 1.0, 0.0, 2.0 * kPi);
  AmbientField field = AmbientField::position(space, Vector::Zero(3));
  HaltonSampler sampler(2, opts.seed);
  double max_div_dev = 0.0;
  double max_h = 0.0;
  const int n = std::max(64, opts.samples / 8);
  for (int s = 0; s < n; ++s) {
    const Vector u = imm.param_domain().map_unit(sampler.next());
    PointGeometry geo = point_geometry(imm, field, u);
    max_div_dev = std::max(max_div_dev, std::abs(geo.div_X_top - 2.0));
    max_h = std::max(max_h, geo.H.norm());
  }
  PairingScanReport scan = scan_pairing_bound(imm, field, 0.5, 0.8, opts.samples, opts.seed);
  // Pairing ratio as the scan threshold tightens toward the supremum.
  json pairing = json::array();
  for (double t : {0.5, 0.6, 0.7, 0.8, 0.9}) {
    PairingScanReport r = scan_pairing_bound(imm, field, 0.5, t, opts.samples, opts.seed);
    pairing.push_back(json{{"t", t}, {"ratio", r.alpha_prime_est}});
  }
  return json{{"max_divergence_deviation", max_div_dev},
              {"max_mean_curvature", max_h},
              {"pairing_alpha_prime", scan.alpha_prime_est},
              {"pairing_verdict", scan.verdict},
              {"pairing_series", pairing},
              {"sup_xtop", scan.sup_xtop}};
}

json run_catenoid_band(const RunOptions& opts) {
  AmbientSpace space = AmbientSpace::euclidean(3);
  Immersion imm = Immersion::catenoid(space, 1.0, 0.05, 1.2, 0.0, 2.0 * kPi);
  ConvexFunctionSpec h = ConvexFunctionSpec::half_r_squared(space, Vector::Zero(3));
  const Immersion* im = &imm;
  auto hof = [im, h](const Vector& u) { return h.h_at(im->F_at(u)); };
  SupEstimate sup_h = estimate_sup_h(imm, h, opts.samples, opts.seed);
  const double R = sup_h.value * (1.0 + 1e-12);

  ExhaustionOptions exopts;
  exopts.n_across = std::max(6, opts.resolution / 2);
  exopts.n_along = std::max(24, 3 * opts.resolution);
  std::vector<ExhaustionRow> rows = exhaustion_study(
      imm, hof, [R](double eps) { return R - eps; }, opts.eps_sequence,
      [&](double) { return gap_gradient_field(imm, h, R); },
      [&](double eps) { return imm.m() * 1.0 / eps; }, exopts);
  bool growing = true;
  for (size_t i = 1; i < rows.size(); ++i)
    growing = growing && rows[i].lambda_fem > rows[i - 1].lambda_fem;
  return json{{"R", R},
              {"sup_h", sup_h.value},
              {"exhaustion", exhaustion_json(rows)},
              {"lambda_strictly_increasing", growing}};
}

json run_disk_window(const RunOptions& opts) {
  AmbientSpace space = AmbientSpace::euclidean(2);
  Immersion imm = Immersion::disk_polar(space, 1.0, 0.05);
  AmbientField field = AmbientField::position(space, Vector::Zero(2));
  const double R = 1.0;
  const double alpha = 1.0;
  // Flat plane patch: B vanishes identically, so the pairing scan returns 0.
  PairingScanReport scan =
      scan_pairing_bound(imm, field, 0.5 * alpha, 0.8, opts.samples, opts.seed);
  const double alpha_prime = scan.alpha_prime_est;
  const double C = 2.0 * (alpha - alpha_prime);
  const Immersion* im = &imm;
  const AmbientField* fd = &field;
  auto t2 = [im, fd](const Vector& u) {
    const Vector xt = xtop_intrinsic(*im, *fd, u);
    return xt.dot(im->induced_metric(u) * xt);
  };
  ExhaustionOptions exopts;
  exopts.n_across = std::max(6, opts.resolution / 2);
  exopts.n_along = std::max(24, 3 * opts.resolution);
  std::vector<ExhaustionRow> rows = exhaustion_study(
      imm, t2, [R](double eps) { return R * R - eps * eps; }, opts.eps_sequence,
      [&](double) { return windowed_tangent_field(imm, field, R, alpha, alpha_prime); },
      [&](double eps) { return C * imm.m() * alpha / (eps * eps); }, exopts);
  return json{{"R", R},
              {"C", C},
              {"alpha", alpha},
              {"alpha_prime_est", alpha_prime},
              {"pairing_verdict", scan.verdict},
              {"exhaustion", exhaustion_json(rows)}};
}

json run_sphere_cap(const RunOptions& opts) {
  AmbientSpace space = AmbientSpace::euclidean(3);
  const double rho0 = 2.0;
  Immersion imm = Immersion::sphere(space, rho0, 0.3, 1.2, 0.0, 2.0 * kPi);
  AmbientField field = AmbientField::position(space, Vector::Zero(3));
  HaltonSampler sampler(2, opts.seed);
  double max_div = 0.0;
  double max_h_dev = 0.0;
  double max_xtop = 0.0;
  const int n = std::max(64, opts.samples / 8);
  for (int s = 0; s < n; ++s) {
    const Vector u = imm.param_domain().map_unit(sampler.next());
    PointGeometry geo = point_geometry(imm, field, u);
    max_div = std::max(max_div, std::abs(geo.div_X_top));
    max_h_dev = std::max(max_h_dev, std::abs(geo.H.norm() - 1.0 / rho0));
    max_xtop = std::max(max_xtop, geo.X_top.norm());
  }
  // Centered sphere: the position field is purely normal, so X^T and its
  // divergence must both vanish while |H| = 1/rho0.
  return json{{"rho0", rho0},
              {"max_divergence", max_div},
              {"max_mean_curvature_deviation", max_h_dev},
              {"max_xtop", max_xtop},
              {"minimal", false}};
}

json run_hyperbolic_ball(const RunOptions& opts) {
  AmbientSpace space = AmbientSpace::hyperbolic_ball(2);
  AmbientField field = AmbientField::position(space, Vector::Zero(2));
  json rows = json::array();
  for (double R : {0.5, 1.0, 1.5}) {
    GeodesicBallSpec region(Vector::Zero(2), R, space);
    ConformalityEstimate est =
        estimate_conformality(space, field, region, opts.samples, opts.seed);
    rows.push_back(json{{"R", R},
                        {"alpha_est", est.alpha_est},
                        {"beta_est", est.beta_est},
                        {"alpha_kappa", alpha_kappa(R, -1.0)}});
  }
  return json{{"conformality", rows}, {"coth_1", alpha_kappa(1.0, -1.0)}};
}

json run_graph_product(const RunOptions& opts) {
  AmbientSpace space =
      AmbientSpace::product(AmbientSpace::euclidean(2), AmbientSpace::euclidean(1));
  Matrix L(1, 2);
  L << 0.6, -0.3;
  ParamBox base{Vector::Constant(2, -1.0), Vector::Constant(2, 1.0)};
  Immersion imm = Immersion::graph_linear(space, L, base);

  // Frame bound samples: min over random sigma directions.
  Eigen::JacobiSVD<Matrix> svd(L);
  std::vector<double> svals(svd.singularValues().data(),
                            svd.singularValues().data() + svd.singularValues().size());
  while (static_cast<int>(svals.size()) < 2) svals.push_back(0.0);
  double lambda_max = 0.0;
  for (double s : svals) lambda_max = std::max(lambda_max, s);
  const double bound_floor = 1.0 / (1.0 + lambda_max * lambda_max);
  HaltonSampler dirs(2, opts.seed + 1);
  double min_bound = std::numeric_limits<double>::infinity();
  for (int s = 0; s < 256; ++s) {
    Vector sigma = (dirs.next().array() - 0.5).matrix();
    if (sigma.norm() < 1e-9) continue;
    sigma.normalize();
    min_bound = std::min(min_bound, graph_frame_bound(svals, sigma));
  }

  // Kasue convexity samples along the graph.
  ConvexFunctionSpec h = ConvexFunctionSpec::half_rho_squared(space, Vector::Zero(2));
  HaltonSampler pts(2, opts.seed + 2);
  HaltonSampler ys(3, opts.seed + 3);
  double min_margin = std::numeric_limits<double>::infinity();
  const int n = std::max(64, opts.samples / 16);
  for (int s = 0; s < n; ++s) {
    const Vector u = imm.param_domain().map_unit(pts.next());
    const Vector p = imm.F_at(u);
    if (p.head(2).norm() < 1e-6) continue;
    const Vector Y = (ys.next().array() - 0.5).matrix();
    const double hess = Y.dot(hessian_of(space, h, p) * Y);
    min_margin = std::min(
        min_margin, hess - kasue_lower_bound(space, Vector::Zero(2), p, Y));
  }

  return json{{"singular_values", svals},
              {"frame_bound_floor", bound_floor},
              {"frame_bound_min", min_bound},
              {"kasue_min_margin", min_margin}};
}

// FNV-1a, stable across platforms, for report provenance.
std::string options_hash(const std::string& name, const RunOptions& opts) {
  std::ostringstream os;
  os.precision(17);
  os << name << '|' << opts.seed << '|' << opts.samples << '|' << opts.resolution;
  for (double e : opts.eps_sequence) os << '|' << e;
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : os.str()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream hex;
  hex << std::hex << h;
  return hex.str();
}

using Runner = json (*)(const RunOptions&);

const std::vector<std::pair<std::string, Runner>>& runners() {
  static const std::vector<std::pair<std::string, Runner>> table = {
      {"interval_benchmark", run_interval},
      {"disk_benchmark", run_disk},
      {"square_benchmark", run_square},
      {"spiral", run_spiral},
      {"catenoid_position", run_catenoid_divergence},
      {"catenoid_h", run_catenoid_band},
      {"plane_trivial", run_disk_window},
      {"sphere_nonminimal", run_sphere_cap},
      {"hyperbolic_ball_field", run_hyperbolic_ball},
      {"product_graph", run_graph_product},
  };
  return table;
}

}  // namespace

std::vector<std::string> list_scenarios() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : runners()) names.push_back(name);
  return names;
}

nlohmann::json run_scenario(const std::string& name, const RunOptions& opts) {
  for (const auto& [n, fn] : runners()) {
    if (n == name) {
      json out = fn(opts);
      out["scenario"] = name;
      out["seed"] = opts.seed;
      out["samples"] = opts.samples;
      out["resolution"] = opts.resolution;
      out["config_hash"] = options_hash(name, opts);
      return out;
    }
  }
  throw UnknownScenarioError("run_scenario: unknown scenario '" + name + "'");
}

nlohmann::json run_all(const RunOptions& opts) {
  json out;
  for (const auto& name : list_scenarios()) out[name] = run_scenario(name, opts);
  return out;
}

std::string plot_csv(const nlohmann::json& report, const std::string& series) {
  std::ostringstream os;
  os.precision(17);
  if (series == "exhaustion" && report.contains("exhaustion")) {
    os << "eps,lambda_fem,c_inf,theory_bound,margin\n";
    for (const auto& r : report["exhaustion"])
      os << r["eps"].get<double>() << ',' << r["lambda_fem"].get<double>() << ','
         << r["c_inf"].get<double>() << ',' << r["theory_bound"].get<double>() << ','
         << r["margin"].get<double>() << '\n';
    return os.str();
  }
  if (series == "sup_series" && report.contains("sup_series")) {
    os << "T,sup_xtop,radius_ratio,delta\n";
    for (const auto& r : report["sup_series"])
      os << r["T"].get<double>() << ',' << r["sup_xtop"].get<double>() << ','
         << r["radius_ratio"].get<double>() << ',' << r["delta"].get<double>() << '\n';
    return os.str();
  }
  if (series == "convergence" && report.contains("convergence")) {
    os << "n,h,lambda,error\n";
    for (const auto& r : report["convergence"]["rows"])
      os << r["n"].get<int>() << ',' << r["h"].get<double>() << ','
         << r["lambda"].get<double>() << ',' << r["error"].get<double>() << '\n';
    return os.str();
  }
  if (series == "pairing" && report.contains("pairing_series")) {
    os << "t,ratio\n";
    for (const auto& r : report["pairing_series"])
      os << r["t"].get<double>() << ',' << r["ratio"].get<double>() << '\n';
    return os.str();
  }
  if (series == "checks" && report.contains("tone")) {
    os << "name,lhs,rhs,margin,verdict\n";
    for (const auto& c : report["tone"]["checks"])
      os << c["name"].get<std::string>() << ',' << c["lhs"].get<double>() << ','
         << c["rhs"].get<double>() << ',' << c["margin"].get<double>() << ','
         << c["verdict"].get<std::string>() << '\n';
    return os.str();
  }
  throw std::invalid_argument(
      "plot_csv: no series '" + series +
      "' in this report (available: exhaustion, sup_series, convergence, pairing, checks)");
}

}  // namespace tonekit
