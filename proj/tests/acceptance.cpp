// Acceptance gate: one line per criterion, PASS/FAIL, exit 0 only if all pass.
#include "tonekit/catalog.hpp"

#include <cmath>
#include <functional>
#include <iostream>

using namespace tonekit;
using nlohmann::json;

namespace {

constexpr double kPi = 3.14159265358979323846;

int failures = 0;

void report(int number, const std::string& label, bool ok,
            const std::string& detail = "") {
  std::cout << (ok ? "PASS" : "FAIL") << " " << number << ": " << label;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << '\n';
  if (!ok) ++failures;
}

void run(int number, const std::string& label,
         const std::function<std::pair<bool, std::string>()>& body) {
  try {
    auto [ok, detail] = body();
    report(number, label, ok, detail);
  } catch (const std::exception& e) {
    report(number, label, false, std::string("exception: ") + e.what());
  }
}

std::pair<bool, std::string> criterion_minimal_divergence() {
  AmbientSpace space = AmbientSpace::euclidean(3);
  Immersion imm = Immersion::catenoid(space, 1.0, -1.0, 1.0, 0.0, 2.0 * kPi);
  AmbientField field = AmbientField::position(space, Vector::Zero(3));
  HaltonSampler sampler(2, 0);
  double worst = 0.0;
  for (int s = 0; s < 4096; ++s) {
    const Vector u = imm.param_domain().map_unit(sampler.next());
    worst = std::max(worst, std::abs(divergence_tangential(imm, field, u) - 2.0));
  }
  return {worst <= 1e-5, "max |div - 2| = " + std::to_string(worst)};
}

std::pair<bool, std::string> criterion_alpha_table() {
  bool ok = alpha_kappa(2.7, 0.0) == 1.0;
  ok = ok && std::abs(alpha_kappa(kPi / 4.0, 1.0) - kPi / 4.0) <= 1e-12;
  ok = ok && std::abs(alpha_kappa(1.0, -1.0) - std::cosh(1.0) / std::sinh(1.0)) <= 1e-12;
  ok = ok && std::abs(alpha_kappa(1e-6, -1.0) - 1.0) <= 1e-4;
  ok = ok && std::abs(alpha_kappa(1e-6, 1.0) - 1.0) <= 1e-4;
  return {ok, "table values and small-radius continuity"};
}

std::pair<bool, std::string> criterion_fem_validation() {
  AmbientSpace s1 = AmbientSpace::euclidean(1);
  Immersion interval = Immersion::interval(s1, 1.0);
  std::vector<double> ie;
  for (int n : {32, 64, 128}) {
    DomainMesh mesh = interval_mesh(0.0, 1.0, n);
    ie.push_back(std::abs(solve_mesh_eigenvalue(interval, mesh).lambda1 - kPi * kPi));
  }
  AmbientSpace s2 = AmbientSpace::euclidean(2);
  Immersion disk = Immersion::disk(s2, 1.0);
  const double exact_disk = 5.783185962946785;  // first J0 root squared
  std::vector<double> de;
  for (int n : {8, 16, 32}) {
    DomainMesh mesh = disk_mesh(1.0, n);
    de.push_back(std::abs(solve_mesh_eigenvalue(disk, mesh).lambda1 - exact_disk));
  }
  bool ok = ie[2] < 0.01 * kPi * kPi && de[2] < 0.01 * exact_disk;
  std::string orders;
  for (const auto& e : {ie, de}) {
    for (int i = 0; i < 2; ++i) {
      const double order = std::log2(e[i] / e[i + 1]);
      ok = ok && order >= 1.7 && order <= 2.3;
      orders += (orders.empty() ? "orders " : ", ") + std::to_string(order);
    }
  }
  return {ok, orders};
}

std::pair<bool, std::string> criterion_barta() {
  RunOptions opts;
  opts.samples = 1024;
  opts.resolution = 8;
  opts.eps_sequence = {0.8, 0.4, 0.2};
  bool ok = true;
  // Barta lower bound on every exhaustion domain in the catalog.
  for (const char* name : {"catenoid_h", "plane_trivial"}) {
    json rep = run_scenario(name, opts);
    for (const auto& row : rep["exhaustion"])
      ok = ok && row["lambda_fem"].get<double>() >= row["c_inf"].get<double>() - 1e-9;
  }
  // Equality probe on interval and disk.
  AmbientSpace s1 = AmbientSpace::euclidean(1);
  Immersion interval = Immersion::interval(s1, 1.0);
  DomainMesh m1 = interval_mesh(0.0, 1.0, 128);
  const double l1 = solve_mesh_eigenvalue(interval, m1).lambda1;
  const double p1 = barta_equality_probe(interval, m1);
  AmbientSpace s2 = AmbientSpace::euclidean(2);
  Immersion disk = Immersion::disk(s2, 1.0);
  DomainMesh m2 = disk_mesh(1.0, 24);
  const double l2 = solve_mesh_eigenvalue(disk, m2).lambda1;
  const double p2 = barta_equality_probe(disk, m2);
  const double g1 = std::abs(p1 - l1) / l1;
  const double g2 = std::abs(p2 - l2) / l2;
  ok = ok && g1 < 0.05 && g2 < 0.05;
  return {ok, "probe gaps " + std::to_string(g1) + ", " + std::to_string(g2)};
}

std::pair<bool, std::string> criterion_gap_field_mechanism() {
  RunOptions opts;
  opts.samples = 2048;
  opts.resolution = 12;
  opts.eps_sequence = {0.4, 0.2, 0.1};
  json rep = run_scenario("catenoid_h", opts);
  bool ok = rep["lambda_strictly_increasing"].get<bool>();
  std::string rowinfo;
  for (const auto& row : rep["exhaustion"]) {
    const double eps = row["eps"].get<double>();
    const double c_inf = row["c_inf"].get<double>();
    ok = ok && c_inf >= 2.0 / eps - 1e-9;
    rowinfo += "c(" + std::to_string(eps) + ")=" + std::to_string(c_inf) + " ";
  }
  return {ok, rowinfo};
}

std::pair<bool, std::string> criterion_windowed_field_mechanism() {
  RunOptions opts;
  opts.samples = 2048;
  opts.resolution = 12;
  opts.eps_sequence = {0.8, 0.4, 0.2};
  json rep = run_scenario("plane_trivial", opts);
  bool ok = rep["pairing_verdict"].get<bool>();
  const double alpha = rep["alpha"].get<double>();
  const double ap = rep["alpha_prime_est"].get<double>();
  ok = ok && ap < alpha;
  for (const auto& row : rep["exhaustion"]) {
    const double eps = row["eps"].get<double>();
    const double bound = 2.0 * (alpha - ap) * 2.0 * alpha / (eps * eps);
    ok = ok && row["c_inf"].get<double>() >= bound - 1e-9;
  }
  return {ok, "alpha'_est = " + std::to_string(ap)};
}

std::pair<bool, std::string> criterion_spiral() {
  AmbientSpace space = AmbientSpace::euclidean(2);
  AmbientField field = AmbientField::position(space, Vector::Zero(2));
  const double a = 2.0, b = 1.0;
  auto sup_to = [&](double T) {
    Immersion window = Immersion::spiral(space, a, b, 0.0, T);
    return estimate_sup_xtop(window, field, 4096, 0).value;
  };
  const double sup_early = sup_to(0.8);
  const double sup_late = sup_to(8.0);
  const double radius_ratio = std::exp(b * 8.0);
  const bool ok = sup_late - sup_early < 1e-6 && radius_ratio > 1e3;
  return {ok, "sup increase " + std::to_string(sup_late - sup_early) +
                  ", radius ratio " + std::to_string(radius_ratio)};
}

std::pair<bool, std::string> criterion_frame_bound() {
  HaltonSampler svs(3, 11);
  HaltonSampler dirs(3, 12);
  bool ok = true;
  for (int trial = 0; trial < 1000; ++trial) {
    const Vector raw = 2.0 * svs.next();
    std::vector<double> svals(raw.data(), raw.data() + raw.size());
    double cmax = 0.0;
    for (double s : svals) cmax = std::max(cmax, s * s);
    Vector sigma = (dirs.next().array() - 0.5).matrix();
    if (sigma.norm() < 1e-9) continue;
    sigma.normalize();
    ok = ok && graph_frame_bound(svals, sigma) >= 1.0 / (1.0 + cmax) - 1e-12;
  }
  // Tight case: all weight on the largest singular direction.
  Vector e0 = Vector::Zero(3);
  e0[0] = 1.0;
  const double tight = graph_frame_bound({1.5, 0.0, 0.0}, e0);
  ok = ok && std::abs(tight - 1.0 / (1.0 + 1.5 * 1.5)) <= 1e-12;
  return {ok, "tight value " + std::to_string(tight)};
}

std::pair<bool, std::string> criterion_kasue() {
  AmbientSpace space =
      AmbientSpace::product(AmbientSpace::hyperbolic_ball(2), AmbientSpace::euclidean(1));
  ConvexFunctionSpec h = ConvexFunctionSpec::half_rho_squared(space, Vector::Zero(2));
  HaltonSampler pts(3, 21);
  HaltonSampler ys(3, 22);
  double worst = std::numeric_limits<double>::infinity();
  int used = 0;
  while (used < 4096) {
    Vector p = pts.next();
    p.head(2) = 0.9 * (p.head(2).array() - 0.5).matrix();
    p[2] = 4.0 * (p[2] - 0.5);
    const Vector Y = (ys.next().array() - 0.5).matrix();
    if (p.head(2).norm() < 1e-6) continue;
    ++used;
    const double hess = Y.dot(hessian_of(space, h, p) * Y);
    worst = std::min(worst, hess - kasue_lower_bound(space, Vector::Zero(2), p, Y));
  }
  return {worst >= -1e-6, "min margin " + std::to_string(worst)};
}

std::pair<bool, std::string> criterion_reproducibility() {
  RunOptions opts;
  opts.samples = 1024;
  opts.resolution = 8;
  opts.eps_sequence = {0.8, 0.4, 0.2};
  const std::string first = run_all(opts).dump();
  const std::string second = run_all(opts).dump();
  return {first == second, std::to_string(first.size()) + " report bytes"};
}

}  // namespace

int main() {
  run(1, "tangential divergence of the position field on a minimal surface equals m",
      criterion_minimal_divergence);
  run(2, "radial convexity profile table and continuity", criterion_alpha_table);
  run(3, "FEM benchmarks within 1% at second-order convergence", criterion_fem_validation);
  run(4, "Barta lower bound on all domains and equality probe within 5%", criterion_barta);
  run(5, "gap-gradient field: c_inf >= m alpha / eps with growing lambda",
      criterion_gap_field_mechanism);
  run(6, "windowed tangent field: c_inf >= 2(alpha - alpha') m alpha / eps^2",
      criterion_windowed_field_mechanism);
  run(7, "spiral projection bounded while the curve escapes", criterion_spiral);
  run(8, "graph frame bound floor 1/(1+C) with tight case", criterion_frame_bound);
  run(9, "convexity lower bound on nonpositively curved products", criterion_kasue);
  run(10, "full catalog reports are byte-identical across runs",
      criterion_reproducibility);
  if (failures > 0) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
