#include "tonekit/catalog.hpp"

#include <CLI/CLI.hpp>
#include <Eigen/Core>

#include <cstdlib>
#include <fstream>
#include <iostream>

namespace {

using nlohmann::json;

int write_or_print(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text << '\n';
    return 0;
  }
  std::ofstream os(out_path);
  if (!os) {
    std::cerr << "cannot open " << out_path << " for writing\n";
    return 1;
  }
  os << text << '\n';
  return 0;
}

// Config document: {"scenario": name or "all", "seed": n, "samples": n,
// "resolution": n, "eps": [..]}. Unknown keys are rejected.
std::pair<std::string, tonekit::RunOptions> parse_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read config file " + path);
  json doc = json::parse(is);  // parse_error carries the byte offset
  tonekit::RunOptions opts;
  std::string scenario = "all";
  for (const auto& [key, value] : doc.items()) {
    if (key == "scenario")
      scenario = value.get<std::string>();
    else if (key == "seed")
      opts.seed = value.get<unsigned>();
    else if (key == "samples")
      opts.samples = value.get<int>();
    else if (key == "resolution")
      opts.resolution = value.get<int>();
    else if (key == "eps")
      opts.eps_sequence = value.get<std::vector<double>>();
    else
      throw std::runtime_error("config field '" + key + "' is not recognized");
  }
  return {scenario, opts};
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("TONEKIT_THREADS"))
    Eigen::setNbThreads(std::max(1, std::atoi(threads)));
  else
    Eigen::setNbThreads(1);  // reproducible by default

  CLI::App app{"tonekit: spectral bounds for immersed submanifolds"};
  app.require_subcommand(1);

  auto* list_cmd = app.add_subcommand("list", "list available scenarios");

  std::string config_path;
  std::string out_path;
  auto* run_cmd = app.add_subcommand("run", "run the scenarios named in a config file");
  run_cmd->add_option("config", config_path, "config document (JSON)")->required();
  run_cmd->add_option("-o,--output", out_path, "output file (default: stdout)");

  std::string report_path;
  std::string series;
  std::string plot_scenario;
  std::string plot_out;
  auto* plot_cmd = app.add_subcommand("plot", "extract a CSV series from a report");
  plot_cmd->add_option("report", report_path, "report JSON file")->required();
  plot_cmd
      ->add_option("series", series,
                   "series name (exhaustion, sup_series, convergence, pairing, checks)")
      ->required();
  plot_cmd->add_option("--scenario", plot_scenario,
                       "scenario key inside an aggregate report");
  plot_cmd->add_option("-o,--output", plot_out, "output file (default: stdout)");

  auto* mesh_cmd = app.add_subcommand("mesh", "build or inspect mesh files");
  std::string mesh_kind = "disk";
  int mesh_n = 16;
  double mesh_param = 1.0;
  std::string mesh_out;
  auto* mesh_export = mesh_cmd->add_subcommand("export", "write a structured mesh");
  mesh_export->add_option("--kind", mesh_kind, "interval, rectangle, or disk");
  mesh_export->add_option("--n", mesh_n, "resolution");
  mesh_export->add_option("--extent", mesh_param, "length or radius");
  mesh_export->add_option("-o,--output", mesh_out, "output file")->required();
  std::string mesh_in;
  auto* mesh_info = mesh_cmd->add_subcommand("info", "print mesh counts");
  mesh_info->add_option("file", mesh_in, "mesh file")->required();
  mesh_cmd->require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*list_cmd) {
      for (const auto& name : tonekit::list_scenarios()) std::cout << name << '\n';
      return 0;
    }
    if (*run_cmd) {
      auto [scenario, opts] = parse_config(config_path);
      json report = (scenario == "all") ? tonekit::run_all(opts)
                                        : tonekit::run_scenario(scenario, opts);
      return write_or_print(out_path, report.dump(2));
    }
    if (*plot_cmd) {
      std::ifstream is(report_path);
      if (!is) {
        std::cerr << "cannot read " << report_path << '\n';
        return 1;
      }
      json report = json::parse(is);
      if (!plot_scenario.empty()) report = report.at(plot_scenario);
      return write_or_print(plot_out, tonekit::plot_csv(report, series));
    }
    if (*mesh_export) {
      tonekit::DomainMesh mesh;
      if (mesh_kind == "interval")
        mesh = tonekit::interval_mesh(0.0, mesh_param, mesh_n);
      else if (mesh_kind == "rectangle")
        mesh = tonekit::rectangle_mesh(0.0, mesh_param, 0.0, mesh_param, mesh_n, mesh_n);
      else if (mesh_kind == "disk")
        mesh = tonekit::disk_mesh(mesh_param, mesh_n);
      else {
        std::cerr << "unknown mesh kind '" << mesh_kind << "'\n";
        return 1;
      }
      std::ofstream os(mesh_out);
      if (!os) {
        std::cerr << "cannot open " << mesh_out << " for writing\n";
        return 1;
      }
      tonekit::write_mesh(os, mesh);
      return 0;
    }
    if (*mesh_info) {
      std::ifstream is(mesh_in);
      if (!is) {
        std::cerr << "cannot read " << mesh_in << '\n';
        return 1;
      }
      tonekit::DomainMesh mesh = tonekit::read_mesh(is);
      std::cout << "dim " << mesh.m << "\nvertices " << mesh.vertex_count()
                << "\ncells " << mesh.cell_count() << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
