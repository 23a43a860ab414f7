// Command-line front door: scans, spectral flows, circumcenter solves,
// rigidity runs, and the seeded experiment suite. All matrix inputs use the
// JSON wire format {"n": ..., "entries": [[[re, im], ...], ...]}.

#include <CLI11.hpp>

#include <iostream>

#include "unifinsler/experiments.hpp"
#include "unifinsler/io.hpp"

namespace {

using namespace unifinsler;

std::vector<double> grid_from_json(const Json& j) {
  if (j.is_array()) {
    std::vector<double> g;
    for (const Json& v : j) g.push_back(v.get<double>());
    return g;
  }
  return uniform_grid(j.value("lo", 0.0), j.value("hi", 1.0),
                      j.value("points", 201));
}

int run_flow(const std::string& config_path, const std::string& out_dir) {
  const Json cfg = load_json_file(config_path);
  const Unitary u = unitary_from_json(cfg.at("u"));
  const SkewHermitian x = skew_from_json(cfg.at("x"));
  const std::vector<double> grid =
      cfg.contains("grid") ? grid_from_json(cfg.at("grid"))
                           : uniform_grid(0.0, 1.0, 201);
  const std::vector<SpectralFlowSample> samples = spectral_flow(u, x, grid);
  write_flow_csv(out_dir + "/flow.csv", samples);
  std::cout << "wrote " << out_dir << "/flow.csv (" << samples.size()
            << " samples)\n";
  return 0;
}

int run_scan(const std::string& config_path, const std::string& out_dir) {
  const Json cfg = load_json_file(config_path);
  const std::string op = cfg.at("op").get<std::string>();
  const std::vector<double> grid =
      cfg.contains("grid") ? grid_from_json(cfg.at("grid"))
                           : uniform_grid(0.0, 1.0, 201);
  ScanOptions opts;
  opts.force = cfg.value("force", false);

  if (op == "counterexample") {
    const CounterexampleFlowResult r =
        counterexample_flow(cfg.at("theta").get<double>(), grid);
    CsvWriter csv(out_dir + "/counterexample.csv");
    csv.row({"t", "closed_form", "measured_theta_max"});
    for (std::size_t i = 0; i < r.grid.size(); ++i) {
      csv.numeric_row({r.grid[i], r.closed_form[i], r.measured[i].theta_max});
    }
    const Json j{{"theta", r.theta},
                 {"f2_measured", r.f2_measured},
                 {"f2_closed", r.f2_closed},
                 {"cot_theta", r.cot_theta},
                 {"max_disagreement", r.max_disagreement}};
    write_text_file(out_dir + "/counterexample.json", j.dump(2) + "\n");
    std::cout << "f''(0) = " << r.f2_measured << ", cot(theta) = "
              << r.cot_theta << "\n";
    return 0;
  }
  if (op == "theta_extremes") {
    const ThetaExtremesReport rep = scan_theta_extremes(
        unitary_from_json(cfg.at("u")), skew_from_json(cfg.at("x")), grid,
        opts);
    write_flow_csv(out_dir + "/theta_extremes_flow.csv", rep.flow);
    write_scan_csv(out_dir + "/theta_max_scan.csv", rep.max_report);
    write_scan_csv(out_dir + "/theta_min_scan.csv", rep.min_report);
    const Json j{{"theta_max", scan_report_to_json(rep.max_report)},
                 {"theta_min", scan_report_to_json(rep.min_report)}};
    write_text_file(out_dir + "/theta_extremes.json", j.dump(2) + "\n");
    std::cout << "theta_max pass=" << rep.max_report.pass
              << ", theta_min pass=" << rep.min_report.pass << "\n";
    return rep.max_report.pass && rep.min_report.pass ? 0 : 1;
  }

  ConvexityScanReport rep;
  if (op == "dinf") {
    rep = scan_dinf_convexity(unitary_from_json(cfg.at("w")),
                              unitary_from_json(cfg.at("u")),
                              unitary_from_json(cfg.at("v")), grid, opts);
  } else if (op == "dp") {
    const Geodesic beta(unitary_from_json(cfg.at("base")),
                        skew_from_json(cfg.at("direction")));
    rep = scan_dp_convexity(
        unitary_from_json(cfg.at("u")), beta, cfg.at("p").get<int>(),
        trace_convention_from_name(cfg.value("conv", "standard")), grid,
        opts);
  } else if (op == "strong_d2") {
    const Geodesic beta(unitary_from_json(cfg.at("base")),
                        skew_from_json(cfg.at("direction")));
    rep = scan_strong_convexity_d2(
        unitary_from_json(cfg.at("w")), beta, cfg.at("r").get<double>(),
        trace_convention_from_name(cfg.value("conv", "standard")), grid,
        opts);
  } else {
    throw ConfigError("unknown scan op '" + op + "'");
  }
  write_scan_csv(out_dir + "/scan.csv", rep);
  write_text_file(out_dir + "/scan.json",
                  scan_report_to_json(rep).dump(2) + "\n");
  std::cout << rep.context << "\n"
            << "pass=" << rep.pass
            << " min_d2f=" << rep.min_second_difference
            << " chord_min_slack=" << rep.chord_min_slack << "\n";
  return rep.pass ? 0 : 1;
}

int run_center(const std::string& config_path, const std::string& out_dir) {
  Json cfg = load_json_file(config_path);
  if (!cfg.contains("options")) cfg["options"] = Json::object();
  cfg["options"]["record_trace"] = true;
  const CenterProblem problem = center_problem_from_json(cfg);
  const CenterResult result = solve_center(problem);
  write_text_file(out_dir + "/center_result.json",
                  center_result_to_json(result).dump(2) + "\n");
  write_center_trace_csv(out_dir + "/center_trace.csv", result);
  std::cout << "f_A(center) = " << result.value << " after "
            << result.iterations << " iterations"
            << (result.stalled ? " (stalled)" : "") << "\n";
  return result.stalled ? 1 : 0;
}

int run_rigidity(const std::string& mode, const std::string& config_path,
                 const std::string& out_dir) {
  const Json cfg = load_json_file(config_path);
  Json result;
  if (mode == "intertwiner") {
    std::vector<std::string> labels;
    for (const Json& l : cfg.at("labels")) {
      labels.push_back(l.get<std::string>());
    }
    std::vector<std::vector<int>> table;
    for (const Json& row : cfg.at("table")) {
      table.push_back(row.get<std::vector<int>>());
    }
    std::vector<Unitary> phi, rho;
    for (const Json& m : cfg.at("phi")) phi.push_back(unitary_from_json(m));
    for (const Json& m : cfg.at("rho")) rho.push_back(unitary_from_json(m));
    const Eigen::Index n = phi.front().dim();
    const SubspaceSpec subgroup =
        cfg.contains("subspace") ? subspace_from_json(cfg.at("subspace"))
                                 : SubspaceSpec::full(n);
    const Unitary u0 = cfg.contains("u0") ? unitary_from_json(cfg.at("u0"))
                                          : Unitary::identity(n);
    const Unitary g = find_intertwiner(labels, table, phi, rho, subgroup, u0);
    const OrbitReport rep =
        orbit(FiniteGroupAction::two_sided(labels, table, phi, rho), u0);
    result = Json{{"g", matrix_to_json(g.mat())},
                  {"residual", intertwiner_residual(phi, rho, g)},
                  {"orbit_radius_bound", rep.radius_bound},
                  {"orbit_size", rep.points.size()}};
  } else if (mode == "fixed-point") {
    const FiniteGroupAction action = action_from_json(cfg.at("action"));
    const Unitary v = unitary_from_json(cfg.at("v"));
    const SubspaceSpec subspace =
        cfg.contains("subspace") ? subspace_from_json(cfg.at("subspace"))
                                 : SubspaceSpec::full(v.dim());
    const Unitary g =
        find_fixed_point(action, v, subspace, cfg.at("r").get<double>());
    const OrbitReport rep = orbit(action, v);
    result = Json{{"g", matrix_to_json(g.mat())},
                  {"residual", fixed_point_residual(action, g)},
                  {"orbit_radius_bound", rep.radius_bound},
                  {"orbit_size", rep.points.size()}};
  } else if (mode == "invariant-subspace") {
    std::vector<Unitary> generators;
    for (const Json& m : cfg.at("generators")) {
      generators.push_back(unitary_from_json(m));
    }
    const ProjectionPoint p0 =
        ProjectionPoint::from_matrix(matrix_from_json(cfg.at("p0")));
    const ProjectionPoint q = find_invariant_projection(
        generators, cfg.at("m").get<Eigen::Index>(), p0);
    double comm = 0.0;
    for (const Unitary& h : generators) {
      comm = std::max(comm, op_norm(h.mat() * q.p - q.p * h.mat()));
    }
    result = Json{{"q", matrix_to_json(q.p)},
                  {"rank", q.rank},
                  {"commutator_residual", comm}};
  } else {
    throw ConfigError("unknown rigidity mode '" + mode + "'");
  }
  write_text_file(out_dir + "/rigidity_result.json", result.dump(2) + "\n");
  std::cout << result.dump(2) << "\n";
  return 0;
}

int run_experiment_cmd(const std::string& id, std::uint64_t seed,
                       const std::string& out_dir) {
  const RunConfig cfg{id, seed, out_dir};
  const std::vector<CriterionOutcome> outcomes = run_experiment(cfg);
  bool all_pass = true;
  for (const CriterionOutcome& o : outcomes) {
    std::cout << "criterion " << o.criterion << " [" << o.id << "] "
              << (o.pass ? "PASS" : "FAIL") << " - " << o.detail << "\n";
    all_pass = all_pass && o.pass;
  }
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finsler geometry of finite unitary groups: metrics, "
               "convexity scans, circumcenters, rigidity solvers"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", mode, experiment_id = "";
  std::uint64_t seed = 7;
  bool list_ids = false;

  CLI::App* scan = app.add_subcommand("scan", "convexity scans");
  scan->add_option("--config", config_path, "scan config JSON")->required();
  scan->add_option("--out", out_dir, "output directory");

  CLI::App* center = app.add_subcommand("center", "circumcenter solve");
  center->add_option("--config", config_path, "center problem JSON")
      ->required();
  center->add_option("--out", out_dir, "output directory");

  CLI::App* rigidity = app.add_subcommand("rigidity", "fixed-point solvers");
  rigidity
      ->add_option("--mode", mode,
                   "intertwiner | invariant-subspace | fixed-point")
      ->required();
  rigidity->add_option("--config", config_path, "input JSON")->required();
  rigidity->add_option("--out", out_dir, "output directory");

  CLI::App* flow = app.add_subcommand("flow", "spectral flow CSV");
  flow->add_option("--config", config_path, "flow config JSON")->required();
  flow->add_option("--out", out_dir, "output directory");

  CLI::App* experiment =
      app.add_subcommand("experiment", "seeded experiment suite");
  experiment->add_option("--id", experiment_id, "experiment id");
  experiment->add_flag("--list", list_ids, "list experiment ids");
  experiment->add_option("--seed", seed, "random seed");
  experiment->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (scan->parsed()) return run_scan(config_path, out_dir);
    if (center->parsed()) return run_center(config_path, out_dir);
    if (rigidity->parsed()) return run_rigidity(mode, config_path, out_dir);
    if (flow->parsed()) return run_flow(config_path, out_dir);
    if (experiment->parsed()) {
      if (list_ids) {
        for (const std::string& id : unifinsler::experiment_ids()) {
          std::cout << id << "\n";
        }
        return 0;
      }
      if (experiment_id.empty()) {
        std::cerr << "error: --id is required (or use --list)\n";
        return 2;
      }
      return run_experiment_cmd(experiment_id, seed, out_dir);
    }
  } catch (const unifinsler::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const unifinsler::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    // malformed configs surface as json/key errors
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
