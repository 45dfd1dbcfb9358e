#include "quasifix/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "quasifix/config.hpp"
#include "quasifix/numfmt.hpp"
#include "quasifix/picard.hpp"
#include "quasifix/rng.hpp"

namespace quasifix {

namespace {

using nlohmann::ordered_json;

struct SourceOpts {
  std::string preset;
  std::string config_path;
};

void add_source_opts(CLI::App* cmd, SourceOpts& src) {
  auto* p = cmd->add_option("--preset", src.preset, "built-in preset name");
  auto* c = cmd->add_option("--config", src.config_path, "JSON config file");
  p->excludes(c);
  c->excludes(p);
}

SystemConfig resolve_source(const SourceOpts& src) {
  if (!src.preset.empty()) return preset_config(src.preset);
  if (!src.config_path.empty()) return load_config(src.config_path);
  throw ConfigError("one of --preset or --config is required");
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write file '" + path + "'");
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Plain number output styled as a decimal (the shortest repr of 1.0 is
/// "1"; the reports print "1.0").
std::string decimal_string(double v) {
  std::string s = format_double(v);
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
    s += ".0";
  return s;
}

void print_report(const Report& report, bool json) {
  if (json) {
    std::cout << to_json(report) << "\n";
    return;
  }
  for (const auto& c : report.checks) {
    const char* tag = c.status == CheckStatus::pass      ? "[PASS]"
                      : c.status == CheckStatus::vacuous ? "[VAC ]"
                                                         : "[FAIL]";
    std::cout << tag << " " << c.name;
    if (!c.detail.empty()) std::cout << " - " << c.detail;
    std::cout << "\n";
  }
}

void prefix_checks(Report& report, const std::string& prefix) {
  for (auto& c : report.checks) c.name = prefix + c.name;
}

/// Grid for the z-property checks: spans the value scale that q actually
/// produces on the space grid.
SampleGrid value_scale_grid(const QuasiMetricSpace& space, const SampleGrid& grid,
                            std::size_t samples, std::uint64_t seed) {
  double t_max = 0.0;
  for (double x : grid.points)
    for (double y : grid.points) t_max = std::max(t_max, space.raw_q(x, y));
  if (t_max <= 0.0) t_max = 1.0;
  return SampleGrid::standard({0.0, t_max}, samples, samples > 1 ? samples - 1 : 0, seed);
}

std::vector<std::pair<FiniteCompactSet, FiniteCompactSet>> sample_set_pairs(
    const QuasiMetricSpace& space, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  const Interval dom = space.domain();
  auto draw_set = [&] {
    std::size_t n = 1 + rng.below(8);
    std::vector<double> pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back(rng.uniform(dom.lo, dom.hi));
    return FiniteCompactSet::of(std::move(pts));
  };
  std::vector<std::pair<FiniteCompactSet, FiniteCompactSet>> pairs;
  pairs.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto a = draw_set();
    auto b = draw_set();
    pairs.emplace_back(std::move(a), std::move(b));
  }
  return pairs;
}

int cmd_verify(const SystemConfig& cfg, std::size_t samples, std::uint64_t seed,
               bool inequality_only, bool json) {
  QuasiMetricSpace space = make_space(cfg.space);
  SampleGrid grid = SampleGrid::standard(space.domain(), samples,
                                         samples > 1 ? samples - 1 : 0, seed);
  Report all;

  if (!cfg.is_ifs) {
    ContractionSystem sys = make_contraction(cfg);
    if (!inequality_only) {
      Report axioms = space.check_axioms(grid);
      prefix_checks(axioms, "axioms/");
      all.append(axioms);

      DeltaEstimate est = space.estimate_delta(grid);
      std::string detail = "sampled delta = " + format_double(est.value);
      if (est.unbounded || est.unstable)
        detail += est.unbounded ? "; unbounded ratio found: no finite delta fits"
                                : "; estimate grows under refinement to " +
                                      format_double(est.refined_value) +
                                      ": no finite delta may fit";
      all.add("delta/estimate", CheckStatus::pass, {est.value}, detail);

      SampleGrid zgrid = value_scale_grid(space, grid, samples, seed + 1);
      Report z = sys.xi.check_z_properties(zgrid, zgrid, 64, seed + 2);
      prefix_checks(z, "z/");
      all.append(z);
    }
    all.append(verify_inequality(sys, grid));
    if (!inequality_only) {
      all.append(audit_hypotheses(sys, grid, 64, seed + 3));
    }
  } else {
    IfsSystem ifs = make_ifs(cfg);
    if (!inequality_only) {
      Report axioms = space.check_axioms(grid);
      prefix_checks(axioms, "axioms/");
      all.append(axioms);

      SampleGrid zgrid = value_scale_grid(space, grid, samples, seed + 1);
      for (std::size_t i = 0; i < ifs.maps().size(); ++i) {
        Report z = ifs.maps()[i].xi.check_z_properties(zgrid, zgrid, 64, seed + 2);
        prefix_checks(z, "map[" + std::to_string(i + 1) + "]/z/");
        all.append(z);
      }
      Report zc = ifs.combined_xi().check_z_properties(zgrid, zgrid, 64, seed + 2);
      prefix_checks(zc, "combined-xi/z/");
      all.append(zc);
    }
    for (std::size_t i = 0; i < ifs.maps().size(); ++i) {
      Report ineq = verify_inequality(ifs.map_system(i), grid);
      prefix_checks(ineq, "map[" + std::to_string(i + 1) + "]/");
      all.append(ineq);
    }
    if (!inequality_only) {
      for (std::size_t i = 0; i < ifs.maps().size(); ++i) {
        Report audit = audit_hypotheses(ifs.map_system(i), grid, 64, seed + 3);
        prefix_checks(audit, "map[" + std::to_string(i + 1) + "]/");
        all.append(audit);
      }
      auto pairs = sample_set_pairs(space, 64, seed + 4);
      Report hyper = verify_hyperspace_contraction(ifs, pairs);
      prefix_checks(hyper, "hyperspace/");
      all.append(hyper);
    }
  }

  print_report(all, json);
  return all.all_passed() ? 0 : 2;
}

int cmd_iterate(const SystemConfig& cfg, double x0, double tol, int max_iter,
                const std::string& out, bool json) {
  ContractionSystem sys = make_contraction(cfg);
  Trajectory traj = iterate(sys, x0, tol, max_iter);
  if (!out.empty()) write_file(out, trajectory_csv(traj));

  double residual = 0.0;
  if (traj.converged) residual = std::fabs(sys.apply_map(*traj.fixed_point) - *traj.fixed_point);
  if (json) {
    ordered_json j;
    j["converged"] = traj.converged;
    if (traj.fixed_point)
      j["fixed_point"] = *traj.fixed_point;
    else
      j["fixed_point"] = nullptr;
    j["iterations_used"] = traj.iterations_used;
    if (traj.converged) j["residual"] = residual;
    std::cout << j.dump() << "\n";
  } else if (traj.converged) {
    std::cout << "converged: fixed point " << decimal_string(*traj.fixed_point) << " after "
              << traj.iterations_used << " iterations (residual "
              << format_double(residual) << ")\n";
  } else {
    std::cout << "did not converge within " << max_iter << " iterations\n";
  }
  return traj.converged ? 0 : 2;
}

ordered_json run_meta_json(const AttractorRun& run) {
  ordered_json j;
  j["stopped_at"] = run.stopped_at;
  j["converged"] = run.converged;
  j["h_trace"] = run.h_trace;
  j["sup_trace"] = run.sup_trace;
  j["inf_trace"] = run.inf_trace;
  if (run.mesh) j["mesh"] = *run.mesh;
  return j;
}

int cmd_attractor(const SystemConfig& cfg, int grid_n, const std::string& initial,
                  double tol, int max_iter, std::size_t max_points,
                  const std::string& out, const std::string& meta, bool json) {
  IfsSystem ifs = make_ifs(cfg);
  FiniteCompactSet a0 = initial.empty()
                            ? FiniteCompactSet::of(
                                  SampleGrid::equispaced(ifs.space().domain(),
                                                         static_cast<std::size_t>(grid_n))
                                      .points)
                            : parse_set_csv(read_file(initial));
  a0.validate_within(ifs.space().domain());

  AttractorRun run = compute_attractor(ifs, a0, tol, max_iter, max_points);
  if (!out.empty()) write_file(out, set_csv(run.final));
  if (!meta.empty()) write_file(meta, run_meta_json(run).dump(2) + "\n");

  if (json) {
    std::cout << run_meta_json(run).dump() << "\n";
  } else {
    std::cout << (run.converged ? "converged" : "did not converge") << " after "
              << run.stopped_at << " iterations; " << run.final.size()
              << " points in [" << decimal_string(run.final.min()) << ", "
              << decimal_string(run.final.max()) << "]";
    if (!run.h_trace.empty())
      std::cout << "; last h_q step " << format_double(run.h_trace.back());
    std::cout << "\n";
  }
  return run.converged ? 0 : 2;
}

int cmd_hausdorff(const SystemConfig& cfg, const std::string& set_a,
                  const std::string& set_b, bool json) {
  QuasiMetricSpace space = make_space(cfg.space);
  FiniteCompactSet a = parse_set_csv(read_file(set_a));
  FiniteCompactSet b = parse_set_csv(read_file(set_b));
  a.validate_within(space.domain());
  b.validate_within(space.domain());
  double ab = q_gap(a, b, space);
  double ba = q_gap(b, a, space);
  double h = std::max(ab, ba);
  if (json) {
    ordered_json j;
    j["q_gap_ab"] = ab;
    j["q_gap_ba"] = ba;
    j["hausdorff"] = h;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << decimal_string(h) << "\n";
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Proinov-type Z-contractions on quasi-metric spaces: verification, "
               "fixed points, and IFS attractors"};
  app.require_subcommand(1);

  // verify
  SourceOpts v_src;
  std::size_t v_samples = 101;
  std::uint64_t v_seed = 0;
  bool v_ineq_only = false, v_json = false;
  auto* verify_cmd = app.add_subcommand(
      "verify", "check axioms, z-properties, the contraction inequality, and the "
                "theorem hypotheses by sampling");
  add_source_opts(verify_cmd, v_src);
  verify_cmd->add_option("--samples", v_samples, "equispaced grid points (plus as many "
                                                 "random ones minus one)");
  verify_cmd->add_option("--seed", v_seed, "seed for all randomness");
  verify_cmd->add_flag("--inequality-only", v_ineq_only,
                       "run only the contraction inequality checks");
  verify_cmd->add_flag("--json", v_json, "machine-readable report on stdout");

  // iterate
  SourceOpts i_src;
  double i_x0 = 0.0, i_tol = 1e-12;
  int i_max_iter = 1000;
  std::string i_out;
  bool i_json = false;
  auto* iterate_cmd = app.add_subcommand("iterate", "Picard iteration to a fixed point");
  add_source_opts(iterate_cmd, i_src);
  iterate_cmd->add_option("--x0", i_x0, "initial point")->required();
  iterate_cmd->add_option("--tol", i_tol, "stopping tolerance on the step distances");
  iterate_cmd->add_option("--max-iter", i_max_iter, "iteration cap");
  iterate_cmd->add_option("--out", i_out, "write the trajectory CSV here");
  iterate_cmd->add_flag("--json", i_json, "machine-readable summary on stdout");

  // attractor
  SourceOpts a_src;
  int a_grid = 101, a_max_iter = 100;
  double a_tol = 1e-9;
  std::size_t a_max_points = 4096;
  std::string a_initial, a_out, a_meta;
  bool a_json = false;
  auto* attractor_cmd =
      app.add_subcommand("attractor", "iterate the fractal operator W to the attractor");
  add_source_opts(attractor_cmd, a_src);
  auto* ag = attractor_cmd->add_option("--grid", a_grid,
                                       "start from this many equispaced domain points");
  auto* ai = attractor_cmd->add_option("--initial", a_initial, "start from a set CSV file");
  ag->excludes(ai);
  ai->excludes(ag);
  attractor_cmd->add_option("--tol", a_tol, "stop when the h_q step falls below this");
  attractor_cmd->add_option("--max-iter", a_max_iter, "iteration cap");
  attractor_cmd->add_option("--max-points", a_max_points,
                            "prune sets larger than this by mesh snapping");
  attractor_cmd->add_option("--out", a_out, "write the final set CSV here");
  attractor_cmd->add_option("--meta", a_meta, "write run metadata JSON here");
  attractor_cmd->add_flag("--json", a_json, "metadata JSON on stdout");

  // hausdorff
  SourceOpts h_src;
  std::string h_a, h_b;
  bool h_json = false;
  auto* hausdorff_cmd = app.add_subcommand(
      "hausdorff", "Hausdorff-Pompeu quasi-metric between two set files");
  add_source_opts(hausdorff_cmd, h_src);
  hausdorff_cmd->add_option("--set-a", h_a, "set CSV file")->required();
  hausdorff_cmd->add_option("--set-b", h_b, "set CSV file")->required();
  hausdorff_cmd->add_flag("--json", h_json, "machine-readable values on stdout");

  // preset
  auto* preset_cmd = app.add_subcommand("preset", "list or show built-in presets");
  auto* list_cmd = preset_cmd->add_subcommand("list", "names of the built-in presets");
  std::string show_name;
  auto* show_cmd = preset_cmd->add_subcommand("show", "canonical JSON of one preset");
  show_cmd->add_option("name", show_name, "preset name")->required();
  preset_cmd->require_subcommand(1);

  std::vector<std::string> argv_storage;
  argv_storage.push_back("quasifix");
  for (const auto& a : args) argv_storage.push_back(a);
  std::vector<const char*> argv;
  for (const auto& s : argv_storage) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (verify_cmd->parsed())
      return cmd_verify(resolve_source(v_src), v_samples, v_seed, v_ineq_only, v_json);
    if (iterate_cmd->parsed())
      return cmd_iterate(resolve_source(i_src), i_x0, i_tol, i_max_iter, i_out, i_json);
    if (attractor_cmd->parsed())
      return cmd_attractor(resolve_source(a_src), a_grid, a_initial, a_tol, a_max_iter,
                           a_max_points, a_out, a_meta, a_json);
    if (hausdorff_cmd->parsed())
      return cmd_hausdorff(resolve_source(h_src), h_a, h_b, h_json);
    if (preset_cmd->parsed()) {
      if (list_cmd->parsed()) {
        for (const auto& n : preset_names()) std::cout << n << "\n";
        return 0;
      }
      if (show_cmd->parsed()) {
        std::cout << config_json(preset_config(show_name), 2) << "\n";
        return 0;
      }
    }
  } catch (const ConfigError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  } catch (const ParseError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  } catch (const std::out_of_range& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  } catch (const std::exception& err) {
    // runtime failure of an otherwise well-formed run (escape, overflow...)
    std::cerr << "run failed: " << err.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace quasifix
