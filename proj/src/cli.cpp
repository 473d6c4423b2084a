#include "muskat/cli.hpp"

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "muskat/config.hpp"
#include "muskat/io.hpp"
#include "muskat/properties.hpp"

namespace muskat::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

/// Files produced by a command, written only after the computation finished.
struct Outputs {
  std::map<std::string, std::string> files;
  json status = {{"state", "ok"}};

  void add(const std::string& name, std::string bytes) { files[name] = std::move(bytes); }
  void add_json(const std::string& name, const json& j) { add(name, j.dump(2) + "\n"); }
};

std::string digest(const GraphFunction& f) { return digest_doubles(f.values.data(), f.values.size()); }

void add_f64(Outputs& out, const std::string& stem, const double* data, std::vector<std::size_t> shape,
             const RunConfig& c, const std::string& kind) {
  std::size_t count = 1;
  for (auto s : shape) count *= s;
  out.add(stem + ".f64", io::f64_bytes(data, count));
  out.add_json(stem + ".f64.json", io::f64_sidecar(shape, c.grid, to_json(c.solver), kind));
}

json diagnostics_json(const DtnDiagnostics& d) {
  return {{"residual", d.residual}, {"iterations", d.iterations}, {"stencil_order", d.stencil_order},
          {"depth", d.depth},       {"mp_excess", d.mp_excess},   {"tol_mp", d.tol_mp}};
}

void evaluate(const RunConfig& c, Outputs& out, json& digests) {
  const GraphFunction f = sample(c.initial_condition, c.grid);
  digests["initial_condition"] = digest(f);
  DtnResult result;
  FlattenedField field;
  if (c.op == OperatorTag::G) {
    const GraphFunction g = c.data ? sample(*c.data, c.grid) : f;
    digests["data"] = digest(g);
    field = solve_potential(f, g, c.solver);
    result = dtn_from_field(f, g, field);
  } else {
    OperatorPair pair = muskat_and_heleshaw(f, c.solver);
    result = c.op == OperatorTag::M ? pair.muskat : pair.heleshaw;
    field = std::move(pair.field);
  }
  const std::string stem = std::string("operator_") + to_string(c.op);
  if (c.wants("csv")) out.add(stem + ".csv", io::field_csv(GraphFunction(c.grid, result.values)));
  if (c.wants("json"))
    out.add_json(stem + ".json", {{"op", to_string(c.op)},
                                  {"values", std::vector<double>(result.values.begin(), result.values.end())},
                                  {"diagnostics", diagnostics_json(result.diagnostics)}});
  if (c.wants("f64")) {
    add_f64(out, stem, result.values.data(), {static_cast<std::size_t>(c.grid.N)}, c, stem);
    add_f64(out, "field", field.values.data(),
            {static_cast<std::size_t>(field.values.rows()), static_cast<std::size_t>(field.values.cols())}, c,
            to_string(field.kind));
  }
}

void export_trajectory(const RunConfig& c, const Trajectory& traj, const std::string& stem, Outputs& out) {
  if (c.wants("csv")) out.add(stem + ".csv", io::trajectory_csv(traj));
  if (c.wants("json")) {
    json steps = json::array();
    for (const auto& s : traj.steps)
      steps.push_back({{"t", s.t},
                       {"dt", s.dt},
                       {"max_abs_operator", s.max_abs_operator},
                       {"residual", s.residual},
                       {"halvings", s.halvings}});
    out.add_json(stem + ".json", {{"flow", to_string(c.which)},
                                  {"scheme", to_string(c.time.scheme)},
                                  {"times", traj.times},
                                  {"steps", steps}});
  }
  if (c.wants("f64")) {
    std::vector<double> flat;
    for (const auto& f : traj.frames) flat.insert(flat.end(), f.values.begin(), f.values.end());
    add_f64(out, stem, flat.data(), {traj.frames.size(), static_cast<std::size_t>(c.grid.N)}, c, "trajectory");
  }
}

int evolve_cmd(const RunConfig& c, Outputs& out, json& digests) {
  const GraphFunction f0 = sample(c.initial_condition, c.grid);
  digests["initial_condition"] = digest(f0);
  try {
    export_trajectory(c, evolve(f0, c.time, c.which, c.solver), "trajectory", out);
  } catch (const EvolutionFailure& e) {
    if (!e.partial().frames.empty()) export_trajectory(c, e.partial(), "trajectory_partial", out);
    out.status = {{"state", "solver_failure"}, {"message", e.what()}};
    return solver_failure;
  }
  return ok;
}

int verify_cmd(const RunConfig& c, int jobs, Outputs& out, std::ostream& os) {
  SuiteOptions opts = default_suite_options(c.grid);
  opts.solver = c.solver;
  opts.t_end = c.verify.t_end;
  opts.scheme = c.time.scheme;
  opts.gcp_pairs = c.verify.gcp_pairs;
  opts.lipschitz_pairs = c.verify.lipschitz_pairs;
  opts.seed = c.verify.seed;
  opts.cmp_c = c.verify.cmp_c;
  opts.direct_h_c = c.verify.direct_h_c;
  const std::vector<std::string> names = c.verify.checks.empty() ? standard_check_names() : c.verify.checks;

  // Each family is deterministic and independent, so running them on a pool leaves results unchanged.
  reset_solve_tally();
  std::vector<std::vector<PropertyReport>> results(names.size());
  std::vector<std::string> failures(names.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next++) < names.size();) {
      try {
        results[k] = run_check(names[k], opts);
      } catch (const std::exception& e) {
        failures[k] = e.what();
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(names.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::string summary;
  bool all_pass = true, solver_broke = false;
  json index = json::array();
  for (std::size_t k = 0; k < names.size(); ++k) {
    if (!failures[k].empty()) {
      solver_broke = true;
      summary += "ERROR " + names[k] + "  " + failures[k] + "\n";
      index.push_back({{"check", names[k]}, {"error", failures[k]}});
      continue;
    }
    json reports = json::array();
    int passed = 0;
    for (const auto& r : results[k]) {
      reports.push_back(r.to_json());
      passed += r.pass ? 1 : 0;
      all_pass = all_pass && r.pass;
      summary += r.summary_line() + "  [" + r.inputs.at("case") + "]\n";
    }
    index.push_back({{"check", names[k]}, {"passed", passed}, {"total", results[k].size()}});
    if (c.wants("json")) out.add_json("report_" + names[k] + ".json", reports);
  }
  std::ostringstream table;
  table << "check                 passed/total\n";
  for (const auto& e : index) {
    char line[96];
    if (e.contains("error"))
      std::snprintf(line, sizeof line, "%-20s  error\n", e["check"].get<std::string>().c_str());
    else
      std::snprintf(line, sizeof line, "%-20s  %d/%d\n", e["check"].get<std::string>().c_str(), e["passed"].get<int>(),
                    e["total"].get<int>());
    table << line;
  }
  // Every potential solve made by the checks is held to the maximum principle as well.
  const SolveTally tally = solve_tally();
  all_pass = all_pass && tally.mp_violations == 0;
  table << "potential solves " << tally.solves << ", max-principle violations " << tally.mp_violations
        << " (worst excess/tol_mp " << tally.worst_ratio << ")\n";
  index.push_back({{"check", "every_solve_max_principle"},
                   {"passed", tally.mp_violations == 0 ? 1 : 0},
                   {"total", 1},
                   {"solves", tally.solves},
                   {"violations", tally.mp_violations}});
  out.add("summary.txt", summary + "\n" + table.str());
  os << summary << "\n" << table.str();
  if (solver_broke) {
    out.status = {{"state", "solver_failure"}, {"checks", index}};
    return solver_failure;
  }
  out.status = {{"state", all_pass ? "ok" : "checks_failed"}, {"checks", index}};
  return all_pass ? ok : check_failed;
}

void convolve_cmd(const RunConfig& c, Outputs& out, json& digests) {
  if (c.convolve.input.empty()) throw ConfigError(0, "convolve.input", "an input CSV is required");
  std::string text;
  try {
    text = io::read_file(c.convolve.input);
  } catch (const io::IoError& e) {
    throw ConfigError(0, "convolve.input", e.what());
  }
  digests["input"] = fnv1a_hex(text);
  io::CsvTable table;
  Trajectory traj;
  try {
    table = io::parse_csv(text);
    traj = io::to_trajectory(table, c.grid.L);
  } catch (const std::exception& e) {
    throw ConfigError(0, "convolve.input", e.what());
  }
  const ConvolutionParams p{c.convolve.epsilon, c.convolve.axis};
  const Trajectory result = c.convolve.kind == "inf" ? inf_convolution(traj, p) : sup_convolution(traj, p);
  if (c.wants("csv")) out.add("convolved.csv", io::trajectory_csv(result));
  if (c.wants("json"))
    out.add_json("convolved.json", {{"kind", c.convolve.kind},
                                    {"epsilon", c.convolve.epsilon},
                                    {"rows", result.frames.size()},
                                    {"columns", result.frames.front().grid.N}});
  if (c.wants("f64")) {
    std::vector<double> flat;
    for (const auto& f : result.frames) flat.insert(flat.end(), f.values.begin(), f.values.end());
    std::vector<std::size_t> shape{result.frames.size(), static_cast<std::size_t>(result.frames.front().grid.N)};
    out.add("convolved.f64", io::f64_bytes(flat.data(), flat.size()));
    out.add_json("convolved.f64.json",
                 io::f64_sidecar(shape, result.frames.front().grid, {{"epsilon", c.convolve.epsilon}},
                                 c.convolve.kind + "_convolution"));
  }
}

void write_all(const fs::path& dir, const Outputs& out, const std::string& command, const json& resolved,
               json digests) {
  json written = json::object();
  for (const auto& [name, bytes] : out.files) {
    io::write_atomic(dir / name, bytes);
    written[name] = fnv1a_hex(bytes);
  }
  // Where outputs land does not change what was computed.
  json computed = resolved;
  computed["output"].erase("directory");
  digests["config"] = fnv1a_hex(computed.dump());
  const json manifest = {{"tool", "muskat"},    {"version", kVersion},  {"command", command},
                         {"config", resolved},  {"digests", digests},   {"outputs", written},
                         {"status", out.status}};
  io::write_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical laboratory for the graph Muskat and Hele-Shaw operators", "muskat"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string config_path, output_dir;
  std::vector<std::string> sets;
  std::string op, which, suite, kind, axis, input;
  std::vector<std::string> checks;
  double epsilon = 0.0;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  auto common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "JSON config or a manifest.json to replay");
    sub->add_option("--set", sets, "Override a scalar field, e.g. --set grid.N=128")->allow_extra_args(false);
    sub->add_option("-o,--output-dir", output_dir, "Output directory (default: $MUSKAT_OUTPUT_DIR or ./muskat_out)");
  };
  auto* evaluate_sub = app.add_subcommand("evaluate", "Evaluate G(f)g, M(f) or H(f)");
  common(evaluate_sub);
  evaluate_sub->add_option("--op", op, "Operator")->check(CLI::IsMember({"G", "M", "H"}));
  auto* evolve_sub = app.add_subcommand("evolve", "Integrate f_t = M(f) or f_t = H(f)");
  common(evolve_sub);
  evolve_sub->add_option("--which", which, "Flow")->check(CLI::IsMember({"muskat", "heleshaw"}));
  auto* verify_sub = app.add_subcommand("verify", "Run property checks");
  common(verify_sub);
  auto* suite_opt = verify_sub->add_option("--suite", suite, "Named suite")->check(CLI::IsMember({"standard"}));
  verify_sub->add_option("--check", checks, "Run only these checks")->excludes(suite_opt)->allow_extra_args(false);
  verify_sub->add_option("-j,--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  auto* convolve_sub = app.add_subcommand("convolve", "Inf/sup convolution of a CSV field or trajectory");
  common(convolve_sub);
  convolve_sub->add_option("--kind", kind, "inf or sup")->check(CLI::IsMember({"inf", "sup"}));
  auto* eps_opt = convolve_sub->add_option("--epsilon", epsilon, "Regularization scale");
  convolve_sub->add_option("--axis", axis, "space or space_time")->check(CLI::IsMember({"space", "space_time"}));
  convolve_sub->add_option("-i,--input", input, "Input CSV");

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : config_error;
  }
  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();

  RunConfig config;
  json resolved;
  try {
    std::string source;
    json merged = default_config_json();
    if (!config_path.empty()) {
      try {
        source = io::read_file(config_path);
      } catch (const io::IoError& e) {
        throw ConfigError(0, "--config", e.what());
      }
      merged = load_config_text(source);
    }
    for (const auto& s : sets) apply_override(merged, s);
    if (!op.empty()) merged["evaluate"]["op"] = op;
    if (!which.empty()) merged["evolve"]["which"] = which;
    if (!checks.empty()) merged["verify"]["checks"] = checks;
    if (!suite.empty()) merged["verify"]["checks"] = json::array();
    if (!kind.empty()) merged["convolve"]["kind"] = kind;
    if (eps_opt->count() > 0) merged["convolve"]["epsilon"] = epsilon;
    if (!axis.empty()) merged["convolve"]["axis"] = axis;
    if (!input.empty()) merged["convolve"]["input"] = input;
    if (!output_dir.empty()) merged["output"]["directory"] = output_dir;
    config = parse_config(merged, source);
    if (config.output.directory.empty()) {
      const char* env = std::getenv("MUSKAT_OUTPUT_DIR");
      config.output.directory = env && *env ? env : "muskat_out";
    }
    resolved = to_json(config);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return config_error;
  }

  Outputs outputs;
  json digests = json::object();
  int code = ok;
  try {
    if (command == "evaluate") {
      evaluate(config, outputs, digests);
    } else if (command == "evolve") {
      code = evolve_cmd(config, outputs, digests);
    } else if (command == "verify") {
      code = verify_cmd(config, jobs, outputs, out);
    } else {
      convolve_cmd(config, outputs, digests);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return config_error;
  } catch (const InvalidArgument& e) {
    err << "invalid argument: " << e.what() << "\n";
    return config_error;
  } catch (const SolverFailure& e) {
    err << "solver failure: " << e.what() << " (best residual " << e.best_residual() << ")\n";
    outputs.files.clear();
    outputs.status = {{"state", "solver_failure"}, {"message", e.what()}};
    code = solver_failure;
  } catch (const InstabilityError& e) {
    err << "evolution failure: " << e.what() << "\n";
    outputs.files.clear();
    outputs.status = {{"state", "solver_failure"}, {"message", e.what()}};
    code = solver_failure;
  }

  try {
    write_all(config.output.directory, outputs, command, resolved, digests);
  } catch (const std::exception& e) {
    err << "output error: " << e.what() << "\n";
    return solver_failure;
  }
  if (command != "verify") {
    out << command << ": wrote " << outputs.files.size() + 1 << " file(s) to " << config.output.directory << "\n";
    if (code == solver_failure) err << "evolution failed: " << outputs.status.value("message", "") << "\n";
  }
  return code;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace muskat::cli
