// Command-line frontend: subset-selection solvers, relaxations, instance
// generation, benchmark sweeps, and the cold-start pipeline, all with
// file-based reproducible I/O.

#include "raopt/bench.hpp"
#include "raopt/coldstart.hpp"
#include "raopt/exact.hpp"
#include "raopt/greedy.hpp"
#include "raopt/instances.hpp"
#include "raopt/linalg.hpp"
#include "raopt/relax.hpp"
#include "raopt/rng.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>

namespace {

using nlohmann::json;
using namespace raopt;

constexpr const char* kToolVersion = "0.1.0";
constexpr const char* kSchemaVersion = "1";

struct CommonArgs {
  std::string input;
  bool normalize = false;
  double lambda = 1.0;
  int k = 1;
  std::uint64_t seed = 0;
  std::string out;
  bool json_out = false;
  // Generate instead of loading when n > 0.
  int gen_n = 0;
  int gen_d = 0;
};

void add_instance_flags(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--input", args.input, "instance CSV (n rows of d features)");
  cmd->add_flag("--normalize", args.normalize, "min-max normalize features on load");
  cmd->add_option("--lambda", args.lambda, "ridge weight (> 0)")->capture_default_str();
  cmd->add_option("--n", args.gen_n, "generate a standard-normal instance with n experiments");
  cmd->add_option("--d", args.gen_d, "dimension for --n");
  cmd->add_option("--seed", args.seed, "generator seed")->capture_default_str();
}

ExperimentInstance resolve_instance(const CommonArgs& args) {
  if (!args.input.empty()) return load_csv(args.input, args.normalize, args.lambda);
  if (args.gen_n > 0 && args.gen_d > 0) {
    return gaussian_instance(args.gen_n, args.gen_d, args.seed, args.lambda);
  }
  throw InputError("provide --input or both --n and --d");
}

json metadata_block(const CommonArgs& args) {
  return json{{"tool", "raopt"},
              {"version", kToolVersion},
              {"generator", CounterRng::version()},
              {"seed", args.seed},
              {"lambda", args.lambda}};
}

std::vector<int> one_based(const std::vector<int>& indices) {
  std::vector<int> out(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) out[i] = indices[i] + 1;
  std::sort(out.begin(), out.end());
  return out;
}

json selection_json(const Selection& selection) {
  return json{{"indices", one_based(selection.indices)},
              {"objective", selection.objective},
              {"provenance", to_string(selection.provenance)}};
}

void emit_report(const json& report, const CommonArgs& args) {
  const std::string text = report.dump(2) + "\n";
  if (!args.out.empty()) {
    std::ofstream out(args.out);
    if (!out) throw InputError("cannot write " + args.out);
    out << text;
  }
  if (args.json_out || args.out.empty()) std::cout << text;
}

std::vector<int> parse_k_list(const std::string& text, int n) {
  std::vector<int> ks;
  if (text.empty()) {
    for (int k = 5; k < n; k += 5) ks.push_back(k);
    if (ks.empty()) {
      for (int k = 1; k <= n; ++k) ks.push_back(k);
    }
    return ks;
  }
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const int k = std::stoi(cell);
    if (k < 1 || k > n) throw InputError("k=" + std::to_string(k) + " outside [1, n]");
    ks.push_back(k);
  }
  return ks;
}

std::vector<std::string> csv_metadata(const CommonArgs& args, const std::string& extra) {
  std::vector<std::string> lines;
  lines.push_back(std::string("tool=raopt version=") + kToolVersion +
                  " generator=" + CounterRng::version() + " schema_version=" + kSchemaVersion);
  std::ostringstream line;
  line << "seed=" << args.seed << " lambda=" << args.lambda;
  if (!extra.empty()) line << ' ' << extra;
  lines.push_back(line.str());
  return lines;
}

int run(int argc, char** argv) {
  CLI::App app{"Solvers and experiment harnesses for regularized trace-optimal subset selection"};
  app.require_subcommand(1);

  // greedy ------------------------------------------------------------
  CommonArgs greedy_args;
  std::string algo = "combined";
  auto* greedy_cmd = app.add_subcommand("greedy", "forward/backward/combined greedy selection");
  add_instance_flags(greedy_cmd, greedy_args);
  greedy_cmd->add_option("--k", greedy_args.k, "selection size")->required();
  greedy_cmd->add_option("--algo", algo, "forward | backward | combined")->capture_default_str();
  greedy_cmd->add_option("--out", greedy_args.out, "write the JSON report here");
  greedy_cmd->add_flag("--json", greedy_args.json_out, "print JSON to stdout");

  // relax -------------------------------------------------------------
  CommonArgs relax_args;
  std::string kind_text = "rii";
  double tol = 1e-4;
  int max_iter = 5000;
  auto* relax_cmd = app.add_subcommand("relax", "convex relaxation with certified lower bound");
  add_instance_flags(relax_cmd, relax_args);
  relax_cmd->add_option("--k", relax_args.k, "selection size")->required();
  relax_cmd->add_option("--kind", kind_text, "ri | amesp | rii")->capture_default_str();
  relax_cmd->add_option("--tol", tol, "relative convergence tolerance")->capture_default_str();
  relax_cmd->add_option("--max-iter", max_iter, "iteration cap")->capture_default_str();
  relax_cmd->add_option("--out", relax_args.out, "write the JSON report here");
  relax_cmd->add_flag("--json", relax_args.json_out, "print JSON to stdout");

  // exact ---------------------------------------------------------------
  CommonArgs exact_args;
  double epsilon = 1e-4;
  double time_limit = std::numeric_limits<double>::infinity();
  long long node_limit = std::numeric_limits<long long>::max();
  auto* exact_cmd = app.add_subcommand("exact", "branch-and-cut to certified optimality");
  add_instance_flags(exact_cmd, exact_args);
  exact_cmd->add_option("--k", exact_args.k, "selection size")->required();
  exact_cmd->add_option("--epsilon", epsilon, "target relative gap")->capture_default_str();
  exact_cmd->add_option("--time-limit", time_limit, "wall-clock limit in seconds");
  exact_cmd->add_option("--node-limit", node_limit, "search-node limit");
  exact_cmd->add_option("--out", exact_args.out, "write the JSON report here");
  exact_cmd->add_flag("--json", exact_args.json_out, "print JSON to stdout");

  // brute ---------------------------------------------------------------
  CommonArgs brute_args;
  auto* brute_cmd = app.add_subcommand("brute", "exhaustive optimum (guarded at 1e6 subsets)");
  add_instance_flags(brute_cmd, brute_args);
  brute_cmd->add_option("--k", brute_args.k, "selection size")->required();
  brute_cmd->add_option("--out", brute_args.out, "write the JSON report here");
  brute_cmd->add_flag("--json", brute_args.json_out, "print JSON to stdout");

  // gen -----------------------------------------------------------------
  auto* gen_cmd = app.add_subcommand("gen", "instance generation");
  gen_cmd->require_subcommand(1);
  CommonArgs gen_args;
  auto* gen_gauss = gen_cmd->add_subcommand("gaussian", "standard-normal instance");
  gen_gauss->add_option("--n", gen_args.gen_n, "experiment count")->required();
  gen_gauss->add_option("--d", gen_args.gen_d, "dimension")->required();
  gen_gauss->add_option("--seed", gen_args.seed, "generator seed")->capture_default_str();
  gen_gauss->add_option("--lambda", gen_args.lambda, "ridge weight")->capture_default_str();
  gen_gauss->add_option("--out", gen_args.out, "output CSV path")->required();

  std::string edges_text;
  int vertices = 0;
  std::string graph_out;
  auto* gen_graph = gen_cmd->add_subcommand("graph", "independent-set hard instance from a graph");
  gen_graph->add_option("--vertices", vertices, "vertex count")->required();
  gen_graph->add_option("--edges", edges_text, "edge list like 1-2,2-3 (1-based)")->required();
  gen_graph->add_option("--out", graph_out, "output CSV path")->required();

  // bench -----------------------------------------------------------------
  auto* bench_cmd = app.add_subcommand("bench", "experiment harnesses emitting plot-ready CSV");
  bench_cmd->require_subcommand(1);
  CommonArgs bench_args;
  std::string k_list_text;
  double bench_tol = 1e-4;
  int jobs = 1;
  double bench_time_limit = 60.0;
  double bench_epsilon = 1e-4;

  auto add_bench_common = [&](CLI::App* cmd) {
    add_instance_flags(cmd, bench_args);
    cmd->add_option("--k-list", k_list_text, "comma-separated k grid (default 5,10,...)");
    cmd->add_option("--jobs", jobs, "parallel cells")->capture_default_str();
    cmd->add_option("--out", bench_args.out, "output CSV path")->required();
  };
  auto* bench_relax = bench_cmd->add_subcommand("relax-sweep", "gap sweep over the relaxations");
  add_bench_common(bench_relax);
  bench_relax->add_option("--tol", bench_tol, "relaxation tolerance")->capture_default_str();
  auto* bench_greedy = bench_cmd->add_subcommand("greedy-sweep", "gap sweep over the greedy methods");
  add_bench_common(bench_greedy);
  bench_greedy->add_option("--tol", bench_tol, "relaxation tolerance")->capture_default_str();
  auto* bench_exact = bench_cmd->add_subcommand("exact-table", "exact-solver table");
  add_bench_common(bench_exact);
  bench_exact->add_option("--epsilon", bench_epsilon, "target relative gap")->capture_default_str();
  bench_exact->add_option("--time-limit", bench_time_limit, "per-cell time limit (s)")
      ->capture_default_str();

  int curve_n = 30;
  std::string d_list_text = "10";
  std::string curve_out;
  auto* bench_theory = bench_cmd->add_subcommand("theory-curves", "worst-case gap-bound curves");
  bench_theory->add_option("--n", curve_n, "experiment count")->capture_default_str();
  bench_theory->add_option("--d-list,--d", d_list_text, "comma-separated dimensions")
      ->capture_default_str();
  bench_theory->add_option("--out", curve_out, "output CSV path")->required();

  // coldstart -----------------------------------------------------------
  CommonArgs cold_args;
  std::string ratings_path;
  std::string method_text = "all";
  int items = 300, users = 80, rank = 8, d_train = 50, new_users = 10, trials = 15;
  double noise = 0.1;
  int max_items = 0;
  auto* cold_cmd = app.add_subcommand("coldstart", "item-elicitation pipeline with MSE report");
  cold_cmd->add_option("--ratings", ratings_path, "item_id,user_id,rating CSV (synthetic when absent)");
  cold_cmd->add_option("--items", items, "synthetic item count")->capture_default_str();
  cold_cmd->add_option("--users", users, "synthetic user count")->capture_default_str();
  cold_cmd->add_option("--rank", rank, "synthetic factor rank")->capture_default_str();
  cold_cmd->add_option("--noise", noise, "synthetic noise level")->capture_default_str();
  cold_cmd->add_option("--d-train", d_train, "training users per trial")->capture_default_str();
  cold_cmd->add_option("--new-users", new_users, "held-out users per trial")->capture_default_str();
  cold_cmd->add_option("--k", cold_args.k, "items each new user rates")->required();
  cold_cmd->add_option("--lambda", cold_args.lambda, "ridge weight")->capture_default_str();
  cold_cmd->add_option("--seed", cold_args.seed, "base seed")->capture_default_str();
  cold_cmd->add_option("--trials", trials, "seeded trials")->capture_default_str();
  cold_cmd->add_option("--method", method_text, "a_opt | d_opt | random | all")
      ->capture_default_str();
  cold_cmd->add_option("--max-items", max_items, "cap on retained items (0 = all)")
      ->capture_default_str();
  cold_cmd->add_option("--out", cold_args.out, "output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the usage error
    return code == 0 ? 0 : 1;
  }

  if (greedy_cmd->parsed()) {
    const ExperimentInstance instance = resolve_instance(greedy_args);
    Selection selection;
    if (algo == "forward") {
      selection = forward_greedy(instance, greedy_args.k);
    } else if (algo == "backward") {
      selection = backward_greedy(instance, greedy_args.k);
    } else if (algo == "combined") {
      selection = combined_greedy(instance, greedy_args.k);
    } else {
      throw InputError("unknown --algo " + algo);
    }
    json report{{"schema_version", kSchemaVersion},
                {"command", "greedy"},
                {"metadata", metadata_block(greedy_args)},
                {"k", greedy_args.k},
                {"algo", algo},
                {"selection", selection_json(selection)}};
    emit_report(report, greedy_args);
    return 0;
  }

  if (relax_cmd->parsed()) {
    const ExperimentInstance instance = resolve_instance(relax_args);
    RelaxKind kind;
    if (kind_text == "ri") {
      kind = RelaxKind::RaodRi;
    } else if (kind_text == "amesp") {
      kind = RelaxKind::AmespR;
    } else if (kind_text == "rii") {
      kind = RelaxKind::RaodRii;
    } else {
      throw InputError("unknown --kind " + kind_text);
    }
    FrankWolfeOptions options;
    options.rel_tol = tol;
    options.max_iter = max_iter;
    const RelaxationReport rep = solve_relaxation(instance, kind, relax_args.k, {}, options);
    json meta = metadata_block(relax_args);
    meta["tol"] = tol;
    meta["max_iter"] = max_iter;
    std::vector<double> design(rep.design.x.data(), rep.design.x.data() + rep.design.x.size());
    json report{{"schema_version", kSchemaVersion},
                {"command", "relax"},
                {"metadata", meta},
                {"k", relax_args.k},
                {"report",
                 {{"kind", to_string(rep.kind)},
                  {"primal", rep.primal},
                  {"dual_lb", rep.dual_lb},
                  {"iterations", rep.iterations},
                  {"converged", rep.converged},
                  {"design", design}}}};
    emit_report(report, relax_args);
    return 0;
  }

  if (exact_cmd->parsed()) {
    const ExperimentInstance instance = resolve_instance(exact_args);
    ExactOptions options;
    options.epsilon = epsilon;
    options.limits.time_limit_sec = time_limit;
    options.limits.node_limit = node_limit;
    const SolveReport rep = solve_exact(instance, exact_args.k, options);
    json meta = metadata_block(exact_args);
    meta["epsilon"] = epsilon;
    json report{{"schema_version", kSchemaVersion},
                {"command", "exact"},
                {"metadata", meta},
                {"k", exact_args.k},
                {"report",
                 {{"incumbent", selection_json(rep.incumbent)},
                  {"global_lb", rep.global_lb},
                  {"mip_gap", rep.mip_gap},
                  {"nodes", rep.nodes},
                  {"cuts", rep.cuts},
                  {"fixed_at_root", {{"one", rep.fixed_one_at_root}, {"zero", rep.fixed_zero_at_root}}},
                  {"wall_time_sec", rep.wall_time_sec},
                  {"status", to_string(rep.status)}}}};
    emit_report(report, exact_args);
    const bool certified = rep.status == SolveStatus::Optimal || rep.status == SolveStatus::GapLimit;
    return certified ? 0 : 3;
  }

  if (brute_cmd->parsed()) {
    const ExperimentInstance instance = resolve_instance(brute_args);
    const Selection selection = brute_force(instance, brute_args.k);
    json report{{"schema_version", kSchemaVersion},
                {"command", "brute"},
                {"metadata", metadata_block(brute_args)},
                {"k", brute_args.k},
                {"selection", selection_json(selection)}};
    emit_report(report, brute_args);
    return 0;
  }

  if (gen_gauss->parsed()) {
    const ExperimentInstance instance =
        gaussian_instance(gen_args.gen_n, gen_args.gen_d, gen_args.seed, gen_args.lambda);
    write_csv(gen_args.out, instance);
    json sidecar{{"schema_version", kSchemaVersion},
                 {"n", instance.n()},
                 {"d", instance.d()},
                 {"lambda", instance.lambda()},
                 {"seed", gen_args.seed},
                 {"generator", CounterRng::version()},
                 {"normalization", "none"}};
    std::ofstream meta(gen_args.out + ".meta.json");
    meta << sidecar.dump(2) << "\n";
    return 0;
  }

  if (gen_graph->parsed()) {
    std::vector<std::pair<int, int>> edges;
    std::stringstream ss(edges_text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      const auto dash = cell.find('-');
      if (dash == std::string::npos) throw InputError("edge '" + cell + "' is not u-v");
      edges.emplace_back(std::stoi(cell.substr(0, dash)) - 1,
                         std::stoi(cell.substr(dash + 1)) - 1);
    }
    const auto generated = independent_set_instance(make_graph(vertices, std::move(edges)));
    write_csv(graph_out, generated.instance);
    json sidecar{{"schema_version", kSchemaVersion},
                 {"n", generated.instance.n()},
                 {"d", generated.instance.d()},
                 {"lambda", generated.instance.lambda()},
                 {"generator", "independent-set-graph"},
                 {"normalization", "none"}};
    std::ofstream meta(graph_out + ".meta.json");
    meta << sidecar.dump(2) << "\n";
    return 0;
  }

  if (bench_relax->parsed() || bench_greedy->parsed() || bench_exact->parsed()) {
    const ExperimentInstance instance = resolve_instance(bench_args);
    const std::vector<int> ks = parse_k_list(k_list_text, instance.n());
    std::ostringstream extra;
    extra << "n=" << instance.n() << " d=" << instance.d();
    if (bench_relax->parsed()) {
      extra << " tol=" << bench_tol;
      const auto rows = relaxation_sweep(instance, ks, bench_tol, jobs);
      write_table_csv(bench_args.out, csv_metadata(bench_args, extra.str()), kRelaxSweepColumns,
                      to_cells(rows));
    } else if (bench_greedy->parsed()) {
      extra << " tol=" << bench_tol;
      const auto rows = greedy_sweep(instance, ks, bench_tol, jobs);
      write_table_csv(bench_args.out, csv_metadata(bench_args, extra.str()), kGreedySweepColumns,
                      to_cells(rows));
    } else {
      ExactOptions options;
      options.epsilon = bench_epsilon;
      options.limits.time_limit_sec = bench_time_limit;
      extra << " epsilon=" << bench_epsilon << " time_limit=" << bench_time_limit;
      std::string label = bench_args.input.empty()
                              ? "gaussian(n=" + std::to_string(instance.n()) +
                                    ",d=" + std::to_string(instance.d()) + ")"
                              : bench_args.input;
      const auto rows = exact_table({{label, instance}}, ks, options, jobs);
      write_table_csv(bench_args.out, csv_metadata(bench_args, extra.str()), kExactTableColumns,
                      to_cells(rows));
    }
    return 0;
  }

  if (bench_theory->parsed()) {
    std::vector<int> d_list;
    std::stringstream ss(d_list_text);
    std::string cell;
    while (std::getline(ss, cell, ',')) d_list.push_back(std::stoi(cell));
    const auto rows = theoretical_gap_curves(curve_n, d_list);
    CommonArgs dummy;
    std::ostringstream extra;
    extra << "n=" << curve_n;
    write_table_csv(curve_out, csv_metadata(dummy, extra.str()), kTheoryCurveColumns,
                    to_cells(rows));
    return 0;
  }

  if (cold_cmd->parsed()) {
    const RatingDataset dataset = ratings_path.empty()
                                      ? synthetic_ratings(items, users, rank, noise, cold_args.seed)
                                      : load_ratings_csv(ratings_path);
    std::vector<SelectionMethod> methods;
    if (method_text == "all") {
      methods = {SelectionMethod::AOpt, SelectionMethod::DOpt, SelectionMethod::Random};
    } else if (method_text == "a_opt") {
      methods = {SelectionMethod::AOpt};
    } else if (method_text == "d_opt") {
      methods = {SelectionMethod::DOpt};
    } else if (method_text == "random") {
      methods = {SelectionMethod::Random};
    } else {
      throw InputError("unknown --method " + method_text);
    }
    std::vector<std::vector<std::string>> rows;
    for (const SelectionMethod method : methods) {
      ColdStartConfig config;
      config.d_train_users = d_train;
      config.new_users = new_users;
      config.k = cold_args.k;
      config.lambda = cold_args.lambda;
      config.method = method;
      config.trials = trials;
      config.base_seed = cold_args.seed;
      config.max_items = max_items;
      const ColdStartOutcome outcome = run_coldstart(dataset, config);
      std::ostringstream mse;
      mse.precision(12);
      mse << outcome.average_mse;
      rows.push_back({to_string(method), std::to_string(cold_args.lambda),
                      std::to_string(cold_args.k), mse.str()});
    }
    std::ostringstream extra;
    extra << "trials=" << trials << " d_train=" << d_train << " new_users=" << new_users;
    write_table_csv(cold_args.out, csv_metadata(cold_args, extra.str()),
                    {"method", "lambda", "k", "average_mse"}, rows);
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const raopt::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const raopt::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
