#include "raopt/bench.hpp"

#include "raopt/greedy.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

namespace raopt {
namespace {

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Runs body(i) for i in [0, count) across `jobs` threads; each index writes
// only its own output slot, so ordering stays deterministic.
void parallel_map(int count, int jobs, const std::function<void(int)>& body) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(jobs));
  for (int w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w] {
      for (int i = w; i < count; i += jobs) body(i);
    });
  }
  for (auto& worker : workers) worker.join();
}

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(12);
  out << v;
  return out.str();
}

}  // namespace

std::vector<RelaxSweepRow> relaxation_sweep(const ExperimentInstance& instance,
                                            const std::vector<int>& k_list, double tol,
                                            int jobs) {
  const RelaxKind kinds[] = {RelaxKind::RaodRi, RelaxKind::AmespR, RelaxKind::RaodRii};

  std::vector<double> upper(k_list.size());
  for (std::size_t i = 0; i < k_list.size(); ++i) {
    upper[i] = combined_greedy(instance, k_list[i]).objective;
  }

  const int cells = static_cast<int>(k_list.size()) * 3;
  std::vector<RelaxSweepRow> rows(static_cast<std::size_t>(cells));
  parallel_map(cells, jobs, [&](int cell) {
    const std::size_t ki = static_cast<std::size_t>(cell) / 3;
    RelaxSweepRow& row = rows[static_cast<std::size_t>(cell)];
    row.k = k_list[ki];
    row.kind = kinds[cell % 3];
    row.upper_bound = upper[ki];
    const auto t0 = std::chrono::steady_clock::now();
    try {
      FrankWolfeOptions options;
      options.rel_tol = tol;
      const RelaxationReport report = solve_relaxation(instance, row.kind, row.k, {}, options);
      row.primal = report.primal;
      row.dual_lb = report.dual_lb;
      row.iterations = report.iterations;
      row.gap_percent = gap_percent(row.upper_bound, report.dual_lb);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    row.seconds = seconds_since(t0);
  });
  return rows;
}

std::vector<GreedySweepRow> greedy_sweep(const ExperimentInstance& instance,
                                         const std::vector<int>& k_list, double tol,
                                         int jobs) {
  std::vector<double> lower(k_list.size());
  parallel_map(static_cast<int>(k_list.size()), jobs, [&](int i) {
    FrankWolfeOptions options;
    options.rel_tol = tol;
    lower[static_cast<std::size_t>(i)] =
        solve_relaxation(instance, RelaxKind::RaodRii, k_list[static_cast<std::size_t>(i)], {},
                         options)
            .dual_lb;
  });

  const char* methods[] = {"forward", "backward", "combined", "dopt"};
  const int cells = static_cast<int>(k_list.size()) * 4;
  std::vector<GreedySweepRow> rows(static_cast<std::size_t>(cells));
  parallel_map(cells, jobs, [&](int cell) {
    const std::size_t ki = static_cast<std::size_t>(cell) / 4;
    GreedySweepRow& row = rows[static_cast<std::size_t>(cell)];
    row.k = k_list[ki];
    row.method = methods[cell % 4];
    row.lower_bound = lower[ki];
    const auto t0 = std::chrono::steady_clock::now();
    switch (cell % 4) {
      case 0: row.objective = forward_greedy(instance, row.k).objective; break;
      case 1: row.objective = backward_greedy(instance, row.k).objective; break;
      case 2: row.objective = combined_greedy(instance, row.k).objective; break;
      case 3: row.objective = dopt_forward_greedy(instance, row.k).selection.objective; break;
    }
    row.seconds = seconds_since(t0);
    row.gap_percent = gap_percent(row.objective, row.lower_bound);
  });
  return rows;
}

std::vector<ExactTableRow> exact_table(
    const std::vector<std::pair<std::string, ExperimentInstance>>& instances,
    const std::vector<int>& k_list, const ExactOptions& options, int jobs) {
  const int cells = static_cast<int>(instances.size() * k_list.size());
  std::vector<ExactTableRow> rows(static_cast<std::size_t>(cells));
  parallel_map(cells, jobs, [&](int cell) {
    const std::size_t ii = static_cast<std::size_t>(cell) / k_list.size();
    const std::size_t ki = static_cast<std::size_t>(cell) % k_list.size();
    const auto& [label, instance] = instances[ii];
    ExactTableRow& row = rows[static_cast<std::size_t>(cell)];
    row.label = label;
    row.lambda = instance.lambda();
    row.k = k_list[ki];

    const auto t0 = std::chrono::steady_clock::now();
    const SolveReport report = solve_exact(instance, row.k, options);
    row.seconds = seconds_since(t0);
    row.mip_gap_percent = 100.0 * report.mip_gap;
    row.nodes = report.nodes;
    row.cuts = report.cuts;
    row.status = to_string(report.status);

    const auto t1 = std::chrono::steady_clock::now();
    const Selection greedy = combined_greedy(instance, row.k);
    row.greedy_seconds = seconds_since(t1);
    row.greedy_gap_percent = gap_percent(greedy.objective, report.global_lb);
  });
  return rows;
}

double theoretical_gap_bound(int n, int d, int k) {
  if (n < 1 || d < 1 || k < 1 || k > n) throw InputError("invalid (n, d, k)");
  if (k < d) {
    return std::min(static_cast<double>(d - 1) / (d - k), static_cast<double>(n - k + 1));
  }
  if (k == d) {
    return std::min(static_cast<double>(d), static_cast<double>(n - d + 1));
  }
  return static_cast<double>(n - d + 1) / (k - d + 1);
}

std::vector<TheoryCurveRow> theoretical_gap_curves(int n, const std::vector<int>& d_list) {
  std::vector<TheoryCurveRow> rows;
  for (int d : d_list) {
    for (int k = 1; k <= n; ++k) {
      rows.push_back({d, k, theoretical_gap_bound(n, d, k)});
    }
  }
  return rows;
}

void write_table_csv(const std::string& path, const std::vector<std::string>& metadata,
                     const std::vector<std::string>& columns,
                     const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  for (const auto& line : metadata) out << "# " << line << '\n';
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) out << ',';
    out << columns[c];
  }
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << row[c];
    }
    out << '\n';
  }
}

const std::vector<std::string> kRelaxSweepColumns = {
    "k", "relaxation", "upper_bound", "primal", "dual_lb", "gap_percent",
    "iterations", "seconds", "error"};
const std::vector<std::string> kGreedySweepColumns = {
    "k", "method", "objective", "lower_bound", "gap_percent", "seconds"};
const std::vector<std::string> kExactTableColumns = {
    "instance", "lambda", "k",     "mip_gap_percent",    "seconds",       "nodes",
    "cuts",     "status", "greedy_gap_percent", "greedy_seconds"};
const std::vector<std::string> kTheoryCurveColumns = {"d", "k", "bound"};

std::vector<std::vector<std::string>> to_cells(const std::vector<RelaxSweepRow>& rows) {
  std::vector<std::vector<std::string>> cells;
  cells.reserve(rows.size());
  for (const auto& r : rows) {
    cells.push_back({std::to_string(r.k), to_string(r.kind), format_double(r.upper_bound),
                     format_double(r.primal), format_double(r.dual_lb),
                     format_double(r.gap_percent), std::to_string(r.iterations),
                     format_double(r.seconds), r.error});
  }
  return cells;
}

std::vector<std::vector<std::string>> to_cells(const std::vector<GreedySweepRow>& rows) {
  std::vector<std::vector<std::string>> cells;
  cells.reserve(rows.size());
  for (const auto& r : rows) {
    cells.push_back({std::to_string(r.k), r.method, format_double(r.objective),
                     format_double(r.lower_bound), format_double(r.gap_percent),
                     format_double(r.seconds)});
  }
  return cells;
}

std::vector<std::vector<std::string>> to_cells(const std::vector<ExactTableRow>& rows) {
  std::vector<std::vector<std::string>> cells;
  cells.reserve(rows.size());
  for (const auto& r : rows) {
    cells.push_back({r.label, format_double(r.lambda), std::to_string(r.k),
                     format_double(r.mip_gap_percent), format_double(r.seconds),
                     std::to_string(r.nodes), std::to_string(r.cuts), r.status,
                     format_double(r.greedy_gap_percent), format_double(r.greedy_seconds)});
  }
  return cells;
}

std::vector<std::vector<std::string>> to_cells(const std::vector<TheoryCurveRow>& rows) {
  std::vector<std::vector<std::string>> cells;
  cells.reserve(rows.size());
  for (const auto& r : rows) {
    cells.push_back({std::to_string(r.d), std::to_string(r.k), format_double(r.bound)});
  }
  return cells;
}

}  // namespace raopt
