#pragma once

#include "raopt/exact.hpp"
#include "raopt/relax.hpp"
#include "raopt/types.hpp"

#include <string>
#include <vector>

namespace raopt {

/// One relaxation solve inside a sweep. `upper_bound` comes from the
/// combined greedy; `gap_percent` compares it against the certified dual
/// bound. A nonempty `error` marks a failed cell (the sweep continues).
struct RelaxSweepRow {
  int k = 0;
  RelaxKind kind = RelaxKind::RaodRi;
  double upper_bound = 0.0;
  double primal = 0.0;
  double dual_lb = 0.0;
  double gap_percent = 0.0;
  int iterations = 0;
  double seconds = 0.0;
  std::string error;
};

std::vector<RelaxSweepRow> relaxation_sweep(const ExperimentInstance& instance,
                                            const std::vector<int>& k_list, double tol,
                                            int jobs = 1);

/// One greedy run inside a sweep, gapped against the envelope-relaxation
/// dual bound for the same k.
struct GreedySweepRow {
  int k = 0;
  std::string method;  // forward | backward | combined | dopt
  double objective = 0.0;
  double lower_bound = 0.0;
  double gap_percent = 0.0;
  double seconds = 0.0;
};

std::vector<GreedySweepRow> greedy_sweep(const ExperimentInstance& instance,
                                         const std::vector<int>& k_list, double tol,
                                         int jobs = 1);

/// One exact solve per (instance, k) cell, with the combined-greedy value
/// gapped against the solver's final lower bound.
struct ExactTableRow {
  std::string label;
  double lambda = 0.0;
  int k = 0;
  double mip_gap_percent = 0.0;
  double seconds = 0.0;
  long long nodes = 0;
  int cuts = 0;
  std::string status;
  double greedy_gap_percent = 0.0;
  double greedy_seconds = 0.0;
};

std::vector<ExactTableRow> exact_table(
    const std::vector<std::pair<std::string, ExperimentInstance>>& instances,
    const std::vector<int>& k_list, const ExactOptions& options, int jobs = 1);

/// Worst-case ratio between the integer optimum and the envelope-relaxation
/// bound: min{(d-1)/(d-k), n-k+1} below d, min{d, n-d+1} at d, and
/// (n-d+1)/(k-d+1) above d.
double theoretical_gap_bound(int n, int d, int k);

struct TheoryCurveRow {
  int d = 0;
  int k = 0;
  double bound = 0.0;
};

std::vector<TheoryCurveRow> theoretical_gap_curves(int n, const std::vector<int>& d_list);

/// Plot-ready CSV: '#'-prefixed metadata lines, a column-name row, then rows.
void write_table_csv(const std::string& path, const std::vector<std::string>& metadata,
                     const std::vector<std::string>& columns,
                     const std::vector<std::vector<std::string>>& rows);

std::vector<std::vector<std::string>> to_cells(const std::vector<RelaxSweepRow>& rows);
std::vector<std::vector<std::string>> to_cells(const std::vector<GreedySweepRow>& rows);
std::vector<std::vector<std::string>> to_cells(const std::vector<ExactTableRow>& rows);
std::vector<std::vector<std::string>> to_cells(const std::vector<TheoryCurveRow>& rows);

extern const std::vector<std::string> kRelaxSweepColumns;
extern const std::vector<std::string> kGreedySweepColumns;
extern const std::vector<std::string> kExactTableColumns;
extern const std::vector<std::string> kTheoryCurveColumns;

}  // namespace raopt
