#pragma once

#include "raopt/relax.hpp"
#include "raopt/types.hpp"

#include <limits>
#include <vector>

namespace raopt {

/// One outer-approximation inequality: for every feasible binary x,
///   constant + <gradient, x - origin>  <=  objective of x.
/// Tight at the generating point `origin`.
struct Cut {
  double constant = 0.0;
  Vector gradient;
  Vector origin;

  double value_at(const Vector& x) const { return constant + gradient.dot(x - origin); }
};

/// Tangent cut of the envelope objective at a binary design y with sum k.
/// The constant equals the exact subset objective at y.
Cut tangent_cut(const ExperimentInstance& instance, const Vector& y);

/// Valid lower bound on min over feasible binary x of max_l cut_l(x),
/// under the given fixings. Combines the best single-cut closed form with
/// projected supergradient ascent on simplex weights over the cut pool
/// (any weighting yields a valid bound, so convergence is not required).
double master_lower_bound(const std::vector<Cut>& cuts, int k, const Fixings& fixings,
                          int ascent_iters = 200);

/// Outcome of a probe-fixing pass: coordinates proven 1 or 0 at optimality,
/// or a prune signal when the node cannot beat the incumbent.
struct FixingProbe {
  std::vector<int> fix_one;
  std::vector<int> fix_zero;
  bool prune = false;
};

/// For each free coordinate, re-solves the envelope relaxation with that
/// coordinate forced to 1 (resp. 0); a certified bound above `incumbent_ub`
/// proves the opposite value at optimality. `relaxation` supplies the node
/// fixings and the unrestricted bound.
FixingProbe probe_fixing(const ExperimentInstance& instance, int k,
                         const RelaxationReport& relaxation, double incumbent_ub,
                         const FrankWolfeOptions& probe_options = {.rel_tol = 1e-6,
                                                                   .max_iter = 200});

enum class SolveStatus { Optimal, GapLimit, TimeLimit, NodeLimit };

std::string to_string(SolveStatus status);

struct SolveLimits {
  double time_limit_sec = std::numeric_limits<double>::infinity();
  long long node_limit = std::numeric_limits<long long>::max();
  /// Coarser early-stop gap; 0 disables (epsilon remains the optimality gap).
  double gap_limit = 0.0;
};

struct ExactOptions {
  double epsilon = 1e-4;
  SolveLimits limits;
  FrankWolfeOptions root_fw{.rel_tol = 1e-8, .max_iter = 20000, .line_search = true};
  FrankWolfeOptions node_fw{.rel_tol = 1e-8, .max_iter = 300};
  int probe_period = 64;  // nodes between probe passes; 0 disables probing
  int master_ascent_iters = 200;
  // Newest cuts the per-node master bound weighs; the pool itself is
  // unbounded (any subset gives a valid bound).
  int master_pool_window = 512;
};

/// Search node: a partial fixing plus a bound valid for all completions.
struct BnbNode {
  Fixings fixings;
  double lower_bound = -std::numeric_limits<double>::infinity();
  int depth = 0;
};

struct SolveReport {
  Selection incumbent;
  double global_lb = 0.0;
  double mip_gap = 0.0;  // (UB - LB) / UB
  long long nodes = 0;
  int cuts = 0;
  int fixed_one_at_root = 0;
  int fixed_zero_at_root = 0;
  double wall_time_sec = 0.0;
  SolveStatus status = SolveStatus::Optimal;
};

/// Exact solver: best-first branch-and-bound around the envelope relaxation,
/// with tangent cuts pooled into a Lagrangian master bound, greedy warm
/// start, and probe fixing at the root and periodically thereafter.
SolveReport solve_exact(const ExperimentInstance& instance, int k,
                        const ExactOptions& options = {});

}  // namespace raopt
