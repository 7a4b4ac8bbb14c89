#pragma once

#include "raopt/types.hpp"

#include <functional>
#include <limits>
#include <string>

namespace raopt {

enum class RelaxKind { RaodRi, AmespR, RaodRii };

std::string to_string(RelaxKind kind);

/// A point in {x in [0,1]^n : sum x = k} respecting the fixing sets.
struct FractionalDesign {
  Vector x;
  int k = 0;
  Fixings fixings;
};

/// One relaxation solve. `dual_lb` is a certified lower bound on the
/// relaxation optimum (hence on the integer optimum) at any iteration
/// count; the additive constant of the formulation is already included
/// in both `primal` and `dual_lb`.
struct RelaxationReport {
  RelaxKind kind = RelaxKind::RaodRi;
  double primal = 0.0;
  double dual_lb = -std::numeric_limits<double>::infinity();
  int iterations = 0;
  FractionalDesign design;
  bool converged = false;
};

struct OracleEval {
  double value = 0.0;
  Vector gradient;
};

/// Convex objective with subgradient over the cardinality polytope.
using Oracle = std::function<OracleEval(const Vector&)>;

struct FrankWolfeOptions {
  double rel_tol = 1e-4;
  int max_iter = 5000;
  /// Backtracking halving from the open-loop step with Armijo constant 1e-4;
  /// falls back to the open-loop step when no decrease is found.
  bool line_search = false;
  /// Stop as soon as the certified bound exceeds this threshold (used by
  /// probe fixing, where only the comparison against an incumbent matters).
  double stop_when_dual_above = std::numeric_limits<double>::infinity();
};

/// Linear minimization oracle over the cardinality polytope with fixings:
/// the indicator of fixed-one coordinates plus the k - |fixed_one| free
/// coordinates with smallest gradient entries (ties to the lowest index).
Vector cardinality_lmo(const Vector& gradient, int k, const Fixings& fixings);

/// Frank-Wolfe over the cardinality polytope. `dual_lb` is the best
/// linearization bound value(x_t) + <g_t, s_t - x_t> seen across iterations;
/// `converged` holds when (primal - dual_lb) / (1 + |primal|) <= rel_tol.
RelaxationReport frank_wolfe(const Oracle& oracle, int n, int k, const Fixings& fixings,
                             const FrankWolfeOptions& options = {});

/// Objective and subgradient evaluators, exposed for direct evaluation at a
/// given design (golden-value checks, finite differencing, probe oracles).
Oracle make_relaxation_oracle(const ExperimentInstance& instance, RelaxKind kind, int k);

/// Solves the chosen relaxation of the size-k design problem.
RelaxationReport solve_relaxation(const ExperimentInstance& instance, RelaxKind kind, int k,
                                  const Fixings& fixings = {},
                                  const FrankWolfeOptions& options = {});

/// 100 * (upper - lower) / upper; requires upper > 0. May exceed 100 when
/// the lower bound is negative.
double gap_percent(double upper, double lower);

}  // namespace raopt
