#pragma once

#include "raopt/types.hpp"

namespace raopt {

/// Grows the selection one experiment at a time, always adding the index
/// with the largest marginal trace reduction; the tracked inverse is
/// maintained by rank-one updates. Ties resolve to the lowest index.
Selection forward_greedy(const ExperimentInstance& instance, int k);

/// Starts from the full selection and repeatedly drops the index with the
/// smallest trace increase until k remain.
Selection backward_greedy(const ExperimentInstance& instance, int k);

/// The better of the forward and backward selections; forward wins ties.
Selection combined_greedy(const ExperimentInstance& instance, int k);

/// Forward greedy on the log-det criterion instead of the trace. The
/// returned Selection carries the trace objective for cross-method
/// comparison; `log_det` holds log det(M(S) + lambda I).
struct DoptResult {
  Selection selection;
  double log_det = 0.0;
};
DoptResult dopt_forward_greedy(const ExperimentInstance& instance, int k);

}  // namespace raopt
