#pragma once

#include "raopt/rng.hpp"
#include "raopt/types.hpp"

#include <string>
#include <utility>
#include <vector>

namespace raopt {

/// Simple undirected graph; vertices are 0-based.
struct GraphSpec {
  int vertex_count = 0;
  std::vector<std::pair<int, int>> edges;

  bool has_edge(int u, int v) const;
};

/// Validates vertex range, self-loops, and duplicate edges.
GraphSpec make_graph(int vertex_count, std::vector<std::pair<int, int>> edges);

/// d x n matrix of i.i.d. standard normal entries from the counter-based
/// generator; identical (seed -> matrix) on every run.
ExperimentInstance gaussian_instance(int n, int d, std::uint64_t seed, double lambda = 1.0);

/// Loads a CSV of n rows (experiments) by d columns (features); transposed
/// internally to d x n. An optional header row is detected by a non-numeric
/// first line. With `normalize` set, all-zero features are dropped and every
/// remaining feature is min-max mapped to [0, 1] (constant features map to 0).
ExperimentInstance load_csv(const std::string& path, bool normalize, double lambda);

/// Writes the instance back as n rows x d columns at full precision.
void write_csv(const std::string& path, const ExperimentInstance& instance);

/// Hard-instance generator from a graph: C has n on the diagonal, 1 on
/// edges, 0 elsewhere; lambda is the smallest eigenvalue of C and A is the
/// symmetric square root of C - lambda I, so A^T A + lambda I = C.
struct IndependentSetInstance {
  ExperimentInstance instance;
  Matrix c;
};
IndependentSetInstance independent_set_instance(const GraphSpec& graph);

/// A size-k subset is independent in the generating graph iff
/// tr((C_{S,S})^-1) <= k/n + 1e-9.
bool independent_set_certificate(const Matrix& c, const std::vector<int>& subset, int n);

/// Exhaustive optimum over all C(n, k) subsets; ties resolve to the
/// lexicographically smallest subset. Refuses when C(n, k) exceeds 1e6.
Selection brute_force(const ExperimentInstance& instance, int k);

/// Number of size-k subsets, saturating at 2^63-1.
unsigned long long subset_count(int n, int k);

}  // namespace raopt
