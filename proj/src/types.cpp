#include "raopt/types.hpp"

#include <algorithm>
#include <iostream>

namespace raopt {

ExperimentInstance::ExperimentInstance(Matrix vectors, double lambda)
    : vectors_(std::move(vectors)), lambda_(lambda) {
  if (vectors_.rows() < 1 || vectors_.cols() < 1) {
    throw InputError("experiment matrix must be at least 1x1");
  }
  if (!(lambda_ > 0.0)) {
    throw InputError("lambda must be positive");
  }
  if (!vectors_.allFinite()) {
    throw InputError("experiment matrix has non-finite entries");
  }
  if (vectors_.rows() > vectors_.cols()) {
    std::cerr << "warning: dimension d=" << vectors_.rows() << " exceeds experiment count n="
              << vectors_.cols() << "\n";
  }
}

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::ForwardGreedy: return "forward-greedy";
    case Provenance::BackwardGreedy: return "backward-greedy";
    case Provenance::Combined: return "combined";
    case Provenance::Exact: return "exact";
    case Provenance::BruteForce: return "brute-force";
    case Provenance::External: return "external";
  }
  return "unknown";
}

bool Fixings::fixed_to_one(int i) const {
  return std::find(one.begin(), one.end(), i) != one.end();
}

bool Fixings::fixed_to_zero(int i) const {
  return std::find(zero.begin(), zero.end(), i) != zero.end();
}

void validate_subset(const std::vector<int>& subset, int n) {
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int i : subset) {
    if (i < 0 || i >= n) {
      throw InputError("subset index " + std::to_string(i) + " out of range [0, " +
                       std::to_string(n) + ")");
    }
    if (seen[static_cast<std::size_t>(i)]) {
      throw InputError("duplicate subset index " + std::to_string(i));
    }
    seen[static_cast<std::size_t>(i)] = true;
  }
}

void validate_fixings(const Fixings& fixings, int n, int k) {
  validate_subset(fixings.one, n);
  validate_subset(fixings.zero, n);
  for (int i : fixings.one) {
    if (fixings.fixed_to_zero(i)) {
      throw InputError("index " + std::to_string(i) + " fixed to both 0 and 1");
    }
  }
  const int ones = static_cast<int>(fixings.one.size());
  const int zeros = static_cast<int>(fixings.zero.size());
  if (ones > k) throw InputError("more than k indices fixed to one");
  if (n - zeros < k) throw InputError("fewer than k indices left selectable");
}

}  // namespace raopt
