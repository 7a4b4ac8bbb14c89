#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace raopt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Bad caller input (out-of-range index, malformed file, infeasible sizes).
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Numerical breakdown that survived the built-in fallbacks.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Immutable problem statement: n experiment vectors of dimension d
/// (column i of `vectors` is experiment i) plus the ridge weight lambda.
class ExperimentInstance {
 public:
  ExperimentInstance() = default;
  ExperimentInstance(Matrix vectors, double lambda);

  const Matrix& vectors() const { return vectors_; }
  double lambda() const { return lambda_; }
  int d() const { return static_cast<int>(vectors_.rows()); }
  int n() const { return static_cast<int>(vectors_.cols()); }
  Vector column(int i) const { return vectors_.col(i); }

 private:
  Matrix vectors_;
  double lambda_ = 1.0;
};

enum class Provenance {
  ForwardGreedy,
  BackwardGreedy,
  Combined,
  Exact,
  BruteForce,
  External,
};

std::string to_string(Provenance p);

/// An ordered set of chosen experiment indices (0-based) with its objective.
struct Selection {
  std::vector<int> indices;
  double objective = 0.0;
  Provenance provenance = Provenance::External;
};

/// Coordinates pinned to 1 or 0 during relaxation solves and search.
struct Fixings {
  std::vector<int> one;
  std::vector<int> zero;

  bool fixed_to_one(int i) const;
  bool fixed_to_zero(int i) const;
  int free_count(int n) const { return n - static_cast<int>(one.size() + zero.size()); }
};

/// Throws InputError unless `subset` holds distinct indices in [0, n).
void validate_subset(const std::vector<int>& subset, int n);

/// Throws InputError unless the fixing sets are disjoint, in range, and
/// admit a cardinality-k completion.
void validate_fixings(const Fixings& fixings, int n, int k);

}  // namespace raopt
