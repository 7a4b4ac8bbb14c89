#pragma once

#include "raopt/linalg.hpp"
#include "raopt/types.hpp"

#include <utility>

namespace raopt {

/// The convex envelope of the top-ktilde inverse sum, evaluated at a PSD
/// matrix: the scalar value, the unique split index separating kept
/// eigenvalues from the averaged tail, and a matrix subgradient.
struct EnvelopeEvaluation {
  double value = 0.0;
  int split_index = 0;  // in [0, ktilde-1]
  Matrix subgradient;   // symmetric, same shape as the input
  int ktilde = 0;
};

/// Envelope of the plain (unshifted) top-k inverse sum on a spectrum; the
/// kernel of the n-dimensional principal-submatrix relaxation. `value` is
/// +infinity when the tail mass vanishes before k entries are covered.
struct SpectrumEnvelope {
  double value = 0.0;
  int split_index = 0;     // in [0, k-1]
  Vector eigen_weights;    // subgradient on eigenvalues, length n
};

/// Finds the unique index t in [0, ktilde-1] such that
///   sigma[t-1] > (1/(ktilde-t)) * sum(sigma[t..m-1]) >= sigma[t]
/// (0-based; the t=0 case treats the left bound as +infinity). Ties inside a
/// 1e-12 relative slack resolve to the smallest index. `sigma` must be
/// nonnegative and descending; throws NumericError if no index qualifies.
int find_split_index(const Vector& sigma, int ktilde);

/// Sum of 1/(sigma_i + lambda) over the ktilde largest entries. Not convex
/// in the underlying matrix; never used as a relaxation objective.
double top_k_inverse_sum(const Vector& sigma, double lambda, int ktilde);

/// Convex envelope of top_k_inverse_sum over PSD matrices, with subgradient.
/// Underestimates it everywhere and matches it whenever rank(x) <= ktilde.
EnvelopeEvaluation inverse_trace_envelope(const Matrix& x, double lambda, int ktilde);

/// Envelope of the unshifted inverse sum on a descending nonnegative
/// spectrum `beta` of length n, with 1 <= k <= n.
SpectrumEnvelope top_k_inverse_sum_envelope(const Vector& beta, int k);

/// Closed-form least-squares witness for the trace identity
///   tr((sum_i x_i a_i a_i^T + lambda I)^-1)
///     = (1/lambda) ||W Diag(sqrt(x)) A^T - I||_F^2 + ||W||_F^2
/// at W = B (B^T B + lambda I_n)^-1 with B = A Diag(sqrt(x)).
/// Returns (W, witness value).
std::pair<Matrix, double> least_squares_witness(const ExperimentInstance& instance,
                                                const Vector& x);

}  // namespace raopt
