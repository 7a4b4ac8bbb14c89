#pragma once

#include "raopt/types.hpp"

namespace raopt {

/// Eigen-decomposition of a symmetric matrix with descending eigenvalues.
/// Eigenvalues with magnitude below 1e-10 * (1 + max |eigenvalue|) are
/// clamped to exactly 0; `rank` counts the strictly positive remainder.
struct SpectralDecomposition {
  Vector eigenvalues;   // descending
  Matrix eigenvectors;  // column i pairs with eigenvalues[i]
  int rank = 0;
};

SpectralDecomposition symmetric_eigendecomposition(const Matrix& x);

/// tr((sum_{i in S} a_i a_i^T + lambda I_d)^-1). Empty subset gives d/lambda.
double objective_value(const ExperimentInstance& instance, const std::vector<int>& subset);

/// Equivalent principal-submatrix form tr((C_{S,S})^-1) + (d-k)/lambda with
/// C = A^T A + lambda I_n. Cross-check oracle for objective_value; subset
/// must be nonempty.
double objective_value_amesp(const ExperimentInstance& instance, const std::vector<int>& subset);

/// Rank-one inverse update: given inverse = M^-1, returns (M + sign*a a^T)^-1
/// by the Sherman-Morrison formula. sign is applied to the underlying matrix,
/// so sign=+1 divides by 1 + a^T M^-1 a and sign=-1 divides by 1 - a^T M^-1 a.
/// Throws NumericError when the denominator is at or below `tolerance`;
/// callers then refactorize from scratch.
Matrix sherman_morrison_update(const Matrix& inverse, const Vector& a, int sign,
                               double tolerance = 1e-10);

/// sum_i x_i a_i a_i^T for a (possibly fractional) weight vector x.
/// Entries in [-1e-12, 0) are clamped to 0; anything lower is an input error.
Matrix information_matrix(const ExperimentInstance& instance, const Vector& x);

}  // namespace raopt
