#include "raopt/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace raopt {

SpectralDecomposition symmetric_eigendecomposition(const Matrix& x) {
  if (!x.allFinite()) throw InputError("eigendecomposition input has non-finite entries");
  if (x.rows() != x.cols()) throw InputError("eigendecomposition input is not square");
  const double scale = x.cwiseAbs().maxCoeff();
  if ((x - x.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + scale)) {
    throw InputError("eigendecomposition input is not symmetric");
  }

  Eigen::SelfAdjointEigenSolver<Matrix> solver(x);
  if (solver.info() != Eigen::Success) throw NumericError("symmetric eigensolver failed");

  const auto m = x.rows();
  SpectralDecomposition out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();

  const double max_abs = out.eigenvalues.cwiseAbs().maxCoeff();
  const double zero_tol = 1e-10 * (1.0 + max_abs);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (std::abs(out.eigenvalues[i]) <= zero_tol) out.eigenvalues[i] = 0.0;
    if (out.eigenvalues[i] > 0.0) ++out.rank;
  }
  return out;
}

double objective_value(const ExperimentInstance& instance, const std::vector<int>& subset) {
  validate_subset(subset, instance.n());
  const int d = instance.d();
  Matrix m = instance.lambda() * Matrix::Identity(d, d);
  for (int i : subset) {
    m.noalias() += instance.column(i) * instance.column(i).transpose();
  }
  return m.llt().solve(Matrix::Identity(d, d)).trace();
}

double objective_value_amesp(const ExperimentInstance& instance, const std::vector<int>& subset) {
  validate_subset(subset, instance.n());
  if (subset.empty()) throw InputError("principal-submatrix form needs a nonempty subset");
  const int k = static_cast<int>(subset.size());
  Matrix a_s(instance.d(), k);
  for (int j = 0; j < k; ++j) a_s.col(j) = instance.column(subset[static_cast<std::size_t>(j)]);
  Matrix c_ss = a_s.transpose() * a_s + instance.lambda() * Matrix::Identity(k, k);
  const double trace_inv = c_ss.llt().solve(Matrix::Identity(k, k)).trace();
  return trace_inv + (instance.d() - k) / instance.lambda();
}

Matrix sherman_morrison_update(const Matrix& inverse, const Vector& a, int sign,
                               double tolerance) {
  if (sign != 1 && sign != -1) throw InputError("sign must be +1 or -1");
  if (inverse.rows() != inverse.cols() || inverse.rows() != a.size()) {
    throw InputError("inverse/vector dimension mismatch");
  }
  const Vector la = inverse * a;
  const double quad = a.dot(la);
  const double denom = 1.0 + sign * quad;
  if (denom <= tolerance) {
    throw NumericError("rank-one update denominator " + std::to_string(denom) +
                       " at or below tolerance");
  }
  Matrix updated = inverse - (static_cast<double>(sign) / denom) * (la * la.transpose());
  // Symmetrize to keep roundoff from accumulating across chained updates.
  updated = 0.5 * (updated + updated.transpose());
  return updated;
}

Matrix information_matrix(const ExperimentInstance& instance, const Vector& x) {
  if (x.size() != instance.n()) throw InputError("weight vector length mismatch");
  if (!x.allFinite()) throw InputError("weight vector has non-finite entries");
  const int d = instance.d();
  Matrix m = Matrix::Zero(d, d);
  for (int i = 0; i < instance.n(); ++i) {
    double w = x[i];
    if (w < 0.0) {
      if (w < -1e-12) throw InputError("negative weight " + std::to_string(w));
      w = 0.0;
    }
    if (w == 0.0) continue;
    m.noalias() += w * (instance.column(i) * instance.column(i).transpose());
  }
  return m;
}

}  // namespace raopt
