#include "raopt/spectral.hpp"

#include <cmath>
#include <limits>

namespace raopt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Shared split-index scan. The strict and weak comparisons both carry a
// 1e-12 relative slack so that exact ties (which only arise from rounding)
// resolve to the smallest qualifying index.
int scan_split_index(const Vector& sigma, int ktilde) {
  const int m = static_cast<int>(sigma.size());
  if (ktilde < 1 || ktilde > m) throw InputError("ktilde out of range");

  double tail = 0.0;
  std::vector<double> suffix(static_cast<std::size_t>(m) + 1, 0.0);
  for (int i = m - 1; i >= 0; --i) {
    tail += sigma[i];
    suffix[static_cast<std::size_t>(i)] = tail;
  }

  for (int t = 0; t < ktilde; ++t) {
    const double avg = suffix[static_cast<std::size_t>(t)] / (ktilde - t);
    const double slack = 1e-12 * (1.0 + std::abs(avg));
    const double left = (t == 0) ? kInf : sigma[t - 1];
    if (left > avg - slack && avg >= sigma[t] - slack) return t;
  }
  throw NumericError("no split index found; spectrum unsorted or negative");
}

}  // namespace

int find_split_index(const Vector& sigma, int ktilde) {
  if (!sigma.allFinite()) throw InputError("spectrum has non-finite entries");
  for (Eigen::Index i = 0; i + 1 < sigma.size(); ++i) {
    if (sigma[i] < sigma[i + 1] - 1e-12 * (1.0 + std::abs(sigma[i + 1]))) {
      throw InputError("spectrum not descending");
    }
  }
  if (sigma.size() > 0 && sigma[sigma.size() - 1] < -1e-12) {
    throw InputError("spectrum has negative entries");
  }
  return scan_split_index(sigma, ktilde);
}

double top_k_inverse_sum(const Vector& sigma, double lambda, int ktilde) {
  if (ktilde < 1 || ktilde > sigma.size()) throw InputError("ktilde out of range");
  if (!(lambda > 0.0)) throw InputError("lambda must be positive");
  double sum = 0.0;
  for (int i = 0; i < ktilde; ++i) sum += 1.0 / (sigma[i] + lambda);
  return sum;
}

EnvelopeEvaluation inverse_trace_envelope(const Matrix& x, double lambda, int ktilde) {
  if (!(lambda > 0.0)) throw InputError("lambda must be positive");
  const int d = static_cast<int>(x.rows());
  if (ktilde < 1 || ktilde > d) throw InputError("ktilde out of range");

  SpectralDecomposition eig = symmetric_eigendecomposition(x);
  const double scale = 1.0 + eig.eigenvalues.cwiseAbs().maxCoeff();
  if (eig.eigenvalues[d - 1] < -1e-8 * scale) {
    throw InputError("matrix is not positive semidefinite");
  }
  Vector sigma = eig.eigenvalues.cwiseMax(0.0);

  const int t = scan_split_index(sigma, ktilde);
  const double tail = sigma.tail(d - t).sum();
  const double tail_shifted = tail + (ktilde - t) * lambda;

  EnvelopeEvaluation out;
  out.ktilde = ktilde;
  out.split_index = t;
  out.value = (ktilde - t) * (ktilde - t) / tail_shifted;
  for (int i = 0; i < t; ++i) out.value += 1.0 / (sigma[i] + lambda);

  // Subgradient on eigenvalues: each kept entry contributes d/ds 1/(s+lambda)
  // and every tail entry shares the derivative of the averaged term.
  Vector weights(d);
  const double tail_weight = (ktilde - t) / tail_shifted;
  for (int i = 0; i < d; ++i) {
    const double w = (i < t) ? 1.0 / (sigma[i] + lambda) : tail_weight;
    weights[i] = -w * w;
  }
  out.subgradient =
      eig.eigenvectors * weights.asDiagonal() * eig.eigenvectors.transpose();
  out.subgradient = 0.5 * (out.subgradient + out.subgradient.transpose());
  return out;
}

SpectrumEnvelope top_k_inverse_sum_envelope(const Vector& beta, int k) {
  const int n = static_cast<int>(beta.size());
  if (k < 1 || k > n) throw InputError("k out of range");
  if (!beta.allFinite()) throw InputError("spectrum has non-finite entries");
  if (beta[n - 1] < -1e-12) throw InputError("spectrum has negative entries");

  Vector b = beta.cwiseMax(0.0);
  const int t = scan_split_index(b, k);
  const double tail = b.tail(n - t).sum();

  SpectrumEnvelope out;
  out.split_index = t;
  out.eigen_weights = Vector::Zero(n);
  if (tail <= 0.0) {
    // Fewer than k strictly positive entries: the envelope is unbounded.
    out.value = kInf;
    for (int i = 0; i < n; ++i) {
      out.eigen_weights[i] = (i < t) ? -1.0 / (b[i] * b[i]) : -kInf;
    }
    return out;
  }
  out.value = (k - t) * (k - t) / tail;
  const double tail_weight = (k - t) / tail;
  for (int i = 0; i < t; ++i) {
    out.value += 1.0 / b[i];
    out.eigen_weights[i] = -1.0 / (b[i] * b[i]);
  }
  for (int i = t; i < n; ++i) out.eigen_weights[i] = -tail_weight * tail_weight;
  return out;
}

std::pair<Matrix, double> least_squares_witness(const ExperimentInstance& instance,
                                                const Vector& x) {
  const int n = instance.n();
  const int d = instance.d();
  if (x.size() != n) throw InputError("weight vector length mismatch");
  Vector w = x;
  for (int i = 0; i < n; ++i) {
    if (w[i] < -1e-9 || w[i] > 1.0 + 1e-9) {
      throw InputError("weight " + std::to_string(w[i]) + " outside [0, 1]");
    }
    w[i] = std::min(1.0, std::max(0.0, w[i]));
  }

  const Matrix b = instance.vectors() * w.cwiseSqrt().asDiagonal();
  Matrix gram = b.transpose() * b + instance.lambda() * Matrix::Identity(n, n);
  const Matrix witness = gram.llt().solve(b.transpose()).transpose();

  const double lambda = instance.lambda();
  const Matrix residual = witness * b.transpose() - Matrix::Identity(d, d);
  const double value = residual.squaredNorm() / lambda + witness.squaredNorm();
  return {witness, value};
}

}  // namespace raopt
