#include "raopt/greedy.hpp"

#include "raopt/linalg.hpp"

#include <cmath>
#include <limits>

namespace raopt {
namespace {

Matrix full_inverse(const ExperimentInstance& instance, const std::vector<char>& selected) {
  const int d = instance.d();
  Matrix m = instance.lambda() * Matrix::Identity(d, d);
  for (int i = 0; i < instance.n(); ++i) {
    if (selected[static_cast<std::size_t>(i)]) {
      m.noalias() += instance.column(i) * instance.column(i).transpose();
    }
  }
  return m.llt().solve(Matrix::Identity(d, d));
}

}  // namespace

Selection forward_greedy(const ExperimentInstance& instance, int k) {
  const int n = instance.n();
  const int d = instance.d();
  if (k < 0 || k > n) throw InputError("k out of range");

  Selection out;
  out.provenance = Provenance::ForwardGreedy;
  Matrix inv = (1.0 / instance.lambda()) * Matrix::Identity(d, d);
  std::vector<char> selected(static_cast<std::size_t>(n), 0);

  for (int round = 0; round < k; ++round) {
    int best = -1;
    double best_ratio = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      if (selected[static_cast<std::size_t>(i)]) continue;
      const Vector la = inv * instance.column(i);
      const double ratio = la.squaredNorm() / (1.0 + instance.column(i).dot(la));
      if (ratio > best_ratio) {
        best_ratio = ratio;
        best = i;
      }
    }
    selected[static_cast<std::size_t>(best)] = 1;
    out.indices.push_back(best);
    inv = sherman_morrison_update(inv, instance.column(best), +1);
  }
  out.objective = inv.trace();
  return out;
}

Selection backward_greedy(const ExperimentInstance& instance, int k) {
  const int n = instance.n();
  if (k < 0 || k > n) throw InputError("k out of range");

  std::vector<char> selected(static_cast<std::size_t>(n), 1);
  Matrix inv = full_inverse(instance, selected);

  for (int round = 0; round < n - k; ++round) {
    int best = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      if (!selected[static_cast<std::size_t>(i)]) continue;
      Vector la = inv * instance.column(i);
      double denom = 1.0 - instance.column(i).dot(la);
      if (denom <= 1e-10) {
        // Positive in exact arithmetic for lambda > 0, so a tiny denominator
        // signals drift in the tracked inverse; refresh and retry once.
        inv = full_inverse(instance, selected);
        la = inv * instance.column(i);
        denom = 1.0 - instance.column(i).dot(la);
        if (denom <= 1e-10) {
          throw NumericError("removal denominator non-positive after refactorization");
        }
      }
      const double ratio = la.squaredNorm() / denom;
      if (ratio < best_ratio) {
        best_ratio = ratio;
        best = i;
      }
    }
    selected[static_cast<std::size_t>(best)] = 0;
    inv = sherman_morrison_update(inv, instance.column(best), -1);
  }

  Selection out;
  out.provenance = Provenance::BackwardGreedy;
  for (int i = 0; i < n; ++i) {
    if (selected[static_cast<std::size_t>(i)]) out.indices.push_back(i);
  }
  out.objective = inv.trace();
  return out;
}

Selection combined_greedy(const ExperimentInstance& instance, int k) {
  Selection forward = forward_greedy(instance, k);
  Selection backward = backward_greedy(instance, k);
  return forward.objective <= backward.objective ? forward : backward;
}

DoptResult dopt_forward_greedy(const ExperimentInstance& instance, int k) {
  const int n = instance.n();
  const int d = instance.d();
  if (k < 0 || k > n) throw InputError("k out of range");

  DoptResult out;
  out.selection.provenance = Provenance::External;
  out.log_det = d * std::log(instance.lambda());
  Matrix inv = (1.0 / instance.lambda()) * Matrix::Identity(d, d);
  std::vector<char> selected(static_cast<std::size_t>(n), 0);

  for (int round = 0; round < k; ++round) {
    // det(M + a a^T) = det(M) * (1 + a^T M^-1 a), so the log-det gain is
    // log1p(a^T M^-1 a) and the argmax reduces to the quadratic form.
    int best = -1;
    double best_quad = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      if (selected[static_cast<std::size_t>(i)]) continue;
      const double quad = instance.column(i).dot(inv * instance.column(i));
      if (quad > best_quad) {
        best_quad = quad;
        best = i;
      }
    }
    selected[static_cast<std::size_t>(best)] = 1;
    out.selection.indices.push_back(best);
    out.log_det += std::log1p(best_quad);
    inv = sherman_morrison_update(inv, instance.column(best), +1);
  }
  out.selection.objective = inv.trace();
  return out;
}

}  // namespace raopt
