#include "raopt/relax.hpp"

#include "raopt/linalg.hpp"
#include "raopt/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

namespace raopt {

std::string to_string(RelaxKind kind) {
  switch (kind) {
    case RelaxKind::RaodRi: return "raod_ri";
    case RelaxKind::AmespR: return "amesp_r";
    case RelaxKind::RaodRii: return "raod_rii";
  }
  return "unknown";
}

Vector cardinality_lmo(const Vector& gradient, int k, const Fixings& fixings) {
  const int n = static_cast<int>(gradient.size());
  validate_fixings(fixings, n, k);

  Vector vertex = Vector::Zero(n);
  std::vector<char> blocked(static_cast<std::size_t>(n), 0);
  for (int i : fixings.one) {
    vertex[i] = 1.0;
    blocked[static_cast<std::size_t>(i)] = 1;
  }
  for (int i : fixings.zero) blocked[static_cast<std::size_t>(i)] = 1;

  std::vector<int> free_idx;
  free_idx.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (!blocked[static_cast<std::size_t>(i)]) free_idx.push_back(i);
  }
  const int need = k - static_cast<int>(fixings.one.size());
  std::stable_sort(free_idx.begin(), free_idx.end(),
                   [&](int a, int b) { return gradient[a] < gradient[b]; });
  for (int j = 0; j < need; ++j) vertex[free_idx[static_cast<std::size_t>(j)]] = 1.0;
  return vertex;
}

namespace {

Vector initial_design(int n, int k, const Fixings& fixings) {
  Vector x = Vector::Zero(n);
  std::vector<char> blocked(static_cast<std::size_t>(n), 0);
  for (int i : fixings.one) {
    x[i] = 1.0;
    blocked[static_cast<std::size_t>(i)] = 1;
  }
  for (int i : fixings.zero) blocked[static_cast<std::size_t>(i)] = 1;
  int free_count = 0;
  for (int i = 0; i < n; ++i) free_count += !blocked[static_cast<std::size_t>(i)];
  const int need = k - static_cast<int>(fixings.one.size());
  const double weight = free_count > 0 ? static_cast<double>(need) / free_count : 0.0;
  for (int i = 0; i < n; ++i) {
    if (!blocked[static_cast<std::size_t>(i)]) x[i] = weight;
  }
  return x;
}

}  // namespace

RelaxationReport frank_wolfe(const Oracle& oracle, int n, int k, const Fixings& fixings,
                             const FrankWolfeOptions& options) {
  validate_fixings(fixings, n, k);
  if (!(options.rel_tol > 0.0)) throw InputError("rel_tol must be positive");

  RelaxationReport report;
  report.design.k = k;
  report.design.fixings = fixings;

  Vector x = initial_design(n, k, fixings);
  double best_primal = std::numeric_limits<double>::infinity();
  Vector best_x = x;
  double dual_lb = -std::numeric_limits<double>::infinity();

  int t = 0;
  for (; t < options.max_iter; ++t) {
    OracleEval eval = oracle(x);
    if (!std::isfinite(eval.value) || !eval.gradient.allFinite()) {
      throw NumericError("oracle returned non-finite output at iteration " + std::to_string(t) +
                         " (value " + std::to_string(eval.value) + ")");
    }
    if (eval.value < best_primal) {
      best_primal = eval.value;
      best_x = x;
    }

    const Vector vertex = cardinality_lmo(eval.gradient, k, fixings);
    const Vector direction = vertex - x;
    const double linear_gain = eval.gradient.dot(direction);
    dual_lb = std::max(dual_lb, eval.value + linear_gain);

    const double scale = 1.0 + std::abs(best_primal);
    if ((best_primal - dual_lb) / scale <= options.rel_tol) {
      report.converged = true;
      ++t;
      break;
    }
    if (dual_lb > options.stop_when_dual_above) {
      ++t;
      break;
    }

    double step = 2.0 / (t + 2.0);
    if (options.line_search) {
      // Halve until the Armijo decrease holds; keep the open-loop step when
      // no tested step decreases the value (the certificate stays valid).
      const double armijo = 1e-4;
      double gamma = step;
      bool accepted = false;
      for (int h = 0; h < 20 && !accepted; ++h) {
        const double trial = oracle(x + gamma * direction).value;
        if (trial <= eval.value + armijo * gamma * linear_gain) {
          step = gamma;
          accepted = true;
        } else {
          gamma *= 0.5;
        }
      }
    }
    x += step * direction;
  }

  report.primal = best_primal;
  report.dual_lb = dual_lb;
  report.iterations = t;
  report.design.x = best_x;
  return report;
}

namespace {

Oracle make_trace_oracle(const ExperimentInstance& inst) {
  return [instance = inst](const Vector& x) {
    const int d = instance.d();
    Matrix m = information_matrix(instance, x);
    m.diagonal().array() += instance.lambda();
    const Matrix inv = m.llt().solve(Matrix::Identity(d, d));
    OracleEval eval;
    eval.value = inv.trace();
    eval.gradient.resize(instance.n());
    const Matrix projected = inv * instance.vectors();
    for (int i = 0; i < instance.n(); ++i) {
      eval.gradient[i] = -projected.col(i).squaredNorm();
    }
    return eval;
  };
}

struct AmespData {
  Matrix h;  // C = H^T H with C = A^T A + lambda I
  double constant = 0.0;
  int k = 0;
};

Oracle make_submatrix_envelope_oracle(const ExperimentInstance& instance, int k) {
  const int n = instance.n();
  Matrix c = instance.vectors().transpose() * instance.vectors() +
             instance.lambda() * Matrix::Identity(n, n);
  Eigen::LLT<Matrix> llt(c);
  if (llt.info() != Eigen::Success) {
    // C is positive definite in exact arithmetic; nudge the diagonal once.
    c.diagonal().array() += 1e-12 * c.trace() / n;
    llt.compute(c);
    if (llt.info() != Eigen::Success) throw NumericError("factorization of A^T A + lambda I failed");
  }
  auto data = std::make_shared<AmespData>();
  data->h = llt.matrixL().transpose();
  data->constant = (instance.d() - k) / instance.lambda();
  data->k = k;

  return [data](const Vector& x) {
    const int n = static_cast<int>(data->h.cols());
    Matrix y = data->h * x.cwiseMax(0.0).asDiagonal() * data->h.transpose();
    y = 0.5 * (y + y.transpose());
    SpectralDecomposition eig = symmetric_eigendecomposition(y);
    const SpectrumEnvelope env = top_k_inverse_sum_envelope(eig.eigenvalues.cwiseMax(0.0), data->k);
    if (!std::isfinite(env.value)) {
      throw NumericError("principal-submatrix envelope is unbounded at this design");
    }
    OracleEval eval;
    eval.value = env.value + data->constant;
    const Matrix w = eig.eigenvectors * env.eigen_weights.asDiagonal() * eig.eigenvectors.transpose();
    const Matrix wh = w * data->h;
    eval.gradient.resize(n);
    for (int i = 0; i < n; ++i) eval.gradient[i] = data->h.col(i).dot(wh.col(i));
    return eval;
  };
}

Oracle make_envelope_oracle(const ExperimentInstance& inst, int k) {
  const int ktilde = std::min(k, inst.d());
  const double constant = (inst.d() - ktilde) / inst.lambda();
  return [instance = inst, ktilde, constant](const Vector& x) {
    const Matrix m = information_matrix(instance, x);
    const EnvelopeEvaluation env = inverse_trace_envelope(m, instance.lambda(), ktilde);
    OracleEval eval;
    eval.value = env.value + constant;
    eval.gradient.resize(instance.n());
    const Matrix wa = env.subgradient * instance.vectors();
    for (int i = 0; i < instance.n(); ++i) {
      eval.gradient[i] = instance.column(i).dot(wa.col(i));
    }
    return eval;
  };
}

}  // namespace

Oracle make_relaxation_oracle(const ExperimentInstance& instance, RelaxKind kind, int k) {
  if (k < 1 || k > instance.n()) throw InputError("k out of range");
  switch (kind) {
    case RelaxKind::RaodRi: return make_trace_oracle(instance);
    case RelaxKind::AmespR: return make_submatrix_envelope_oracle(instance, k);
    case RelaxKind::RaodRii: return make_envelope_oracle(instance, k);
  }
  throw InputError("unknown relaxation kind");
}

RelaxationReport solve_relaxation(const ExperimentInstance& instance, RelaxKind kind, int k,
                                  const Fixings& fixings, const FrankWolfeOptions& options) {
  const Oracle oracle = make_relaxation_oracle(instance, kind, k);
  RelaxationReport report = frank_wolfe(oracle, instance.n(), k, fixings, options);
  report.kind = kind;
  return report;
}

double gap_percent(double upper, double lower) {
  if (!(upper > 0.0)) throw InputError("gap requires a positive upper bound");
  return 100.0 * (upper - lower) / upper;
}

}  // namespace raopt
