#include "raopt/exact.hpp"

#include "raopt/greedy.hpp"
#include "raopt/linalg.hpp"
#include "raopt/spectral.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <set>

namespace raopt {

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::GapLimit: return "gap_limit";
    case SolveStatus::TimeLimit: return "time_limit";
    case SolveStatus::NodeLimit: return "node_limit";
  }
  return "unknown";
}

Cut tangent_cut(const ExperimentInstance& instance, const Vector& y) {
  const int n = instance.n();
  if (y.size() != n) throw InputError("design length mismatch");
  long long cardinality = 0;
  for (int i = 0; i < n; ++i) {
    const double rounded = std::round(y[i]);
    if (std::abs(y[i] - rounded) > 1e-9 || (rounded != 0.0 && rounded != 1.0)) {
      throw InputError("cut point must be binary");
    }
    cardinality += static_cast<long long>(rounded);
  }
  if (cardinality < 1 || cardinality > n) throw InputError("cut point cardinality out of range");

  const int k = static_cast<int>(cardinality);
  const int ktilde = std::min(k, instance.d());
  const Matrix m = information_matrix(instance, y);
  const EnvelopeEvaluation env = inverse_trace_envelope(m, instance.lambda(), ktilde);

  Cut cut;
  cut.origin = y;
  cut.constant = env.value + (instance.d() - ktilde) / instance.lambda();
  cut.gradient.resize(n);
  const Matrix wa = env.subgradient * instance.vectors();
  for (int i = 0; i < n; ++i) cut.gradient[i] = instance.column(i).dot(wa.col(i));
  return cut;
}

namespace {

// min over the relaxed cardinality polytope of <g, x>, plus the affine
// offset of the weighted cut. Vertices of the polytope are binary, so this
// also bounds the binary master.
double weighted_cut_floor(const Vector& gradient, double offset, int k, const Fixings& fixings) {
  const Vector vertex = cardinality_lmo(gradient, k, fixings);
  return offset + gradient.dot(vertex);
}

// Euclidean projection onto the probability simplex (sorting method).
Vector project_simplex(const Vector& v) {
  const int m = static_cast<int>(v.size());
  std::vector<double> u(v.data(), v.data() + m);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double running = 0.0;
  double theta = 0.0;
  int support = 0;
  for (int j = 0; j < m; ++j) {
    running += u[static_cast<std::size_t>(j)];
    const double candidate = (running - 1.0) / (j + 1);
    if (u[static_cast<std::size_t>(j)] - candidate > 0.0) {
      theta = candidate;
      support = j + 1;
    }
  }
  (void)support;
  return (v.array() - theta).cwiseMax(0.0);
}

}  // namespace

double master_lower_bound(const std::vector<Cut>& cuts, int k, const Fixings& fixings,
                          int ascent_iters) {
  if (cuts.empty()) throw InputError("master bound needs a nonempty cut pool");
  const int pool = static_cast<int>(cuts.size());

  std::vector<double> offsets(static_cast<std::size_t>(pool));
  double best = -std::numeric_limits<double>::infinity();
  for (int l = 0; l < pool; ++l) {
    const Cut& cut = cuts[static_cast<std::size_t>(l)];
    offsets[static_cast<std::size_t>(l)] = cut.constant - cut.gradient.dot(cut.origin);
    best = std::max(best,
                    weighted_cut_floor(cut.gradient, offsets[static_cast<std::size_t>(l)], k, fixings));
  }
  if (pool == 1 || ascent_iters <= 0) return best;

  // Projected supergradient ascent over simplex weights; every iterate
  // yields a valid bound, so we keep the best one seen.
  Vector mu = Vector::Constant(pool, 1.0 / pool);
  const int n = static_cast<int>(cuts.front().gradient.size());
  for (int t = 1; t <= ascent_iters; ++t) {
    Vector combined_gradient = Vector::Zero(n);
    double combined_offset = 0.0;
    for (int l = 0; l < pool; ++l) {
      combined_gradient += mu[l] * cuts[static_cast<std::size_t>(l)].gradient;
      combined_offset += mu[l] * offsets[static_cast<std::size_t>(l)];
    }
    const Vector vertex = cardinality_lmo(combined_gradient, k, fixings);
    best = std::max(best, combined_offset + combined_gradient.dot(vertex));

    Vector supergradient(pool);
    for (int l = 0; l < pool; ++l) {
      supergradient[l] = cuts[static_cast<std::size_t>(l)].value_at(vertex);
    }
    mu = project_simplex(mu + (1.0 / std::sqrt(static_cast<double>(t))) * supergradient);
  }
  return best;
}

FixingProbe probe_fixing(const ExperimentInstance& instance, int k,
                         const RelaxationReport& relaxation, double incumbent_ub,
                         const FrankWolfeOptions& probe_options) {
  FixingProbe result;
  if (!std::isfinite(incumbent_ub)) return result;

  const double margin = 1e-9 * (1.0 + std::abs(incumbent_ub));
  if (relaxation.dual_lb > incumbent_ub + margin) {
    result.prune = true;
    return result;
  }

  const int n = instance.n();
  const Fixings& base = relaxation.design.fixings;
  FrankWolfeOptions options = probe_options;
  options.stop_when_dual_above = incumbent_ub + margin;

  for (int i = 0; i < n; ++i) {
    if (base.fixed_to_one(i) || base.fixed_to_zero(i)) continue;

    bool one_excluded = false;
    bool zero_excluded = false;

    Fixings with_one = base;
    with_one.one.push_back(i);
    if (static_cast<int>(with_one.one.size()) <= k) {
      const RelaxationReport probe =
          solve_relaxation(instance, RelaxKind::RaodRii, k, with_one, options);
      one_excluded = probe.dual_lb > incumbent_ub + margin;
    }

    Fixings with_zero = base;
    with_zero.zero.push_back(i);
    if (n - static_cast<int>(with_zero.zero.size()) >= k) {
      const RelaxationReport probe =
          solve_relaxation(instance, RelaxKind::RaodRii, k, with_zero, options);
      zero_excluded = probe.dual_lb > incumbent_ub + margin;
    }

    if (one_excluded && zero_excluded) {
      result.prune = true;
      return result;
    }
    if (one_excluded) result.fix_zero.push_back(i);
    if (zero_excluded) result.fix_one.push_back(i);
  }
  return result;
}

namespace {

struct OpenNode {
  Fixings fixings;
  double lower_bound;
  int depth;
  long long id;
};

struct NodeOrder {
  bool operator()(const OpenNode& a, const OpenNode& b) const {
    if (a.lower_bound != b.lower_bound) return a.lower_bound > b.lower_bound;
    return a.id > b.id;  // FIFO among equal bounds
  }
};

std::vector<int> support_of(const Vector& y) {
  std::vector<int> support;
  for (int i = 0; i < y.size(); ++i) {
    if (y[i] > 0.5) support.push_back(i);
  }
  return support;
}

// k largest relaxation weights, honoring the fixings.
Vector round_design(const Vector& x, int k, const Fixings& fixings) {
  const int n = static_cast<int>(x.size());
  Vector y = Vector::Zero(n);
  std::vector<char> blocked(static_cast<std::size_t>(n), 0);
  for (int i : fixings.one) {
    y[i] = 1.0;
    blocked[static_cast<std::size_t>(i)] = 1;
  }
  for (int i : fixings.zero) blocked[static_cast<std::size_t>(i)] = 1;
  std::vector<int> free_idx;
  for (int i = 0; i < n; ++i) {
    if (!blocked[static_cast<std::size_t>(i)]) free_idx.push_back(i);
  }
  std::stable_sort(free_idx.begin(), free_idx.end(), [&](int a, int b) { return x[a] > x[b]; });
  const int need = k - static_cast<int>(fixings.one.size());
  for (int j = 0; j < need; ++j) y[free_idx[static_cast<std::size_t>(j)]] = 1.0;
  return y;
}

}  // namespace

SolveReport solve_exact(const ExperimentInstance& instance, int k, const ExactOptions& options) {
  const int n = instance.n();
  if (k < 1 || k > n) throw InputError("k out of range");
  if (!(options.epsilon > 0.0)) throw InputError("epsilon must be positive");

  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&start] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  SolveReport report;
  report.incumbent = combined_greedy(instance, k);
  double ub = report.incumbent.objective;

  std::vector<Cut> pool;
  std::set<std::vector<int>> cut_origins;
  const auto add_cut = [&](const Vector& y) {
    auto support = support_of(y);
    if (cut_origins.insert(std::move(support)).second) pool.push_back(tangent_cut(instance, y));
  };
  const auto indicator = [n](const std::vector<int>& subset) {
    Vector y = Vector::Zero(n);
    for (int i : subset) y[i] = 1.0;
    return y;
  };
  add_cut(indicator(report.incumbent.indices));

  const auto try_incumbent = [&](const std::vector<int>& subset) {
    const double value = objective_value(instance, subset);
    if (value < ub) {
      ub = value;
      report.incumbent.indices = subset;
      report.incumbent.objective = value;
      report.incumbent.provenance = Provenance::Exact;
    }
    return value;
  };

  std::priority_queue<OpenNode, std::vector<OpenNode>, NodeOrder> open;
  long long next_id = 0;
  open.push({Fixings{}, -std::numeric_limits<double>::infinity(), 0, next_id++});

  // Bounds of closed subtrees (pruned nodes keep their bound, evaluated
  // leaves their exact value); the global bound is the min over the open
  // queue and these contributions. The objective is positive, so zero is
  // a valid bound before any node is processed.
  double closed_min = std::numeric_limits<double>::infinity();
  double global_lb = 0.0;
  report.status = SolveStatus::Optimal;

  const auto current_gap = [&ub](double lb) { return (ub - lb) / ub; };

  while (true) {
    if (open.empty()) {
      global_lb = std::max(global_lb, std::min(ub, closed_min));
      report.status = SolveStatus::Optimal;
      break;
    }
    OpenNode node = open.top();
    global_lb = std::max(global_lb, std::min(node.lower_bound, closed_min));
    if (current_gap(global_lb) <= options.epsilon) {
      report.status = SolveStatus::Optimal;
      break;
    }
    if (options.limits.gap_limit > 0.0 && current_gap(global_lb) <= options.limits.gap_limit) {
      report.status = SolveStatus::GapLimit;
      break;
    }
    if (elapsed() > options.limits.time_limit_sec) {
      report.status = SolveStatus::TimeLimit;
      break;
    }
    if (report.nodes >= options.limits.node_limit) {
      report.status = SolveStatus::NodeLimit;
      break;
    }
    open.pop();
    ++report.nodes;
    const bool at_root = node.depth == 0;

    const int fixed_one = static_cast<int>(node.fixings.one.size());
    const int fixed_zero = static_cast<int>(node.fixings.zero.size());
    const int free_count = n - fixed_one - fixed_zero;

    // Completed fixing: evaluate the single completion exactly.
    if (fixed_one == k || fixed_one + free_count == k) {
      std::vector<int> subset = node.fixings.one;
      if (fixed_one < k) {
        for (int i = 0; i < n; ++i) {
          if (!node.fixings.fixed_to_one(i) && !node.fixings.fixed_to_zero(i)) subset.push_back(i);
        }
      }
      std::sort(subset.begin(), subset.end());
      const double value = try_incumbent(subset);
      add_cut(indicator(subset));
      closed_min = std::min(closed_min, value);
      continue;
    }

    FrankWolfeOptions fw = at_root ? options.root_fw : options.node_fw;
    // Once the certified bound clears the prune threshold the node is done.
    fw.stop_when_dual_above = std::min(fw.stop_when_dual_above, ub * (1.0 - options.epsilon));
    RelaxationReport relax = solve_relaxation(instance, RelaxKind::RaodRii, k, node.fixings, fw);
    double bound = std::max(node.lower_bound, relax.dual_lb);
    const int window = std::min<int>(static_cast<int>(pool.size()),
                                     std::max(1, options.master_pool_window));
    const std::vector<Cut> recent(pool.end() - window, pool.end());
    bound = std::max(bound, master_lower_bound(recent, k, node.fixings, options.master_ascent_iters));

    const Vector rounded = round_design(relax.design.x, k, node.fixings);
    try_incumbent(support_of(rounded));
    add_cut(rounded);

    if (current_gap(bound) <= options.epsilon) {
      closed_min = std::min(closed_min, bound);
      continue;
    }

    const bool probe_now =
        options.probe_period > 0 &&
        (at_root || (report.nodes % options.probe_period == 0));
    if (probe_now) {
      const FixingProbe probe = probe_fixing(instance, k, relax, ub);
      if (at_root) {
        report.fixed_one_at_root = static_cast<int>(probe.fix_one.size());
        report.fixed_zero_at_root = static_cast<int>(probe.fix_zero.size());
      }
      if (probe.prune) {
        closed_min = std::min(closed_min, bound);
        continue;
      }
      node.fixings.one.insert(node.fixings.one.end(), probe.fix_one.begin(), probe.fix_one.end());
      node.fixings.zero.insert(node.fixings.zero.end(), probe.fix_zero.begin(),
                               probe.fix_zero.end());
      const int ones = static_cast<int>(node.fixings.one.size());
      const int zeros = static_cast<int>(node.fixings.zero.size());
      if (ones > k || n - zeros < k) {  // probes emptied the node
        closed_min = std::min(closed_min, bound);
        continue;
      }
      // A probe can complete the fixing; requeue so the leaf path handles it.
      if (ones == k || n - zeros == k) {
        open.push({node.fixings, bound, node.depth + 1, next_id++});
        continue;
      }
    }

    // Branch on the most fractional free coordinate (ties to lowest index).
    int branch_index = -1;
    double best_frac = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      if (node.fixings.fixed_to_one(i) || node.fixings.fixed_to_zero(i)) continue;
      const double frac = std::abs(relax.design.x[i] - 0.5);
      if (frac < best_frac) {
        best_frac = frac;
        branch_index = i;
      }
    }

    Fixings up = node.fixings;
    up.one.push_back(branch_index);
    if (static_cast<int>(up.one.size()) <= k) {
      open.push({std::move(up), bound, node.depth + 1, next_id++});
    }
    Fixings down = node.fixings;
    down.zero.push_back(branch_index);
    if (n - static_cast<int>(down.zero.size()) >= k) {
      open.push({std::move(down), bound, node.depth + 1, next_id++});
    }
  }

  report.global_lb = global_lb;
  report.mip_gap = std::max(0.0, current_gap(global_lb));
  report.cuts = static_cast<int>(pool.size());
  report.wall_time_sec = elapsed();
  return report;
}

}  // namespace raopt
