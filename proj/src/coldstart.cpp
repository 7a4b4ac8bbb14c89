#include "raopt/coldstart.hpp"

#include "raopt/greedy.hpp"
#include "raopt/linalg.hpp"
#include "raopt/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace raopt {

bool rating_observed(double value) { return !std::isnan(value); }

std::string to_string(SelectionMethod method) {
  switch (method) {
    case SelectionMethod::AOpt: return "a_opt";
    case SelectionMethod::DOpt: return "d_opt";
    case SelectionMethod::Random: return "random";
  }
  return "unknown";
}

RatingDataset load_ratings_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);

  std::map<std::string, int> item_index;
  std::map<std::string, int> user_index;
  struct Triple {
    int item;
    int user;
    double rating;
  };
  std::vector<Triple> triples;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string item, user, rating_text;
    if (!std::getline(ss, item, ',') || !std::getline(ss, user, ',') ||
        !std::getline(ss, rating_text)) {
      throw InputError(path + ": malformed triple at line " + std::to_string(line_no));
    }
    double rating = 0.0;
    try {
      rating = std::stod(rating_text);
    } catch (...) {
      if (line_no == 1) continue;  // header
      throw InputError(path + ": non-numeric rating at line " + std::to_string(line_no));
    }
    if (rating < 1.0 || rating > 11.0) {
      throw InputError(path + ": rating " + rating_text + " outside [1, 11] at line " +
                       std::to_string(line_no));
    }
    const int item_id = item_index.try_emplace(item, static_cast<int>(item_index.size())).first->second;
    const int user_id = user_index.try_emplace(user, static_cast<int>(user_index.size())).first->second;
    triples.push_back({item_id, user_id, rating});
  }
  if (triples.empty()) throw InputError(path + ": no ratings");

  RatingDataset dataset;
  dataset.ratings = Matrix::Constant(static_cast<int>(item_index.size()),
                                     static_cast<int>(user_index.size()),
                                     std::numeric_limits<double>::quiet_NaN());
  dataset.item_ids.resize(item_index.size());
  dataset.user_ids.resize(user_index.size());
  for (const auto& [name, idx] : item_index) dataset.item_ids[static_cast<std::size_t>(idx)] = name;
  for (const auto& [name, idx] : user_index) dataset.user_ids[static_cast<std::size_t>(idx)] = name;
  for (const auto& t : triples) dataset.ratings(t.item, t.user) = t.rating;
  return dataset;
}

RatingDataset synthetic_ratings(int items, int users, int rank, double noise,
                                std::uint64_t seed) {
  if (items < 1 || users < 1 || rank < 1) throw InputError("items, users, rank must be >= 1");
  CounterRng rng(seed);
  Matrix item_factors(items, rank);
  Matrix user_factors(users, rank);
  std::uint64_t index = 0;
  for (int i = 0; i < items; ++i) {
    for (int r = 0; r < rank; ++r) item_factors(i, r) = rng.normal(index++);
  }
  for (int u = 0; u < users; ++u) {
    for (int r = 0; r < rank; ++r) user_factors(u, r) = rng.normal(index++);
  }
  RatingDataset dataset;
  dataset.ratings = item_factors * user_factors.transpose();
  if (noise > 0.0) {
    for (int i = 0; i < items; ++i) {
      for (int u = 0; u < users; ++u) dataset.ratings(i, u) += noise * rng.normal(index++);
    }
  }
  dataset.item_ids.resize(static_cast<std::size_t>(items));
  dataset.user_ids.resize(static_cast<std::size_t>(users));
  for (int i = 0; i < items; ++i) dataset.item_ids[static_cast<std::size_t>(i)] = "item" + std::to_string(i);
  for (int u = 0; u < users; ++u) dataset.user_ids[static_cast<std::size_t>(u)] = "user" + std::to_string(u);
  return dataset;
}

ColdStartTrial split_trial(const RatingDataset& dataset, int d_train_users, int new_user_count,
                           std::uint64_t seed, double lambda, int max_items) {
  const int users = dataset.users();
  const int items = dataset.items();
  if (d_train_users < 1 || new_user_count < 1) {
    throw InputError("need at least one training user and one new user");
  }
  if (d_train_users + new_user_count > users) {
    throw InputError("requested " + std::to_string(d_train_users + new_user_count) +
                     " distinct users but the dataset has " + std::to_string(users));
  }

  RngStream stream(seed);
  const std::vector<int> chosen =
      stream.sample_without_replacement(users, d_train_users + new_user_count);
  // First d sampled users train the design; the remainder are held out.
  std::vector<int> shuffled = chosen;
  for (int j = static_cast<int>(shuffled.size()) - 1; j > 0; --j) {
    const int pick = static_cast<int>(stream.uniform_int(static_cast<std::uint64_t>(j + 1)));
    std::swap(shuffled[static_cast<std::size_t>(j)], shuffled[static_cast<std::size_t>(pick)]);
  }
  ColdStartTrial trial;
  trial.train_users.assign(shuffled.begin(), shuffled.begin() + d_train_users);
  trial.new_users.assign(shuffled.begin() + d_train_users, shuffled.end());

  // Complete case: keep items rated by every training user.
  for (int i = 0; i < items; ++i) {
    bool complete = true;
    for (int u : trial.train_users) {
      if (!rating_observed(dataset.ratings(i, u))) {
        complete = false;
        break;
      }
    }
    if (complete) trial.item_rows.push_back(i);
  }
  if (max_items > 0 && static_cast<int>(trial.item_rows.size()) > max_items) {
    const std::vector<int> keep = stream.sample_without_replacement(
        static_cast<int>(trial.item_rows.size()), max_items);
    std::vector<int> subset;
    subset.reserve(static_cast<std::size_t>(max_items));
    for (int pos : keep) subset.push_back(trial.item_rows[static_cast<std::size_t>(pos)]);
    trial.item_rows = std::move(subset);
  }
  const int n = static_cast<int>(trial.item_rows.size());
  if (n < 1) throw InputError("no item is rated by all selected training users");

  Matrix a(d_train_users, n);
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < d_train_users; ++r) {
      a(r, c) = dataset.ratings(trial.item_rows[static_cast<std::size_t>(c)],
                                trial.train_users[static_cast<std::size_t>(r)]);
    }
  }
  trial.instance = ExperimentInstance(std::move(a), lambda);

  trial.heldout.resize(n, new_user_count);
  for (int c = 0; c < new_user_count; ++c) {
    for (int r = 0; r < n; ++r) {
      trial.heldout(r, c) = dataset.ratings(trial.item_rows[static_cast<std::size_t>(r)],
                                            trial.new_users[static_cast<std::size_t>(c)]);
    }
  }
  return trial;
}

Selection select_items(const ExperimentInstance& instance, int k, SelectionMethod method,
                       double lambda, std::uint64_t seed) {
  ExperimentInstance design(instance.vectors(), lambda);
  switch (method) {
    case SelectionMethod::AOpt:
      return forward_greedy(design, k);
    case SelectionMethod::DOpt:
      return dopt_forward_greedy(design, k).selection;
    case SelectionMethod::Random: {
      RngStream stream(seed);
      Selection out;
      out.indices = stream.sample_without_replacement(design.n(), k);
      out.objective = objective_value(design, out.indices);
      out.provenance = Provenance::External;
      return out;
    }
  }
  throw InputError("unknown selection method");
}

Vector ridge_estimate(const Matrix& a_s, const Vector& y_s, double lambda) {
  if (!(lambda > 0.0)) throw InputError("lambda must be positive");
  if (a_s.cols() != y_s.size()) throw InputError("design/response size mismatch");
  const int d = static_cast<int>(a_s.rows());
  Matrix normal = a_s * a_s.transpose() + lambda * Matrix::Identity(d, d);
  return normal.llt().solve(a_s * y_s);
}

MseReport evaluate_mse(const ExperimentInstance& instance, const Selection& selection,
                       const Matrix& theta_hat, const Matrix& truth) {
  const int n = instance.n();
  if (truth.rows() != n) throw InputError("truth row count mismatch");
  if (theta_hat.rows() != instance.d() || theta_hat.cols() != truth.cols()) {
    throw InputError("estimate shape mismatch");
  }
  std::vector<char> selected(static_cast<std::size_t>(n), 0);
  for (int i : selection.indices) selected[static_cast<std::size_t>(i)] = 1;

  MseReport report;
  report.per_user.resize(static_cast<std::size_t>(truth.cols()), 0.0);
  for (int u = 0; u < truth.cols(); ++u) {
    double sum = 0.0;
    int count = 0;
    for (int i = 0; i < n; ++i) {
      if (selected[static_cast<std::size_t>(i)]) continue;
      if (!rating_observed(truth(i, u))) continue;
      const double predicted = instance.column(i).dot(theta_hat.col(u));
      const double err = predicted - truth(i, u);
      sum += err * err;
      ++count;
    }
    report.per_user[static_cast<std::size_t>(u)] = count > 0 ? sum / count : 0.0;
  }
  double total = 0.0;
  for (double v : report.per_user) total += v;
  report.average = report.per_user.empty() ? 0.0 : total / static_cast<double>(report.per_user.size());
  return report;
}

ColdStartOutcome run_coldstart(const RatingDataset& dataset, const ColdStartConfig& config) {
  ColdStartOutcome outcome;
  outcome.method = config.method;
  outcome.lambda = config.lambda;
  outcome.k = config.k;

  for (int trial_no = 0; trial_no < config.trials; ++trial_no) {
    const std::uint64_t seed = config.base_seed + static_cast<std::uint64_t>(trial_no);
    const ColdStartTrial trial = split_trial(dataset, config.d_train_users, config.new_users,
                                             seed, config.lambda, config.max_items);
    const int n = trial.instance.n();
    if (config.k > n) {
      throw InputError("k exceeds the " + std::to_string(n) + " retained items");
    }
    const Selection selection =
        select_items(trial.instance, config.k, config.method, config.lambda, seed);

    Matrix a_s(trial.instance.d(), config.k);
    for (int j = 0; j < config.k; ++j) {
      a_s.col(j) = trial.instance.column(selection.indices[static_cast<std::size_t>(j)]);
    }
    Matrix theta(trial.instance.d(), trial.heldout.cols());
    for (int u = 0; u < trial.heldout.cols(); ++u) {
      Vector y_s(config.k);
      for (int j = 0; j < config.k; ++j) {
        const double rating = trial.heldout(selection.indices[static_cast<std::size_t>(j)], u);
        // An unrated elicited item contributes nothing to the estimate.
        y_s[j] = rating_observed(rating) ? rating : 0.0;
      }
      theta.col(u) = ridge_estimate(a_s, y_s, config.lambda);
    }
    const MseReport mse = evaluate_mse(trial.instance, selection, theta, trial.heldout);
    outcome.per_trial_mean.push_back(mse.average);
  }

  double total = 0.0;
  for (double v : outcome.per_trial_mean) total += v;
  outcome.average_mse =
      outcome.per_trial_mean.empty() ? 0.0 : total / static_cast<double>(outcome.per_trial_mean.size());
  return outcome;
}

}  // namespace raopt
