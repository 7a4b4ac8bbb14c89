#pragma once

#include "raopt/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace raopt {

/// Items-by-users rating matrix; NaN marks a missing rating.
struct RatingDataset {
  Matrix ratings;
  std::vector<std::string> item_ids;
  std::vector<std::string> user_ids;

  int items() const { return static_cast<int>(ratings.rows()); }
  int users() const { return static_cast<int>(ratings.cols()); }
};

bool rating_observed(double value);

/// Loads (item_id, user_id, rating) triples; observed ratings must lie in
/// [1, 11] (sources on a [0, 10] scale are expected to be shifted by one).
RatingDataset load_ratings_csv(const std::string& path);

/// Dense low-rank-plus-noise ratings for pipeline tests; entries are
/// arbitrary reals (no range constraint).
RatingDataset synthetic_ratings(int items, int users, int rank, double noise,
                                std::uint64_t seed);

/// One train/evaluate split: the design instance built from the training
/// users' ratings on the retained items, plus the held-out new-user columns.
struct ColdStartTrial {
  ExperimentInstance instance;   // d x n: training users by retained items
  std::vector<int> item_rows;    // retained item rows of the source dataset
  std::vector<int> train_users;
  std::vector<int> new_users;
  Matrix heldout;                // retained items x new users, NaN allowed
};

/// Draws d training users and `new_user_count` disjoint new users with the
/// seeded generator, then keeps the items rated by every training user
/// (complete case). `max_items`, when positive, subsamples the retained
/// items with the same generator.
ColdStartTrial split_trial(const RatingDataset& dataset, int d_train_users, int new_user_count,
                           std::uint64_t seed, double lambda, int max_items = 0);

enum class SelectionMethod { AOpt, DOpt, Random };

std::string to_string(SelectionMethod method);

/// a_opt: forward greedy on the trace criterion; d_opt: forward greedy on
/// the log-det criterion; random: uniform k-subset from the seeded generator.
Selection select_items(const ExperimentInstance& instance, int k, SelectionMethod method,
                       double lambda, std::uint64_t seed);

/// Ridge estimate (A_S A_S^T + lambda I)^-1 A_S y_S of the user weight
/// vector from the k elicited ratings.
Vector ridge_estimate(const Matrix& a_s, const Vector& y_s, double lambda);

struct MseReport {
  std::vector<double> per_user;
  double average = 0.0;
};

/// Mean squared prediction error over the non-selected items, per new user
/// (columns of `theta_hat` and `truth`), skipping unobserved truth entries.
MseReport evaluate_mse(const ExperimentInstance& instance, const Selection& selection,
                       const Matrix& theta_hat, const Matrix& truth);

struct ColdStartConfig {
  int d_train_users = 0;
  int new_users = 0;
  int k = 0;
  double lambda = 1.0;
  SelectionMethod method = SelectionMethod::AOpt;
  int trials = 15;
  std::uint64_t base_seed = 0;
  int max_items = 0;
};

struct ColdStartOutcome {
  SelectionMethod method;
  double lambda = 0.0;
  int k = 0;
  std::vector<double> per_trial_mean;  // mean over new users, one per seed
  double average_mse = 0.0;            // mean of the per-trial means
};

/// Full elicitation pipeline over `trials` seeded splits.
ColdStartOutcome run_coldstart(const RatingDataset& dataset, const ColdStartConfig& config);

}  // namespace raopt
