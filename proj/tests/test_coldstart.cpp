#include "raopt/coldstart.hpp"

#include "raopt/linalg.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

using namespace raopt;
using namespace raopt::testutil;

TEST_SUITE("coldstart") {

TEST_CASE("ridge estimation") {
  SUBCASE("zero response gives the zero estimate") {
    Matrix a_s = Matrix::Random(3, 5);
    CHECK(ridge_estimate(a_s, Vector::Zero(5), 1.0).norm() == 0.0);
  }
  SUBCASE("scalar normal equation") {
    Matrix a_s(1, 1);
    a_s << 2.0;
    Vector y(1);
    y << 2.0;
    CHECK(ridge_estimate(a_s, y, 1.0)[0] == doctest::Approx(0.8).epsilon(1e-12));
  }
  SUBCASE("small ridge recovers an exact linear model") {
    RngStream stream(7);
    const int d = 4, k = 9;
    Matrix a_s(d, k);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < k; ++j) a_s(i, j) = stream.normal();
    }
    Vector theta_star(d);
    for (int i = 0; i < d; ++i) theta_star[i] = stream.normal();
    const Vector y = a_s.transpose() * theta_star;
    const Vector theta_hat = ridge_estimate(a_s, y, 1e-8);
    CHECK((theta_hat - theta_star).norm() <= 1e-4);
  }
}

TEST_CASE("held-out error evaluation") {
  Matrix a(2, 4);
  a << 1.0, 0.0, 1.0, 2.0, 0.0, 1.0, 1.0, 1.0;
  const ExperimentInstance inst(a, 1.0);
  Selection selection;
  selection.indices = {0, 1};

  SUBCASE("perfect predictions score zero") {
    Matrix theta(2, 1);
    theta << 1.0, 2.0;
    Matrix truth(4, 1);
    for (int i = 0; i < 4; ++i) truth(i, 0) = inst.column(i).dot(theta.col(0));
    const MseReport report = evaluate_mse(inst, selection, theta, truth);
    CHECK(report.average == doctest::Approx(0.0));
  }
  SUBCASE("constant offset squares into the error") {
    Matrix theta(2, 1);
    theta << 1.0, 2.0;
    Matrix truth(4, 1);
    for (int i = 0; i < 4; ++i) truth(i, 0) = inst.column(i).dot(theta.col(0)) + 0.5;
    const MseReport report = evaluate_mse(inst, selection, theta, truth);
    CHECK(report.average == doctest::Approx(0.25).epsilon(1e-12));
  }
  SUBCASE("two held-out items by hand") {
    Matrix theta(2, 1);
    theta << 1.0, 1.0;  // predictions on items 2,3: 2 and 3
    Matrix truth(4, 1);
    truth << 0.0, 0.0, 1.0, 1.0;
    const MseReport report = evaluate_mse(inst, selection, theta, truth);
    CHECK(report.per_user[0] == doctest::Approx((1.0 + 4.0) / 2.0).epsilon(1e-12));
  }
  SUBCASE("missing truth entries are skipped") {
    Matrix theta(2, 1);
    theta << 1.0, 1.0;
    Matrix truth(4, 1);
    truth << 0.0, 0.0, std::numeric_limits<double>::quiet_NaN(), 1.0;
    const MseReport report = evaluate_mse(inst, selection, theta, truth);
    CHECK(report.per_user[0] == doctest::Approx(4.0).epsilon(1e-12));
  }
}

TEST_CASE("trial splitting") {
  const RatingDataset dataset = synthetic_ratings(30, 20, 3, 0.1, 99);
  SUBCASE("deterministic for a fixed seed") {
    const ColdStartTrial a = split_trial(dataset, 5, 3, 42, 1.0);
    const ColdStartTrial b = split_trial(dataset, 5, 3, 42, 1.0);
    CHECK(a.train_users == b.train_users);
    CHECK(a.new_users == b.new_users);
    CHECK(a.item_rows == b.item_rows);
    CHECK((a.instance.vectors() - b.instance.vectors()).norm() == 0.0);
  }
  SUBCASE("train and new users are disjoint with requested sizes") {
    const ColdStartTrial trial = split_trial(dataset, 6, 4, 17, 1.0);
    CHECK(trial.train_users.size() == 6);
    CHECK(trial.new_users.size() == 4);
    for (int u : trial.train_users) {
      CHECK(std::find(trial.new_users.begin(), trial.new_users.end(), u) ==
            trial.new_users.end());
    }
    CHECK(trial.instance.d() == 6);
    CHECK(trial.instance.n() == 30);  // dense synthetic data keeps every item
    CHECK(trial.heldout.rows() == 30);
    CHECK(trial.heldout.cols() == 4);
  }
  SUBCASE("item cap subsamples deterministically") {
    const ColdStartTrial trial = split_trial(dataset, 5, 3, 4, 1.0, 12);
    CHECK(trial.instance.n() == 12);
  }
  SUBCASE("oversized requests fail loudly") {
    CHECK_THROWS_AS(split_trial(dataset, 15, 10, 1, 1.0), InputError);
  }
}

TEST_CASE("item selection methods") {
  const ExperimentInstance toy = scalar_toy();
  SUBCASE("trace criterion picks the informative item") {
    const Selection s = select_items(toy, 1, SelectionMethod::AOpt, 1.0, 0);
    CHECK(s.indices == std::vector<int>{2});
  }
  SUBCASE("random selection is reproducible and valid") {
    const Selection a = select_items(toy, 2, SelectionMethod::Random, 1.0, 5);
    const Selection b = select_items(toy, 2, SelectionMethod::Random, 1.0, 5);
    CHECK(a.indices == b.indices);
    CHECK(a.indices.size() == 2);
    CHECK(rel_err(a.objective, objective_value(toy, a.indices)) <= 1e-10);
  }
  SUBCASE("full budget makes all methods agree as sets") {
    for (const auto method :
         {SelectionMethod::AOpt, SelectionMethod::DOpt, SelectionMethod::Random}) {
      Selection s = select_items(toy, 3, method, 1.0, 1);
      std::sort(s.indices.begin(), s.indices.end());
      CHECK(s.indices == std::vector<int>{0, 1, 2});
    }
  }
}

TEST_CASE("noiseless synthetic ratings are recovered exactly") {
  const int d_train = 6;
  const RatingDataset dataset = synthetic_ratings(40, 16, d_train, 0.0, 3);
  ColdStartConfig config;
  config.d_train_users = d_train;
  config.new_users = 4;
  config.k = 8;  // k >= d
  config.lambda = 1e-6;
  config.method = SelectionMethod::AOpt;
  config.trials = 3;
  config.base_seed = 11;
  const ColdStartOutcome outcome = run_coldstart(dataset, config);
  CHECK(outcome.average_mse <= 1e-6);
}

TEST_CASE("designed selection beats random on noisy synthetic data") {
  const RatingDataset dataset = synthetic_ratings(60, 25, 5, 0.25, 21);
  ColdStartConfig config;
  config.d_train_users = 8;
  config.new_users = 5;
  config.k = 10;
  config.lambda = 1.0;
  config.trials = 15;
  config.base_seed = 77;

  config.method = SelectionMethod::AOpt;
  const double designed = run_coldstart(dataset, config).average_mse;
  config.method = SelectionMethod::Random;
  const double random = run_coldstart(dataset, config).average_mse;
  CHECK(designed <= random);
}

TEST_CASE("rating triples load with validation") {
  const std::string path = "/tmp/raopt_test_ratings.csv";
  {
    std::ofstream out(path);
    out << "item_id,user_id,rating\n";
    out << "m1,u1,5\nm1,u2,8\nm2,u1,2\n";
  }
  const RatingDataset dataset = load_ratings_csv(path);
  CHECK(dataset.items() == 2);
  CHECK(dataset.users() == 2);
  CHECK(dataset.ratings(0, 0) == 5.0);
  CHECK(dataset.ratings(0, 1) == 8.0);
  CHECK(dataset.ratings(1, 0) == 2.0);
  CHECK_FALSE(rating_observed(dataset.ratings(1, 1)));
  {
    std::ofstream out(path);
    out << "m1,u1,12\n";
  }
  CHECK_THROWS_AS(load_ratings_csv(path), InputError);
  std::remove(path.c_str());
}

}  // TEST_SUITE
