#include "raopt/instances.hpp"

#include "raopt/linalg.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>

using namespace raopt;
using namespace raopt::testutil;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/raopt_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
  void write(const std::string& content) const {
    std::ofstream out(path);
    out << content;
  }
};

}  // namespace

TEST_SUITE("instances") {

TEST_CASE("gaussian generation is deterministic with sane moments") {
  const ExperimentInstance a = gaussian_instance(4, 2, 7);
  const ExperimentInstance b = gaussian_instance(4, 2, 7);
  CHECK((a.vectors() - b.vectors()).norm() == 0.0);
  CHECK(a.vectors() != gaussian_instance(4, 2, 8).vectors());

  const ExperimentInstance big = gaussian_instance(2000, 500, 99);
  const double mean = big.vectors().mean();
  const double var = big.vectors().array().square().mean() - mean * mean;
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(var - 1.0) < 0.01);
}

TEST_CASE("csv loading") {
  SUBCASE("min-max normalization per feature") {
    TempFile file("norm.csv");
    file.write("0,2\n1,4\n");
    const ExperimentInstance inst = load_csv(file.path, true, 1.0);
    REQUIRE(inst.d() == 2);
    REQUIRE(inst.n() == 2);
    // Feature rows become (0, 1) after the min-max map.
    CHECK(inst.vectors()(0, 0) == 0.0);
    CHECK(inst.vectors()(0, 1) == 1.0);
    CHECK(inst.vectors()(1, 0) == 0.0);
    CHECK(inst.vectors()(1, 1) == 1.0);
  }
  SUBCASE("all-zero feature dropped before normalization") {
    TempFile file("zero.csv");
    file.write("1,0,3\n2,0,5\n");
    const ExperimentInstance inst = load_csv(file.path, true, 1.0);
    CHECK(inst.d() == 2);
    CHECK(inst.n() == 2);
  }
  SUBCASE("unnormalized load is verbatim") {
    TempFile file("verbatim.csv");
    file.write("1.5,-2\n0,3.25\n");
    const ExperimentInstance inst = load_csv(file.path, false, 2.0);
    CHECK(inst.vectors()(0, 0) == 1.5);
    CHECK(inst.vectors()(1, 0) == -2.0);
    CHECK(inst.vectors()(0, 1) == 0.0);
    CHECK(inst.vectors()(1, 1) == 3.25);
  }
  SUBCASE("header row is detected and skipped") {
    TempFile file("header.csv");
    file.write("f1,f2\n1,2\n3,4\n");
    CHECK(load_csv(file.path, false, 1.0).n() == 2);
  }
  SUBCASE("ragged and non-numeric rows are located") {
    TempFile ragged("ragged.csv");
    ragged.write("1,2\n3\n");
    CHECK_THROWS_WITH_AS(load_csv(ragged.path, false, 1.0),
                         doctest::Contains("ragged row 2"), InputError);
    TempFile bad("bad.csv");
    bad.write("1,2\n3,oops\n");
    CHECK_THROWS_WITH_AS(load_csv(bad.path, false, 1.0),
                         doctest::Contains("row 2, column 2"), InputError);
  }
  SUBCASE("round trip preserves unnormalized values") {
    const ExperimentInstance inst = gaussian_instance(6, 3, 11, 1.5);
    TempFile file("roundtrip.csv");
    write_csv(file.path, inst);
    const ExperimentInstance back = load_csv(file.path, false, 1.5);
    CHECK((inst.vectors() - back.vectors()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("graph-built hard instance") {
  const GraphSpec path_graph = make_graph(3, {{0, 1}, {1, 2}});
  const auto built = independent_set_instance(path_graph);

  SUBCASE("matrix entries follow the construction") {
    Matrix want(3, 3);
    want << 3, 1, 0, 1, 3, 1, 0, 1, 3;
    CHECK((built.c - want).norm() == 0.0);
  }
  SUBCASE("factor reproduces the matrix") {
    const Matrix a = built.instance.vectors();
    const Matrix rebuilt = a.transpose() * a +
                           built.instance.lambda() * Matrix::Identity(3, 3);
    CHECK((rebuilt - built.c).norm() <= 1e-8 * built.c.norm());
    CHECK(built.instance.lambda() > 0.0);
  }
  SUBCASE("independent pair hits k/n exactly") {
    Matrix css(2, 2);
    css << 3, 0, 0, 3;
    CHECK(css.inverse().trace() == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(independent_set_certificate(built.c, {0, 2}, 3));
  }
  SUBCASE("adjacent pair exceeds k/n") {
    Matrix css(2, 2);
    css << 3, 1, 1, 3;
    CHECK(css.inverse().trace() == doctest::Approx(0.75).epsilon(1e-12));
    CHECK_FALSE(independent_set_certificate(built.c, {0, 1}, 3));
  }
  SUBCASE("graph validation") {
    CHECK_THROWS_AS(make_graph(3, {{0, 0}}), InputError);
    CHECK_THROWS_AS(make_graph(3, {{0, 1}, {1, 0}}), InputError);
    CHECK_THROWS_AS(make_graph(2, {{0, 5}}), InputError);
  }
}

TEST_CASE("certificate agrees with direct adjacency checking") {
  RngStream stream(61);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 4 + static_cast<int>(stream.uniform_int(6));  // up to 9
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        if (stream.uniform() < 0.35) edges.emplace_back(u, v);
      }
    }
    const GraphSpec graph = make_graph(n, edges);
    const auto built = independent_set_instance(graph);
    for (int mask = 0; mask < (1 << n); ++mask) {
      std::vector<int> subset;
      for (int v = 0; v < n; ++v) {
        if (mask & (1 << v)) subset.push_back(v);
      }
      if (subset.size() < 2) continue;
      bool independent = true;
      for (std::size_t i = 0; i < subset.size() && independent; ++i) {
        for (std::size_t j = i + 1; j < subset.size() && independent; ++j) {
          if (graph.has_edge(subset[i], subset[j])) independent = false;
        }
      }
      CHECK(independent_set_certificate(built.c, subset, n) == independent);
    }
  }
}

TEST_CASE("exhaustive optimum") {
  SUBCASE("scalar toy") {
    const Selection best = brute_force(scalar_toy(), 1);
    CHECK(best.indices == std::vector<int>{2});
    CHECK(best.objective == doctest::Approx(0.2).epsilon(1e-12));
  }
  SUBCASE("full selection") {
    const ExperimentInstance inst = gaussian_instance(6, 2, 5);
    const Selection best = brute_force(inst, 6);
    CHECK(best.indices.size() == 6);
    CHECK(best.objective == doctest::Approx(objective_value(inst, best.indices)));
  }
  SUBCASE("ties resolve to the lexicographically smallest subset") {
    const Selection best = brute_force(unit_basis(4, 1.0), 2);
    CHECK(best.indices == std::vector<int>{0, 1});
    CHECK(best.objective == doctest::Approx(3.0).epsilon(1e-9));
  }
  SUBCASE("guard refuses oversized enumerations") {
    const ExperimentInstance inst = gaussian_instance(50, 2, 5);
    CHECK_THROWS_WITH_AS(brute_force(inst, 25), doctest::Contains("exceed 1e6"), InputError);
  }
}

TEST_CASE("subset counting saturates instead of overflowing") {
  CHECK(subset_count(4, 2) == 6);
  CHECK(subset_count(12, 6) == 924);
  CHECK(subset_count(10, 0) == 1);
  CHECK(subset_count(200, 100) == std::numeric_limits<unsigned long long>::max());
}

}  // TEST_SUITE
