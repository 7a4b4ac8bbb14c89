#include "raopt/instances.hpp"

#include "raopt/linalg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace raopt {

bool GraphSpec::has_edge(int u, int v) const {
  for (const auto& [a, b] : edges) {
    if ((a == u && b == v) || (a == v && b == u)) return true;
  }
  return false;
}

GraphSpec make_graph(int vertex_count, std::vector<std::pair<int, int>> edges) {
  if (vertex_count < 1) throw InputError("graph needs at least one vertex");
  std::set<std::pair<int, int>> seen;
  for (auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= vertex_count || v >= vertex_count) {
      throw InputError("edge endpoint out of range");
    }
    if (u == v) throw InputError("self-loop at vertex " + std::to_string(u));
    if (u > v) std::swap(u, v);
    if (!seen.insert({u, v}).second) throw InputError("duplicate edge");
  }
  return GraphSpec{vertex_count, std::move(edges)};
}

ExperimentInstance gaussian_instance(int n, int d, std::uint64_t seed, double lambda) {
  if (n < 1 || d < 1) throw InputError("n and d must be at least 1");
  CounterRng rng(seed);
  Matrix a(d, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < d; ++i) {
      a(i, j) = rng.normal(static_cast<std::uint64_t>(j) * d + i);
    }
  }
  return ExperimentInstance(std::move(a), lambda);
}

namespace {

bool parse_number(const std::string& cell, double& out) {
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (*(end - 1) == ' ' || *(end - 1) == '\t' || *(end - 1) == '\r')) --end;
  if (begin == end) return false;
  const auto result = std::from_chars(begin, end, out);
  return result.ec == std::errc() && result.ptr == end;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

ExperimentInstance load_csv(const std::string& path, bool normalize, double lambda) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);

  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  bool first_data_line = true;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    if (!line.empty() && line[0] == '#') continue;
    const auto cells = split_line(line);
    std::vector<double> row(cells.size());
    bool all_numeric = true;
    std::size_t bad_col = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!parse_number(cells[c], row[c])) {
        all_numeric = false;
        bad_col = c;
        break;
      }
    }
    if (!all_numeric) {
      if (first_data_line) {
        first_data_line = false;  // header row
        continue;
      }
      throw InputError(path + ": non-numeric cell at row " + std::to_string(line_no) +
                       ", column " + std::to_string(bad_col + 1));
    }
    if (rows.empty()) {
      width = row.size();
    } else if (row.size() != width) {
      throw InputError(path + ": ragged row " + std::to_string(line_no) + " has " +
                       std::to_string(row.size()) + " cells, expected " + std::to_string(width));
    }
    first_data_line = false;
    rows.push_back(std::move(row));
  }
  if (rows.empty() || width == 0) throw InputError(path + ": no numeric data");

  const int n = static_cast<int>(rows.size());
  const int d_raw = static_cast<int>(width);
  Matrix a(d_raw, n);  // feature r of experiment c
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < d_raw; ++r) a(r, c) = rows[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)];
  }

  if (normalize) {
    std::vector<int> kept;
    for (int r = 0; r < d_raw; ++r) {
      if (a.row(r).cwiseAbs().maxCoeff() > 0.0) kept.push_back(r);
    }
    if (kept.empty()) throw InputError(path + ": all features are zero");
    Matrix b(static_cast<int>(kept.size()), n);
    for (std::size_t r = 0; r < kept.size(); ++r) {
      const auto row = a.row(kept[r]);
      const double lo = row.minCoeff();
      const double hi = row.maxCoeff();
      if (hi > lo) {
        b.row(static_cast<int>(r)) = ((row.array() - lo) / (hi - lo)).matrix();
      } else {
        b.row(static_cast<int>(r)).setZero();
      }
    }
    a = std::move(b);
  }
  return ExperimentInstance(std::move(a), lambda);
}

void write_csv(const std::string& path, const ExperimentInstance& instance) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out.precision(17);
  for (int c = 0; c < instance.n(); ++c) {
    for (int r = 0; r < instance.d(); ++r) {
      if (r) out << ',';
      out << instance.vectors()(r, c);
    }
    out << '\n';
  }
}

IndependentSetInstance independent_set_instance(const GraphSpec& graph) {
  const int n = graph.vertex_count;
  if (n < 2) throw InputError("graph instance needs at least two vertices");

  Matrix c = Matrix::Zero(n, n);
  c.diagonal().setConstant(static_cast<double>(n));
  for (const auto& [u, v] : graph.edges) {
    c(u, v) = 1.0;
    c(v, u) = 1.0;
  }

  SpectralDecomposition eig = symmetric_eigendecomposition(c);
  const double lambda = eig.eigenvalues[n - 1];
  if (!(lambda > 0.0)) throw NumericError("graph matrix is not positive definite");

  // C - lambda I is singular PSD by construction, so take the symmetric
  // square root through the eigenvectors instead of a Cholesky factor.
  Vector shifted = (eig.eigenvalues.array() - lambda).cwiseMax(0.0);
  Matrix root = eig.eigenvectors * shifted.cwiseSqrt().asDiagonal() *
                eig.eigenvectors.transpose();
  root = 0.5 * (root + root.transpose());
  return {ExperimentInstance(std::move(root), lambda), std::move(c)};
}

bool independent_set_certificate(const Matrix& c, const std::vector<int>& subset, int n) {
  validate_subset(subset, static_cast<int>(c.rows()));
  const int k = static_cast<int>(subset.size());
  if (k == 0) return true;
  Matrix css(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      css(i, j) = c(subset[static_cast<std::size_t>(i)], subset[static_cast<std::size_t>(j)]);
    }
  }
  const double trace_inv = css.llt().solve(Matrix::Identity(k, k)).trace();
  return trace_inv <= static_cast<double>(k) / n + 1e-9;
}

unsigned long long subset_count(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned long long count = 1;
  for (int i = 1; i <= k; ++i) {
    const auto factor = static_cast<unsigned long long>(n - k + i);
    if (count > std::numeric_limits<unsigned long long>::max() / factor) {
      return std::numeric_limits<unsigned long long>::max();
    }
    count = count * factor / static_cast<unsigned long long>(i);
  }
  return count;
}

Selection brute_force(const ExperimentInstance& instance, int k) {
  const int n = instance.n();
  if (k < 0 || k > n) throw InputError("k out of range");
  const auto total = subset_count(n, k);
  if (total > 1000000ull) {
    throw InputError("brute force refused: " + std::to_string(total) + " subsets exceed 1e6");
  }

  Selection best;
  best.provenance = Provenance::BruteForce;
  best.objective = std::numeric_limits<double>::infinity();

  std::vector<int> subset(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) subset[static_cast<std::size_t>(i)] = i;
  while (true) {
    const double value = objective_value(instance, subset);
    // Strict improvement keeps the lexicographically first optimum.
    if (value < best.objective) {
      best.objective = value;
      best.indices = subset;
    }
    // Advance to the next combination in lexicographic order.
    int pos = k - 1;
    while (pos >= 0 && subset[static_cast<std::size_t>(pos)] == n - k + pos) --pos;
    if (pos < 0) break;
    ++subset[static_cast<std::size_t>(pos)];
    for (int j = pos + 1; j < k; ++j) {
      subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return best;
}

}  // namespace raopt
