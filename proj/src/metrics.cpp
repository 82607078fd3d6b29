#include "morphoevo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include <Eigen/Dense>

namespace morphoevo {

LabeledTree labeled_tree(const MorphologyTree& tree) {
  LabeledTree t;
  t.labels.resize(static_cast<std::size_t>(tree.size()));
  t.children.resize(static_cast<std::size_t>(tree.size()));
  for (int i = 0; i < tree.size(); ++i) {
    const Module& m = tree.module(i);
    t.labels[static_cast<std::size_t>(i)] = static_cast<int>(m.kind) * 2 + static_cast<int>(m.rotation);
    t.children[static_cast<std::size_t>(i)] = tree.children(i);
  }
  return t;
}

namespace {

struct Postorder {
  std::vector<int> labels;    // by postorder position, 1-based
  std::vector<int> leftmost;  // leftmost leaf descendant, 1-based
  std::vector<int> keyroots;
};

Postorder postorder(const LabeledTree& t) {
  Postorder p;
  const std::size_t n = t.labels.size();
  p.labels.assign(n + 1, 0);
  p.leftmost.assign(n + 1, 0);
  int counter = 0;
  std::function<int(int)> visit = [&](int node) {
    int first_leaf = 0;
    for (int c : t.children[static_cast<std::size_t>(node)]) {
      const int l = visit(c);
      if (first_leaf == 0) first_leaf = l;
    }
    const int pos = ++counter;
    p.labels[static_cast<std::size_t>(pos)] = t.labels[static_cast<std::size_t>(node)];
    p.leftmost[static_cast<std::size_t>(pos)] = first_leaf == 0 ? pos : first_leaf;
    return p.leftmost[static_cast<std::size_t>(pos)];
  };
  if (n > 0) visit(0);
  // Keyroots: the highest node for each distinct leftmost leaf.
  std::map<int, int> highest;
  for (int i = 1; i <= static_cast<int>(n); ++i) highest[p.leftmost[static_cast<std::size_t>(i)]] = i;
  for (const auto& [leaf, node] : highest) p.keyroots.push_back(node);
  std::sort(p.keyroots.begin(), p.keyroots.end());
  return p;
}

}  // namespace

int tree_edit_distance(const LabeledTree& a, const LabeledTree& b) {
  const Postorder pa = postorder(a);
  const Postorder pb = postorder(b);
  const int na = static_cast<int>(a.labels.size());
  const int nb = static_cast<int>(b.labels.size());
  if (na == 0 || nb == 0) return na + nb;

  std::vector<std::vector<int>> td(static_cast<std::size_t>(na + 1), std::vector<int>(static_cast<std::size_t>(nb + 1), 0));
  std::vector<std::vector<int>> fd(static_cast<std::size_t>(na + 2), std::vector<int>(static_cast<std::size_t>(nb + 2), 0));
  auto at = [](std::vector<std::vector<int>>& m, int i, int j) -> int& {
    return m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  };

  for (int ki : pa.keyroots) {
    for (int kj : pb.keyroots) {
      const int li = pa.leftmost[static_cast<std::size_t>(ki)];
      const int lj = pb.leftmost[static_cast<std::size_t>(kj)];
      // fd is indexed with offsets: row r means forest l(ki)..r, r = li-1 is empty.
      at(fd, li - 1, lj - 1) = 0;
      for (int i = li; i <= ki; ++i) at(fd, i, lj - 1) = at(fd, i - 1, lj - 1) + 1;
      for (int j = lj; j <= kj; ++j) at(fd, li - 1, j) = at(fd, li - 1, j - 1) + 1;
      for (int i = li; i <= ki; ++i) {
        for (int j = lj; j <= kj; ++j) {
          const int del = at(fd, i - 1, j) + 1;
          const int ins = at(fd, i, j - 1) + 1;
          if (pa.leftmost[static_cast<std::size_t>(i)] == li && pb.leftmost[static_cast<std::size_t>(j)] == lj) {
            const int rel = at(fd, i - 1, j - 1) +
                            (pa.labels[static_cast<std::size_t>(i)] == pb.labels[static_cast<std::size_t>(j)] ? 0 : 1);
            at(fd, i, j) = std::min({del, ins, rel});
            at(td, i, j) = at(fd, i, j);
          } else {
            const int sub = at(fd, pa.leftmost[static_cast<std::size_t>(i)] - 1, pb.leftmost[static_cast<std::size_t>(j)] - 1) +
                            at(td, i, j);
            at(fd, i, j) = std::min({del, ins, sub});
          }
        }
      }
    }
  }
  return at(td, na, nb);
}

int tree_edit_distance(const MorphologyTree& a, const MorphologyTree& b) {
  return tree_edit_distance(labeled_tree(a), labeled_tree(b));
}

double mean_pairwise_distance(std::span<const MorphologyTree> bodies) {
  if (bodies.size() < 2) return 0.0;
  std::vector<LabeledTree> trees;
  trees.reserve(bodies.size());
  for (const auto& b : bodies) trees.push_back(labeled_tree(b));
  double total = 0.0;
  long pairs = 0;
  for (std::size_t i = 0; i < trees.size(); ++i) {
    for (std::size_t j = i + 1; j < trees.size(); ++j) {
      total += tree_edit_distance(trees[i], trees[j]);
      ++pairs;
    }
  }
  return total / static_cast<double>(pairs);
}

int max_limbs(int modules) {
  if (modules <= 1) return 0;
  if (modules <= 5) return modules - 1;
  // Core saturated with 4 leaves; every 3 further modules turn one leaf into 3.
  const int extra = modules - 5;
  return 4 + 2 * (extra / 3) + std::max(0, extra % 3 - 1);
}

namespace {

double ratio(double num, double den) { return den > 0.0 ? std::clamp(num / den, 0.0, 1.0) : 0.0; }

}  // namespace

TraitVector traits(const MorphologyTree& body) {
  TraitVector t;
  const int m = body.size();

  int branching_modules = 0;
  int leaves = 0;
  int longest = 0;
  for (int i = 0; i < m; ++i) {
    const auto kids = body.children(i);
    if (kids.size() >= 3) ++branching_modules;
    if (i != 0 && kids.empty()) ++leaves;
    longest = std::max(longest, body.module(i).tree_depth);
  }
  t.branching = ratio(branching_modules, std::max(0, (m - 2) / 2));
  t.rel_num_limbs = ratio(leaves, max_limbs(m));
  t.rel_length_of_limbs = ratio(longest, m - 1);

  std::set<std::pair<int, int>> occupied;
  int min_x = 0, max_x = 0, min_y = 0, max_y = 0;
  for (const auto& mod : body.modules()) {
    const int x = mod.position[0];
    const int y = mod.position[1];
    occupied.insert({x, y});
    min_x = std::min(min_x, x);
    max_x = std::max(max_x, x);
    min_y = std::min(min_y, y);
    max_y = std::max(max_y, y);
  }
  const int width = max_x - min_x + 1;
  const int height = max_y - min_y + 1;
  t.coverage = ratio(m, width * height);
  t.rel_num_joints = ratio(body.count(ModuleKind::ActiveHinge), m);
  t.rel_num_bricks = ratio(body.count(ModuleKind::Brick), m);
  t.proportion_2d = ratio(std::min(width, height), std::max(width, height));

  int limbs_cells = 0, x_mirror = 0, y_mirror = 0;
  for (const auto& [x, y] : occupied) {
    if (x == 0 && y == 0) continue;
    ++limbs_cells;
    x_mirror += occupied.count({-x, y}) > 0;
    y_mirror += occupied.count({x, -y}) > 0;
  }
  t.symmetry = std::max(ratio(x_mirror, limbs_cells), ratio(y_mirror, limbs_cells));
  return t;
}

double learning_delta(const Individual& ind) { return ind.fitness_after - ind.fitness_before; }

std::vector<double> learning_delta_by_generation(const RunArchive& archive) {
  const std::size_t gens = archive.generations.size();
  std::vector<double> sum(gens, 0.0);
  std::vector<int> count(gens, 0);
  for (const auto& ind : archive.individuals) {
    const auto g = static_cast<std::size_t>(ind.generation);
    if (g >= gens) continue;
    sum[g] += learning_delta(ind);
    ++count[g];
  }
  for (std::size_t g = 0; g < gens; ++g) sum[g] = count[g] > 0 ? sum[g] / count[g] : 0.0;
  return sum;
}

std::vector<double> morphological_intelligence(std::span<const double> evolved_deltas,
                                               std::span<const double> fixed_deltas) {
  const std::size_t n = std::min(evolved_deltas.size(), fixed_deltas.size());
  std::vector<double> out(n);
  for (std::size_t g = 0; g < n; ++g) out[g] = evolved_deltas[g] - fixed_deltas[g];
  return out;
}

std::vector<double> morphological_intelligence(const RunArchive& evolved, const RunArchive& fixed) {
  const auto e = learning_delta_by_generation(evolved);
  const auto f = learning_delta_by_generation(fixed);
  return morphological_intelligence(e, f);
}

double trend_slope(std::span<const double> y) {
  const std::size_t n = y.size();
  if (n < 2) return 0.0;
  const double mean_x = (static_cast<double>(n) - 1.0) / 2.0;
  double mean_y = 0.0;
  for (double v : y) mean_y += v;
  mean_y /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = static_cast<double>(i) - mean_x;
    sxy += dx * (y[i] - mean_y);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

double PcaResult::loading(std::size_t pc, std::size_t c) const {
  for (std::size_t k = 0; k < kept_columns.size(); ++k) {
    if (kept_columns[k] == c) return components.at(pc)[k];
  }
  return 0.0;
}

PcaResult pca(const std::vector<std::vector<double>>& samples) {
  if (samples.size() < 3) throw TooFewSamples();
  const std::size_t n = samples.size();
  const std::size_t d = samples.front().size();
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i) {
    if (samples[i].size() != d) throw std::invalid_argument("PCA samples must share a dimension");
    for (std::size_t j = 0; j < d; ++j) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = samples[i][j];
  }

  PcaResult out;
  std::vector<Eigen::VectorXd> columns;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    Eigen::VectorXd col = x.col(j);
    const double mean = col.mean();
    col.array() -= mean;
    const double sd = std::sqrt(col.squaredNorm() / static_cast<double>(n - 1));
    if (sd < 1e-12) continue;
    columns.push_back(col / sd);
    out.kept_columns.push_back(static_cast<std::size_t>(j));
  }
  const auto k = static_cast<Eigen::Index>(columns.size());
  Eigen::MatrixXd z(static_cast<Eigen::Index>(n), k);
  for (Eigen::Index j = 0; j < k; ++j) z.col(j) = columns[static_cast<std::size_t>(j)];

  if (k > 0) {
    const Eigen::MatrixXd cov = (z.transpose() * z) / static_cast<double>(n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    // Eigen sorts ascending.
    const Eigen::VectorXd values = solver.eigenvalues().reverse();
    Eigen::MatrixXd vectors = solver.eigenvectors().rowwise().reverse();
    for (Eigen::Index c = 0; c < k; ++c) {
      Eigen::Index arg = 0;
      vectors.col(c).cwiseAbs().maxCoeff(&arg);
      if (vectors(arg, c) < 0.0) vectors.col(c) *= -1.0;
    }
    const double total = values.sum();
    const Eigen::MatrixXd scores = z * vectors;
    for (Eigen::Index c = 0; c < k; ++c) {
      out.components.emplace_back(vectors.col(c).data(), vectors.col(c).data() + k);
      out.eigenvalues.push_back(std::max(values(c), 0.0));
      out.explained.push_back(total > 0.0 ? std::max(values(c), 0.0) / total : 0.0);
    }
    out.scores.assign(n, std::vector<double>(static_cast<std::size_t>(k)));
    out.standardized.assign(n, std::vector<double>(static_cast<std::size_t>(k)));
    for (std::size_t i = 0; i < n; ++i) {
      for (Eigen::Index c = 0; c < k; ++c) {
        out.scores[i][static_cast<std::size_t>(c)] = scores(static_cast<Eigen::Index>(i), c);
        out.standardized[i][static_cast<std::size_t>(c)] = z(static_cast<Eigen::Index>(i), c);
      }
    }
  } else {
    out.standardized.assign(n, {});
    out.scores.assign(n, {});
  }
  return out;
}

PcaResult pca_traits(std::span<const TraitVector> samples) {
  std::vector<std::vector<double>> rows;
  rows.reserve(samples.size());
  for (const auto& t : samples) {
    const auto a = t.as_array();
    rows.emplace_back(a.begin(), a.end());
  }
  return pca(rows);
}

}  // namespace morphoevo
