#include "morphoevo/learn.hpp"

#include <algorithm>
#include <numeric>

namespace morphoevo {

void LearnConfig::validate() const {
  if (mu < 4) throw DegeneratePopulation();
  if (iterations < 1) throw std::invalid_argument("learning needs at least one iteration");
  if (!(scale >= 0.0 && scale <= 1.0)) throw std::invalid_argument("RevDE scale must lie in [0, 1]");
  if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) throw std::invalid_argument("crossover rate outside [0, 1]");
  if (!(init_sigma >= 0.0) || !(weight_bound > 0.0)) throw std::invalid_argument("bad init sigma or bound");
}

long LearnConfig::assessments() const {
  return static_cast<long>(mu) + static_cast<long>(iterations - 1) * 3L * mu;
}

std::array<std::vector<double>, 3> revde_triplet(std::span<const double> wi, std::span<const double> wj,
                                                 std::span<const double> wk, double scale) {
  const std::size_t n = wi.size();
  std::array<std::vector<double>, 3> v{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t d = 0; d < n; ++d) {
    v[0][d] = wi[d] + scale * (wj[d] - wk[d]);
    v[1][d] = wj[d] + scale * (wk[d] - v[0][d]);
    v[2][d] = wk[d] + scale * (v[0][d] - v[1][d]);
  }
  return v;
}

namespace {

struct Member {
  std::vector<double> w;
  double fitness = 0.0;
  long order = 0;  // assessment index, breaks fitness ties toward older samples
};

}  // namespace

LearnResult revde(std::span<const double> initial, const Objective& objective, const LearnConfig& cfg, Rng& rng) {
  cfg.validate();
  const std::size_t n = initial.size();
  const auto mu = static_cast<std::size_t>(cfg.mu);
  auto clamp = [&](std::vector<double>& w) {
    for (auto& x : w) x = std::clamp(x, -cfg.weight_bound, cfg.weight_bound);
  };

  LearnResult out;
  long next_index = 0;
  auto assess = [&](std::vector<double> w) {
    Member m{std::move(w), 0.0, next_index};
    m.fitness = objective(m.w);
    out.history.push_back({next_index, m.fitness});
    if (next_index == 0 || m.fitness > out.best_fitness) {
      out.best_fitness = m.fitness;
      out.best = m.w;
    }
    ++next_index;
    return m;
  };

  std::vector<Member> pop;
  pop.reserve(mu);
  pop.push_back(assess(std::vector<double>(initial.begin(), initial.end())));
  for (std::size_t s = 1; s < mu; ++s) {
    std::vector<double> w(initial.begin(), initial.end());
    for (auto& x : w) x += rng.normal(0.0, cfg.init_sigma);
    clamp(w);
    pop.push_back(assess(std::move(w)));
  }
  out.initial_fitness = pop.front().fitness;

  for (int it = 1; it < cfg.iterations; ++it) {
    std::vector<Member> candidates;
    candidates.reserve(3 * mu);
    for (std::size_t i = 0; i < mu; ++i) {
      std::size_t j = rng.index(mu - 1);
      if (j >= i) ++j;
      std::size_t k = rng.index(mu - 2);
      for (std::size_t skip : {std::min(i, j), std::max(i, j)}) {
        if (k >= skip) ++k;
      }
      const std::array<std::size_t, 3> parents{i, j, k};
      auto mutants = revde_triplet(pop[i].w, pop[j].w, pop[k].w, cfg.scale);
      for (std::size_t m = 0; m < 3; ++m) {
        const auto& parent = pop[parents[m]].w;
        std::vector<double> trial = parent;
        const std::size_t forced = n == 0 ? 0 : rng.index(n);
        for (std::size_t d = 0; d < n; ++d) {
          if (d == forced || rng.bernoulli(cfg.crossover_rate)) trial[d] = mutants[m][d];
        }
        clamp(trial);
        candidates.push_back(assess(std::move(trial)));
      }
    }
    for (auto& c : candidates) pop.push_back(std::move(c));
    std::stable_sort(pop.begin(), pop.end(), [](const Member& a, const Member& b) {
      if (a.fitness != b.fitness) return a.fitness > b.fitness;
      return a.order < b.order;
    });
    pop.resize(mu);
  }
  return out;
}

BodyLearnResult learn(const MorphologyTree& body, const BrainGenome& inherited, const LearnConfig& cfg,
                      const TaskSpec& task, const SurrogateParams& params, Rng& rng) {
  const CpgLayout layout = cpg_layout(body);
  const std::vector<double> start = extract_weights(layout, inherited);
  auto objective = [&](std::span<const double> w) {
    return evaluate_network(body, instantiate(layout, w), task, params).fitness;
  };
  BodyLearnResult out;
  out.result = revde(start, objective, cfg, rng);
  out.best.values = out.result.best;
  out.best.cells = layout.cells;
  out.network = instantiate(layout, out.best.values);
  return out;
}

}  // namespace morphoevo
