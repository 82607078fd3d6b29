#include "morphoevo/evolve.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "morphoevo/serialize.hpp"

namespace morphoevo {

std::string to_string(InheritanceSystem s) { return s == InheritanceSystem::Lamarckian ? "lamarckian" : "darwinian"; }

InheritanceSystem inheritance_system_from_string(const std::string& s) {
  if (s == "lamarckian") return InheritanceSystem::Lamarckian;
  if (s == "darwinian") return InheritanceSystem::Darwinian;
  throw std::invalid_argument("unknown evolutionary system: " + s);
}

void EvoConfig::validate() const {
  if (tournament_k < 2) throw std::invalid_argument("tournament size must be at least 2");
  if (pop_size < tournament_k) throw std::invalid_argument("population smaller than tournament size");
  if (offspring < 1) throw std::invalid_argument("need at least one offspring per generation");
  if (generations < 1) throw std::invalid_argument("need at least one generation");
  if (jobs < 1) throw std::invalid_argument("jobs must be positive");
  learn.validate();
  task.validate();
  surrogate.validate(task);
}

EvoConfig EvoConfig::desk_scale() {
  EvoConfig cfg;
  cfg.pop_size = 16;
  cfg.offspring = 8;
  cfg.generations = 10;
  cfg.learn.mu = 6;
  cfg.learn.iterations = 5;
  return cfg;
}

long RunArchive::assessments() const {
  long total = 0;
  for (const auto& ind : individuals) total += static_cast<long>(ind.learning_history.size());
  return total;
}

const Individual& select_tournament(std::span<const Individual* const> pool, int k, Rng& rng) {
  if (k < 1 || static_cast<std::size_t>(k) > pool.size()) throw std::invalid_argument("tournament larger than pool");
  std::vector<std::size_t> idx(pool.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  const Individual* best = nullptr;
  // Partial Fisher-Yates: the first k entries become a uniform draw without replacement.
  for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
    const std::size_t j = i + rng.index(idx.size() - i);
    std::swap(idx[i], idx[j]);
    const Individual* c = pool[idx[i]];
    if (best == nullptr || c->fitness_after > best->fitness_after ||
        (c->fitness_after == best->fitness_after && c->id < best->id)) {
      best = c;
    }
  }
  return *best;
}

namespace {

template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

struct Pending {
  Individual ind;
  std::uint64_t learn_seed = 0;
};

void develop(Pending& p, const EvoConfig& cfg, bool pinned) {
  Individual& ind = p.ind;
  if (!pinned) ind.body = decode(*ind.body_genome, cfg.query, ind.decode_seed);
  ind.body_hash = body_hash(ind.body);
  Rng rng(p.learn_seed);
  const BodyLearnResult learned = learn(ind.body, ind.brain, cfg.learn, cfg.task, cfg.surrogate, rng);
  ind.fitness_before = learned.result.initial_fitness;
  ind.fitness_after = learned.result.best_fitness;
  ind.learning_history.reserve(learned.result.history.size());
  for (const auto& a : learned.result.history) ind.learning_history.push_back(a.fitness);
  if (cfg.system == InheritanceSystem::Lamarckian) {
    ind.brain = writeback(ind.brain, ind.body, learned.network);
    ind.written_back = true;
  }
}

bool ranks_before(const Individual& a, const Individual& b) {
  if (a.fitness_after != b.fitness_after) return a.fitness_after > b.fitness_after;
  return a.id < b.id;
}

RunArchive run_impl(const EvoConfig& cfg, std::span<const MorphologyTree> fixed_bodies) {
  cfg.validate();
  const bool pinned = cfg.fixed_body;
  if (pinned && fixed_bodies.size() != static_cast<std::size_t>(cfg.pop_size)) throw BodyCountMismatch();

  RunArchive archive;
  archive.config = cfg;
  InnovationTracker tracker;

  auto commit = [&](std::vector<Pending>& batch) {
    parallel_for(batch.size(), cfg.jobs, [&](std::size_t i) { develop(batch[i], cfg, pinned); });
    for (auto& p : batch) archive.individuals.push_back(std::move(p.ind));
  };

  std::vector<Pending> batch(static_cast<std::size_t>(cfg.pop_size));
  for (int i = 0; i < cfg.pop_size; ++i) {
    Rng rng(derive_seed(cfg.master_seed, 0, static_cast<std::uint64_t>(i)));
    Individual& ind = batch[static_cast<std::size_t>(i)].ind;
    ind.id = i;
    ind.generation = 0;
    ind.lineage_slot = i;
    CppnGenome genome = random_cppn(rng);
    ind.brain = random_brain(rng);
    ind.decode_seed = rng.next();
    batch[static_cast<std::size_t>(i)].learn_seed = rng.next();
    if (pinned) {
      ind.body = fixed_bodies[static_cast<std::size_t>(i)];
      ind.body.validate();
    } else {
      ind.body_genome = std::move(genome);
    }
  }
  commit(batch);

  std::vector<int> population(static_cast<std::size_t>(cfg.pop_size));
  std::iota(population.begin(), population.end(), 0);
  auto rank = [&](std::vector<int>& ids) {
    std::stable_sort(ids.begin(), ids.end(),
                     [&](int a, int b) { return ranks_before(archive.individual(a), archive.individual(b)); });
  };
  rank(population);
  archive.generations.push_back({0, population});

  for (int g = 1; g < cfg.generations; ++g) {
    std::vector<const Individual*> pool;
    for (int id : population) pool.push_back(&archive.individual(id));

    // Reproduction is sequential so innovation ids do not depend on scheduling.
    batch.assign(static_cast<std::size_t>(cfg.offspring), Pending{});
    const int first_id = static_cast<int>(archive.individuals.size());
    for (int o = 0; o < cfg.offspring; ++o) {
      Rng rng(derive_seed(cfg.master_seed, static_cast<std::uint64_t>(g), static_cast<std::uint64_t>(o)));
      const Individual& a = select_tournament(pool, cfg.tournament_k, rng);
      std::vector<const Individual*> rest;
      for (const Individual* p : pool) {
        if (p != &a) rest.push_back(p);
      }
      const Individual& b = select_tournament(rest, std::min<int>(cfg.tournament_k, static_cast<int>(rest.size())), rng);

      Individual& child = batch[static_cast<std::size_t>(o)].ind;
      child.id = first_id + o;
      child.generation = g;
      child.parents = std::array<int, 2>{a.id, b.id};
      child.lineage_slot = a.lineage_slot;
      if (pinned) {
        child.body = fixed_bodies[static_cast<std::size_t>(a.lineage_slot)];
      } else {
        const CppnGenome crossed = crossover_body(*a.body_genome, a.fitness_after, *b.body_genome, b.fitness_after, rng);
        child.body_genome = mutate_body(crossed, cfg.body_mutation, tracker, rng);
      }
      child.brain = inherit_brain(a.brain, b.brain, cfg.brain_mutation, rng);
      child.decode_seed = rng.next();
      batch[static_cast<std::size_t>(o)].learn_seed = rng.next();
    }
    commit(batch);

    for (int o = 0; o < cfg.offspring; ++o) population.push_back(first_id + o);
    rank(population);
    population.resize(static_cast<std::size_t>(cfg.pop_size));
    archive.generations.push_back({g, population});
  }
  return archive;
}

}  // namespace

RunArchive run(const EvoConfig& cfg) {
  if (cfg.fixed_body) throw std::invalid_argument("fixed-body runs need bodies; use run_fixed_body");
  return run_impl(cfg, {});
}

RunArchive run_fixed_body(const EvoConfig& cfg, std::span<const MorphologyTree> bodies) {
  EvoConfig pinned = cfg;
  pinned.fixed_body = true;
  return run_impl(pinned, bodies);
}

}  // namespace morphoevo
