#include "morphoevo/archive.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace morphoevo {

namespace fs = std::filesystem;

ordered_json to_json(const EvoConfig& cfg) {
  ordered_json j;
  j["schema_version"] = kArchiveSchemaVersion;
  j["code_version"] = kCodeVersion;
  j["pop_size"] = cfg.pop_size;
  j["offspring"] = cfg.offspring;
  j["generations"] = cfg.generations;
  j["tournament_k"] = cfg.tournament_k;
  j["system"] = to_string(cfg.system);
  j["query"] = to_string(cfg.query);
  j["master_seed"] = cfg.master_seed;
  j["fixed_body"] = cfg.fixed_body;
  j["learn"] = {{"mu", cfg.learn.mu},
                {"iterations", cfg.learn.iterations},
                {"scale", cfg.learn.scale},
                {"crossover_rate", cfg.learn.crossover_rate},
                {"init_sigma", cfg.learn.init_sigma},
                {"weight_bound", cfg.learn.weight_bound}};
  j["body_mutation"] = {{"weight_rate", cfg.body_mutation.weight_rate},
                        {"weight_sigma", cfg.body_mutation.weight_sigma},
                        {"add_connection_rate", cfg.body_mutation.add_connection_rate},
                        {"add_node_rate", cfg.body_mutation.add_node_rate},
                        {"toggle_rate", cfg.body_mutation.toggle_rate}};
  j["brain_mutation"] = {{"rate", cfg.brain_mutation.rate}, {"sigma", cfg.brain_mutation.sigma}};
  ordered_json targets = ordered_json::array();
  for (const auto& t : cfg.task.targets) targets.push_back({t[0], t[1]});
  j["task"] = {{"targets", targets},
               {"duration", cfg.task.duration},
               {"sample_rate", cfg.task.sample_rate},
               {"reach_radius", cfg.task.reach_radius},
               {"arena_half", cfg.task.arena_half},
               {"omega", cfg.task.omega}};
  j["surrogate"] = {{"v_max", cfg.surrogate.v_max},
                    {"k_turn", cfg.surrogate.k_turn},
                    {"k_steer", cfg.surrogate.k_steer},
                    {"dt", cfg.surrogate.dt}};
  return j;
}

namespace {

template <typename T>
void read_field(const ordered_json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

EvoConfig evo_config_from_json(const ordered_json& j) {
  EvoConfig cfg;
  read_field(j, "pop_size", cfg.pop_size);
  read_field(j, "offspring", cfg.offspring);
  read_field(j, "generations", cfg.generations);
  read_field(j, "tournament_k", cfg.tournament_k);
  if (j.contains("system")) cfg.system = inheritance_system_from_string(j.at("system").get<std::string>());
  if (j.contains("query")) cfg.query = query_mechanism_from_string(j.at("query").get<std::string>());
  read_field(j, "master_seed", cfg.master_seed);
  read_field(j, "fixed_body", cfg.fixed_body);
  if (j.contains("learn")) {
    const auto& l = j.at("learn");
    read_field(l, "mu", cfg.learn.mu);
    read_field(l, "iterations", cfg.learn.iterations);
    read_field(l, "scale", cfg.learn.scale);
    read_field(l, "crossover_rate", cfg.learn.crossover_rate);
    read_field(l, "init_sigma", cfg.learn.init_sigma);
    read_field(l, "weight_bound", cfg.learn.weight_bound);
  }
  if (j.contains("body_mutation")) {
    const auto& b = j.at("body_mutation");
    read_field(b, "weight_rate", cfg.body_mutation.weight_rate);
    read_field(b, "weight_sigma", cfg.body_mutation.weight_sigma);
    read_field(b, "add_connection_rate", cfg.body_mutation.add_connection_rate);
    read_field(b, "add_node_rate", cfg.body_mutation.add_node_rate);
    read_field(b, "toggle_rate", cfg.body_mutation.toggle_rate);
  }
  if (j.contains("brain_mutation")) {
    read_field(j.at("brain_mutation"), "rate", cfg.brain_mutation.rate);
    read_field(j.at("brain_mutation"), "sigma", cfg.brain_mutation.sigma);
  }
  if (j.contains("task")) {
    const auto& t = j.at("task");
    if (t.contains("targets")) {
      cfg.task.targets.clear();
      for (const auto& p : t.at("targets")) cfg.task.targets.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    }
    read_field(t, "duration", cfg.task.duration);
    read_field(t, "sample_rate", cfg.task.sample_rate);
    read_field(t, "reach_radius", cfg.task.reach_radius);
    read_field(t, "arena_half", cfg.task.arena_half);
    read_field(t, "omega", cfg.task.omega);
  }
  if (j.contains("surrogate")) {
    const auto& s = j.at("surrogate");
    read_field(s, "v_max", cfg.surrogate.v_max);
    read_field(s, "k_turn", cfg.surrogate.k_turn);
    read_field(s, "k_steer", cfg.surrogate.k_steer);
    read_field(s, "dt", cfg.surrogate.dt);
  }
  return cfg;
}

namespace {

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

std::string parents_field(const Individual& ind) {
  if (!ind.parents) return "";
  return std::to_string((*ind.parents)[0]) + ";" + std::to_string((*ind.parents)[1]);
}

void write_row(std::ostream& out, int generation, const Individual& ind) {
  out << generation << ',' << ind.id << ',' << parents_field(ind) << ',' << format_double(ind.fitness_before) << ','
      << format_double(ind.fitness_after) << ',' << ind.body.size() << ','
      << ind.body.count(ModuleKind::ActiveHinge) << ',' << hex64(ind.body_hash) << '\n';
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p, const std::string& header) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::string line;
  if (!std::getline(in, line) || line != header) throw std::runtime_error("unexpected header in " + p.string());
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (!line.empty()) rows.push_back(split(line, ','));
  }
  return rows;
}

}  // namespace

void write_archive(const fs::path& dir, const RunArchive& archive) {
  std::error_code ec;
  fs::create_directories(dir / "brains", ec);
  if (ec) throw std::runtime_error("cannot create archive directory " + dir.string() + ": " + ec.message());

  {
    auto out = open_out(dir / "config.json");
    out << to_json(archive.config).dump(2) << '\n';
  }
  {
    auto out = open_out(dir / "individuals.csv");
    out << kGenerationCsvHeader << '\n';
    for (const auto& ind : archive.individuals) write_row(out, ind.generation, ind);
  }
  {
    auto out = open_out(dir / "population.csv");
    out << kGenerationCsvHeader << '\n';
    for (const auto& gen : archive.generations) {
      for (int id : gen.population) write_row(out, gen.generation, archive.individual(id));
    }
  }
  {
    auto out = open_out(dir / "learning_log.csv");
    out << kLearningLogHeader << '\n';
    for (const auto& ind : archive.individuals) {
      for (std::size_t a = 0; a < ind.learning_history.size(); ++a) {
        out << ind.id << ',' << a << ',' << format_double(ind.learning_history[a]) << '\n';
      }
    }
  }
  {
    auto out = open_out(dir / "genomes.jsonl");
    for (const auto& ind : archive.individuals) {
      ordered_json j;
      j["id"] = ind.id;
      j["generation"] = ind.generation;
      j["lineage_slot"] = ind.lineage_slot;
      j["decode_seed"] = ind.decode_seed;
      j["written_back"] = ind.written_back;
      j["morphology"] = to_json(ind.body);
      j["cppn"] = ind.body_genome ? to_json(*ind.body_genome) : ordered_json(nullptr);
      out << j.dump() << '\n';
    }
  }
  std::set<int> with_brain;
  for (const auto& ind : archive.individuals) {
    if (ind.generation == 0) with_brain.insert(ind.id);
  }
  if (!archive.generations.empty()) {
    for (int id : archive.generations.back().population) with_brain.insert(id);
  }
  for (int id : with_brain) {
    write_brain_file(dir / "brains" / (std::to_string(id) + ".bin"), archive.individual(id).brain,
                     archive.config.master_seed);
  }
}

RunArchive read_archive(const fs::path& dir) {
  RunArchive archive;
  {
    std::ifstream in(dir / "config.json");
    if (!in) throw std::runtime_error("not an archive (missing config.json): " + dir.string());
    archive.config = evo_config_from_json(ordered_json::parse(in));
  }
  for (const auto& r : read_csv(dir / "individuals.csv", kGenerationCsvHeader)) {
    if (r.size() != 8) throw std::runtime_error("malformed individuals.csv row");
    Individual ind;
    ind.generation = std::stoi(r[0]);
    ind.id = std::stoi(r[1]);
    if (!r[2].empty()) {
      const auto p = split(r[2], ';');
      ind.parents = std::array<int, 2>{std::stoi(p.at(0)), std::stoi(p.at(1))};
    }
    ind.fitness_before = std::stod(r[3]);
    ind.fitness_after = std::stod(r[4]);
    ind.body_hash = std::stoull(r[7], nullptr, 16);
    if (ind.id != static_cast<int>(archive.individuals.size())) throw std::runtime_error("individual ids out of order");
    archive.individuals.push_back(std::move(ind));
  }
  for (const auto& r : read_csv(dir / "population.csv", kGenerationCsvHeader)) {
    const int g = std::stoi(r.at(0));
    if (archive.generations.empty() || archive.generations.back().generation != g) {
      archive.generations.push_back({g, {}});
    }
    archive.generations.back().population.push_back(std::stoi(r.at(1)));
  }
  for (const auto& r : read_csv(dir / "learning_log.csv", kLearningLogHeader)) {
    archive.individuals.at(static_cast<std::size_t>(std::stoi(r.at(0)))).learning_history.push_back(std::stod(r.at(2)));
  }
  {
    std::ifstream in(dir / "genomes.jsonl");
    if (!in) throw std::runtime_error("missing genomes.jsonl in " + dir.string());
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto j = ordered_json::parse(line);
      Individual& ind = archive.individuals.at(j.at("id").get<std::size_t>());
      ind.lineage_slot = j.at("lineage_slot").get<int>();
      ind.decode_seed = j.at("decode_seed").get<std::uint64_t>();
      ind.written_back = j.at("written_back").get<bool>();
      ind.body = morphology_from_json(j.at("morphology"));
      if (!j.at("cppn").is_null()) ind.body_genome = cppn_from_json(j.at("cppn"));
    }
  }
  for (auto& ind : archive.individuals) {
    const fs::path p = dir / "brains" / (std::to_string(ind.id) + ".bin");
    if (fs::exists(p)) ind.brain = read_brain_file(p).genome;
  }
  return archive;
}

std::vector<MorphologyTree> generation_zero_bodies(const RunArchive& archive) {
  std::vector<MorphologyTree> bodies;
  for (const auto& ind : archive.individuals) {
    if (ind.generation == 0) bodies.push_back(ind.body);
  }
  return bodies;
}

std::vector<std::string> check_archive(const fs::path& dir) {
  std::vector<std::string> problems;
  try {
    std::ifstream in(dir / "config.json");
    if (!in) return {"missing config.json"};
    const auto cfg = ordered_json::parse(in);
    if (cfg.value("schema_version", -1) != kArchiveSchemaVersion) problems.push_back("unsupported schema_version");
  } catch (const std::exception& e) {
    return {std::string("config.json: ") + e.what()};
  }
  try {
    const RunArchive a = read_archive(dir);
    for (const auto& ind : a.individuals) {
      if (body_hash(ind.body) != ind.body_hash) {
        problems.push_back("body hash mismatch for individual " + std::to_string(ind.id));
      }
      if (ind.body_genome && !a.config.fixed_body &&
          body_hash(decode(*ind.body_genome, a.config.query, ind.decode_seed)) != ind.body_hash) {
        problems.push_back("body genome does not decode to stored body for individual " + std::to_string(ind.id));
      }
      if (ind.learning_history.size() != static_cast<std::size_t>(a.config.learn.assessments())) {
        problems.push_back("assessment count mismatch for individual " + std::to_string(ind.id));
      }
    }
    for (const auto& g : a.generations) {
      if (g.population.size() != static_cast<std::size_t>(a.config.pop_size)) {
        problems.push_back("population size mismatch in generation " + std::to_string(g.generation));
      }
    }
    const auto expected = static_cast<std::size_t>(a.config.pop_size) +
                          static_cast<std::size_t>(a.config.offspring) * (a.generations.size() - 1);
    if (a.individuals.size() != expected) problems.push_back("individual count mismatch");
  } catch (const std::exception& e) {
    problems.push_back(e.what());
  }
  return problems;
}

}  // namespace morphoevo
