// morphoevo command-line interface: evolution runs, fixed-body controls,
// analysis, and body inspection.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "morphoevo/analysis.hpp"
#include "morphoevo/archive.hpp"
#include "morphoevo/decode.hpp"
#include "morphoevo/evolve.hpp"
#include "morphoevo/render.hpp"
#include "morphoevo/serialize.hpp"
#include "morphoevo/simulate.hpp"

namespace fs = std::filesystem;
using namespace morphoevo;

namespace {

struct EvolveArgs {
  std::string query = "bfs";
  std::string system = "lamarckian";
  std::uint64_t seed = 0;
  int runs = 1;
  int generations = 30;
  int pop = 50;
  int offspring = 25;
  int mu = 10;
  int learn_iterations = 10;
  int jobs = 1;
  bool desk_scale = false;
  std::string out;
};

struct Options {
  CLI::Option* generations = nullptr;
  CLI::Option* pop = nullptr;
  CLI::Option* offspring = nullptr;
  CLI::Option* mu = nullptr;
  CLI::Option* learn_iterations = nullptr;
};

void apply_desk_scale(EvolveArgs& a, const Options& o) {
  if (!a.desk_scale) return;
  const EvoConfig desk = EvoConfig::desk_scale();
  if (o.generations->count() == 0) a.generations = desk.generations;
  if (o.pop->count() == 0) a.pop = desk.pop_size;
  if (o.offspring->count() == 0) a.offspring = desk.offspring;
  if (o.mu->count() == 0) a.mu = desk.learn.mu;
  if (o.learn_iterations->count() == 0) a.learn_iterations = desk.learn.iterations;
}

EvoConfig config_from(const EvolveArgs& a) {
  EvoConfig cfg;
  cfg.query = query_mechanism_from_string(a.query);
  cfg.system = inheritance_system_from_string(a.system);
  cfg.generations = a.generations;
  cfg.pop_size = a.pop;
  cfg.offspring = a.offspring;
  cfg.learn.mu = a.mu;
  cfg.learn.iterations = a.learn_iterations;
  cfg.jobs = a.jobs;
  return cfg;
}

Options add_evolution_flags(CLI::App* cmd, EvolveArgs& a) {
  Options o;
  cmd->add_option("--query", a.query, "Query mechanism")->check(CLI::IsMember({"bfs", "random"}));
  cmd->add_option("--system", a.system, "Evolutionary system")->check(CLI::IsMember({"lamarckian", "darwinian"}));
  o.generations = cmd->add_option("--generations", a.generations, "Generations, including generation 0")
                      ->check(CLI::PositiveNumber);
  o.pop = cmd->add_option("--pop", a.pop, "Population size")->check(CLI::Range(2, 100000));
  o.offspring = cmd->add_option("--offspring", a.offspring, "Offspring per generation")->check(CLI::PositiveNumber);
  o.mu = cmd->add_option("--mu", a.mu, "RevDE population size")->check(CLI::Range(4, 100000));
  o.learn_iterations = cmd->add_option("--learn-iterations", a.learn_iterations, "RevDE generations")
                           ->check(CLI::PositiveNumber);
  cmd->add_option("--jobs", a.jobs, "Worker threads for offspring learning")->check(CLI::PositiveNumber);
  cmd->add_flag("--desk-scale", a.desk_scale, "pop 16, offspring 8, generations 10, mu 6, learn iterations 5");
  return o;
}

void ensure_writable(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
  const fs::path probe = dir / ".write_probe";
  {
    std::ofstream out(probe);
    if (!out) throw std::runtime_error("output directory is not writable: " + dir.string());
  }
  fs::remove(probe, ec);
}

ordered_json read_json_file(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  return ordered_json::parse(in);
}

void write_or_print(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + out);
  f << text;
}

struct BodySource {
  std::string genome;
  std::string body;
  std::string archive;
  int id = -1;
  std::string query = "bfs";
  std::uint64_t seed = 0;
};

void add_body_source(CLI::App* cmd, BodySource& s) {
  cmd->add_option("--genome", s.genome, "CPPN genome JSON file");
  cmd->add_option("--body", s.body, "Morphology JSON file");
  cmd->add_option("--archive", s.archive, "Run archive directory");
  cmd->add_option("--id", s.id, "Individual id within --archive");
  cmd->add_option("--query", s.query, "Query mechanism for --genome")->check(CLI::IsMember({"bfs", "random"}));
  cmd->add_option("--seed", s.seed, "Random Query decode seed for --genome");
}

MorphologyTree load_body(const BodySource& s) {
  const int sources = !s.genome.empty() + !s.body.empty() + !s.archive.empty();
  if (sources != 1) throw CLI::ValidationError("exactly one of --genome, --body, --archive is required");
  if (!s.genome.empty()) {
    return decode(cppn_from_json(read_json_file(s.genome)), query_mechanism_from_string(s.query), s.seed);
  }
  if (!s.body.empty()) return morphology_from_json(read_json_file(s.body));
  if (s.id < 0) throw CLI::ValidationError("--archive needs --id");
  return read_archive(s.archive).individual(s.id).body;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Body-brain co-evolution of modular robots with BFS and Random Query decoding"};
  app.set_config("--config", "", "Key-value config file; command-line flags take precedence");
  app.require_subcommand(1);

  // evolve
  EvolveArgs evo;
  auto* evolve_cmd = app.add_subcommand("evolve", "Run one or more evolution experiments");
  const Options evo_opts = add_evolution_flags(evolve_cmd, evo);
  evolve_cmd->add_option("--seed", evo.seed, "Master seed; run r uses a seed derived from (seed, r)");
  evolve_cmd->add_option("--runs", evo.runs, "Independent runs")->check(CLI::PositiveNumber);
  evolve_cmd->add_option("--out", evo.out, "Output directory (archives go to OUT/run_<r>)")->required();

  // fixed-body
  std::string fixed_source, fixed_out;
  std::optional<std::uint64_t> fixed_seed;
  EvolveArgs fixed;
  auto* fixed_cmd = app.add_subcommand("fixed-body", "Brain-only control run on the generation-0 bodies of an archive");
  fixed_cmd->add_option("--source", fixed_source, "Source archive")->required()->check(CLI::ExistingDirectory);
  fixed_cmd->add_option("--out", fixed_out, "Output archive directory")->required();
  fixed_cmd->add_option("--seed", fixed_seed, "Override the master seed (default: the source's)");
  fixed_cmd->add_option("--jobs", fixed.jobs, "Worker threads")->check(CLI::PositiveNumber);

  // analyze
  std::vector<std::string> analyze_runs, analyze_fixed;
  std::string analyze_out;
  std::optional<double> threshold;
  bool plot = false;
  auto* analyze_cmd = app.add_subcommand("analyze", "Emit figure data from run archives");
  analyze_cmd->add_option("archives", analyze_runs, "Evolved-body run archives")->required()->check(CLI::ExistingDirectory);
  analyze_cmd->add_option("--fixed", analyze_fixed, "Seed-paired fixed-body archives")->check(CLI::ExistingDirectory);
  analyze_cmd->add_option("--out", analyze_out, "Output directory")->required();
  analyze_cmd->add_option("--threshold", threshold, "Fitness threshold for the efficiency metric");
  analyze_cmd->add_flag("--plot", plot, "Also write SVG line charts");

  // render / decode
  BodySource render_src;
  std::string render_format = "ascii", render_out;
  auto* render_cmd = app.add_subcommand("render", "Draw the top-down projection of a body");
  add_body_source(render_cmd, render_src);
  render_cmd->add_option("--format", render_format, "ascii or svg")->check(CLI::IsMember({"ascii", "svg"}));
  render_cmd->add_option("--out", render_out, "Output file (default: stdout)");

  BodySource decode_src;
  auto* decode_cmd = app.add_subcommand("decode", "Decode a CPPN genome and print the morphology JSON");
  decode_cmd->add_option("--genome", decode_src.genome, "CPPN genome JSON file")->required()->check(CLI::ExistingFile);
  decode_cmd->add_option("--query", decode_src.query, "Query mechanism")->check(CLI::IsMember({"bfs", "random"}));
  decode_cmd->add_option("--seed", decode_src.seed, "Random Query seed");

  std::uint64_t genome_seed = 0;
  std::string genome_out;
  auto* genome_cmd = app.add_subcommand("random-genome", "Write a random initial CPPN genome");
  genome_cmd->add_option("--seed", genome_seed, "Seed");
  genome_cmd->add_option("--out", genome_out, "Output file (default: stdout)");

  // simulate
  std::string sim_archive, sim_trajectory;
  int sim_id = -1;
  auto* sim_cmd = app.add_subcommand("simulate", "Re-run one archived individual and optionally dump its trajectory");
  sim_cmd->add_option("--archive", sim_archive, "Run archive")->required()->check(CLI::ExistingDirectory);
  sim_cmd->add_option("--id", sim_id, "Individual id (needs a stored brain genome)")->required();
  sim_cmd->add_option("--trajectory", sim_trajectory, "Write t,px,py,target_index CSV at 5 Hz");

  std::vector<std::string> check_dirs;
  auto* check_cmd = app.add_subcommand("schema-check", "Validate run archives");
  check_cmd->add_option("archives", check_dirs, "Archive directories")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (evolve_cmd->parsed()) {
      apply_desk_scale(evo, evo_opts);
      const fs::path out = evo.out;
      ensure_writable(out);
      for (int r = 0; r < evo.runs; ++r) {
        EvoConfig cfg = config_from(evo);
        cfg.master_seed = derive_seed(evo.seed, static_cast<std::uint64_t>(r));
        const RunArchive archive = run(cfg);
        const fs::path dir = out / ("run_" + std::to_string(r));
        write_archive(dir, archive);
        std::cerr << "wrote " << dir.string() << " (" << archive.individuals.size() << " individuals, "
                  << archive.assessments() << " assessments)\n";
      }
    } else if (fixed_cmd->parsed()) {
      const RunArchive source = read_archive(fixed_source);
      EvoConfig cfg = source.config;
      cfg.fixed_body = false;
      cfg.jobs = fixed.jobs;
      if (fixed_seed) cfg.master_seed = *fixed_seed;
      ensure_writable(fixed_out);
      const auto bodies = generation_zero_bodies(source);
      const RunArchive archive = run_fixed_body(cfg, bodies);
      write_archive(fixed_out, archive);
      std::cerr << "wrote " << fixed_out << " (" << archive.individuals.size() << " individuals)\n";
    } else if (analyze_cmd->parsed()) {
      std::vector<RunArchive> runs, fixed_runs;
      std::vector<std::string> labels;
      for (const auto& d : analyze_runs) {
        runs.push_back(read_archive(d));
        labels.push_back(fs::path(d).filename().string().empty() ? d : fs::path(d).filename().string());
      }
      for (const auto& d : analyze_fixed) fixed_runs.push_back(read_archive(d));
      ensure_writable(analyze_out);
      write_analysis(analyze_out, labels, runs, fixed_runs, AnalyzeOptions{threshold, plot});
    } else if (render_cmd->parsed()) {
      const MorphologyTree body = load_body(render_src);
      write_or_print(render_format == "svg" ? render_svg(body) : render_ascii(body), render_out);
    } else if (decode_cmd->parsed()) {
      std::cout << to_json(load_body(decode_src)).dump(2) << '\n';
    } else if (genome_cmd->parsed()) {
      Rng rng(genome_seed);
      write_or_print(to_json(random_cppn(rng)).dump(2) + "\n", genome_out);
    } else if (sim_cmd->parsed()) {
      const fs::path brain_file = fs::path(sim_archive) / "brains" / (std::to_string(sim_id) + ".bin");
      if (!fs::exists(brain_file)) throw std::runtime_error("no stored brain genome for individual " + std::to_string(sim_id));
      const RunArchive archive = read_archive(sim_archive);
      const Individual& ind = archive.individual(sim_id);
      const Evaluation e = evaluate(ind.body, read_brain_file(brain_file).genome, archive.config.task,
                                    archive.config.surrogate);
      std::cout << "fitness " << format_double(e.fitness) << " targets_reached " << e.trajectory.targets_reached
                << " path_length " << format_double(e.trajectory.path_length) << '\n';
      if (!sim_trajectory.empty()) {
        std::ofstream out(sim_trajectory, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + sim_trajectory);
        out << "t,px,py,target_index\n";
        for (const auto& s : e.trajectory.samples) {
          out << format_double(s.t) << ',' << format_double(s.px) << ',' << format_double(s.py) << ','
              << s.target_index << '\n';
        }
      }
    } else if (check_cmd->parsed()) {
      int bad = 0;
      for (const auto& d : check_dirs) {
        const auto problems = check_archive(d);
        for (const auto& p : problems) std::cerr << d << ": " << p << '\n';
        std::cout << d << ": " << (problems.empty() ? "ok" : "INVALID") << '\n';
        bad += !problems.empty();
      }
      return bad == 0 ? 0 : 1;
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "morphoevo: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
