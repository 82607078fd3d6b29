#include "morphoevo/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "morphoevo/metrics.hpp"
#include "morphoevo/render.hpp"
#include "morphoevo/serialize.hpp"

namespace morphoevo {

namespace fs = std::filesystem;

std::vector<double> population_mean_fitness(const RunArchive& archive) {
  std::vector<double> out;
  for (const auto& g : archive.generations) {
    double sum = 0.0;
    for (int id : g.population) sum += archive.individual(id).fitness_after;
    out.push_back(g.population.empty() ? 0.0 : sum / static_cast<double>(g.population.size()));
  }
  return out;
}

std::vector<double> population_max_fitness(const RunArchive& archive) {
  std::vector<double> out;
  for (const auto& g : archive.generations) {
    double best = -std::numeric_limits<double>::infinity();
    for (int id : g.population) best = std::max(best, archive.individual(id).fitness_after);
    out.push_back(best);
  }
  return out;
}

std::vector<double> diversity_by_generation(const RunArchive& archive) {
  std::vector<double> out;
  for (const auto& g : archive.generations) {
    std::vector<MorphologyTree> bodies;
    for (int id : g.population) bodies.push_back(archive.individual(id).body);
    out.push_back(mean_pairwise_distance(bodies));
  }
  return out;
}

std::vector<MeanCi> mean_ci(const std::vector<std::vector<double>>& runs) {
  if (runs.empty()) return {};
  std::size_t len = runs.front().size();
  for (const auto& r : runs) len = std::min(len, r.size());
  const double n = static_cast<double>(runs.size());
  std::vector<MeanCi> out(len);
  for (std::size_t i = 0; i < len; ++i) {
    double sum = 0.0;
    for (const auto& r : runs) sum += r[i];
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& r : runs) ss += (r[i] - mean) * (r[i] - mean);
    const double se = runs.size() > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
    out[i] = {mean, 1.96 * se};
  }
  return out;
}

std::optional<long> first_assessment_reaching(const RunArchive& archive, double threshold) {
  long index = 0;
  for (const auto& ind : archive.individuals) {
    for (double f : ind.learning_history) {
      if (f >= threshold) return index;
      ++index;
    }
  }
  return std::nullopt;
}

namespace {

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

void write_text(const fs::path& p, const std::string& text) {
  auto out = open_out(p);
  out << text;
}

}  // namespace

void write_analysis(const fs::path& out_dir, const std::vector<std::string>& labels, const std::vector<RunArchive>& runs,
                    const std::vector<RunArchive>& fixed, const AnalyzeOptions& options) {
  if (runs.empty()) throw std::invalid_argument("analysis needs at least one archive");
  if (labels.size() != runs.size()) throw std::invalid_argument("one label per archive required");
  if (!fixed.empty() && fixed.size() != runs.size()) {
    throw std::invalid_argument("fixed-body archives must pair one-to-one with evolved archives");
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<std::vector<double>> means, maxes, diversity, deltas;
  for (const auto& r : runs) {
    means.push_back(population_mean_fitness(r));
    maxes.push_back(population_max_fitness(r));
    diversity.push_back(diversity_by_generation(r));
    deltas.push_back(learning_delta_by_generation(r));
  }

  const auto mean_band = mean_ci(means);
  const auto max_band = mean_ci(maxes);
  {
    auto out = open_out(out_dir / "fitness.csv");
    out << "generation,mean_fitness,mean_ci,max_fitness,max_ci,runs\n";
    for (std::size_t g = 0; g < mean_band.size(); ++g) {
      out << g << ',' << format_double(mean_band[g].mean) << ',' << format_double(mean_band[g].half_width) << ','
          << format_double(max_band[g].mean) << ',' << format_double(max_band[g].half_width) << ',' << runs.size()
          << '\n';
    }
  }
  {
    auto out = open_out(out_dir / "fitness_runs.csv");
    out << "run,generation,mean_fitness,max_fitness\n";
    for (std::size_t r = 0; r < runs.size(); ++r) {
      for (std::size_t g = 0; g < means[r].size(); ++g) {
        out << labels[r] << ',' << g << ',' << format_double(means[r][g]) << ',' << format_double(maxes[r][g]) << '\n';
      }
    }
  }
  {
    auto out = open_out(out_dir / "diversity.csv");
    out << "run,generation,mean_distance\n";
    for (std::size_t r = 0; r < runs.size(); ++r) {
      for (std::size_t g = 0; g < diversity[r].size(); ++g) {
        out << labels[r] << ',' << g << ',' << format_double(diversity[r][g]) << '\n';
      }
    }
  }
  {
    auto out = open_out(out_dir / "learning_delta.csv");
    out << "run,generation,mean_delta\n";
    for (std::size_t r = 0; r < runs.size(); ++r) {
      for (std::size_t g = 0; g < deltas[r].size(); ++g) {
        out << labels[r] << ',' << g << ',' << format_double(deltas[r][g]) << '\n';
      }
    }
  }

  std::vector<TraitVector> final_traits;
  std::vector<std::string> final_labels;
  {
    auto out = open_out(out_dir / "traits.csv");
    out << "run,generation,individual";
    for (const char* name : kTraitNames) out << ',' << name;
    out << '\n';
    for (std::size_t r = 0; r < runs.size(); ++r) {
      for (const auto& g : runs[r].generations) {
        for (int id : g.population) {
          const TraitVector t = traits(runs[r].individual(id).body);
          out << labels[r] << ',' << g.generation << ',' << id;
          for (double v : t.as_array()) out << ',' << format_double(v);
          out << '\n';
          if (&g == &runs[r].generations.back()) {
            final_traits.push_back(t);
            final_labels.push_back(labels[r] + ":" + std::to_string(id));
          }
        }
      }
    }
  }
  {
    auto out = open_out(out_dir / "pca.csv");
    out << "kind,label,pc1,pc2\n";
    if (final_traits.size() >= 3) {
      const PcaResult p = pca_traits(final_traits);
      auto comp = [&](const std::vector<double>& v, std::size_t c) { return c < v.size() ? v[c] : 0.0; };
      out << "explained,variance," << format_double(comp(p.explained, 0)) << ',' << format_double(comp(p.explained, 1))
          << '\n';
      for (std::size_t c = 0; c < kTraitNames.size(); ++c) {
        out << "loading," << kTraitNames[c] << ','
            << format_double(p.components.empty() ? 0.0 : p.loading(0, c)) << ','
            << format_double(p.components.size() < 2 ? 0.0 : p.loading(1, c)) << '\n';
      }
      for (std::size_t i = 0; i < final_traits.size(); ++i) {
        out << "score," << final_labels[i] << ',' << format_double(comp(p.scores[i], 0)) << ','
            << format_double(comp(p.scores[i], 1)) << '\n';
      }
    }
  }

  std::vector<std::vector<double>> mi;
  if (!fixed.empty()) {
    for (std::size_t r = 0; r < runs.size(); ++r) mi.push_back(morphological_intelligence(runs[r], fixed[r]));
    const auto band = mean_ci(mi);
    auto out = open_out(out_dir / "mi.csv");
    out << "generation,delta_of_delta,ci\n";
    for (std::size_t g = 0; g < band.size(); ++g) {
      out << g << ',' << format_double(band[g].mean) << ',' << format_double(band[g].half_width) << '\n';
    }
  }

  if (options.threshold) {
    auto out = open_out(out_dir / "efficiency.csv");
    out << "run,threshold,first_assessment\n";
    for (std::size_t r = 0; r < runs.size(); ++r) {
      const auto hit = first_assessment_reaching(runs[r], *options.threshold);
      out << labels[r] << ',' << format_double(*options.threshold) << ',' << (hit ? std::to_string(*hit) : "") << '\n';
    }
  }

  if (options.plot) {
    auto chart = [&](const std::string& file, const std::string& title, const std::string& y_label,
                     const std::vector<Series>& s) { write_text(out_dir / file, svg_line_chart(title, "generation", y_label, s)); };
    std::vector<double> mm, mx;
    for (const auto& b : mean_band) mm.push_back(b.mean);
    for (const auto& b : max_band) mx.push_back(b.mean);
    chart("fitness.svg", "Population fitness", "fitness", {{"mean", mm}, {"max", mx}});
    std::vector<Series> div;
    for (std::size_t r = 0; r < runs.size(); ++r) div.push_back({labels[r], diversity[r]});
    chart("diversity.svg", "Morphological diversity", "mean tree-edit distance", div);
    std::vector<Series> dl;
    for (std::size_t r = 0; r < runs.size(); ++r) dl.push_back({labels[r], deltas[r]});
    chart("learning_delta.svg", "Learning delta", "fitness after - before", dl);
    if (!mi.empty()) {
      std::vector<double> m;
      for (const auto& b : mean_ci(mi)) m.push_back(b.mean);
      chart("mi.svg", "Morphological intelligence", "delta of delta", {{"evolved - fixed", m}});
    }
  }
}

}  // namespace morphoevo
