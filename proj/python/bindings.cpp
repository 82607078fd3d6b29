// Python access to the morphoevo core. Structured values (genomes, bodies,
// configs) cross the boundary as plain dicts in the archive's JSON form.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "morphoevo/archive.hpp"
#include "morphoevo/evolve.hpp"
#include "morphoevo/metrics.hpp"
#include "morphoevo/render.hpp"
#include "morphoevo/serialize.hpp"

namespace py = pybind11;
using namespace morphoevo;

namespace {

py::object to_py(const ordered_json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

ordered_json from_py(const py::object& o) {
  return ordered_json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

MorphologyTree body_of(const py::object& o) { return morphology_from_json(from_py(o)); }

BrainGenome brain_of(const std::vector<double>& values) { return BrainGenome::from_values(values); }

py::dict individual_summary(const Individual& ind) {
  py::dict d;
  d["id"] = ind.id;
  d["generation"] = ind.generation;
  d["parents"] = ind.parents ? py::cast(std::vector<int>{(*ind.parents)[0], (*ind.parents)[1]}) : py::none();
  d["lineage_slot"] = ind.lineage_slot;
  d["fitness_before"] = ind.fitness_before;
  d["fitness_after"] = ind.fitness_after;
  d["written_back"] = ind.written_back;
  d["body_hash"] = hex64(ind.body_hash);
  d["body"] = to_py(to_json(ind.body));
  d["n_modules"] = ind.body.size();
  d["n_assessments"] = ind.learning_history.size();
  return d;
}

py::dict archive_summary(const RunArchive& a) {
  py::dict d;
  d["config"] = to_py(to_json(a.config));
  py::list people;
  for (const auto& ind : a.individuals) people.append(individual_summary(ind));
  d["individuals"] = people;
  py::list gens;
  for (const auto& g : a.generations) gens.append(py::cast(g.population));
  d["generations"] = gens;
  d["assessments"] = a.assessments();
  d["learning_delta"] = learning_delta_by_generation(a);
  d["best_fitness"] = [&] {
    std::vector<double> out;
    for (const auto& g : a.generations) {
      double m = -1e300;
      for (int id : g.population) m = std::max(m, a.individual(id).fitness_after);
      out.push_back(m);
    }
    return out;
  }();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Body-brain co-evolution of modular robots";
  m.attr("__version__") = "0.1.0";
  m.attr("BRAIN_ROWS") = kBrainRows;
  m.attr("BRAIN_SLOTS") = kBrainSlots;

  m.def("random_genome", [](std::uint64_t seed) {
    Rng rng(seed);
    return to_py(to_json(random_cppn(rng)));
  }, py::arg("seed"));

  m.def("decode", [](const py::object& genome, const std::string& query, std::uint64_t seed) {
    return to_py(to_json(decode(cppn_from_json(from_py(genome)), query_mechanism_from_string(query), seed)));
  }, py::arg("genome"), py::arg("query") = "bfs", py::arg("seed") = 0);

  m.def("render", [](const py::object& body, const std::string& format) {
    const MorphologyTree tree = body_of(body);
    if (format == "ascii") return render_ascii(tree);
    if (format == "svg") return render_svg(tree);
    throw py::value_error("format must be 'ascii' or 'svg'");
  }, py::arg("body"), py::arg("format") = "ascii");

  m.def("row", &row, py::arg("x"), py::arg("y"));
  m.def("slot", &slot, py::arg("dx"), py::arg("dy"));

  m.def("random_brain", [](std::uint64_t seed) {
    Rng rng(seed);
    const BrainGenome g = random_brain(rng);
    return std::vector<double>(g.values().begin(), g.values().end());
  }, py::arg("seed"));

  m.def("fitness", [](const std::vector<std::array<double, 2>>& points, int targets_reached, double omega) {
    Trajectory tr;
    for (std::size_t i = 0; i < points.size(); ++i) {
      tr.samples.push_back({static_cast<double>(i), points[i][0], points[i][1], 0});
    }
    if (tr.samples.empty()) throw py::value_error("need at least one point");
    tr.path_length = path_length(tr.samples);
    tr.targets_reached = targets_reached;
    tr.final_position = points.back();
    TaskSpec task;
    task.omega = omega;
    return fitness_of(tr, task);
  }, py::arg("points"), py::arg("targets_reached"), py::arg("omega") = 0.1,
     "Task fitness of a scripted path through the default targets.");

  m.def("evaluate", [](const py::object& body, const std::vector<double>& brain) {
    const Evaluation e = evaluate(body_of(body), brain_of(brain), TaskSpec{}, SurrogateParams{});
    std::vector<std::array<double, 3>> samples;
    for (const auto& s : e.trajectory.samples) samples.push_back({s.t, s.px, s.py});
    py::dict d;
    d["fitness"] = e.fitness;
    d["targets_reached"] = e.trajectory.targets_reached;
    d["path_length"] = e.trajectory.path_length;
    d["samples"] = samples;
    return d;
  }, py::arg("body"), py::arg("brain"));

  m.def("tree_edit_distance", [](const py::object& a, const py::object& b) {
    return tree_edit_distance(body_of(a), body_of(b));
  }, py::arg("a"), py::arg("b"));

  m.def("traits", [](const py::object& body) {
    const auto values = traits(body_of(body)).as_array();
    py::dict d;
    for (std::size_t i = 0; i < values.size(); ++i) d[kTraitNames[i]] = values[i];
    return d;
  }, py::arg("body"));

  m.def("evolve", [](const py::dict& overrides, bool desk_scale, const std::optional<std::filesystem::path>& out) {
    EvoConfig base = desk_scale ? EvoConfig::desk_scale() : EvoConfig{};
    ordered_json j = to_json(base);
    j.merge_patch(from_py(overrides));
    const EvoConfig cfg = evo_config_from_json(j);
    RunArchive archive;
    {
      py::gil_scoped_release release;
      archive = run(cfg);
      if (out) write_archive(*out, archive);
    }
    return archive_summary(archive);
  }, py::arg("config") = py::dict(), py::arg("desk_scale") = false, py::arg("out") = py::none(),
     "Run one evolution experiment. `config` overrides keys of the archive config JSON.");

  m.def("read_archive", [](const std::filesystem::path& dir) { return archive_summary(read_archive(dir)); },
        py::arg("dir"));
  m.def("check_archive", &check_archive, py::arg("dir"));
}
