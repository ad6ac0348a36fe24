#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "toprorec/catalog.hpp"
#include "toprorec/evaluator.hpp"
#include "toprorec/recommender.hpp"
#include "toprorec/reports.hpp"
#include "toprorec/snapshot.hpp"
#include "toprorec/text_cleaner.hpp"
#include "toprorec/topic_model.hpp"
#include "toprorec/topics.hpp"

namespace py = pybind11;
using namespace toprorec;

namespace {

py::dict entry_dict(const RecommendationEntry& e) {
  py::dict d;
  d["program"] = e.program.str();
  d["name"] = e.name;
  d["pis"] = e.pis;
  d["rpis"] = e.rpis;
  d["score"] = e.score;
  return d;
}

std::vector<ProgramId> to_ids(const std::vector<std::string>& ids) {
  return {ids.begin(), ids.end()};
}

}  // namespace

PYBIND11_MODULE(_toprorec, m) {
  m.doc() = "Interest-topic study program recommender";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<SelectionError>(m, "SelectionError", PyExc_ValueError);
  py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_ValueError);

  m.def(
      "clean_description",
      [](const std::string& text, bool stemming, int ngram_max) {
        auto cfg = CleaningConfig::defaults();
        cfg.stemming = stemming;
        cfg.ngram_max = ngram_max;
        const auto words = clean_description(text, cfg);
        return std::vector<std::string>(words.begin(), words.end());
      },
      py::arg("text"), py::arg("stemming") = false, py::arg("ngram_max") = 2);

  py::class_<Catalog>(m, "Catalog")
      .def_static(
          "from_json", [](const std::string& text) { return parse_catalog_json(text, CleaningConfig::defaults()); },
          py::arg("text"))
      .def_static(
          "load", [](const std::filesystem::path& path) { return load_snapshot(path).catalog; }, py::arg("path"))
      .def_property_readonly("n", &Catalog::n)
      .def_property_readonly("m", &Catalog::m)
      .def_property_readonly("edge_count", [](const Catalog& c) { return c.knowledge_map().edge_count(); })
      .def("program_ids", [](const Catalog& c) {
        std::vector<std::string> ids;
        for (const auto& p : c.programs()) ids.push_back(p.id.str());
        return ids;
      });

  m.def(
      "mine_topics",
      [](const Catalog& catalog, std::uint32_t h, std::uint32_t gamma, std::uint64_t seed) {
        return export_topics(mine_topics(catalog, {.h = h, .gamma = gamma, .seed = seed}));
      },
      py::arg("catalog"), py::arg("h") = 30, py::arg("gamma") = 20, py::arg("seed") = 1,
      "Mine topics and return them as topics JSON text.");

  py::class_<TopicProgramMatrix>(m, "Matrix")
      .def_static(
          "from_csv", [](const std::string& text) { return parse_matrix_csv(text); }, py::arg("text"))
      .def_static(
          "load", [](const std::filesystem::path& path) { return load_matrix_csv(path); }, py::arg("path"))
      .def_static(
          "build",
          [](const Catalog& catalog, const std::string& topics_json) {
            return build_topic_program_matrix(catalog, parse_topics(topics_json));
          },
          py::arg("catalog"), py::arg("topics_json"))
      .def_property_readonly("topic_count", &TopicProgramMatrix::topic_count)
      .def_property_readonly("program_count", &TopicProgramMatrix::program_count)
      .def("count",
           [](const TopicProgramMatrix& mx, TopicId topic, const std::string& program) {
             const auto t = mx.topic_index(topic);
             const auto p = mx.program_index(ProgramId(program));
             if (!t || !p) throw py::key_error("unknown topic or program");
             return mx.count(*t, *p);
           })
      .def("to_csv", &matrix_to_csv);

  m.def(
      "recommend",
      [](const TopicProgramMatrix& mx, const std::vector<TopicId>& selection, std::size_t tau, std::size_t phi) {
        const TopicSelection sel{selection};
        validate_selection(sel, mx, phi);
        py::list out;
        for (const auto& e : recommend(sel, mx, tau).entries) out.append(entry_dict(e));
        return out;
      },
      py::arg("matrix"), py::arg("selection"), py::arg("tau") = 7, py::arg("phi") = 8);

  m.def(
      "topic_scores",
      [](const TopicProgramMatrix& mx, const std::vector<TopicId>& selection, const std::vector<std::string>& programs) {
        const auto ids = to_ids(programs);
        const auto table = topic_scores(TopicSelection{selection}, mx, ids);
        py::dict out;
        out["normalizer"] = table.normalizer;
        py::list rows;
        for (const auto& r : table.rows) {
          py::dict row;
          row["program"] = r.program.str();
          row["aggregate"] = r.aggregate;
          row["cells"] = r.cells;
          rows.append(row);
        }
        out["rows"] = rows;
        return out;
      },
      py::arg("matrix"), py::arg("selection"), py::arg("programs"));

  m.def(
      "reachability",
      [](const TopicProgramMatrix& mx, std::uint32_t phi, std::uint32_t tau, bool up_to) {
        const auto r = reachability(mx, {static_cast<std::uint32_t>(mx.topic_count()), phi, mx.gamma(), tau},
                                    {.up_to = up_to});
        py::dict out;
        out["rho"] = r.rho;
        std::vector<std::string> ids;
        for (const auto& p : r.reachable_programs) ids.push_back(p.str());
        out["programs"] = ids;
        out["subsets"] = r.subsets_evaluated;
        return out;
      },
      py::arg("matrix"), py::arg("phi"), py::arg("tau"), py::arg("up_to") = false);

  m.def(
      "personalization",
      [](const std::vector<std::vector<std::uint8_t>>& rows) {
        RecommendationMatrix mx;
        if (!rows.empty()) {
          for (std::size_t j = 0; j < rows[0].size(); ++j) mx.columns.push_back(std::to_string(j));
        }
        mx.rows = rows;
        return personalization(mx).personalization;
      },
      py::arg("rows"));
}
