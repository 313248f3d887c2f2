#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "claimflow/analytics.hpp"
#include "claimflow/canonicalize.hpp"
#include "claimflow/claim_graph.hpp"
#include "claimflow/corpus.hpp"
#include "claimflow/error.hpp"
#include "claimflow/eval.hpp"
#include "claimflow/report.hpp"
#include "claimflow/stats.hpp"

namespace py = pybind11;
using namespace claimflow;

namespace {

std::map<std::string, double> distribution_dict(const RelationDistribution& d) {
  std::map<std::string, double> out;
  for (Relation r : kAllRelations) out[std::string(to_string(r))] = d.proportion(r);
  return out;
}

Relation relation_arg(const std::string& s) {
  auto r = parse_relation(s);
  if (!r) throw InvalidArgument("unknown label \"" + s + "\"");
  return *r;
}

std::vector<LabeledInstance> instances_arg(const std::vector<py::tuple>& rows) {
  std::vector<LabeledInstance> out;
  for (const auto& t : rows) {
    LabeledInstance li;
    li.key = {t[0].cast<std::string>(), t[1].cast<std::string>(), t[2].cast<std::size_t>()};
    const auto label = t[3].cast<std::string>();
    if (label != "invalid") li.label = relation_arg(label);
    out.push_back(std::move(li));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Claim-graph construction and longitudinal analytics";

  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<KeyMismatchError>(m, "KeyMismatchError", PyExc_KeyError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<Paper>(m, "Paper")
      .def_readonly("id", &Paper::id)
      .def_readonly("title", &Paper::title)
      .def_readonly("venue", &Paper::venue)
      .def_readonly("year", &Paper::year);

  py::class_<Corpus>(m, "Corpus")
      .def_property_readonly("papers", &Corpus::papers)
      .def_property_readonly("num_claims", [](const Corpus& c) { return c.claims().size(); })
      .def_property_readonly("num_contexts", [](const Corpus& c) { return c.contexts().size(); })
      .def_property_readonly("num_edges", [](const Corpus& c) { return c.edges().size(); })
      .def("claim_ids",
           [](const Corpus& c) {
             std::vector<std::string> ids;
             for (const auto& cl : c.claims()) ids.push_back(cl.id);
             return ids;
           })
      .def("to_jsonl", [](const Corpus& c) {
        std::ostringstream os;
        write_corpus(os, c);
        return os.str();
      });

  m.def("load_corpus", &load_corpus, py::arg("path"));
  m.def("parse_corpus", [](const std::string& text) {
    std::istringstream in(text);
    return parse_corpus(in);
  });
  m.def("validate", [](const std::string& text) {
    std::istringstream in(text);
    auto r = read_corpus(in);
    std::vector<std::tuple<std::size_t, std::string, std::string>> out;
    for (const auto& v : r.report.violations)
      out.emplace_back(v.line, std::string(to_string(v.kind)), v.subject);
    return out;
  }, py::arg("bundle_text"), "Violations of a bundle as (line, kind, subject) tuples.");
  m.def("restrict_citations", [](const Corpus& c) {
    auto r = restrict_citations(c);
    return py::make_tuple(std::move(r.corpus), r.dropped_contexts);
  });

  m.def("cosine_similarity", [](const std::vector<double>& u, const std::vector<double>& v) {
    return cosine_similarity(u, v);
  });
  m.def("cluster_claims",
        [](const std::map<std::string, std::vector<double>>& embeddings, double tau) {
          EmbeddingTable t;
          std::vector<std::string> ids;
          for (const auto& [id, v] : embeddings) {
            t.insert(id, v);
            ids.push_back(id);
          }
          std::vector<std::vector<std::string>> out;
          for (auto& c : cluster_claims(ids, t, tau)) out.push_back(std::move(c.members));
          return out;
        },
        py::arg("embeddings"), py::arg("tau") = kDefaultMergeThreshold);

  py::class_<ClaimGraph>(m, "ClaimGraph")
      .def_property_readonly("num_nodes", [](const ClaimGraph& g) { return g.nodes().size(); })
      .def_property_readonly("num_edges", [](const ClaimGraph& g) { return g.edges().size(); })
      .def("degrees", [](const ClaimGraph& g, const std::string& id) {
        auto d = degrees(g, id);
        return py::make_tuple(d.in, d.out);
      });
  m.def("build_graph", &build_graph);

  m.def("relation_distribution",
        [](const ClaimGraph& g) { return distribution_dict(relation_distribution(g)); });
  m.def("edge_density", [](const ClaimGraph& g, int year) {
    return edge_density(snapshot_at(g, year));
  });
  m.def("modularity", [](const ClaimGraph& g, int year, std::uint64_t seed) {
    return modularity(snapshot_at(g, year), seed).q;
  }, py::arg("graph"), py::arg("year"), py::arg("seed") = kDefaultSeed);
  m.def("convergence_divergence", &convergence_divergence);
  m.def("norm_influence", &norm_influence);
  m.def("age_rank", &age_rank);
  m.def("run_metric", [](const std::string& name, const ClaimGraph& g, const std::string& labels,
                         std::optional<int> horizon, std::uint64_t seed) {
    AnalysisConfig cfg;
    auto f = parse_label_filter(labels);
    if (!f) throw InvalidArgument("labels must be all or substantive");
    cfg.labels = *f;
    cfg.horizon = horizon;
    cfg.seed = seed;
    auto r = run_metric(name, g, cfg, "");
    return py::make_tuple(r.to_csv(), r.to_json());
  }, py::arg("name"), py::arg("graph"), py::arg("labels") = "all",
     py::arg("horizon") = std::nullopt, py::arg("seed") = kDefaultSeed,
     "Returns (csv, json) text of a metric report.");

  m.def("kaplan_meier", [](const std::vector<std::pair<int, bool>>& obs) {
    std::vector<SurvivalObservation> in;
    for (auto [d, e] : obs) in.push_back({d, e});
    std::vector<std::tuple<int, double, std::size_t, std::size_t>> out;
    for (const auto& p : kaplan_meier(in).points)
      out.emplace_back(p.time, p.survival, p.at_risk, p.events);
    return out;
  }, py::arg("observations"), "(duration, event) pairs -> (time, S, at_risk, events) rows.");
  m.def("spearman", [](const std::vector<double>& x, const std::vector<double>& y) {
    return spearman(x, y);
  });

  m.def("macro_prf",
        [](const std::vector<py::tuple>& gold, const std::vector<py::tuple>& pred) {
          auto r = macro_prf(instances_arg(gold), instances_arg(pred));
          return py::make_tuple(r.macro_precision, r.macro_recall, r.macro_f1);
        },
        py::arg("gold"), py::arg("pred"),
        "Rows are (citing_claim, cited_claim, context_index, label) tuples.");
  m.def("stratified_split", [](const Corpus& c, std::uint64_t seed) {
    std::map<std::string, std::string> out;
    for (const auto& [p, s] : stratified_split(c, {}, seed).of_paper)
      out[p] = std::string(to_string(s));
    return out;
  }, py::arg("corpus"), py::arg("seed") = kDefaultSeed);
}
