#include "claimflow/report.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <json.hpp>

#include "claimflow/analytics.hpp"
#include "claimflow/error.hpp"
#include "claimflow/io.hpp"
#include "claimflow/stats.hpp"

namespace claimflow {

std::string Cell::text() const {
  struct Visitor {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(long long i) const { return std::to_string(i); }
    std::string operator()(double d) const { return format_real(d); }
  };
  return std::visit(Visitor{}, v_);
}

namespace {

nlohmann::ordered_json cell_json(const Cell& c) {
  struct Visitor {
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(const std::string& s) const { return s; }
    nlohmann::ordered_json operator()(long long i) const { return i; }
    nlohmann::ordered_json operator()(double d) const { return d; }
  };
  return std::visit(Visitor{}, c.value());
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

}  // namespace

std::string MetricReport::to_csv() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << csv_escape(columns[i]);
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_escape(row[i].text());
    os << '\n';
  }
  return os.str();
}

std::string MetricReport::to_json() const {
  nlohmann::ordered_json j;
  j["metric"] = metric;
  auto params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : parameters) params[k] = cell_json(v);
  j["parameters"] = std::move(params);
  j["fingerprint"] = fingerprint;
  auto summ = nlohmann::ordered_json::object();
  for (const auto& [k, v] : summary) summ[k] = cell_json(v);
  j["summary"] = std::move(summ);
  j["columns"] = columns;
  auto rs = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    auto r = nlohmann::ordered_json::array();
    for (const auto& c : row) r.push_back(cell_json(c));
    rs.push_back(std::move(r));
  }
  j["rows"] = std::move(rs);
  return j.dump(2) + "\n";
}

bool is_metric_name(std::string_view name) noexcept {
  return std::find(kMetricNames.begin(), kMetricNames.end(), name) != kMetricNames.end();
}

namespace {

std::vector<int> distinct_years(const ClaimGraph& g) {
  std::set<int> ys;
  for (const auto& n : g.nodes()) ys.insert(n.year);
  return {ys.begin(), ys.end()};
}

void relation_rows(MetricReport& r, const RelationDistribution& d, const std::string* venue) {
  for (Relation rel : kAllRelations) {
    std::vector<Cell> row;
    if (venue) row.emplace_back(*venue);
    row.emplace_back(to_string(rel));
    row.emplace_back(d.counts[index_of(rel)]);
    row.emplace_back(d.proportion(rel));
    r.rows.push_back(std::move(row));
  }
}

}  // namespace

MetricReport run_metric(std::string_view name, const ClaimGraph& full_graph,
                        const AnalysisConfig& config, std::string fingerprint) {
  if (!is_metric_name(name)) throw InvalidArgument("unknown metric \"" + std::string(name) + "\"");
  const ClaimGraph graph = full_graph.filtered(config.labels);

  MetricReport r;
  r.metric = std::string(name);
  r.fingerprint = std::move(fingerprint);
  r.parameters.emplace_back("labels", to_string(config.labels));

  if (name == "relation-dist") {
    const auto d = relation_distribution(graph);
    r.columns = {"label", "count", "proportion"};
    relation_rows(r, d, nullptr);
    r.summary.emplace_back("edges", d.total);
  } else if (name == "venue") {
    r.columns = {"venue", "label", "count", "proportion"};
    for (const auto& [venue, d] : venue_relation_distribution(graph)) relation_rows(r, d, &venue);
  } else if (name == "propagation") {
    const auto p = propagation_counts(graph);
    r.columns = {"claim_id", "propagation_count"};
    for (std::size_t h = 0; h < graph.nodes().size(); ++h)
      r.rows.push_back({graph.nodes()[h].id, p.counts[h]});
    r.summary = {{"claims", p.summary.claims},
                 {"isolated", p.summary.isolated},
                 {"isolated_fraction", p.summary.isolated_fraction},
                 {"mean_count", p.summary.mean_count},
                 {"mean_count_propagated", p.summary.mean_count_propagated},
                 {"wide_threshold", kWidePropagationThreshold},
                 {"wide_share", p.summary.wide_share}};
  } else if (name == "reuse-survival") {
    const int horizon = config.horizon ? *config.horizon : graph.max_year().value_or(0);
    r.parameters.emplace_back("horizon", horizon);
    const auto obs = time_to_first_reuse(graph, horizon);
    r.columns = {"time", "survival", "at_risk", "events"};
    std::size_t events = 0;
    for (const auto& o : obs) events += o.event ? 1 : 0;
    if (!obs.empty()) {
      for (const auto& p : kaplan_meier(obs).points)
        r.rows.push_back({p.time, p.survival, p.at_risk, p.events});
    }
    r.summary = {{"claims", obs.size()}, {"events", events}, {"censored", obs.size() - events}};
  } else if (name == "challenge") {
    const auto c = challenge_analysis(graph);
    r.columns = {"category", "share"};
    for (std::size_t i = 0; i < kPostChallengeCount; ++i)
      r.rows.push_back({to_string(static_cast<PostChallenge>(i)), c.summary.post_challenge[i]});
    r.summary = {{"claims", c.summary.claims},
                 {"challenged", c.summary.challenged},
                 {"challenged_share", c.summary.challenged_share},
                 {"qualify_share", c.summary.qualify_share},
                 {"refute_share", c.summary.refute_share},
                 {"median_time_to_challenge", Cell(c.summary.median_time_to_challenge)}};
  } else if (name == "influence") {
    const auto inf = influence_analysis(graph);
    r.columns = {"claim_id", "year", "age_rank", "norm_influence", "citing_papers",
                 "later_papers"};
    for (const auto& rec : inf.records)
      r.rows.push_back({rec.claim_id, rec.year, rec.age_rank, Cell(rec.norm_influence),
                        rec.citing_papers, rec.later_papers});
    r.summary = {{"spearman_rho", Cell(inf.rho)},
                 {"included", inf.records.size() - inf.excluded},
                 {"excluded", inf.excluded}};
  } else if (name == "density") {
    r.columns = {"year", "nodes", "edges", "distinct_pairs", "density"};
    for (int y : distinct_years(graph)) {
      const auto snap = snapshot_at(graph, y);
      if (snap.node_count() < 2) continue;
      r.rows.push_back({y, snap.node_count(), snap.edge_count(), snap.distinct_pair_count(),
                        edge_density(snap)});
    }
  } else if (name == "modularity") {
    r.parameters.emplace_back("seed", static_cast<long long>(config.seed));
    r.parameters.emplace_back("algorithm", "louvain");
    r.parameters.emplace_back("resolution", 1.0);
    r.columns = {"year", "nodes", "edges", "modularity", "communities"};
    for (int y : distinct_years(graph)) {
      const auto snap = snapshot_at(graph, y);
      if (snap.edge_count() == 0) continue;
      const auto m = modularity(snap, config.seed);
      r.rows.push_back({y, snap.node_count(), snap.edge_count(), m.q, m.communities});
    }
  } else if (name == "convdiv") {
    r.parameters.emplace_back("epsilon", kConvergenceEpsilon);
    r.columns = {"claim_id", "k_in", "k_out", "score"};
    for (std::size_t h = 0; h < graph.nodes().size(); ++h) {
      const auto& id = graph.nodes()[h].id;
      const auto d = degrees(graph, id);
      r.rows.push_back({id, d.in, d.out, convergence_divergence(graph, id)});
    }
  } else if (name == "uncertainty") {
    r.columns = {"age", "mean_uncertainty", "claims"};
    for (const auto& p : corpus_uncertainty(graph))
      r.rows.push_back({p.age, p.mean_fraction, p.claims});
  }
  return r;
}

}  // namespace claimflow
