#include "claimflow/claim_graph.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>

#include <json.hpp>

#include "claimflow/error.hpp"
#include "claimflow/io.hpp"

namespace claimflow {

ClaimGraph::ClaimGraph(std::vector<GraphPaper> papers, std::vector<NodeSpec> nodes,
                       std::vector<EdgeSpec> edges)
    : papers_(std::move(papers)) {
  std::unordered_map<std::string, std::size_t> paper_index;
  for (std::size_t i = 0; i < papers_.size(); ++i) {
    if (!paper_index.try_emplace(papers_[i].id, i).second)
      throw DataError("graph: duplicate paper id " + papers_[i].id);
  }

  std::sort(nodes.begin(), nodes.end(),
            [](const NodeSpec& a, const NodeSpec& b) { return a.claim_id < b.claim_id; });
  nodes_.reserve(nodes.size());
  for (auto& n : nodes) {
    auto p = paper_index.find(n.paper_id);
    if (p == paper_index.end())
      throw DataError("graph: claim " + n.claim_id + " references unknown paper " + n.paper_id);
    if (!node_index_.try_emplace(n.claim_id, nodes_.size()).second)
      throw DataError("graph: duplicate claim id " + n.claim_id);
    nodes_.push_back({std::move(n.claim_id), p->second, papers_[p->second].year});
  }

  std::stable_sort(edges.begin(), edges.end(), [](const EdgeSpec& a, const EdgeSpec& b) {
    return std::tie(a.citing_claim, a.cited_claim, a.label) <
           std::tie(b.citing_claim, b.cited_claim, b.label);
  });
  edges_.reserve(edges.size());
  for (const auto& e : edges) {
    auto s = node_index_.find(e.citing_claim);
    auto t = node_index_.find(e.cited_claim);
    if (s == node_index_.end())
      throw DataError("graph: edge references unknown claim " + e.citing_claim);
    if (t == node_index_.end())
      throw DataError("graph: edge references unknown claim " + e.cited_claim);
    if (s->second == t->second) throw DataError("graph: self-loop on claim " + e.citing_claim);
    if (nodes_[s->second].paper == nodes_[t->second].paper)
      throw DataError("graph: same-paper edge " + e.citing_claim + " -> " + e.cited_claim);
    edges_.push_back({s->second, t->second, e.label, nodes_[s->second].year,
                      nodes_[t->second].year});
  }
  index();
}

void ClaimGraph::index() {
  const std::size_t n = nodes_.size();
  in_nbrs_.assign(n, {});
  out_nbrs_.assign(n, {});
  in_edges_.assign(n, {});
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    in_nbrs_[e.cited].push_back(e.citing);
    out_nbrs_[e.citing].push_back(e.cited);
    in_edges_[e.cited].push_back(i);
  }
  for (auto* adj : {&in_nbrs_, &out_nbrs_}) {
    for (auto& v : *adj) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
  }
}

std::optional<std::size_t> ClaimGraph::find(std::string_view claim_id) const {
  auto it = node_index_.find(std::string(claim_id));
  if (it == node_index_.end()) return std::nullopt;
  return it->second;
}

std::size_t ClaimGraph::index_of(std::string_view claim_id) const {
  auto i = find(claim_id);
  if (!i) throw InvalidArgument("unknown claim " + std::string(claim_id));
  return *i;
}

ClaimGraph ClaimGraph::filtered(LabelFilter filter) const {
  ClaimGraph g;
  g.papers_ = papers_;
  g.nodes_ = nodes_;
  g.node_index_ = node_index_;
  for (const auto& e : edges_)
    if (admits(filter, e.label)) g.edges_.push_back(e);
  g.index();
  return g;
}

std::optional<int> ClaimGraph::min_year() const {
  if (nodes_.empty()) return std::nullopt;
  return std::min_element(nodes_.begin(), nodes_.end(),
                          [](const auto& a, const auto& b) { return a.year < b.year; })
      ->year;
}

std::optional<int> ClaimGraph::max_year() const {
  if (nodes_.empty()) return std::nullopt;
  return std::max_element(nodes_.begin(), nodes_.end(),
                          [](const auto& a, const auto& b) { return a.year < b.year; })
      ->year;
}

ClaimGraph build_graph(const Corpus& corpus) {
  std::vector<GraphPaper> papers;
  papers.reserve(corpus.papers().size());
  for (const auto& p : corpus.papers()) papers.push_back({p.id, p.venue, p.year});
  std::vector<ClaimGraph::NodeSpec> nodes;
  nodes.reserve(corpus.claims().size());
  for (const auto& c : corpus.claims()) nodes.push_back({c.id, c.paper_id});
  std::vector<ClaimGraph::EdgeSpec> edges;
  edges.reserve(corpus.edges().size());
  for (const auto& e : corpus.edges())
    edges.push_back({e.citing_claim_id, e.cited_claim_id, e.label});
  return ClaimGraph(std::move(papers), std::move(nodes), std::move(edges));
}

Degrees degrees(const ClaimGraph& graph, std::string_view claim_id) {
  const std::size_t h = graph.index_of(claim_id);
  return {graph.in_neighbors(h).size(), graph.out_neighbors(h).size()};
}

ClaimGraphSnapshot::ClaimGraphSnapshot(const ClaimGraph& graph, int year)
    : graph_(&graph), year_(year), in_view_(graph.nodes().size(), false) {
  for (std::size_t i = 0; i < graph.nodes().size(); ++i) {
    if (graph.nodes()[i].year <= year) {
      nodes_.push_back(i);
      in_view_[i] = true;
    }
  }
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < graph.edges().size(); ++i) {
    const auto& e = graph.edges()[i];
    if (e.citing_year <= year && e.cited_year <= year) {
      edges_.push_back(i);
      pairs.emplace(e.citing, e.cited);
    }
  }
  distinct_pairs_ = pairs.size();
}

ClaimGraphSnapshot snapshot_at(const ClaimGraph& graph, int year) {
  return ClaimGraphSnapshot(graph, year);
}

void write_graph(std::ostream& out, const ClaimGraph& graph) {
  for (const auto& p : graph.papers()) {
    nlohmann::ordered_json j;
    j["kind"] = "paper";
    j["id"] = p.id;
    j["venue"] = p.venue;
    j["year"] = p.year;
    out << j.dump() << '\n';
  }
  for (const auto& n : graph.nodes()) {
    nlohmann::ordered_json j;
    j["kind"] = "node";
    j["id"] = n.id;
    j["paper"] = graph.papers()[n.paper].id;
    j["year"] = n.year;
    out << j.dump() << '\n';
  }
  for (const auto& e : graph.edges()) {
    nlohmann::ordered_json j;
    j["kind"] = "gedge";
    j["citing_claim"] = graph.nodes()[e.citing].id;
    j["cited_claim"] = graph.nodes()[e.cited].id;
    j["label"] = std::string(to_string(e.label));
    j["citing_year"] = e.citing_year;
    j["cited_year"] = e.cited_year;
    out << j.dump() << '\n';
  }
}

ClaimGraph read_graph(std::istream& in) {
  std::vector<GraphPaper> papers;
  std::vector<ClaimGraph::NodeSpec> nodes;
  std::vector<ClaimGraph::EdgeSpec> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "graph line " + std::to_string(line_no) + ": ";
    try {
      auto rec = nlohmann::json::parse(line);
      const auto kind = rec.at("kind").get<std::string>();
      if (kind == "paper") {
        papers.push_back({rec.at("id").get<std::string>(), rec.at("venue").get<std::string>(),
                          rec.at("year").get<int>()});
      } else if (kind == "node") {
        nodes.push_back({rec.at("id").get<std::string>(), rec.at("paper").get<std::string>()});
      } else if (kind == "gedge") {
        const auto label = rec.at("label").get<std::string>();
        auto rel = parse_relation(label);
        if (!rel) throw DataError(where + "unknown label \"" + label + "\"", line_no);
        edges.push_back({rec.at("citing_claim").get<std::string>(),
                         rec.at("cited_claim").get<std::string>(), *rel});
      } else {
        throw DataError(where + "unexpected record kind \"" + kind + "\"", line_no);
      }
    } catch (const nlohmann::json::exception& e) {
      throw DataError(where + e.what(), line_no);
    }
  }
  return ClaimGraph(std::move(papers), std::move(nodes), std::move(edges));
}

ClaimGraph load_graph(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_graph(in);
}

}  // namespace claimflow
