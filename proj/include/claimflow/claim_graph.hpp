#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "claimflow/corpus.hpp"
#include "claimflow/relation.hpp"

namespace claimflow {

struct GraphPaper {
  std::string id;
  std::string venue;
  int year = 0;
};

struct GraphNode {
  std::string id;
  std::size_t paper = 0;  // index into ClaimGraph::papers()
  int year = 0;
};

struct GraphEdge {
  std::size_t citing = 0;  // node index
  std::size_t cited = 0;   // node index
  Relation label = Relation::background;
  int citing_year = 0;
  int cited_year = 0;
};

/// Directed claim-interaction graph: one node per claim, one edge per relation
/// (citing -> cited). Nodes are ordered by claim id and edges by (citing id,
/// cited id, label); parallel edges are kept. Immutable after construction.
class ClaimGraph {
 public:
  struct EdgeSpec {
    std::string citing_claim;
    std::string cited_claim;
    Relation label = Relation::background;
  };
  struct NodeSpec {
    std::string claim_id;
    std::string paper_id;
  };

  ClaimGraph() = default;

  /// Throws DataError on unknown ids, duplicate ids, self-loops or same-paper edges.
  ClaimGraph(std::vector<GraphPaper> papers, std::vector<NodeSpec> nodes,
             std::vector<EdgeSpec> edges);

  const std::vector<GraphPaper>& papers() const noexcept { return papers_; }
  const std::vector<GraphNode>& nodes() const noexcept { return nodes_; }
  const std::vector<GraphEdge>& edges() const noexcept { return edges_; }

  std::optional<std::size_t> find(std::string_view claim_id) const;
  /// Node index for a claim id; throws InvalidArgument for unknown ids.
  std::size_t index_of(std::string_view claim_id) const;

  /// Distinct citing nodes of `node`, ascending.
  const std::vector<std::size_t>& in_neighbors(std::size_t node) const { return in_nbrs_[node]; }
  /// Distinct cited nodes of `node`, ascending.
  const std::vector<std::size_t>& out_neighbors(std::size_t node) const { return out_nbrs_[node]; }
  /// Indices of edges pointing into `node`, in edge order.
  const std::vector<std::size_t>& in_edges(std::size_t node) const { return in_edges_[node]; }

  const GraphPaper& paper_of(std::size_t node) const { return papers_[nodes_[node].paper]; }

  /// Same nodes, only the edges admitted by `filter`.
  ClaimGraph filtered(LabelFilter filter) const;

  bool empty() const noexcept { return nodes_.empty(); }
  std::optional<int> min_year() const;
  std::optional<int> max_year() const;

 private:
  void index();

  std::vector<GraphPaper> papers_;
  std::vector<GraphNode> nodes_;
  std::vector<GraphEdge> edges_;
  std::unordered_map<std::string, std::size_t> node_index_;
  std::vector<std::vector<std::size_t>> in_nbrs_, out_nbrs_, in_edges_;
};

/// One node per claim, one edge per relation edge.
ClaimGraph build_graph(const Corpus& corpus);

struct Degrees {
  std::size_t in = 0;
  std::size_t out = 0;
  friend bool operator==(const Degrees&, const Degrees&) = default;
};

/// Distinct-neighbour in/out degree. Throws InvalidArgument for unknown claims.
Degrees degrees(const ClaimGraph& graph, std::string_view claim_id);

/// Cumulative view G_t: claims from papers with year <= t and the edges
/// whose citing and cited years are both <= t.
class ClaimGraphSnapshot {
 public:
  ClaimGraphSnapshot(const ClaimGraph& graph, int year);

  int year() const noexcept { return year_; }
  const ClaimGraph& graph() const noexcept { return *graph_; }
  const std::vector<std::size_t>& nodes() const noexcept { return nodes_; }
  const std::vector<std::size_t>& edges() const noexcept { return edges_; }
  bool contains(std::size_t node) const { return node < in_view_.size() && in_view_[node]; }

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  /// Number of distinct ordered (citing, cited) node pairs among the snapshot's edges.
  std::size_t distinct_pair_count() const noexcept { return distinct_pairs_; }

 private:
  const ClaimGraph* graph_;
  int year_;
  std::vector<std::size_t> nodes_;
  std::vector<std::size_t> edges_;
  std::vector<bool> in_view_;
  std::size_t distinct_pairs_ = 0;
};

ClaimGraphSnapshot snapshot_at(const ClaimGraph& graph, int year);

/// Graph file: paper records, {kind:"node", id, paper, year} records and
/// {kind:"gedge", citing_claim, cited_claim, label, citing_year, cited_year} records.
void write_graph(std::ostream& out, const ClaimGraph& graph);
ClaimGraph read_graph(std::istream& in);
ClaimGraph load_graph(const std::filesystem::path& path);

}  // namespace claimflow
