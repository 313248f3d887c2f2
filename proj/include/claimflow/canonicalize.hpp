#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "claimflow/corpus.hpp"

namespace claimflow {

inline constexpr double kDefaultMergeThreshold = 0.90;

/// Claim id -> dense vector, all of one dimension, none all-zero.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;

  /// Throws InvalidArgument on dimension mismatch, zero vectors, empty vectors
  /// or duplicate ids.
  void insert(std::string id, std::vector<double> vec);

  const std::vector<double>* find(std::string_view id) const;
  std::size_t dimension() const noexcept { return dim_; }
  std::size_t size() const noexcept { return vectors_.size(); }

 private:
  std::size_t dim_ = 0;
  std::unordered_map<std::string, std::vector<double>> vectors_;
};

/// Reads {kind:"embedding", id, vec:[...]} records.
EmbeddingTable read_embeddings(std::istream& in);
EmbeddingTable load_embeddings(const std::filesystem::path& path);

/// <u,v> / (|u||v|). Throws InvalidArgument on mismatched dimensions or a zero vector.
double cosine_similarity(std::span<const double> u, std::span<const double> v);

struct ClaimCluster {
  std::string seed;
  /// Seed first, then joiners in ascending id order.
  std::vector<std::string> members;
};

/// Greedy single pass over the ids in ascending byte order. An unassigned id
/// starts a new cluster; every later unassigned id whose similarity to that
/// seed is >= tau joins it. Similarity is only ever taken against the seed.
std::vector<ClaimCluster> cluster_claims(std::vector<std::string> claim_ids,
                                         const EmbeddingTable& embeddings, double tau);

/// Member with the longest canonical text (in bytes); ties go to the smallest id.
std::string select_representative(std::span<const std::string> cluster, const Corpus& corpus);

struct ClusterMapping {
  struct Group {
    std::string representative;
    std::vector<std::string> members;  // ascending id order
  };

  /// Every clustered claim id -> its representative. Ids absent here map to themselves.
  std::map<std::string, std::string> representative_of;
  std::vector<Group> groups;

  const std::string& resolve(const std::string& id) const;
};

/// Picks representatives for already-formed clusters.
ClusterMapping make_mapping(const std::vector<ClaimCluster>& clusters, const Corpus& corpus);

/// Clusters every paper's claims independently (within-paper only).
ClusterMapping cluster_corpus(const Corpus& corpus, const EmbeddingTable& embeddings,
                              double tau = kDefaultMergeThreshold);

/// Replaces edge endpoints by representatives, drops collapsed self-edges and
/// duplicate (citing, cited, label, context) edges, removes merged-away claims
/// and folds their surface texts into the representative. Idempotent.
/// Throws InvalidArgument when a representative is not a corpus claim, the
/// mapping is not idempotent, or a group spans several papers.
Corpus redirect_edges(const Corpus& corpus, const ClusterMapping& mapping);

struct CanonicalizationSummary {
  std::size_t nodes_before = 0;
  std::size_t nodes_after = 0;
  std::size_t edges_before = 0;
  std::size_t edges_after = 0;
  std::size_t merged_groups = 0;  // groups with two or more members
  double reduction_fraction = 0.0;
  /// nodes_before / nodes_after, i.e. mean size over all clusters including singletons.
  double mean_cluster_size = 0.0;
  /// Mean size over merged groups only; 0 when nothing merged.
  double mean_merged_group_size = 0.0;
};

CanonicalizationSummary summarize_canonicalization(const Corpus& before, const Corpus& after,
                                                   const ClusterMapping& mapping);

/// {kind:"merge", from, to} for every claim that is not its own representative.
void write_mapping(std::ostream& out, const ClusterMapping& mapping);

}  // namespace claimflow
