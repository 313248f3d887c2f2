#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "claimflow/claim_graph.hpp"
#include "claimflow/relation.hpp"
#include "claimflow/stats.hpp"

namespace claimflow {

// ---------------------------------------------------------------------------
// Engagement

struct RelationDistribution {
  std::array<std::size_t, kRelationCount> counts{};
  std::size_t total = 0;

  double proportion(Relation r) const {
    return total == 0 ? 0.0
                      : static_cast<double>(counts[index_of(r)]) / static_cast<double>(total);
  }
};

/// Label shares over all edges. Throws InvalidArgument for a graph without edges.
RelationDistribution relation_distribution(const ClaimGraph& graph);

/// Label shares grouped by the venue of the citing paper.
std::map<std::string, RelationDistribution> venue_relation_distribution(const ClaimGraph& graph);

// ---------------------------------------------------------------------------
// Challenges

enum class PostChallenge : unsigned char {
  no_further_engagement,
  background_only,
  support,
  extend,
  qualify,
  refute,
};
inline constexpr std::size_t kPostChallengeCount = 6;
std::string_view to_string(PostChallenge c) noexcept;

struct ChallengeRecord {
  std::string claim_id;
  bool challenged = false;
  bool refuted = false;  // at least one refute among the challenges
  std::optional<int> first_challenge_year;
  std::optional<int> time_to_challenge;
  /// Incoming edges (indices into graph.edges()) whose citing year is strictly
  /// later than the first challenge year.
  std::vector<std::size_t> post_challenge_edges;
};

struct ChallengeSummary {
  std::size_t claims = 0;
  std::size_t challenged = 0;
  std::size_t qualify_only = 0;
  std::size_t refuted = 0;
  double challenged_share = 0.0;
  double qualify_share = 0.0;  // qualify_only / claims
  double refute_share = 0.0;   // refuted / claims
  /// Lower median over challenged claims.
  std::optional<int> median_time_to_challenge;
  /// Claim-level buckets (no further engagement, background only) and the
  /// remaining challenged-claim mass spread over post-challenge substantive
  /// edge labels. Sums to 1 when anything was challenged.
  std::array<double, kPostChallengeCount> post_challenge{};
};

struct ChallengeReport {
  std::vector<ChallengeRecord> records;  // node order
  ChallengeSummary summary;
};

ChallengeReport challenge_analysis(const ClaimGraph& graph);

// ---------------------------------------------------------------------------
// Propagation and reuse

inline constexpr std::size_t kWidePropagationThreshold = 10;

struct PropagationSummary {
  std::size_t claims = 0;
  std::size_t isolated = 0;
  double isolated_fraction = 0.0;
  double mean_count = 0.0;             // over all claims
  double mean_count_propagated = 0.0;  // over claims with count > 0
  double wide_share = 0.0;             // count >= kWidePropagationThreshold
};

struct PropagationResult {
  std::vector<std::size_t> counts;  // distinct citing papers, node order
  PropagationSummary summary;
};

PropagationResult propagation_counts(const ClaimGraph& graph);

/// Per claim (node order): years to the earliest citing paper, or a censored
/// duration up to `horizon_year` when never cited. Citing papers older than
/// the claim count as reuse at duration 0. Throws InvalidArgument when the
/// horizon precedes the latest claim year.
std::vector<SurvivalObservation> time_to_first_reuse(const ClaimGraph& graph, int horizon_year);

// ---------------------------------------------------------------------------
// Temporal position and influence

/// |{h' : y(h') < y(h)}| / |H| for every node.
std::vector<double> age_rank(const ClaimGraph& graph);

/// Distinct citing papers / papers published after the claim's year. Empty when
/// no later paper exists. Throws InvalidArgument for unknown claims.
std::optional<double> norm_influence(const ClaimGraph& graph, std::string_view claim_id);

struct InfluenceRecord {
  std::string claim_id;
  int year = 0;
  double age_rank = 0.0;
  std::optional<double> norm_influence;  // empty: final-year claim, excluded from rho
  std::size_t citing_papers = 0;
  std::size_t later_papers = 0;
};

struct InfluenceReport {
  std::vector<InfluenceRecord> records;
  std::size_t excluded = 0;
  /// Spearman(AgeRank, NormInfluence) over included records; empty when undefined.
  std::optional<double> rho;
};

InfluenceReport influence_analysis(const ClaimGraph& graph);

// ---------------------------------------------------------------------------
// Structure over time

/// Distinct directed pairs / (|V_t| (|V_t| - 1)). Throws InvalidArgument for
/// fewer than two nodes.
double edge_density(const ClaimGraphSnapshot& snapshot);

struct ModularityResult {
  double q = 0.0;
  /// Community of each snapshot node, aligned with snapshot.nodes().
  std::vector<std::size_t> community;
  std::size_t communities = 0;
};

/// Louvain-style greedy modularity maximisation on the undirected projection
/// (each directed edge adds weight 1 to its unordered pair), resolution 1.
/// Node visiting order is a permutation drawn from `seed`. Throws
/// InvalidArgument when the snapshot has no edges.
ModularityResult modularity(const ClaimGraphSnapshot& snapshot, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Per-claim convergence and uncertainty

inline constexpr double kConvergenceEpsilon = 1.0;

/// (k_out - k_in) / (k_out + k_in + 1) with distinct-neighbour degrees.
double convergence_divergence(const ClaimGraph& graph, std::string_view claim_id);

struct UncertaintyPoint {
  int age = 0;
  double fraction = 0.0;
};

/// Running share of qualify/refute among incoming edges, one point per distinct
/// interaction age. Throws InvalidArgument when the claim has no incoming edges.
std::vector<UncertaintyPoint> cumulative_uncertainty(const ClaimGraph& graph,
                                                     std::string_view claim_id);

struct CorpusUncertaintyPoint {
  int age = 0;
  double mean_fraction = 0.0;
  std::size_t claims = 0;  // claims with at least one interaction by `age`
};

/// Per-claim curves averaged at every age observed anywhere in the graph.
std::vector<CorpusUncertaintyPoint> corpus_uncertainty(const ClaimGraph& graph);

}  // namespace claimflow
