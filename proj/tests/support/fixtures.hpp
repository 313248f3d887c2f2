#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "claimflow/canonicalize.hpp"
#include "claimflow/claim_graph.hpp"
#include "claimflow/corpus.hpp"
#include "oracles.hpp"

namespace claimflow::testing {

/// Random corpus description: claims spread over papers (every paper owns at
/// least one), edges only between different papers with citing year >= cited
/// year, labels drawn with the gold label mix (57% background). Deterministic in `seed`.
RawData synthetic_data(std::uint64_t seed, std::size_t papers = 15, std::size_t claims = 50,
                       std::size_t edges = 120);

/// Full corpus for `d`: one citation context per edge, edge i uses context i.
Corpus to_corpus(const RawData& d);
ClaimGraph to_graph(const RawData& d);
std::string to_bundle(const Corpus& c);

/// 100 claims in 10 papers with planted within-paper duplicate groups
/// (sizes 3,3,3,2,2,2,2,2: 11 claims merge away) and noisy embeddings.
struct PlantedFixture {
  Corpus corpus;
  EmbeddingTable embeddings;
  /// Planted groups, members ascending; every other claim is a singleton.
  std::vector<std::vector<std::string>> groups;
  std::size_t merged_away = 0;
};
PlantedFixture planted_duplicates(std::uint64_t seed);

}  // namespace claimflow::testing
