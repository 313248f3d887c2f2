#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "claimflow/corpus.hpp"
#include "claimflow/relation.hpp"

namespace claimflow {

enum class Split : unsigned char { train, validation, test };
std::string_view to_string(Split s) noexcept;
std::optional<Split> parse_split(std::string_view s) noexcept;

struct SplitRatios {
  double train = 0.70;
  double validation = 0.15;
  double test = 0.15;
};

/// paper id -> split. Edges follow the split of their citing paper.
struct SplitAssignment {
  std::map<std::string, Split> of_paper;
  std::uint64_t seed = 0;

  std::array<std::size_t, 3> sizes() const;
};

/// Paper counts per split by largest remainder (ties: validation before test
/// before train).
std::array<std::size_t, 3> split_targets(std::size_t papers, const SplitRatios& ratios);

/// Greedy paper-level stratification. Papers are visited by descending gold
/// edge count, then id; each goes to the split (with room left) whose
/// label-count deficit, weighted by the paper's own labels, is largest.
/// Throws InvalidArgument when any split would end up empty or the ratios do
/// not sum to 1. The seed is recorded but the rule itself is deterministic.
SplitAssignment stratified_split(const Corpus& corpus, const SplitRatios& ratios = {},
                                 std::uint64_t seed = 42);

void write_splits(std::ostream& out, const SplitAssignment& splits);
SplitAssignment read_splits(std::istream& in);

/// (citing claim, cited claim, context index) identifies one classification instance.
struct InstanceKey {
  std::string citing_claim;
  std::string cited_claim;
  std::size_t context_index = 0;

  auto operator<=>(const InstanceKey&) const = default;
  std::string to_string() const;
};

struct LabeledInstance {
  InstanceKey key;
  /// Empty for predictions that could not be mapped to a label; always wrong.
  std::optional<Relation> label;
};

/// Gold instances of the given split (all gold edges when `split` is empty).
std::vector<LabeledInstance> gold_instances(const Corpus& corpus, const SplitAssignment* splits,
                                            std::optional<Split> split);

struct LabelScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;  // gold instances with this label
};

struct EvalResult {
  std::array<LabelScores, kRelationCount> per_label{};
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  /// confusion[gold][predicted]
  std::array<std::array<std::size_t, kRelationCount>, kRelationCount> confusion{};
  std::size_t instances = 0;
  std::size_t invalid_predictions = 0;

  std::string to_json() const;
};

/// Per-label and macro P/R/F1 (macro divides by all five labels; undefined
/// ratios count as 0). Throws KeyMismatchError when prediction keys differ
/// from gold keys, InvalidArgument on duplicate keys.
EvalResult macro_prf(const std::vector<LabeledInstance>& gold,
                     const std::vector<LabeledInstance>& predicted);

/// Most frequent training label (ties: canonical order). Throws InvalidArgument
/// for an empty training set.
Relation majority_label(const std::vector<LabeledInstance>& train);

std::vector<LabeledInstance> majority_baseline(const std::vector<LabeledInstance>& train,
                                               const std::vector<InstanceKey>& eval_keys);

/// {kind:"pred", citing_claim, cited_claim, context_index, label}; label may be "invalid".
void write_predictions(std::ostream& out, const std::vector<LabeledInstance>& preds);
std::vector<LabeledInstance> read_predictions(std::istream& in);

}  // namespace claimflow
