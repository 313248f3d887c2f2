#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "claimflow/claim_graph.hpp"
#include "claimflow/relation.hpp"

namespace claimflow {

/// Table cell: text, integer, real, or empty.
class Cell {
 public:
  Cell() = default;
  Cell(std::string s) : v_(std::move(s)) {}
  Cell(const char* s) : v_(std::string(s)) {}
  Cell(std::string_view s) : v_(std::string(s)) {}
  Cell(long long i) : v_(i) {}
  Cell(int i) : v_(static_cast<long long>(i)) {}
  Cell(std::size_t i) : v_(static_cast<long long>(i)) {}
  Cell(double d) : v_(d) {}
  template <typename T>
  Cell(const std::optional<T>& o) {
    if (o) *this = Cell(*o);
  }

  std::string text() const;
  const auto& value() const noexcept { return v_; }

 private:
  std::variant<std::monostate, std::string, long long, double> v_;
};

/// One analysis result: a table plus parameters and summary scalars.
struct MetricReport {
  std::string metric;
  std::vector<std::pair<std::string, Cell>> parameters;
  std::vector<std::pair<std::string, Cell>> summary;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::string fingerprint;

  std::string to_csv() const;
  /// {"metric", "parameters", "fingerprint", "summary", "columns", "rows"}.
  std::string to_json() const;
};

inline constexpr std::array<std::string_view, 10> kMetricNames{
    "relation-dist", "propagation", "reuse-survival", "challenge", "influence",
    "density",       "modularity",  "venue",          "convdiv",   "uncertainty"};

inline constexpr std::uint64_t kDefaultSeed = 42;

bool is_metric_name(std::string_view name) noexcept;

struct AnalysisConfig {
  LabelFilter labels = LabelFilter::all;
  /// Censoring horizon for reuse-survival; defaults to the latest claim year.
  std::optional<int> horizon;
  std::uint64_t seed = kDefaultSeed;
};

/// Runs one named metric over `graph`. Throws InvalidArgument for unknown names.
MetricReport run_metric(std::string_view name, const ClaimGraph& graph,
                        const AnalysisConfig& config, std::string fingerprint);

}  // namespace claimflow
