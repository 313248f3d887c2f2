#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace claimflow {

/// Epistemic relation a citing claim holds towards a cited claim.
/// The enumerator order is the canonical label order used for tie-breaks,
/// confusion-matrix rows and report rows.
enum class Relation : unsigned char { support = 0, extend, qualify, refute, background };

inline constexpr std::size_t kRelationCount = 5;

inline constexpr std::array<Relation, kRelationCount> kAllRelations{
    Relation::support, Relation::extend, Relation::qualify, Relation::refute,
    Relation::background};

constexpr std::size_t index_of(Relation r) noexcept { return static_cast<std::size_t>(r); }

constexpr std::string_view to_string(Relation r) noexcept {
  switch (r) {
    case Relation::support: return "support";
    case Relation::extend: return "extend";
    case Relation::qualify: return "qualify";
    case Relation::refute: return "refute";
    case Relation::background: return "background";
  }
  return "?";
}

/// Exact, case-sensitive parse. "supports" is not a label.
constexpr std::optional<Relation> parse_relation(std::string_view s) noexcept {
  for (Relation r : kAllRelations) {
    if (to_string(r) == s) return r;
  }
  return std::nullopt;
}

/// A challenge is any qualify or refute interaction.
constexpr bool is_challenge(Relation r) noexcept {
  return r == Relation::qualify || r == Relation::refute;
}

/// Which edges take part in degree/engagement style metrics.
enum class LabelFilter : unsigned char { all, substantive };

constexpr std::string_view to_string(LabelFilter f) noexcept {
  return f == LabelFilter::all ? "all" : "substantive";
}

constexpr std::optional<LabelFilter> parse_label_filter(std::string_view s) noexcept {
  if (s == "all") return LabelFilter::all;
  if (s == "substantive") return LabelFilter::substantive;
  return std::nullopt;
}

constexpr bool admits(LabelFilter f, Relation r) noexcept {
  return f == LabelFilter::all || r != Relation::background;
}

}  // namespace claimflow
