#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "claimflow/relation.hpp"

namespace claimflow {

enum class Section : unsigned char { abstract, introduction, conclusion, other };
enum class Provenance : unsigned char { gold, predicted };

std::string_view to_string(Section s) noexcept;
std::optional<Section> parse_section(std::string_view s) noexcept;
std::string_view to_string(Provenance p) noexcept;
std::optional<Provenance> parse_provenance(std::string_view s) noexcept;

struct Paper {
  std::string id;
  std::string title;
  std::string venue;
  int year = 0;

  friend bool operator==(const Paper&, const Paper&) = default;
};

struct Claim {
  std::string id;
  std::string paper_id;
  std::vector<std::string> surface_texts;
  std::string canonical_text;
  std::vector<Section> sections;

  /// True when the canonical text is an edited form rather than one of the surface texts.
  bool canonical_edited() const;

  friend bool operator==(const Claim&, const Claim&) = default;
};

/// Marker sentence plus its neighbours. Empty neighbours are empty strings.
struct CitationContext {
  std::string citing_paper_id;
  std::string cited_paper_id;
  std::string preceding;
  std::string marker;
  std::string following;

  friend bool operator==(const CitationContext&, const CitationContext&) = default;
};

struct RelationEdge {
  std::string citing_claim_id;
  std::string cited_claim_id;
  Relation label = Relation::background;
  /// 0-based position in Corpus::contexts().
  std::size_t context_index = 0;
  Provenance provenance = Provenance::gold;
  /// Year of the citing paper.
  int year = 0;

  friend bool operator==(const RelationEdge&, const RelationEdge&) = default;
};

enum class RecordKind : unsigned char { paper, claim, context, edge, unknown };
std::string_view to_string(RecordKind k) noexcept;

/// Source line of every record, kept so validation can point back into the file.
struct SourceLines {
  std::vector<std::size_t> papers, claims, contexts, edges;
};

/// Papers, claims, citation contexts and relation edges. Immutable once built.
///
/// Construction does not validate; use validate_corpus() or load through
/// load_corpus(), which rejects invalid bundles. Lookups resolve to the first
/// record carrying an id.
class Corpus {
 public:
  Corpus() = default;
  Corpus(std::vector<Paper> papers, std::vector<Claim> claims,
         std::vector<CitationContext> contexts, std::vector<RelationEdge> edges,
         SourceLines lines = {});

  const std::vector<Paper>& papers() const noexcept { return papers_; }
  const std::vector<Claim>& claims() const noexcept { return claims_; }
  const std::vector<CitationContext>& contexts() const noexcept { return contexts_; }
  const std::vector<RelationEdge>& edges() const noexcept { return edges_; }
  const SourceLines& source_lines() const noexcept { return lines_; }

  const Paper* find_paper(std::string_view id) const;
  const Claim* find_claim(std::string_view id) const;
  /// Paper owning a claim, or nullptr when either id does not resolve.
  const Paper* paper_of_claim(std::string_view claim_id) const;

  /// 1-based source line of a record, 0 when the corpus was not loaded from a file.
  std::size_t line_of(RecordKind kind, std::size_t index) const;

  friend bool operator==(const Corpus& a, const Corpus& b) {
    return a.papers_ == b.papers_ && a.claims_ == b.claims_ && a.contexts_ == b.contexts_ &&
           a.edges_ == b.edges_;
  }

 private:
  std::vector<Paper> papers_;
  std::vector<Claim> claims_;
  std::vector<CitationContext> contexts_;
  std::vector<RelationEdge> edges_;
  SourceLines lines_;
  std::unordered_map<std::string, std::size_t> paper_index_;
  std::unordered_map<std::string, std::size_t> claim_index_;
};

// ---------------------------------------------------------------------------
// Validation

enum class ViolationKind : unsigned char {
  malformed_record,
  unknown_label,
  unknown_section,
  unknown_provenance,
  duplicate_id,
  dangling_reference,
  empty_surface_texts,
  empty_canonical_text,
  invalid_year,
  self_citation,
  empty_marker,
  same_paper_edge,
  context_mismatch,
  year_mismatch,
};

std::string_view to_string(ViolationKind k) noexcept;

struct Violation {
  ViolationKind kind;
  RecordKind record_kind;
  /// Index into the corresponding corpus list (or raw record number for records
  /// that never made it into the corpus).
  std::size_t index = 0;
  /// 1-based line in the source file, 0 if unknown.
  std::size_t line = 0;
  /// Offending id (claim id, paper id, ...) or field name.
  std::string subject;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  std::size_t size() const noexcept { return violations.size(); }
  /// "N violations" headline followed by one line per violation.
  std::string to_text() const;
};

/// Every invariant violation of an in-memory corpus. Contexts that point to
/// papers outside the corpus are not violations; restrict_citations() removes them.
ValidationReport validate_corpus(const Corpus& corpus);

// ---------------------------------------------------------------------------
// Interchange format: newline-delimited JSON, one record per line, "kind"
// discriminator in {paper, claim, context, edge}. Edges reference contexts by
// their 0-based position among context records.

struct LoadResult {
  /// Corpus with every offending record (and anything depending on it) removed.
  Corpus corpus;
  /// Violations found while parsing and validating, in source order.
  ValidationReport report;
  std::size_t dropped_records = 0;
};

/// Parses and validates a bundle; never throws on bad data.
LoadResult read_corpus(std::istream& in);
LoadResult read_corpus_file(const std::filesystem::path& path);

/// Strict loader: throws DataError (or DanglingReferenceError) for the first
/// violation, naming the record line and offending field or id.
Corpus load_corpus(const std::filesystem::path& path);
Corpus parse_corpus(std::istream& in);

void write_corpus(std::ostream& out, const Corpus& corpus);

// ---------------------------------------------------------------------------

struct RestrictResult {
  Corpus corpus;
  std::size_t dropped_contexts = 0;
  std::size_t dropped_edges = 0;
};

/// Keeps only contexts whose citing and cited papers are both in the corpus,
/// together with the edges attached to them. Idempotent.
RestrictResult restrict_citations(const Corpus& corpus);

/// Number of distinct directed (citing paper, cited paper) pairs among in-corpus contexts.
std::size_t paper_citation_edge_count(const Corpus& corpus);

}  // namespace claimflow
