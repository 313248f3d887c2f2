#include "claimflow/corpus.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>

#include <json.hpp>

#include "claimflow/error.hpp"
#include "claimflow/io.hpp"

namespace claimflow {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr std::size_t kNoContext = std::numeric_limits<std::size_t>::max();

}  // namespace

std::string_view to_string(Section s) noexcept {
  switch (s) {
    case Section::abstract: return "abstract";
    case Section::introduction: return "introduction";
    case Section::conclusion: return "conclusion";
    case Section::other: return "other";
  }
  return "?";
}

std::optional<Section> parse_section(std::string_view s) noexcept {
  for (auto sec : {Section::abstract, Section::introduction, Section::conclusion, Section::other}) {
    if (to_string(sec) == s) return sec;
  }
  return std::nullopt;
}

std::string_view to_string(Provenance p) noexcept {
  return p == Provenance::gold ? "gold" : "predicted";
}

std::optional<Provenance> parse_provenance(std::string_view s) noexcept {
  if (s == "gold") return Provenance::gold;
  if (s == "predicted") return Provenance::predicted;
  return std::nullopt;
}

std::string_view to_string(RecordKind k) noexcept {
  switch (k) {
    case RecordKind::paper: return "paper";
    case RecordKind::claim: return "claim";
    case RecordKind::context: return "context";
    case RecordKind::edge: return "edge";
    case RecordKind::unknown: return "record";
  }
  return "?";
}

std::string_view to_string(ViolationKind k) noexcept {
  switch (k) {
    case ViolationKind::malformed_record: return "malformed-record";
    case ViolationKind::unknown_label: return "unknown-label";
    case ViolationKind::unknown_section: return "unknown-section";
    case ViolationKind::unknown_provenance: return "unknown-provenance";
    case ViolationKind::duplicate_id: return "duplicate-id";
    case ViolationKind::dangling_reference: return "dangling-reference";
    case ViolationKind::empty_surface_texts: return "empty-surface-texts";
    case ViolationKind::empty_canonical_text: return "empty-canonical-text";
    case ViolationKind::invalid_year: return "invalid-year";
    case ViolationKind::self_citation: return "self-citation";
    case ViolationKind::empty_marker: return "empty-marker";
    case ViolationKind::same_paper_edge: return "same-paper-edge";
    case ViolationKind::context_mismatch: return "context-mismatch";
    case ViolationKind::year_mismatch: return "year-mismatch";
  }
  return "?";
}

bool Claim::canonical_edited() const {
  return std::find(surface_texts.begin(), surface_texts.end(), canonical_text) ==
         surface_texts.end();
}

// ---------------------------------------------------------------------------

Corpus::Corpus(std::vector<Paper> papers, std::vector<Claim> claims,
               std::vector<CitationContext> contexts, std::vector<RelationEdge> edges,
               SourceLines lines)
    : papers_(std::move(papers)),
      claims_(std::move(claims)),
      contexts_(std::move(contexts)),
      edges_(std::move(edges)),
      lines_(std::move(lines)) {
  for (std::size_t i = 0; i < papers_.size(); ++i) paper_index_.try_emplace(papers_[i].id, i);
  for (std::size_t i = 0; i < claims_.size(); ++i) claim_index_.try_emplace(claims_[i].id, i);
}

const Paper* Corpus::find_paper(std::string_view id) const {
  auto it = paper_index_.find(std::string(id));
  return it == paper_index_.end() ? nullptr : &papers_[it->second];
}

const Claim* Corpus::find_claim(std::string_view id) const {
  auto it = claim_index_.find(std::string(id));
  return it == claim_index_.end() ? nullptr : &claims_[it->second];
}

const Paper* Corpus::paper_of_claim(std::string_view claim_id) const {
  const Claim* c = find_claim(claim_id);
  return c ? find_paper(c->paper_id) : nullptr;
}

std::size_t Corpus::line_of(RecordKind kind, std::size_t index) const {
  const std::vector<std::size_t>* v = nullptr;
  switch (kind) {
    case RecordKind::paper: v = &lines_.papers; break;
    case RecordKind::claim: v = &lines_.claims; break;
    case RecordKind::context: v = &lines_.contexts; break;
    case RecordKind::edge: v = &lines_.edges; break;
    case RecordKind::unknown: return 0;
  }
  return index < v->size() ? (*v)[index] : 0;
}

// ---------------------------------------------------------------------------

std::string ValidationReport::to_text() const {
  std::ostringstream os;
  os << violations.size() << (violations.size() == 1 ? " violation" : " violations") << '\n';
  for (const auto& v : violations) {
    if (v.line) os << "line " << v.line << ": ";
    os << to_string(v.record_kind) << '[' << v.index << "] " << to_string(v.kind);
    if (!v.subject.empty()) os << " \"" << v.subject << '"';
    if (!v.message.empty()) os << ": " << v.message;
    os << '\n';
  }
  return os.str();
}

ValidationReport validate_corpus(const Corpus& corpus) {
  ValidationReport report;
  auto add = [&](ViolationKind kind, RecordKind rk, std::size_t i, std::string subject,
                 std::string message) {
    report.violations.push_back(
        {kind, rk, i, corpus.line_of(rk, i), std::move(subject), std::move(message)});
  };

  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < corpus.papers().size(); ++i) {
    const auto& p = corpus.papers()[i];
    if (p.id.empty()) add(ViolationKind::malformed_record, RecordKind::paper, i, "id", "empty id");
    if (!seen.insert(p.id).second)
      add(ViolationKind::duplicate_id, RecordKind::paper, i, p.id, "paper id already defined");
    if (p.year <= 0)
      add(ViolationKind::invalid_year, RecordKind::paper, i, p.id,
          "year must be positive, got " + std::to_string(p.year));
  }

  seen.clear();
  for (std::size_t i = 0; i < corpus.claims().size(); ++i) {
    const auto& c = corpus.claims()[i];
    if (c.id.empty()) add(ViolationKind::malformed_record, RecordKind::claim, i, "id", "empty id");
    if (!seen.insert(c.id).second)
      add(ViolationKind::duplicate_id, RecordKind::claim, i, c.id, "claim id already defined");
    if (!corpus.find_paper(c.paper_id))
      add(ViolationKind::dangling_reference, RecordKind::claim, i, c.paper_id,
          "claim " + c.id + " references unknown paper");
    if (c.surface_texts.empty())
      add(ViolationKind::empty_surface_texts, RecordKind::claim, i, c.id, "no surface texts");
    if (c.canonical_text.empty())
      add(ViolationKind::empty_canonical_text, RecordKind::claim, i, c.id, "empty canonical text");
  }

  for (std::size_t i = 0; i < corpus.contexts().size(); ++i) {
    const auto& ctx = corpus.contexts()[i];
    if (ctx.citing_paper_id == ctx.cited_paper_id)
      add(ViolationKind::self_citation, RecordKind::context, i, ctx.citing_paper_id,
          "context cites its own paper");
    if (ctx.marker.empty())
      add(ViolationKind::empty_marker, RecordKind::context, i, "", "marker sentence is empty");
  }

  for (std::size_t i = 0; i < corpus.edges().size(); ++i) {
    const auto& e = corpus.edges()[i];
    const Claim* citing = corpus.find_claim(e.citing_claim_id);
    const Claim* cited = corpus.find_claim(e.cited_claim_id);
    if (!citing)
      add(ViolationKind::dangling_reference, RecordKind::edge, i, e.citing_claim_id,
          "unknown citing claim");
    if (!cited)
      add(ViolationKind::dangling_reference, RecordKind::edge, i, e.cited_claim_id,
          "unknown cited claim");
    if (e.context_index >= corpus.contexts().size()) {
      add(ViolationKind::dangling_reference, RecordKind::edge, i,
          e.context_index == kNoContext ? "context" : "context#" + std::to_string(e.context_index),
          "unknown context");
    }
    if (!citing || !cited) continue;
    if (citing->paper_id == cited->paper_id) {
      add(ViolationKind::same_paper_edge, RecordKind::edge, i, citing->paper_id,
          e.citing_claim_id + " and " + e.cited_claim_id + " belong to the same paper");
      continue;
    }
    if (e.context_index < corpus.contexts().size()) {
      const auto& ctx = corpus.contexts()[e.context_index];
      if (ctx.citing_paper_id != citing->paper_id || ctx.cited_paper_id != cited->paper_id)
        add(ViolationKind::context_mismatch, RecordKind::edge, i,
            "context#" + std::to_string(e.context_index),
            "context papers do not match the claims' papers");
    }
    if (const Paper* p = corpus.find_paper(citing->paper_id); p && p->year != e.year)
      add(ViolationKind::year_mismatch, RecordKind::edge, i, e.citing_claim_id,
          "edge year " + std::to_string(e.year) + " differs from citing paper year " +
              std::to_string(p->year));
  }
  return report;
}

// ---------------------------------------------------------------------------

namespace {

struct FieldError {
  std::string field;
  std::string message;
};

const json& field(const json& rec, const char* name) {
  auto it = rec.find(name);
  if (it == rec.end()) throw FieldError{name, "missing field"};
  return *it;
}

std::string string_field(const json& rec, const char* name) {
  const json& v = field(rec, name);
  if (!v.is_string()) throw FieldError{name, "expected a string"};
  return v.get<std::string>();
}

int int_field(const json& rec, const char* name) {
  const json& v = field(rec, name);
  if (!v.is_number_integer()) throw FieldError{name, "expected an integer"};
  const auto x = v.get<long long>();
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
    throw FieldError{name, "integer out of range"};
  return static_cast<int>(x);
}

std::vector<std::string> string_array_field(const json& rec, const char* name) {
  const json& v = field(rec, name);
  if (!v.is_array()) throw FieldError{name, "expected an array of strings"};
  std::vector<std::string> out;
  for (const auto& x : v) {
    if (!x.is_string()) throw FieldError{name, "expected an array of strings"};
    out.push_back(x.get<std::string>());
  }
  return out;
}

// Records after parsing, before validation. Contexts keep their raw ordinal so
// edges can be remapped when a context record is rejected.
struct ParsedBundle {
  std::vector<Paper> papers;
  std::vector<Claim> claims;
  std::vector<CitationContext> contexts;
  std::vector<RelationEdge> edges;
  SourceLines lines;
  std::size_t raw_contexts = 0;
};

RecordKind record_kind_of(std::string_view s) {
  if (s == "paper") return RecordKind::paper;
  if (s == "claim") return RecordKind::claim;
  if (s == "context") return RecordKind::context;
  if (s == "edge") return RecordKind::edge;
  return RecordKind::unknown;
}

// Removes the flagged records, remapping edge context indices. Returns the number removed.
std::size_t drop_records(std::vector<Paper>& papers, std::vector<Claim>& claims,
                         std::vector<CitationContext>& contexts, std::vector<RelationEdge>& edges,
                         SourceLines& lines, const std::vector<Violation>& violations) {
  std::set<std::size_t> bad_papers, bad_claims, bad_contexts, bad_edges;
  for (const auto& v : violations) {
    switch (v.record_kind) {
      case RecordKind::paper: bad_papers.insert(v.index); break;
      case RecordKind::claim: bad_claims.insert(v.index); break;
      case RecordKind::context: bad_contexts.insert(v.index); break;
      case RecordKind::edge: bad_edges.insert(v.index); break;
      case RecordKind::unknown: break;
    }
  }
  auto filter = [](auto& items, std::vector<std::size_t>& line_vec,
                   const std::set<std::size_t>& bad) {
    std::remove_reference_t<decltype(items)> kept;
    std::vector<std::size_t> kept_lines;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (bad.count(i)) continue;
      kept.push_back(std::move(items[i]));
      if (i < line_vec.size()) kept_lines.push_back(line_vec[i]);
    }
    items = std::move(kept);
    line_vec = std::move(kept_lines);
  };

  std::vector<std::size_t> remap(contexts.size(), kNoContext);
  for (std::size_t i = 0, next = 0; i < contexts.size(); ++i)
    if (!bad_contexts.count(i)) remap[i] = next++;
  for (auto& e : edges)
    e.context_index = e.context_index < remap.size() ? remap[e.context_index] : kNoContext;

  filter(papers, lines.papers, bad_papers);
  filter(claims, lines.claims, bad_claims);
  filter(contexts, lines.contexts, bad_contexts);
  filter(edges, lines.edges, bad_edges);
  return bad_papers.size() + bad_claims.size() + bad_contexts.size() + bad_edges.size();
}

}  // namespace

LoadResult read_corpus(std::istream& in) {
  LoadResult result;
  ParsedBundle b;
  std::vector<std::size_t> raw_to_parsed_context;

  std::string line;
  std::size_t line_no = 0;
  std::size_t raw_record = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const std::size_t record = raw_record++;

    RecordKind kind = RecordKind::unknown;
    auto reject = [&](ViolationKind vk, std::string subject, std::string message) {
      result.report.violations.push_back(
          {vk, kind, record, line_no, std::move(subject), std::move(message)});
      ++result.dropped_records;
    };

    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      reject(ViolationKind::malformed_record, "", std::string("invalid JSON: ") + e.what());
      continue;
    }
    if (!rec.is_object()) {
      reject(ViolationKind::malformed_record, "", "record is not a JSON object");
      continue;
    }

    try {
      kind = record_kind_of(string_field(rec, "kind"));
      switch (kind) {
        case RecordKind::paper: {
          Paper p{string_field(rec, "id"), string_field(rec, "title"),
                  string_field(rec, "venue"), int_field(rec, "year")};
          b.papers.push_back(std::move(p));
          b.lines.papers.push_back(line_no);
          break;
        }
        case RecordKind::claim: {
          Claim c;
          c.id = string_field(rec, "id");
          c.paper_id = string_field(rec, "paper");
          c.surface_texts = string_array_field(rec, "texts");
          c.canonical_text = string_field(rec, "canonical");
          const auto sections =
              rec.contains("sections") ? string_array_field(rec, "sections")
                                       : std::vector<std::string>{};
          for (const auto& s : sections) {
            auto sec = parse_section(s);
            if (!sec) {
              reject(ViolationKind::unknown_section, s, "claim " + c.id + ": unknown section");
              goto next_record;
            }
            c.sections.push_back(*sec);
          }
          b.claims.push_back(std::move(c));
          b.lines.claims.push_back(line_no);
          break;
        }
        case RecordKind::context: {
          const std::size_t raw = b.raw_contexts++;
          CitationContext ctx{string_field(rec, "citing"), string_field(rec, "cited"),
                              string_field(rec, "pre"), string_field(rec, "sent"),
                              string_field(rec, "post")};
          raw_to_parsed_context.resize(raw + 1, kNoContext);
          raw_to_parsed_context[raw] = b.contexts.size();
          b.contexts.push_back(std::move(ctx));
          b.lines.contexts.push_back(line_no);
          break;
        }
        case RecordKind::edge: {
          RelationEdge e;
          e.citing_claim_id = string_field(rec, "citing_claim");
          e.cited_claim_id = string_field(rec, "cited_claim");
          const std::string label = string_field(rec, "label");
          const json& ci = field(rec, "context_index");
          if (!ci.is_number_unsigned() && !(ci.is_number_integer() && ci.get<long long>() >= 0))
            throw FieldError{"context_index", "expected a non-negative integer"};
          const std::string prov =
              rec.contains("provenance") ? string_field(rec, "provenance") : "gold";
          auto rel = parse_relation(label);
          if (!rel) {
            reject(ViolationKind::unknown_label, label,
                   "edge " + e.citing_claim_id + " -> " + e.cited_claim_id + ": unknown label");
            continue;
          }
          auto pv = parse_provenance(prov);
          if (!pv) {
            reject(ViolationKind::unknown_provenance, prov, "unknown provenance");
            continue;
          }
          e.label = *rel;
          e.provenance = *pv;
          e.context_index = ci.get<std::size_t>();
          b.edges.push_back(std::move(e));
          b.lines.edges.push_back(line_no);
          break;
        }
        case RecordKind::unknown:
          reject(ViolationKind::malformed_record, "kind",
                 "unknown record kind \"" + rec["kind"].get<std::string>() + "\"");
          break;
      }
    } catch (const FieldError& fe) {
      if (kind == RecordKind::context) {
        // Keep the raw ordinal reserved so later edges still point at the right slot.
        raw_to_parsed_context.resize(b.raw_contexts, kNoContext);
      }
      reject(ViolationKind::malformed_record, fe.field, fe.field + ": " + fe.message);
    }
  next_record:;
  }

  // Edge context indices refer to raw context ordinals in the file.
  for (auto& e : b.edges) {
    e.context_index = e.context_index < raw_to_parsed_context.size()
                          ? raw_to_parsed_context[e.context_index]
                          : kNoContext;
  }

  auto fill_years = [](std::vector<RelationEdge>& edges, const Corpus& c) {
    for (auto& e : edges)
      if (const Paper* p = c.paper_of_claim(e.citing_claim_id)) e.year = p->year;
  };

  std::vector<Paper> papers = std::move(b.papers);
  std::vector<Claim> claims = std::move(b.claims);
  std::vector<CitationContext> contexts = std::move(b.contexts);
  std::vector<RelationEdge> edges = std::move(b.edges);
  SourceLines lines = std::move(b.lines);

  // Drop offending records until the remainder validates; records that only
  // fail because something they reference was dropped are reported too.
  for (;;) {
    {
      Corpus probe(papers, claims, {}, {}, {});
      fill_years(edges, probe);
    }
    Corpus candidate(papers, claims, contexts, edges, lines);
    ValidationReport pass = validate_corpus(candidate);
    if (pass.ok()) {
      result.corpus = std::move(candidate);
      break;
    }
    result.dropped_records += drop_records(papers, claims, contexts, edges, lines, pass.violations);
    for (auto& v : pass.violations) result.report.violations.push_back(std::move(v));
  }

  std::stable_sort(result.report.violations.begin(), result.report.violations.end(),
                   [](const Violation& a, const Violation& b) { return a.line < b.line; });
  return result;
}

LoadResult read_corpus_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_corpus(in);
}

Corpus parse_corpus(std::istream& in) {
  LoadResult r = read_corpus(in);
  if (!r.report.ok()) {
    const Violation& v = r.report.violations.front();
    std::string what;
    if (v.line) what += "line " + std::to_string(v.line) + ": ";
    what += std::string(to_string(v.record_kind)) + ": " + std::string(to_string(v.kind));
    if (!v.subject.empty()) what += " \"" + v.subject + "\"";
    if (!v.message.empty()) what += " (" + v.message + ")";
    if (v.kind == ViolationKind::dangling_reference)
      throw DanglingReferenceError(v.subject, what, v.line);
    throw DataError(what, v.line);
  }
  return std::move(r.corpus);
}

Corpus load_corpus(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_corpus(in);
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& p : corpus.papers()) {
    ordered_json j;
    j["kind"] = "paper";
    j["id"] = p.id;
    j["title"] = p.title;
    j["venue"] = p.venue;
    j["year"] = p.year;
    out << j.dump() << '\n';
  }
  for (const auto& c : corpus.claims()) {
    ordered_json j;
    j["kind"] = "claim";
    j["id"] = c.id;
    j["paper"] = c.paper_id;
    j["texts"] = c.surface_texts;
    j["canonical"] = c.canonical_text;
    auto secs = ordered_json::array();
    for (auto s : c.sections) secs.push_back(std::string(to_string(s)));
    j["sections"] = std::move(secs);
    out << j.dump() << '\n';
  }
  for (const auto& ctx : corpus.contexts()) {
    ordered_json j;
    j["kind"] = "context";
    j["citing"] = ctx.citing_paper_id;
    j["cited"] = ctx.cited_paper_id;
    j["pre"] = ctx.preceding;
    j["sent"] = ctx.marker;
    j["post"] = ctx.following;
    out << j.dump() << '\n';
  }
  for (const auto& e : corpus.edges()) {
    ordered_json j;
    j["kind"] = "edge";
    j["citing_claim"] = e.citing_claim_id;
    j["cited_claim"] = e.cited_claim_id;
    j["label"] = std::string(to_string(e.label));
    j["context_index"] = e.context_index;
    j["provenance"] = std::string(to_string(e.provenance));
    out << j.dump() << '\n';
  }
}

// ---------------------------------------------------------------------------

RestrictResult restrict_citations(const Corpus& corpus) {
  RestrictResult r;
  std::vector<std::size_t> remap(corpus.contexts().size(), kNoContext);
  std::vector<CitationContext> contexts;
  SourceLines lines;
  lines.papers = corpus.source_lines().papers;
  lines.claims = corpus.source_lines().claims;
  for (std::size_t i = 0; i < corpus.contexts().size(); ++i) {
    const auto& ctx = corpus.contexts()[i];
    if (corpus.find_paper(ctx.citing_paper_id) && corpus.find_paper(ctx.cited_paper_id)) {
      remap[i] = contexts.size();
      contexts.push_back(ctx);
      if (auto l = corpus.line_of(RecordKind::context, i)) lines.contexts.push_back(l);
    } else {
      ++r.dropped_contexts;
    }
  }
  std::vector<RelationEdge> edges;
  for (std::size_t i = 0; i < corpus.edges().size(); ++i) {
    RelationEdge e = corpus.edges()[i];
    if (e.context_index >= remap.size() || remap[e.context_index] == kNoContext) {
      ++r.dropped_edges;
      continue;
    }
    e.context_index = remap[e.context_index];
    edges.push_back(std::move(e));
    if (auto l = corpus.line_of(RecordKind::edge, i)) lines.edges.push_back(l);
  }
  r.corpus = Corpus(corpus.papers(), corpus.claims(), std::move(contexts), std::move(edges),
                    std::move(lines));
  return r;
}

std::size_t paper_citation_edge_count(const Corpus& corpus) {
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& ctx : corpus.contexts()) {
    if (corpus.find_paper(ctx.citing_paper_id) && corpus.find_paper(ctx.cited_paper_id))
      pairs.emplace(ctx.citing_paper_id, ctx.cited_paper_id);
  }
  return pairs.size();
}

}  // namespace claimflow
