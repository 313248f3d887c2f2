#include <gtest/gtest.h>

#include <sstream>

#include "claimflow/corpus.hpp"
#include "claimflow/error.hpp"
#include "fixtures.hpp"

using namespace claimflow;

namespace {

const char* kSmallBundle =
    R"({"kind":"paper","id":"p1","title":"A","venue":"ACL","year":2018}
{"kind":"paper","id":"p2","title":"B","venue":"EMNLP","year":2020}
{"kind":"claim","id":"c1","paper":"p1","texts":["BPE works"],"canonical":"BPE works","sections":["abstract"]}
{"kind":"claim","id":"c2","paper":"p1","texts":["Subwords help"],"canonical":"Subwords help","sections":["introduction"]}
{"kind":"claim","id":"c3","paper":"p2","texts":["BPE fails on morphology"],"canonical":"BPE fails on morphology","sections":["abstract","conclusion"]}
{"kind":"context","citing":"p2","cited":"p1","pre":"","sent":"Unlike [1], we find gaps.","post":""}
{"kind":"edge","citing_claim":"c3","cited_claim":"c1","label":"qualify","context_index":0,"provenance":"gold"}
)";

std::string with_line_replaced(std::string text, const std::string& from, const std::string& to) {
  text.replace(text.find(from), from.size(), to);
  return text;
}

Corpus parse(const std::string& text) {
  std::istringstream in(text);
  return parse_corpus(in);
}

LoadResult read(const std::string& text) {
  std::istringstream in(text);
  return read_corpus(in);
}

}  // namespace

TEST(LoadCorpus, CountsEchoInput) {
  const Corpus c = parse(kSmallBundle);
  EXPECT_EQ(c.papers().size(), 2u);
  EXPECT_EQ(c.claims().size(), 3u);
  EXPECT_EQ(c.edges().size(), 1u);
  EXPECT_EQ(c.edges()[0].year, 2020);
  EXPECT_EQ(c.line_of(RecordKind::edge, 0), 7u);
  EXPECT_EQ(c.paper_of_claim("c3")->id, "p2");
}

TEST(LoadCorpus, DanglingReferenceNamesId) {
  const auto text = with_line_replaced(kSmallBundle, "\"cited_claim\":\"c1\"",
                                       "\"cited_claim\":\"c99\"");
  try {
    parse(text);
    FAIL() << "expected DanglingReferenceError";
  } catch (const DanglingReferenceError& e) {
    EXPECT_EQ(e.id(), "c99");
    EXPECT_EQ(e.record(), 7u);
    EXPECT_NE(std::string(e.what()).find("c99"), std::string::npos);
  }
}

TEST(LoadCorpus, DuplicateIdAndMalformedField) {
  std::string dup = kSmallBundle;
  dup += R"({"kind":"paper","id":"p1","title":"C","venue":"ACL","year":2019})" "\n";
  EXPECT_THROW(parse(dup), DataError);
  const auto bad_year = with_line_replaced(kSmallBundle, "\"year\":2018", "\"year\":\"2018\"");
  try {
    parse(bad_year);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_EQ(e.record(), 1u);
    EXPECT_NE(std::string(e.what()).find("year"), std::string::npos);
  }
  EXPECT_THROW(parse(std::string(kSmallBundle) + "not json\n"), DataError);
}

TEST(LoadCorpus, MissingFileIsIoError) {
  EXPECT_THROW(load_corpus("/nonexistent/bundle.jsonl"), IoError);
}

TEST(Validate, ValidBundleHasNoViolations) {
  const auto r = read(kSmallBundle);
  EXPECT_TRUE(r.report.ok());
  EXPECT_EQ(r.report.to_text(), "0 violations\n");
  EXPECT_TRUE(validate_corpus(r.corpus).ok());
}

TEST(Validate, UnknownLabel) {
  const auto r = read(with_line_replaced(kSmallBundle, "\"qualify\"", "\"supports\""));
  ASSERT_EQ(r.report.size(), 1u);
  const auto& v = r.report.violations[0];
  EXPECT_EQ(v.kind, ViolationKind::unknown_label);
  EXPECT_EQ(v.subject, "supports");
  EXPECT_EQ(v.line, 7u);
  EXPECT_EQ(r.corpus.edges().size(), 0u);
  EXPECT_EQ(r.dropped_records, 1u);
}

TEST(Validate, EmptySurfaceTextsNamesClaim) {
  const auto r = read(with_line_replaced(kSmallBundle, R"("texts":["Subwords help"])",
                                         R"("texts":[])"));
  ASSERT_EQ(r.report.size(), 1u);
  EXPECT_EQ(r.report.violations[0].kind, ViolationKind::empty_surface_texts);
  EXPECT_EQ(r.report.violations[0].subject, "c2");
}

TEST(Validate, InMemoryInvariants) {
  const Corpus good = parse(kSmallBundle);
  auto claims = good.claims();
  auto edges = good.edges();
  edges.push_back({"c1", "c2", Relation::support, 0, Provenance::gold, 2018});  // same paper
  claims[0].canonical_text.clear();
  const Corpus bad(good.papers(), claims, good.contexts(), edges);
  const auto rep = validate_corpus(bad);
  bool same_paper = false, empty_canonical = false;
  for (const auto& v : rep.violations) {
    same_paper |= v.kind == ViolationKind::same_paper_edge;
    empty_canonical |= v.kind == ViolationKind::empty_canonical_text;
  }
  EXPECT_TRUE(same_paper);
  EXPECT_TRUE(empty_canonical);
}

TEST(Validate, DropCascadesToDependents) {
  // Removing claim c1 (empty canonical) also removes the edge that cites it.
  const auto r = read(with_line_replaced(kSmallBundle, R"("canonical":"BPE works")",
                                         R"("canonical":"")"));
  EXPECT_EQ(r.corpus.claims().size(), 2u);
  EXPECT_EQ(r.corpus.edges().size(), 0u);
  EXPECT_TRUE(validate_corpus(r.corpus).ok());
  EXPECT_GE(r.report.size(), 2u);
}

TEST(RestrictCitations, DropsExternalContexts) {
  std::string text = kSmallBundle;
  for (int i = 0; i < 4; ++i) {
    const std::string cited = i < 2 ? "ext" + std::to_string(i) : "p1";
    text += R"({"kind":"context","citing":"p2","cited":")" + cited +
            R"(","pre":"","sent":"See [2].","post":""})" "\n";
  }
  const Corpus c = parse(text);
  ASSERT_EQ(c.contexts().size(), 5u);
  const auto r = restrict_citations(c);
  EXPECT_EQ(r.corpus.contexts().size(), 3u);
  EXPECT_EQ(r.dropped_contexts, 2u);
  EXPECT_EQ(r.corpus.edges().size(), 1u);
  EXPECT_EQ(restrict_citations(r.corpus).corpus, r.corpus);
  EXPECT_EQ(paper_citation_edge_count(r.corpus), 1u);
}

TEST(WriteCorpus, RoundTrip) {
  const Corpus c = claimflow::testing::to_corpus(claimflow::testing::synthetic_data(3));
  const std::string text = claimflow::testing::to_bundle(c);
  const Corpus back = parse(text);
  EXPECT_EQ(back, c);
  EXPECT_EQ(claimflow::testing::to_bundle(back), text);
}

TEST(WriteCorpus, SmallBundleIsStable) {
  EXPECT_EQ(claimflow::testing::to_bundle(parse(kSmallBundle)), kSmallBundle);
}

TEST(Claim, CanonicalEdited) {
  Claim c{"c", "p", {"a", "b"}, "a", {}};
  EXPECT_FALSE(c.canonical_edited());
  c.canonical_text = "a, edited";
  EXPECT_TRUE(c.canonical_edited());
}
