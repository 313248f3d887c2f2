#include "fixtures.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

namespace claimflow::testing {

namespace {

std::string padded(const char* prefix, std::size_t i, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, i);
  return buf;
}

Relation draw_label(std::mt19937_64& rng) {
  const auto r = rng() % 1000;
  if (r < 195) return Relation::support;
  if (r < 346) return Relation::extend;
  if (r < 405) return Relation::qualify;
  if (r < 429) return Relation::refute;
  return Relation::background;
}

}  // namespace

RawData synthetic_data(std::uint64_t seed, std::size_t papers, std::size_t claims,
                       std::size_t edges) {
  std::mt19937_64 rng(seed);
  static const char* venues[] = {"ACL", "EMNLP", "NAACL"};
  RawData d;
  for (std::size_t i = 0; i < papers; ++i)
    d.papers.push_back({padded("p", i, 2), venues[rng() % 3], 2010 + static_cast<int>(rng() % 10)});
  for (std::size_t i = 0; i < claims; ++i) {
    const std::size_t p = i < papers ? i : rng() % papers;
    d.claims.push_back({padded("c", i, 2), d.papers[p].id});
  }
  while (d.edges.size() < edges) {
    const auto& a = d.claims[rng() % claims];
    const auto& b = d.claims[rng() % claims];
    if (a.paper == b.paper) continue;
    if (d.claim_year(a.id) < d.claim_year(b.id)) continue;
    d.edges.push_back({a.id, b.id, draw_label(rng)});
  }
  return d;
}

Corpus to_corpus(const RawData& d) {
  std::vector<Paper> papers;
  for (const auto& p : d.papers) papers.push_back({p.id, "Title of " + p.id, p.venue, p.year});
  std::vector<Claim> claims;
  for (const auto& c : d.claims) {
    const std::string text = "Claim " + c.id + " holds.";
    claims.push_back({c.id, c.paper, {text}, text, {Section::abstract}});
  }
  std::vector<CitationContext> contexts;
  std::vector<RelationEdge> edges;
  for (std::size_t i = 0; i < d.edges.size(); ++i) {
    const auto& e = d.edges[i];
    const auto& citing = d.claim(e.citing).paper;
    contexts.push_back({citing, d.claim(e.cited).paper, "", "As shown by [" + std::to_string(i) + "].",
                        ""});
    edges.push_back({e.citing, e.cited, e.label, i, Provenance::gold, d.paper(citing).year});
  }
  return Corpus(std::move(papers), std::move(claims), std::move(contexts), std::move(edges));
}

ClaimGraph to_graph(const RawData& d) {
  std::vector<GraphPaper> papers;
  for (const auto& p : d.papers) papers.push_back({p.id, p.venue, p.year});
  std::vector<ClaimGraph::NodeSpec> nodes;
  for (const auto& c : d.claims) nodes.push_back({c.id, c.paper});
  std::vector<ClaimGraph::EdgeSpec> edges;
  for (const auto& e : d.edges) edges.push_back({e.citing, e.cited, e.label});
  return ClaimGraph(std::move(papers), std::move(nodes), std::move(edges));
}

std::string to_bundle(const Corpus& c) {
  std::ostringstream os;
  write_corpus(os, c);
  return os.str();
}

PlantedFixture planted_duplicates(std::uint64_t seed) {
  constexpr std::size_t kPapers = 10, kPerPaper = 10, kDim = 48;
  static const std::vector<std::vector<std::size_t>> kSlots = {
      {1, 4, 7}, {0, 5, 9}, {2, 3, 8}, {1, 6}, {4, 5}, {0, 9}, {3, 7}, {2, 8}};

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_vector = [&] {
    std::vector<double> v(kDim);
    for (auto& x : v) x = gauss(rng);
    return v;
  };

  RawData raw;
  PlantedFixture f;
  std::vector<std::vector<double>> vecs(kPapers * kPerPaper);
  std::vector<bool> filled(vecs.size(), false);
  for (std::size_t p = 0; p < kPapers; ++p) {
    raw.papers.push_back({padded("p", p, 2), "ACL", 2000 + static_cast<int>(p)});
    for (std::size_t k = 0; k < kPerPaper; ++k)
      raw.claims.push_back({padded("h", p * kPerPaper + k, 3), raw.papers.back().id});
  }
  for (std::size_t g = 0; g < kSlots.size(); ++g) {
    const auto base = random_vector();
    std::vector<std::string> group;
    for (std::size_t slot : kSlots[g]) {
      const std::size_t i = g * kPerPaper + slot;
      vecs[i] = base;
      for (auto& x : vecs[i]) x += 0.05 * gauss(rng);
      filled[i] = true;
      group.push_back(raw.claims[i].id);
    }
    f.merged_away += group.size() - 1;
    f.groups.push_back(std::move(group));
  }
  for (std::size_t i = 0; i < vecs.size(); ++i)
    if (!filled[i]) vecs[i] = random_vector();

  while (raw.edges.size() < 150) {
    const auto& a = raw.claims[rng() % raw.claims.size()];
    const auto& b = raw.claims[rng() % raw.claims.size()];
    if (a.paper == b.paper || raw.claim_year(a.id) < raw.claim_year(b.id)) continue;
    raw.edges.push_back({a.id, b.id, draw_label(rng)});
  }

  Corpus base = to_corpus(raw);
  std::vector<Claim> claims = base.claims();
  for (std::size_t i = 0; i < claims.size(); ++i) {
    // Vary text lengths so representatives are not decided by the id tie-break alone.
    claims[i].canonical_text += std::string(rng() % 7, '!');
    claims[i].surface_texts = {claims[i].canonical_text};
    f.embeddings.insert(claims[i].id, vecs[i]);
  }
  f.corpus = Corpus(base.papers(), std::move(claims), base.contexts(), base.edges());
  return f;
}

}  // namespace claimflow::testing
