#include <gtest/gtest.h>

#include <numeric>

#include "claimflow/analytics.hpp"
#include "claimflow/error.hpp"
#include "fixtures.hpp"

using namespace claimflow;
using claimflow::testing::RawData;
using claimflow::testing::to_graph;

namespace {

// Papers p0..pN with the given years, venue "V"; claim ids map to papers.
RawData make(std::vector<int> years, std::vector<std::pair<std::string, int>> claims,
             std::vector<claimflow::testing::RawEdge> edges) {
  RawData d;
  for (std::size_t i = 0; i < years.size(); ++i)
    d.papers.push_back({"p" + std::to_string(i), "V", years[i]});
  for (const auto& [id, p] : claims) d.claims.push_back({id, "p" + std::to_string(p)});
  d.edges = std::move(edges);
  return d;
}

constexpr Relation S = Relation::support, E = Relation::extend, Q = Relation::qualify,
                   R = Relation::refute, B = Relation::background;

}  // namespace

TEST(RelationDistribution, AllSupport) {
  const auto g = to_graph(make({2000, 2001}, {{"a", 0}, {"b", 1}},
                               {{"b", "a", S}, {"b", "a", S}, {"b", "a", S}, {"b", "a", S}}));
  const auto d = relation_distribution(g);
  EXPECT_EQ(d.proportion(S), 1.0);
  EXPECT_EQ(d.proportion(B), 0.0);
  EXPECT_EQ(d.total, 4u);
}

TEST(RelationDistribution, EmptyGraphThrows) {
  const auto g = to_graph(make({2000}, {{"a", 0}}, {}));
  EXPECT_THROW(relation_distribution(g), InvalidArgument);
}

TEST(VenueDistribution, GroupsByCitingVenue) {
  auto d = make({2000, 2001, 2002}, {{"a", 0}, {"b", 1}, {"c", 2}},
                {{"b", "a", B}, {"c", "a", S}, {"c", "b", R}});
  d.papers[1].venue = "ACL";
  d.papers[2].venue = "EMNLP";
  const auto v = venue_relation_distribution(to_graph(d));
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v.at("ACL").proportion(B), 1.0);
  EXPECT_EQ(v.at("EMNLP").proportion(S), 0.5);
  EXPECT_EQ(v.at("EMNLP").proportion(R), 0.5);
}

TEST(Propagation, CountsDistinctCitingPapers) {
  const auto g = to_graph(make({2000, 2001, 2002}, {{"h", 0}, {"x", 1}, {"y", 1}, {"z", 2}},
                               {{"x", "h", S}, {"y", "h", B}, {"z", "h", E}}));
  const auto r = propagation_counts(g);
  EXPECT_EQ(r.counts[*g.find("h")], 2u);
  EXPECT_EQ(r.counts[*g.find("x")], 0u);
  EXPECT_EQ(r.summary.isolated, 3u);
  EXPECT_DOUBLE_EQ(r.summary.isolated_fraction, 0.75);
  EXPECT_DOUBLE_EQ(r.summary.mean_count, 0.5);
  EXPECT_DOUBLE_EQ(r.summary.mean_count_propagated, 2.0);
  EXPECT_EQ(r.summary.wide_share, 0.0);
}

TEST(TimeToFirstReuse, EventsAndCensoring) {
  const auto g = to_graph(make({2010, 2013, 2010, 2010}, {{"a", 0}, {"b", 1}, {"c", 2}, {"d", 3}},
                               {{"b", "a", S}, {"d", "c", B}}));
  const auto obs = time_to_first_reuse(g, 2025);
  EXPECT_EQ(obs[*g.find("a")], (SurvivalObservation{3, true}));
  EXPECT_EQ(obs[*g.find("b")], (SurvivalObservation{12, false}));
  EXPECT_EQ(obs[*g.find("c")], (SurvivalObservation{0, true}));
  EXPECT_THROW(time_to_first_reuse(g, 2012), InvalidArgument);
}

TEST(TimeToFirstReuse, LargerHorizonOnlyMovesCensoredDurations) {
  const auto g = to_graph(claimflow::testing::synthetic_data(11));
  const auto a = time_to_first_reuse(g, *g.max_year());
  const auto b = time_to_first_reuse(g, *g.max_year() + 5);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_GE(a[i].duration, 0);
    EXPECT_EQ(a[i].event, b[i].event);
    EXPECT_EQ(b[i].duration - a[i].duration, a[i].event ? 0 : 5);
  }
}

TEST(Challenge, QualifyThenNothingIsNoFurtherEngagement) {
  const auto g = to_graph(make({2010, 2012}, {{"h", 0}, {"x", 1}}, {{"x", "h", Q}}));
  const auto rep = challenge_analysis(g);
  const auto& r = rep.records[*g.find("h")];
  EXPECT_TRUE(r.challenged);
  EXPECT_FALSE(r.refuted);
  EXPECT_EQ(r.time_to_challenge, 2);
  EXPECT_TRUE(r.post_challenge_edges.empty());
  EXPECT_EQ(rep.summary.post_challenge[0], 1.0);
  EXPECT_EQ(rep.summary.median_time_to_challenge, 2);
}

TEST(Challenge, LaterSupportCountsAsPostChallenge) {
  const auto g = to_graph(make({2010, 2015, 2017}, {{"h", 0}, {"x", 1}, {"y", 2}},
                               {{"x", "h", R}, {"y", "h", S}}));
  const auto rep = challenge_analysis(g);
  const auto& r = rep.records[*g.find("h")];
  ASSERT_EQ(r.post_challenge_edges.size(), 1u);
  EXPECT_EQ(g.edges()[r.post_challenge_edges[0]].label, S);
  EXPECT_TRUE(r.refuted);
  EXPECT_EQ(rep.summary.refuted, 1u);
  EXPECT_EQ(rep.summary.qualify_only, 0u);
  EXPECT_EQ(rep.summary.post_challenge[2 + index_of(S)], 1.0);
}

TEST(Challenge, PostChallengeSharesSumToOne) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto g = to_graph(claimflow::testing::synthetic_data(seed, 12, 40, 200));
    const auto s = challenge_analysis(g).summary;
    if (s.challenged == 0) continue;
    const double sum = std::accumulate(s.post_challenge.begin(), s.post_challenge.end(), 0.0);
    EXPECT_NEAR(sum, 1.0, 1e-9);
    EXPECT_EQ(s.qualify_only + s.refuted, s.challenged);
  }
}

TEST(Challenge, LowerMedian) {
  const auto g = to_graph(make({2010, 2011, 2014}, {{"a", 0}, {"b", 0}, {"x", 1}, {"y", 2}},
                               {{"x", "a", Q}, {"y", "b", Q}}));
  EXPECT_EQ(challenge_analysis(g).summary.median_time_to_challenge, 1);
}

TEST(AgeRank, StrictInequality) {
  const auto g = to_graph(make({2000, 2000, 2005}, {{"a", 0}, {"b", 1}, {"c", 2}}, {}));
  const auto r = age_rank(g);
  EXPECT_EQ(r[0], 0.0);
  EXPECT_EQ(r[1], 0.0);
  EXPECT_EQ(r[2], 2.0 / 3.0);
}

TEST(AgeRank, FourOfTenEarlier) {
  std::vector<std::pair<std::string, int>> claims;
  for (int i = 0; i < 10; ++i) claims.push_back({"c" + std::to_string(i), i < 4 ? 0 : 1});
  const auto g = to_graph(make({2000, 2001}, claims, {}));
  EXPECT_EQ(age_rank(g)[*g.find("c5")], 0.4);
}

TEST(NormInfluence, Examples) {
  const auto g = to_graph(make({2000, 2001, 2002, 2003, 2004},
                               {{"h", 0}, {"u", 0}, {"a", 1}, {"b", 2}, {"z", 4}},
                               {{"a", "h", S}, {"b", "h", B}}));
  EXPECT_EQ(norm_influence(g, "h"), 0.5);
  EXPECT_EQ(norm_influence(g, "u"), 0.0);
  EXPECT_EQ(norm_influence(g, "z"), std::nullopt);
  EXPECT_THROW(norm_influence(g, "nope"), InvalidArgument);
}

TEST(NormInfluence, EarlierPaperDoesNotChangeIt) {
  auto d = make({2000, 2001, 2002}, {{"h", 1}, {"a", 2}}, {{"a", "h", S}});
  const auto before = norm_influence(to_graph(d), "h");
  d.papers.push_back({"p9", "V", 1990});
  d.claims.push_back({"old", "p9"});
  EXPECT_EQ(norm_influence(to_graph(d), "h"), before);
}

TEST(Influence, ExcludesFinalYearClaims) {
  const auto g = to_graph(make({2000, 2001, 2002}, {{"a", 0}, {"b", 1}, {"c", 2}},
                               {{"b", "a", S}, {"c", "a", S}}));
  const auto rep = influence_analysis(g);
  EXPECT_EQ(rep.excluded, 1u);
  ASSERT_TRUE(rep.rho.has_value());
  EXPECT_DOUBLE_EQ(*rep.rho, -1.0);
}

TEST(EdgeDensity, Examples) {
  const auto one = to_graph(make({2000, 2001, 2001}, {{"a", 0}, {"b", 1}, {"c", 2}},
                                 {{"b", "a", S}, {"b", "a", E}}));
  EXPECT_EQ(edge_density(snapshot_at(one, 2001)), 1.0 / 6.0);
  const auto full = to_graph(make({2000, 2000, 2000}, {{"a", 0}, {"b", 1}, {"c", 2}},
                                  {{"a", "b", S}, {"b", "a", S}, {"a", "c", S}, {"c", "a", S},
                                   {"b", "c", S}, {"c", "b", S}}));
  EXPECT_EQ(edge_density(snapshot_at(full, 2000)), 1.0);
  EXPECT_THROW(edge_density(snapshot_at(full, 1999)), InvalidArgument);
}

namespace {

RawData two_triangles() {
  RawData d;
  for (int i = 0; i < 6; ++i) {
    d.papers.push_back({"p" + std::to_string(i), "V", 2000});
    d.claims.push_back({"n" + std::to_string(i), "p" + std::to_string(i)});
  }
  d.edges = {{"n0", "n1", S}, {"n1", "n2", S}, {"n2", "n0", S},
             {"n3", "n4", S}, {"n4", "n5", S}, {"n5", "n3", S}};
  return d;
}

}  // namespace

TEST(Modularity, TwoTriangles) {
  const auto g = to_graph(two_triangles());
  const auto m = modularity(snapshot_at(g, 2000), 42);
  EXPECT_NEAR(m.q, 0.5, 1e-12);
  EXPECT_EQ(m.communities, 2u);
}

TEST(Modularity, SingleEdgeIsZero) {
  const auto g = to_graph(make({2000, 2000}, {{"a", 0}, {"b", 1}}, {{"a", "b", S}}));
  const auto m = modularity(snapshot_at(g, 2000), 42);
  EXPECT_NEAR(m.q, 0.0, 1e-12);
  EXPECT_GE(m.q, 0.0);
}

TEST(Modularity, CompleteGraphIsZero) {
  RawData d;
  for (int i = 0; i < 5; ++i) {
    d.papers.push_back({"p" + std::to_string(i), "V", 2000});
    d.claims.push_back({"n" + std::to_string(i), "p" + std::to_string(i)});
  }
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) d.edges.push_back({d.claims[j].id, d.claims[i].id, B});
  const auto m = modularity(snapshot_at(to_graph(d), 2000), 42);
  EXPECT_NEAR(m.q, 0.0, 1e-12);
}

TEST(Modularity, NoEdgesThrows) {
  const auto g = to_graph(make({2000, 2000}, {{"a", 0}, {"b", 1}}, {}));
  EXPECT_THROW(modularity(snapshot_at(g, 2000), 42), InvalidArgument);
}

TEST(Modularity, DeterministicForSeed) {
  const auto g = to_graph(claimflow::testing::synthetic_data(5));
  const auto snap = snapshot_at(g, *g.max_year());
  const auto a = modularity(snap, 9), b = modularity(snap, 9);
  EXPECT_EQ(a.q, b.q);
  EXPECT_EQ(a.community, b.community);
}

TEST(ConvergenceDivergence, Examples) {
  // h cites three claims; k cited by five and cites one.
  std::vector<std::pair<std::string, int>> claims{{"h", 0}, {"x", 1}, {"y", 2}, {"z", 3},
                                                  {"k", 4}, {"iso", 5}};
  for (int i = 0; i < 5; ++i) claims.push_back({"s" + std::to_string(i), 6 + i});
  std::vector<claimflow::testing::RawEdge> edges{{"h", "x", S}, {"h", "y", S}, {"h", "z", B},
                                                {"k", "x", S}};
  for (int i = 0; i < 5; ++i) edges.push_back({"s" + std::to_string(i), "k", E});
  const auto g = to_graph(make(std::vector<int>(11, 2000), claims, edges));
  EXPECT_EQ(convergence_divergence(g, "h"), 3.0 / 4.0);
  EXPECT_EQ(convergence_divergence(g, "k"), -4.0 / 7.0);
  EXPECT_EQ(convergence_divergence(g, "iso"), 0.0);
  EXPECT_THROW(convergence_divergence(g, "missing"), InvalidArgument);
}

TEST(CumulativeUncertainty, RunningFraction) {
  const auto g = to_graph(make({2000, 2001, 2003}, {{"h", 0}, {"a", 1}, {"b", 2}},
                               {{"a", "h", Q}, {"b", "h", S}}));
  const auto s = cumulative_uncertainty(g, "h");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].age, 1);
  EXPECT_EQ(s[0].fraction, 1.0);
  EXPECT_EQ(s[1].age, 3);
  EXPECT_EQ(s[1].fraction, 0.5);
  EXPECT_THROW(cumulative_uncertainty(g, "a"), InvalidArgument);
}

TEST(CumulativeUncertainty, AllSupportIsZero) {
  const auto g = to_graph(make({2000, 2001, 2004}, {{"h", 0}, {"a", 1}, {"b", 2}},
                               {{"a", "h", S}, {"b", "h", S}}));
  for (const auto& p : cumulative_uncertainty(g, "h")) EXPECT_EQ(p.fraction, 0.0);
}

TEST(CorpusUncertainty, HandAveragedThreeClaims) {
  // h1: Q@1, S@3 -> (1,1) (3,1/2); h2: S@1 -> (1,0); h3: R@2 -> (2,1).
  const auto g = to_graph(make({2000, 2001, 2002, 2003},
                               {{"h1", 0}, {"h2", 0}, {"h3", 0}, {"a", 1}, {"b", 2}, {"c", 3}},
                               {{"a", "h1", Q}, {"c", "h1", S}, {"a", "h2", S}, {"b", "h3", R}}));
  const auto curve = corpus_uncertainty(g);
  ASSERT_EQ(curve.size(), 3u);
  EXPECT_EQ(curve[0].age, 1);
  EXPECT_DOUBLE_EQ(curve[0].mean_fraction, 0.5);
  EXPECT_EQ(curve[0].claims, 2u);
  EXPECT_DOUBLE_EQ(curve[1].mean_fraction, 2.0 / 3.0);
  EXPECT_EQ(curve[1].claims, 3u);
  EXPECT_DOUBLE_EQ(curve[2].mean_fraction, 0.5);
}

TEST(LabelPermutation, StructuralMetricsIgnoreBackgroundSupportSwap) {
  auto d = claimflow::testing::synthetic_data(21);
  const auto g1 = to_graph(d);
  for (auto& e : d.edges) {
    if (e.label == B) e.label = S;
    else if (e.label == S) e.label = B;
  }
  const auto g2 = to_graph(d);
  const int t = *g1.max_year();
  EXPECT_EQ(edge_density(snapshot_at(g1, t)), edge_density(snapshot_at(g2, t)));
  EXPECT_EQ(modularity(snapshot_at(g1, t), 42).q, modularity(snapshot_at(g2, t), 42).q);
  EXPECT_EQ(propagation_counts(g1).counts, propagation_counts(g2).counts);
  EXPECT_EQ(age_rank(g1), age_rank(g2));
  for (const auto& n : g1.nodes()) {
    EXPECT_EQ(degrees(g1, n.id), degrees(g2, n.id));
    EXPECT_EQ(convergence_divergence(g1, n.id), convergence_divergence(g2, n.id));
  }
}
