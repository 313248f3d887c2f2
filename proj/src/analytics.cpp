#include "claimflow/analytics.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <unordered_map>

#include "claimflow/error.hpp"

namespace claimflow {

namespace {

int interaction_age(const GraphEdge& e) { return std::max(0, e.citing_year - e.cited_year); }

std::size_t distinct_citing_papers(const ClaimGraph& g, std::size_t node) {
  std::set<std::size_t> papers;
  for (std::size_t e : g.in_edges(node)) papers.insert(g.nodes()[g.edges()[e].citing].paper);
  return papers.size();
}

}  // namespace

std::string_view to_string(PostChallenge c) noexcept {
  switch (c) {
    case PostChallenge::no_further_engagement: return "no-further-engagement";
    case PostChallenge::background_only: return "background-only";
    case PostChallenge::support: return "support";
    case PostChallenge::extend: return "extend";
    case PostChallenge::qualify: return "qualify";
    case PostChallenge::refute: return "refute";
  }
  return "?";
}

RelationDistribution relation_distribution(const ClaimGraph& graph) {
  if (graph.edges().empty()) throw InvalidArgument("relation_distribution: graph has no edges");
  RelationDistribution d;
  for (const auto& e : graph.edges()) ++d.counts[index_of(e.label)];
  d.total = graph.edges().size();
  return d;
}

std::map<std::string, RelationDistribution> venue_relation_distribution(const ClaimGraph& graph) {
  std::map<std::string, RelationDistribution> out;
  for (const auto& e : graph.edges()) {
    auto& d = out[graph.paper_of(e.citing).venue];
    ++d.counts[index_of(e.label)];
    ++d.total;
  }
  return out;
}

ChallengeReport challenge_analysis(const ClaimGraph& graph) {
  ChallengeReport rep;
  auto& s = rep.summary;
  s.claims = graph.nodes().size();

  std::vector<int> times;
  std::size_t none = 0, background_only = 0, engaged = 0;
  std::array<std::size_t, kRelationCount> engaged_labels{};

  for (std::size_t h = 0; h < graph.nodes().size(); ++h) {
    const auto& node = graph.nodes()[h];
    ChallengeRecord r;
    r.claim_id = node.id;
    for (std::size_t ei : graph.in_edges(h)) {
      const auto& e = graph.edges()[ei];
      if (!is_challenge(e.label)) continue;
      r.challenged = true;
      if (e.label == Relation::refute) r.refuted = true;
      if (!r.first_challenge_year || e.citing_year < *r.first_challenge_year)
        r.first_challenge_year = e.citing_year;
    }
    if (r.challenged) {
      r.time_to_challenge = std::max(0, *r.first_challenge_year - node.year);
      times.push_back(*r.time_to_challenge);
      for (std::size_t ei : graph.in_edges(h))
        if (graph.edges()[ei].citing_year > *r.first_challenge_year)
          r.post_challenge_edges.push_back(ei);

      ++s.challenged;
      if (r.refuted) ++s.refuted; else ++s.qualify_only;

      std::array<std::size_t, kRelationCount> labels{};
      for (std::size_t ei : r.post_challenge_edges) ++labels[index_of(graph.edges()[ei].label)];
      if (r.post_challenge_edges.empty()) {
        ++none;
      } else if (labels[index_of(Relation::background)] == r.post_challenge_edges.size()) {
        ++background_only;
      } else {
        ++engaged;
        for (std::size_t l = 0; l < kRelationCount; ++l) engaged_labels[l] += labels[l];
      }
    }
    rep.records.push_back(std::move(r));
  }

  if (s.claims > 0) {
    const double n = static_cast<double>(s.claims);
    s.challenged_share = static_cast<double>(s.challenged) / n;
    s.qualify_share = static_cast<double>(s.qualify_only) / n;
    s.refute_share = static_cast<double>(s.refuted) / n;
  }
  if (!times.empty()) {
    std::sort(times.begin(), times.end());
    s.median_time_to_challenge = times[(times.size() - 1) / 2];
  }
  if (s.challenged > 0) {
    const double c = static_cast<double>(s.challenged);
    s.post_challenge[0] = static_cast<double>(none) / c;
    s.post_challenge[1] = static_cast<double>(background_only) / c;
    std::size_t substantive = 0;
    for (Relation r : kAllRelations)
      if (r != Relation::background) substantive += engaged_labels[index_of(r)];
    if (substantive > 0) {
      // engaged/challenged * label/substantive, kept as one integer ratio
      const double den = static_cast<double>(s.challenged * substantive);
      for (Relation r : {Relation::support, Relation::extend, Relation::qualify, Relation::refute})
        s.post_challenge[2 + index_of(r)] =
            static_cast<double>(engaged * engaged_labels[index_of(r)]) / den;
    }
  }
  return rep;
}

PropagationResult propagation_counts(const ClaimGraph& graph) {
  PropagationResult res;
  auto& s = res.summary;
  s.claims = graph.nodes().size();
  res.counts.reserve(s.claims);
  std::size_t total = 0, wide = 0;
  for (std::size_t h = 0; h < s.claims; ++h) {
    const std::size_t c = distinct_citing_papers(graph, h);
    res.counts.push_back(c);
    total += c;
    if (c == 0) ++s.isolated;
    if (c >= kWidePropagationThreshold) ++wide;
  }
  if (s.claims > 0) {
    const double n = static_cast<double>(s.claims);
    s.isolated_fraction = static_cast<double>(s.isolated) / n;
    s.mean_count = static_cast<double>(total) / n;
    s.wide_share = static_cast<double>(wide) / n;
  }
  if (s.claims > s.isolated)
    s.mean_count_propagated =
        static_cast<double>(total) / static_cast<double>(s.claims - s.isolated);
  return res;
}

std::vector<SurvivalObservation> time_to_first_reuse(const ClaimGraph& graph, int horizon_year) {
  if (auto maxy = graph.max_year(); maxy && horizon_year < *maxy)
    throw InvalidArgument("time_to_first_reuse: horizon " + std::to_string(horizon_year) +
                          " precedes the latest claim year " + std::to_string(*maxy));
  std::vector<SurvivalObservation> out;
  out.reserve(graph.nodes().size());
  for (std::size_t h = 0; h < graph.nodes().size(); ++h) {
    const int y = graph.nodes()[h].year;
    std::optional<int> first;
    for (std::size_t ei : graph.in_edges(h)) {
      const int cy = graph.edges()[ei].citing_year;
      if (!first || cy < *first) first = cy;
    }
    if (first)
      out.push_back({std::max(0, *first - y), true});
    else
      out.push_back({horizon_year - y, false});
  }
  return out;
}

std::vector<double> age_rank(const ClaimGraph& graph) {
  const std::size_t n = graph.nodes().size();
  std::vector<int> years;
  years.reserve(n);
  for (const auto& node : graph.nodes()) years.push_back(node.year);
  std::vector<int> sorted = years;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  out.reserve(n);
  for (int y : years) {
    const auto earlier =
        static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), y) - sorted.begin());
    out.push_back(static_cast<double>(earlier) / static_cast<double>(n));
  }
  return out;
}

namespace {

std::size_t papers_after(const ClaimGraph& graph, int year) {
  return static_cast<std::size_t>(std::count_if(graph.papers().begin(), graph.papers().end(),
                                                [&](const GraphPaper& p) { return p.year > year; }));
}

}  // namespace

std::optional<double> norm_influence(const ClaimGraph& graph, std::string_view claim_id) {
  const std::size_t h = graph.index_of(claim_id);
  const std::size_t later = papers_after(graph, graph.nodes()[h].year);
  if (later == 0) return std::nullopt;
  return static_cast<double>(distinct_citing_papers(graph, h)) / static_cast<double>(later);
}

InfluenceReport influence_analysis(const ClaimGraph& graph) {
  InfluenceReport rep;
  const auto ranks = age_rank(graph);
  std::vector<double> xs, ys;
  for (std::size_t h = 0; h < graph.nodes().size(); ++h) {
    const auto& node = graph.nodes()[h];
    InfluenceRecord r;
    r.claim_id = node.id;
    r.year = node.year;
    r.age_rank = ranks[h];
    r.citing_papers = distinct_citing_papers(graph, h);
    r.later_papers = papers_after(graph, node.year);
    if (r.later_papers > 0) {
      r.norm_influence =
          static_cast<double>(r.citing_papers) / static_cast<double>(r.later_papers);
      xs.push_back(r.age_rank);
      ys.push_back(*r.norm_influence);
    } else {
      ++rep.excluded;
    }
    rep.records.push_back(std::move(r));
  }
  try {
    rep.rho = spearman(xs, ys);
  } catch (const InvalidArgument&) {
    rep.rho.reset();
  }
  return rep;
}

double edge_density(const ClaimGraphSnapshot& snapshot) {
  const std::size_t n = snapshot.node_count();
  if (n < 2) throw InvalidArgument("edge_density: snapshot has fewer than two nodes");
  return static_cast<double>(snapshot.distinct_pair_count()) /
         (static_cast<double>(n) * static_cast<double>(n - 1));
}

// ---------------------------------------------------------------------------
// Louvain

namespace {

// Symmetric weighted adjacency; a self-loop entry holds A_ii.
struct WeightedGraph {
  std::vector<std::vector<std::pair<std::size_t, double>>> adj;
  std::vector<double> degree;  // k_i = sum_j A_ij
  double two_m = 0.0;

  std::size_t size() const { return adj.size(); }
};

WeightedGraph make_weighted(std::size_t n,
                            const std::map<std::pair<std::size_t, std::size_t>, double>& w) {
  WeightedGraph g;
  g.adj.assign(n, {});
  g.degree.assign(n, 0.0);
  for (const auto& [key, weight] : w) {
    g.adj[key.first].emplace_back(key.second, weight);
    g.degree[key.first] += weight;
    g.two_m += weight;
  }
  return g;
}

// One level of local moves. Returns true if any node changed community.
bool local_moves(const WeightedGraph& g, std::vector<std::size_t>& comm, std::mt19937_64& rng) {
  const std::size_t n = g.size();
  const double m = g.two_m / 2.0;
  std::vector<double> tot(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) tot[comm[i]] += g.degree[i];

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  bool any = false;
  std::vector<double> link(n, 0.0);
  std::vector<std::size_t> touched;
  constexpr int kMaxPasses = 1000;
  bool moved = true;
  for (int pass = 0; moved && pass < kMaxPasses; ++pass) {
    moved = false;
    for (std::size_t i : order) {
      const std::size_t old = comm[i];
      touched.clear();
      for (const auto& [j, w] : g.adj[i]) {
        if (j == i) continue;
        if (link[comm[j]] == 0.0) touched.push_back(comm[j]);
        link[comm[j]] += w;
      }
      tot[old] -= g.degree[i];
      const double ki = g.degree[i];
      auto gain = [&](std::size_t c) { return link[c] / m - tot[c] * ki / (2.0 * m * m); };

      std::size_t best = old;
      double best_gain = gain(old);
      std::sort(touched.begin(), touched.end());
      for (std::size_t c : touched) {
        const double gc = gain(c);
        if (gc > best_gain + 1e-12) {
          best = c;
          best_gain = gc;
        }
      }
      tot[best] += ki;
      comm[i] = best;
      for (std::size_t c : touched) link[c] = 0.0;
      if (best != old) moved = any = true;
    }
  }
  return any;
}

// Renumbers communities to 0..k-1 by first appearance; returns k.
std::size_t compact(std::vector<std::size_t>& comm) {
  std::unordered_map<std::size_t, std::size_t> ids;
  for (auto& c : comm) c = ids.try_emplace(c, ids.size()).first->second;
  return ids.size();
}

double partition_q(const WeightedGraph& g, const std::vector<std::size_t>& comm) {
  if (g.two_m == 0.0) return 0.0;
  std::unordered_map<std::size_t, double> in, tot;
  for (std::size_t i = 0; i < g.size(); ++i) {
    tot[comm[i]] += g.degree[i];
    for (const auto& [j, w] : g.adj[i])
      if (comm[i] == comm[j]) in[comm[i]] += w;
  }
  double q = 0.0;
  for (const auto& [c, t] : tot) {
    const double a = t / g.two_m;
    q += in[c] / g.two_m - a * a;
  }
  return q;
}

}  // namespace

ModularityResult modularity(const ClaimGraphSnapshot& snapshot, std::uint64_t seed) {
  if (snapshot.edge_count() == 0) throw InvalidArgument("modularity: snapshot has no edges");
  const auto& graph = snapshot.graph();
  const std::size_t n = snapshot.node_count();
  std::vector<std::size_t> local(graph.nodes().size(), 0);
  for (std::size_t i = 0; i < n; ++i) local[snapshot.nodes()[i]] = i;

  std::map<std::pair<std::size_t, std::size_t>, double> w;
  for (std::size_t ei : snapshot.edges()) {
    const auto& e = graph.edges()[ei];
    const std::size_t a = local[e.citing], b = local[e.cited];
    w[{a, b}] += 1.0;
    w[{b, a}] += 1.0;
  }
  const WeightedGraph base = make_weighted(n, w);

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> membership(n);
  std::iota(membership.begin(), membership.end(), 0);

  WeightedGraph level = base;
  for (;;) {
    std::vector<std::size_t> comm(level.size());
    std::iota(comm.begin(), comm.end(), 0);
    if (!local_moves(level, comm, rng)) break;
    const std::size_t k = compact(comm);
    for (auto& c : membership) c = comm[c];
    std::map<std::pair<std::size_t, std::size_t>, double> agg;
    for (std::size_t i = 0; i < level.size(); ++i)
      for (const auto& [j, wt] : level.adj[i]) agg[{comm[i], comm[j]}] += wt;
    level = make_weighted(k, agg);
    if (k == 1) break;
  }

  ModularityResult res;
  res.community = membership;
  res.communities = compact(res.community);
  res.q = partition_q(base, res.community);
  if (res.q < 0.0) {
    std::fill(res.community.begin(), res.community.end(), 0);
    res.communities = 1;
    res.q = partition_q(base, res.community);
  }
  return res;
}

// ---------------------------------------------------------------------------

double convergence_divergence(const ClaimGraph& graph, std::string_view claim_id) {
  const Degrees d = degrees(graph, claim_id);
  const double kin = static_cast<double>(d.in), kout = static_cast<double>(d.out);
  return (kout - kin) / (kout + kin + kConvergenceEpsilon);
}

namespace {

// (age, challenge?) for every incoming edge, ascending by age.
std::vector<std::pair<int, bool>> incoming_history(const ClaimGraph& graph, std::size_t h) {
  std::vector<std::pair<int, bool>> hist;
  for (std::size_t ei : graph.in_edges(h)) {
    const auto& e = graph.edges()[ei];
    hist.emplace_back(interaction_age(e), is_challenge(e.label));
  }
  std::sort(hist.begin(), hist.end());
  return hist;
}

std::vector<UncertaintyPoint> running_fraction(const std::vector<std::pair<int, bool>>& hist) {
  std::vector<UncertaintyPoint> out;
  std::size_t seen = 0, challenged = 0;
  for (std::size_t i = 0; i < hist.size();) {
    const int age = hist[i].first;
    for (; i < hist.size() && hist[i].first == age; ++i) {
      ++seen;
      if (hist[i].second) ++challenged;
    }
    out.push_back({age, static_cast<double>(challenged) / static_cast<double>(seen)});
  }
  return out;
}

}  // namespace

std::vector<UncertaintyPoint> cumulative_uncertainty(const ClaimGraph& graph,
                                                     std::string_view claim_id) {
  const std::size_t h = graph.index_of(claim_id);
  auto hist = incoming_history(graph, h);
  if (hist.empty())
    throw InvalidArgument("cumulative_uncertainty: claim " + std::string(claim_id) +
                          " has no interactions");
  return running_fraction(hist);
}

std::vector<CorpusUncertaintyPoint> corpus_uncertainty(const ClaimGraph& graph) {
  std::vector<std::vector<UncertaintyPoint>> series;
  std::set<int> ages;
  for (std::size_t h = 0; h < graph.nodes().size(); ++h) {
    auto hist = incoming_history(graph, h);
    if (hist.empty()) continue;
    series.push_back(running_fraction(hist));
    for (const auto& p : series.back()) ages.insert(p.age);
  }
  std::vector<CorpusUncertaintyPoint> out;
  for (int a : ages) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& s : series) {
      if (s.front().age > a) continue;
      auto it = std::upper_bound(s.begin(), s.end(), a,
                                 [](int age, const UncertaintyPoint& p) { return age < p.age; });
      sum += std::prev(it)->fraction;
      ++count;
    }
    out.push_back({a, sum / static_cast<double>(count), count});
  }
  return out;
}

}  // namespace claimflow
