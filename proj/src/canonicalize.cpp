#include "claimflow/canonicalize.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <tuple>

#include <json.hpp>

#include "claimflow/error.hpp"
#include "claimflow/io.hpp"

namespace claimflow {

void EmbeddingTable::insert(std::string id, std::vector<double> vec) {
  if (vec.empty()) throw InvalidArgument("embedding for " + id + " is empty");
  if (dim_ == 0) dim_ = vec.size();
  if (vec.size() != dim_)
    throw InvalidArgument("embedding for " + id + " has dimension " + std::to_string(vec.size()) +
                          ", table dimension is " + std::to_string(dim_));
  if (std::all_of(vec.begin(), vec.end(), [](double x) { return x == 0.0; }))
    throw InvalidArgument("embedding for " + id + " is all zeros");
  if (!vectors_.try_emplace(id, std::move(vec)).second)
    throw InvalidArgument("duplicate embedding for " + id);
}

const std::vector<double>* EmbeddingTable::find(std::string_view id) const {
  auto it = vectors_.find(std::string(id));
  return it == vectors_.end() ? nullptr : &it->second;
}

EmbeddingTable read_embeddings(std::istream& in) {
  EmbeddingTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto rec = nlohmann::json::parse(line);
      if (rec.at("kind").get<std::string>() != "embedding")
        throw DataError("line " + std::to_string(line_no) + ": expected an embedding record",
                        line_no);
      table.insert(rec.at("id").get<std::string>(), rec.at("vec").get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
      throw DataError("line " + std::to_string(line_no) + ": " + e.what(), line_no);
    } catch (const InvalidArgument& e) {
      throw DataError("line " + std::to_string(line_no) + ": " + e.what(), line_no);
    }
  }
  return table;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_embeddings(in);
}

double cosine_similarity(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size())
    throw InvalidArgument("cosine_similarity: dimension mismatch (" + std::to_string(u.size()) +
                          " vs " + std::to_string(v.size()) + ")");
  double dot = 0, uu = 0, vv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0.0 || vv == 0.0) throw InvalidArgument("cosine_similarity: zero-norm vector");
  const double c = dot / (std::sqrt(uu) * std::sqrt(vv));
  return std::clamp(c, -1.0, 1.0);
}

std::vector<ClaimCluster> cluster_claims(std::vector<std::string> claim_ids,
                                         const EmbeddingTable& embeddings, double tau) {
  if (!(tau > 0.0 && tau <= 1.0))
    throw InvalidArgument("cluster_claims: tau must lie in (0, 1]");
  std::sort(claim_ids.begin(), claim_ids.end());
  claim_ids.erase(std::unique(claim_ids.begin(), claim_ids.end()), claim_ids.end());

  std::vector<const std::vector<double>*> vecs;
  vecs.reserve(claim_ids.size());
  for (const auto& id : claim_ids) {
    const auto* v = embeddings.find(id);
    if (!v) throw InvalidArgument("cluster_claims: no embedding for claim " + id);
    vecs.push_back(v);
  }

  std::vector<ClaimCluster> clusters;
  std::vector<bool> assigned(claim_ids.size(), false);
  for (std::size_t s = 0; s < claim_ids.size(); ++s) {
    if (assigned[s]) continue;
    assigned[s] = true;
    ClaimCluster cl{claim_ids[s], {claim_ids[s]}};
    for (std::size_t j = s + 1; j < claim_ids.size(); ++j) {
      if (assigned[j]) continue;
      if (cosine_similarity(*vecs[s], *vecs[j]) >= tau) {
        assigned[j] = true;
        cl.members.push_back(claim_ids[j]);
      }
    }
    clusters.push_back(std::move(cl));
  }
  return clusters;
}

std::string select_representative(std::span<const std::string> cluster, const Corpus& corpus) {
  if (cluster.empty()) throw InvalidArgument("select_representative: empty cluster");
  const std::string* best = nullptr;
  std::size_t best_len = 0;
  for (const auto& id : cluster) {
    const Claim* c = corpus.find_claim(id);
    const std::size_t len = c ? c->canonical_text.size() : 0;
    if (!best || len > best_len || (len == best_len && id < *best)) {
      best = &id;
      best_len = len;
    }
  }
  return *best;
}

const std::string& ClusterMapping::resolve(const std::string& id) const {
  auto it = representative_of.find(id);
  return it == representative_of.end() ? id : it->second;
}

ClusterMapping make_mapping(const std::vector<ClaimCluster>& clusters, const Corpus& corpus) {
  ClusterMapping m;
  for (const auto& cl : clusters) {
    ClusterMapping::Group g;
    g.representative = select_representative(cl.members, corpus);
    g.members = cl.members;
    std::sort(g.members.begin(), g.members.end());
    for (const auto& id : g.members) m.representative_of[id] = g.representative;
    m.groups.push_back(std::move(g));
  }
  return m;
}

ClusterMapping cluster_corpus(const Corpus& corpus, const EmbeddingTable& embeddings,
                              double tau) {
  std::map<std::string, std::vector<std::string>> by_paper;
  for (const auto& c : corpus.claims()) by_paper[c.paper_id].push_back(c.id);

  ClusterMapping all;
  for (const auto& p : corpus.papers()) {
    auto it = by_paper.find(p.id);
    if (it == by_paper.end()) continue;
    ClusterMapping part = make_mapping(cluster_claims(it->second, embeddings, tau), corpus);
    all.representative_of.merge(part.representative_of);
    for (auto& g : part.groups) all.groups.push_back(std::move(g));
  }
  return all;
}

Corpus redirect_edges(const Corpus& corpus, const ClusterMapping& mapping) {
  for (const auto& [from, to] : mapping.representative_of) {
    const Claim* rep = corpus.find_claim(to);
    if (!rep) throw InvalidArgument("redirect_edges: mapping references unknown claim " + to);
    if (mapping.resolve(to) != to)
      throw InvalidArgument("redirect_edges: mapping is not idempotent at " + to);
    if (const Claim* src = corpus.find_claim(from); src && src->paper_id != rep->paper_id)
      throw InvalidArgument("redirect_edges: " + from + " and " + to +
                            " belong to different papers");
  }

  // Representatives absorb their members' surface texts, in corpus order.
  std::map<std::string, std::vector<std::string>> extra_texts;
  for (const auto& c : corpus.claims()) {
    const auto& rep = mapping.resolve(c.id);
    if (rep == c.id) continue;
    auto& texts = extra_texts[rep];
    for (const auto& t : c.surface_texts) texts.push_back(t);
  }

  std::vector<Claim> claims;
  SourceLines lines;
  lines.papers = corpus.source_lines().papers;
  for (std::size_t i = 0; i < corpus.claims().size(); ++i) {
    const auto& c = corpus.claims()[i];
    if (mapping.resolve(c.id) != c.id) continue;
    Claim kept = c;
    if (auto it = extra_texts.find(c.id); it != extra_texts.end()) {
      for (const auto& t : it->second) {
        if (std::find(kept.surface_texts.begin(), kept.surface_texts.end(), t) ==
            kept.surface_texts.end())
          kept.surface_texts.push_back(t);
      }
    }
    claims.push_back(std::move(kept));
    if (auto l = corpus.line_of(RecordKind::claim, i)) lines.claims.push_back(l);
  }

  std::set<std::tuple<std::string, std::string, Relation, std::size_t>> seen;
  std::vector<RelationEdge> edges;
  for (std::size_t i = 0; i < corpus.edges().size(); ++i) {
    RelationEdge e = corpus.edges()[i];
    e.citing_claim_id = mapping.resolve(e.citing_claim_id);
    e.cited_claim_id = mapping.resolve(e.cited_claim_id);
    if (e.citing_claim_id == e.cited_claim_id) continue;
    if (!seen.emplace(e.citing_claim_id, e.cited_claim_id, e.label, e.context_index).second)
      continue;
    edges.push_back(std::move(e));
    if (auto l = corpus.line_of(RecordKind::edge, i)) lines.edges.push_back(l);
  }
  lines.contexts = corpus.source_lines().contexts;
  return Corpus(corpus.papers(), std::move(claims), corpus.contexts(), std::move(edges),
                std::move(lines));
}

CanonicalizationSummary summarize_canonicalization(const Corpus& before, const Corpus& after,
                                                   const ClusterMapping& mapping) {
  CanonicalizationSummary s;
  s.nodes_before = before.claims().size();
  s.nodes_after = after.claims().size();
  s.edges_before = before.edges().size();
  s.edges_after = after.edges().size();
  std::size_t merged_members = 0;
  for (const auto& g : mapping.groups) {
    if (g.members.size() < 2) continue;
    ++s.merged_groups;
    merged_members += g.members.size();
  }
  if (s.nodes_before > 0)
    s.reduction_fraction =
        static_cast<double>(s.nodes_before - s.nodes_after) / static_cast<double>(s.nodes_before);
  if (s.nodes_after > 0)
    s.mean_cluster_size =
        static_cast<double>(s.nodes_before) / static_cast<double>(s.nodes_after);
  if (s.merged_groups > 0)
    s.mean_merged_group_size =
        static_cast<double>(merged_members) / static_cast<double>(s.merged_groups);
  return s;
}

void write_mapping(std::ostream& out, const ClusterMapping& mapping) {
  for (const auto& [from, to] : mapping.representative_of) {
    if (from == to) continue;
    nlohmann::ordered_json j;
    j["kind"] = "merge";
    j["from"] = from;
    j["to"] = to;
    out << j.dump() << '\n';
  }
}

}  // namespace claimflow
