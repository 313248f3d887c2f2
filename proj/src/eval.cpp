#include "claimflow/eval.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>

#include <json.hpp>

#include "claimflow/error.hpp"

namespace claimflow {

std::string_view to_string(Split s) noexcept {
  switch (s) {
    case Split::train: return "train";
    case Split::validation: return "validation";
    case Split::test: return "test";
  }
  return "?";
}

std::optional<Split> parse_split(std::string_view s) noexcept {
  for (auto sp : {Split::train, Split::validation, Split::test})
    if (to_string(sp) == s) return sp;
  return std::nullopt;
}

std::array<std::size_t, 3> SplitAssignment::sizes() const {
  std::array<std::size_t, 3> n{};
  for (const auto& [id, s] : of_paper) ++n[static_cast<std::size_t>(s)];
  return n;
}

std::array<std::size_t, 3> split_targets(std::size_t papers, const SplitRatios& ratios) {
  const std::array<double, 3> r{ratios.train, ratios.validation, ratios.test};
  std::array<std::size_t, 3> t{};
  std::array<double, 3> rem{};
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double exact = r[i] * static_cast<double>(papers);
    t[i] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    rem[i] = exact - static_cast<double>(t[i]);
    assigned += t[i];
  }
  // Leftover papers go to the largest remainders; ties favour validation, then test, then train.
  const std::array<std::size_t, 3> tie_order{1, 2, 0};
  while (assigned < papers) {
    std::size_t best = tie_order[0];
    for (std::size_t k : tie_order)
      if (rem[k] > rem[best] + 1e-12) best = k;
    ++t[best];
    rem[best] = -1.0;
    ++assigned;
  }
  return t;
}

SplitAssignment stratified_split(const Corpus& corpus, const SplitRatios& ratios,
                                 std::uint64_t seed) {
  const std::array<double, 3> r{ratios.train, ratios.validation, ratios.test};
  if (std::any_of(r.begin(), r.end(), [](double x) { return x < 0.0; }) ||
      std::abs(r[0] + r[1] + r[2] - 1.0) > 1e-9)
    throw InvalidArgument("stratified_split: ratios must be non-negative and sum to 1");

  const auto targets = split_targets(corpus.papers().size(), ratios);
  for (std::size_t i = 0; i < 3; ++i)
    if (targets[i] == 0)
      throw InvalidArgument("stratified_split: " + std::to_string(corpus.papers().size()) +
                            " papers cannot fill the " +
                            std::string(to_string(static_cast<Split>(i))) + " split");

  // Gold label counts attributed to each citing paper.
  std::map<std::string, std::array<std::size_t, kRelationCount>> per_paper;
  std::array<double, kRelationCount> overall{};
  for (const auto& p : corpus.papers()) per_paper[p.id] = {};
  for (const auto& e : corpus.edges()) {
    if (e.provenance != Provenance::gold) continue;
    const Paper* p = corpus.paper_of_claim(e.citing_claim_id);
    if (!p) continue;
    ++per_paper[p->id][index_of(e.label)];
    overall[index_of(e.label)] += 1.0;
  }

  struct Item {
    std::string id;
    std::size_t edges;
  };
  std::vector<Item> order;
  for (const auto& [id, counts] : per_paper) {
    std::size_t total = 0;
    for (auto c : counts) total += c;
    order.push_back({id, total});
  }
  std::sort(order.begin(), order.end(), [](const Item& a, const Item& b) {
    return a.edges != b.edges ? a.edges > b.edges : a.id < b.id;
  });

  std::array<std::array<double, kRelationCount>, 3> current{};
  std::array<std::size_t, 3> filled{};
  SplitAssignment out;
  out.seed = seed;
  for (const auto& item : order) {
    const auto& c = per_paper[item.id];
    std::size_t best = 3;
    double best_score = 0.0, best_room = 0.0;
    for (std::size_t s = 0; s < 3; ++s) {
      if (filled[s] >= targets[s]) continue;
      double score = 0.0;
      for (std::size_t l = 0; l < kRelationCount; ++l) {
        const double want = r[s] * overall[l];
        if (c[l] == 0 || want <= 0.0) continue;
        score += static_cast<double>(c[l]) * (want - current[s][l]) / want;
      }
      const double room = static_cast<double>(targets[s] - filled[s]) /
                          static_cast<double>(targets[s]);
      if (best == 3 || score > best_score + 1e-12 ||
          (std::abs(score - best_score) <= 1e-12 && room > best_room + 1e-12)) {
        best = s;
        best_score = score;
        best_room = room;
      }
    }
    ++filled[best];
    for (std::size_t l = 0; l < kRelationCount; ++l) current[best][l] += static_cast<double>(c[l]);
    out.of_paper[item.id] = static_cast<Split>(best);
  }
  return out;
}

void write_splits(std::ostream& out, const SplitAssignment& splits) {
  for (const auto& [paper, split] : splits.of_paper) {
    nlohmann::ordered_json j;
    j["kind"] = "split";
    j["paper"] = paper;
    j["split"] = std::string(to_string(split));
    out << j.dump() << '\n';
  }
}

SplitAssignment read_splits(std::istream& in) {
  SplitAssignment s;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "split line " + std::to_string(line_no) + ": ";
    try {
      auto j = nlohmann::json::parse(line);
      if (j.at("kind").get<std::string>() != "split")
        throw DataError(where + "expected a split record", line_no);
      const auto name = j.at("split").get<std::string>();
      auto sp = parse_split(name);
      if (!sp) throw DataError(where + "unknown split \"" + name + "\"", line_no);
      if (!s.of_paper.emplace(j.at("paper").get<std::string>(), *sp).second)
        throw DataError(where + "paper assigned twice", line_no);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(where + e.what(), line_no);
    }
  }
  return s;
}

std::string InstanceKey::to_string() const {
  return citing_claim + " -> " + cited_claim + " @context " + std::to_string(context_index);
}

std::vector<LabeledInstance> gold_instances(const Corpus& corpus, const SplitAssignment* splits,
                                            std::optional<Split> split) {
  std::vector<LabeledInstance> out;
  for (const auto& e : corpus.edges()) {
    if (e.provenance != Provenance::gold) continue;
    if (split) {
      const Paper* p = corpus.paper_of_claim(e.citing_claim_id);
      if (!p || !splits) continue;
      auto it = splits->of_paper.find(p->id);
      if (it == splits->of_paper.end() || it->second != *split) continue;
    }
    out.push_back({{e.citing_claim_id, e.cited_claim_id, e.context_index}, e.label});
  }
  return out;
}

EvalResult macro_prf(const std::vector<LabeledInstance>& gold,
                     const std::vector<LabeledInstance>& predicted) {
  std::map<InstanceKey, std::optional<Relation>> pred;
  for (const auto& p : predicted)
    if (!pred.emplace(p.key, p.label).second)
      throw InvalidArgument("duplicate prediction for " + p.key.to_string());

  EvalResult res;
  std::set<InstanceKey> gold_keys;
  for (const auto& g : gold) {
    if (!gold_keys.insert(g.key).second)
      throw InvalidArgument("duplicate gold instance " + g.key.to_string());
    if (!g.label) throw InvalidArgument("gold instance without label: " + g.key.to_string());
    auto it = pred.find(g.key);
    if (it == pred.end())
      throw KeyMismatchError(g.key.to_string(), "missing prediction for " + g.key.to_string());
    const std::size_t gi = index_of(*g.label);
    ++res.per_label[gi].support;
    if (it->second)
      ++res.confusion[gi][index_of(*it->second)];
    else
      ++res.invalid_predictions;
  }
  for (const auto& [key, label] : pred)
    if (!gold_keys.count(key))
      throw KeyMismatchError(key.to_string(), "prediction for unknown instance " + key.to_string());
  res.instances = gold.size();

  for (std::size_t l = 0; l < kRelationCount; ++l) {
    auto& s = res.per_label[l];
    const std::size_t tp = res.confusion[l][l];
    std::size_t predicted_l = 0;
    for (std::size_t g = 0; g < kRelationCount; ++g) predicted_l += res.confusion[g][l];
    s.precision = predicted_l ? static_cast<double>(tp) / static_cast<double>(predicted_l) : 0.0;
    s.recall = s.support ? static_cast<double>(tp) / static_cast<double>(s.support) : 0.0;
    s.f1 = s.precision + s.recall > 0.0
               ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
               : 0.0;
    res.macro_precision += s.precision;
    res.macro_recall += s.recall;
    res.macro_f1 += s.f1;
  }
  res.macro_precision /= static_cast<double>(kRelationCount);
  res.macro_recall /= static_cast<double>(kRelationCount);
  res.macro_f1 /= static_cast<double>(kRelationCount);
  return res;
}

std::string EvalResult::to_json() const {
  nlohmann::ordered_json j;
  j["instances"] = instances;
  j["invalid_predictions"] = invalid_predictions;
  auto per = nlohmann::ordered_json::object();
  for (Relation r : kAllRelations) {
    const auto& s = per_label[index_of(r)];
    nlohmann::ordered_json o;
    o["precision"] = s.precision;
    o["recall"] = s.recall;
    o["f1"] = s.f1;
    o["support"] = s.support;
    per[std::string(claimflow::to_string(r))] = std::move(o);
  }
  j["per_label"] = std::move(per);
  nlohmann::ordered_json macro;
  macro["precision"] = macro_precision;
  macro["recall"] = macro_recall;
  macro["f1"] = macro_f1;
  j["macro"] = std::move(macro);
  auto labels = nlohmann::ordered_json::array();
  for (Relation r : kAllRelations) labels.push_back(std::string(claimflow::to_string(r)));
  j["labels"] = std::move(labels);
  auto conf = nlohmann::ordered_json::array();
  for (const auto& row : confusion) conf.push_back(row);
  j["confusion"] = std::move(conf);
  return j.dump(2) + "\n";
}

Relation majority_label(const std::vector<LabeledInstance>& train) {
  std::array<std::size_t, kRelationCount> counts{};
  std::size_t n = 0;
  for (const auto& t : train) {
    if (!t.label) continue;
    ++counts[index_of(*t.label)];
    ++n;
  }
  if (n == 0) throw InvalidArgument("majority_baseline: empty training set");
  std::size_t best = 0;
  for (std::size_t l = 1; l < kRelationCount; ++l)
    if (counts[l] > counts[best]) best = l;
  return kAllRelations[best];
}

std::vector<LabeledInstance> majority_baseline(const std::vector<LabeledInstance>& train,
                                               const std::vector<InstanceKey>& eval_keys) {
  const Relation label = majority_label(train);
  std::vector<LabeledInstance> out;
  out.reserve(eval_keys.size());
  for (const auto& k : eval_keys) out.push_back({k, label});
  return out;
}

void write_predictions(std::ostream& out, const std::vector<LabeledInstance>& preds) {
  for (const auto& p : preds) {
    nlohmann::ordered_json j;
    j["kind"] = "pred";
    j["citing_claim"] = p.key.citing_claim;
    j["cited_claim"] = p.key.cited_claim;
    j["context_index"] = p.key.context_index;
    j["label"] = p.label ? std::string(to_string(*p.label)) : std::string("invalid");
    out << j.dump() << '\n';
  }
}

std::vector<LabeledInstance> read_predictions(std::istream& in) {
  std::vector<LabeledInstance> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "prediction line " + std::to_string(line_no) + ": ";
    try {
      auto j = nlohmann::json::parse(line);
      if (j.at("kind").get<std::string>() != "pred")
        throw DataError(where + "expected a pred record", line_no);
      LabeledInstance p;
      p.key = {j.at("citing_claim").get<std::string>(), j.at("cited_claim").get<std::string>(),
               j.at("context_index").get<std::size_t>()};
      const auto label = j.at("label").get<std::string>();
      if (label != "invalid") {
        p.label = parse_relation(label);
        if (!p.label) throw DataError(where + "unknown label \"" + label + "\"", line_no);
      }
      out.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(where + e.what(), line_no);
    }
  }
  return out;
}

}  // namespace claimflow
