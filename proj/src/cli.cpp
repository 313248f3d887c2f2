#include "claimflow/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "claimflow/analytics.hpp"
#include "claimflow/canonicalize.hpp"
#include "claimflow/claim_graph.hpp"
#include "claimflow/corpus.hpp"
#include "claimflow/error.hpp"
#include "claimflow/eval.hpp"
#include "claimflow/io.hpp"
#include "claimflow/report.hpp"

namespace claimflow::cli {

namespace fs = std::filesystem;

namespace {

/// Paths and knobs shared by every subcommand.
struct RunConfig {
  std::string input;
  std::string out = ".";
  double tau = kDefaultMergeThreshold;
  std::optional<int> horizon;
  std::uint64_t seed = kDefaultSeed;
  std::string labels = "all";
  std::vector<std::string> metrics;
  bool lenient = false;
  // command specific
  std::string embeddings;
  std::string splits;
  std::string predictions;
  std::string baseline;
  std::string split = "test";
};

void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw InvalidArgument(std::string("missing --") + what);
  if (!fs::is_regular_file(path)) throw IoError(std::string(what) + " not found: " + path);
}

fs::path prepare_out_dir(const RunConfig& cfg) {
  std::error_code ec;
  fs::path dir = cfg.out;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
  return dir;
}

/// dir/name, refusing to overwrite any input of the run.
fs::path target(const fs::path& dir, const std::string& name, const RunConfig& cfg) {
  fs::path p = dir / name;
  std::error_code ec;
  for (const auto* in : {&cfg.input, &cfg.embeddings, &cfg.splits, &cfg.predictions})
    if (!in->empty() && fs::equivalent(p, *in, ec))
      throw InvalidArgument("output " + p.string() + " would overwrite an input file");
  return p;
}

template <typename Writer>
void write_atomic(const fs::path& path, Writer&& writer) {
  std::ostringstream os;
  writer(os);
  write_file_atomic(path, os.str());
}

std::string fixed3(double x) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << x;
  return os.str();
}

// --------------------------------------------------------------------------

int cmd_ingest(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  require_file(cfg.input, "input");
  const fs::path dir = prepare_out_dir(cfg);

  LoadResult loaded = read_corpus_file(cfg.input);
  const RestrictResult restricted = restrict_citations(loaded.corpus);
  const Corpus& corpus = restricted.corpus;

  std::ostringstream report;
  report << loaded.report.to_text();
  report << "papers " << corpus.papers().size() << '\n'
         << "claims " << corpus.claims().size() << '\n'
         << "contexts " << corpus.contexts().size() << '\n'
         << "edges " << corpus.edges().size() << '\n'
         << "paper_citation_edges " << paper_citation_edge_count(corpus) << '\n'
         << "dropped_out_of_corpus_contexts " << restricted.dropped_contexts << '\n'
         << "dropped_out_of_corpus_edges " << restricted.dropped_edges << '\n';
  if (!loaded.report.ok() && cfg.lenient)
    report << "dropped_invalid_records " << loaded.dropped_records << '\n';
  write_file_atomic(target(dir, "validation.txt", cfg), report.str());
  out << report.str();

  if (!loaded.report.ok() && !cfg.lenient) {
    err << "ingest: " << loaded.report.size() << " violation(s); rerun with --lenient to drop them\n";
    return kDataError;
  }
  for (const auto& v : loaded.report.violations)
    err << "dropped: line " << v.line << ' ' << to_string(v.kind) << ' ' << v.subject << '\n';
  write_atomic(target(dir, "corpus.jsonl", cfg), [&](std::ostream& os) { write_corpus(os, corpus); });
  return kOk;
}

int cmd_canonicalize(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  require_file(cfg.input, "input");
  require_file(cfg.embeddings, "embeddings");
  if (!(cfg.tau > 0.0 && cfg.tau <= 1.0)) throw InvalidArgument("--tau must lie in (0, 1]");
  const fs::path dir = prepare_out_dir(cfg);

  const Corpus corpus = load_corpus(cfg.input);
  const EmbeddingTable emb = load_embeddings(cfg.embeddings);
  const ClusterMapping mapping = cluster_corpus(corpus, emb, cfg.tau);
  const Corpus merged = redirect_edges(corpus, mapping);
  const auto s = summarize_canonicalization(corpus, merged, mapping);

  nlohmann::ordered_json j;
  j["tau"] = cfg.tau;
  j["nodes_before"] = s.nodes_before;
  j["nodes_after"] = s.nodes_after;
  j["edges_before"] = s.edges_before;
  j["edges_after"] = s.edges_after;
  j["merged_groups"] = s.merged_groups;
  j["reduction_fraction"] = s.reduction_fraction;
  j["mean_cluster_size"] = s.mean_cluster_size;
  j["mean_merged_group_size"] = s.mean_merged_group_size;

  write_atomic(target(dir, "corpus.jsonl", cfg), [&](std::ostream& os) { write_corpus(os, merged); });
  write_atomic(target(dir, "merges.jsonl", cfg), [&](std::ostream& os) { write_mapping(os, mapping); });
  write_file_atomic(target(dir, "canonicalize_summary.json", cfg), j.dump(2) + "\n");

  out << "nodes " << s.nodes_before << " -> " << s.nodes_after << " (reduction "
      << fixed3(100.0 * s.reduction_fraction) << "%)\n"
      << "mean cluster size " << fixed3(s.mean_cluster_size) << " (all), "
      << fixed3(s.mean_merged_group_size) << " (merged groups only)\n";
  return kOk;
}

int cmd_build_graph(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  require_file(cfg.input, "input");
  const fs::path dir = prepare_out_dir(cfg);
  const ClaimGraph graph = build_graph(load_corpus(cfg.input));
  write_atomic(target(dir, "graph.jsonl", cfg), [&](std::ostream& os) { write_graph(os, graph); });
  out << "nodes " << graph.nodes().size() << "\nedges " << graph.edges().size() << '\n';
  return kOk;
}

int cmd_split(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  require_file(cfg.input, "input");
  const fs::path dir = prepare_out_dir(cfg);
  const Corpus corpus = load_corpus(cfg.input);
  const SplitAssignment splits = stratified_split(corpus, {}, cfg.seed);
  write_atomic(target(dir, "splits.jsonl", cfg), [&](std::ostream& os) { write_splits(os, splits); });

  for (Split s : {Split::train, Split::validation, Split::test}) {
    const auto inst = gold_instances(corpus, &splits, s);
    std::array<std::size_t, kRelationCount> counts{};
    for (const auto& i : inst) ++counts[index_of(*i.label)];
    out << to_string(s) << " papers=" << splits.sizes()[static_cast<std::size_t>(s)]
        << " edges=" << inst.size();
    for (Relation r : kAllRelations)
      out << ' ' << to_string(r) << '='
          << fixed3(inst.empty() ? 0.0
                                 : static_cast<double>(counts[index_of(r)]) /
                                       static_cast<double>(inst.size()));
    out << '\n';
  }
  return kOk;
}

int cmd_analyze(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  std::vector<std::string> metrics = cfg.metrics;
  if (metrics.empty()) metrics.assign(kMetricNames.begin(), kMetricNames.end());
  for (const auto& m : metrics)
    if (!is_metric_name(m)) throw InvalidArgument("unknown metric \"" + m + "\"");
  auto filter = parse_label_filter(cfg.labels);
  if (!filter) throw InvalidArgument("--labels must be all or substantive");
  require_file(cfg.input, "input");
  const fs::path dir = prepare_out_dir(cfg);

  const std::string bytes = read_file(cfg.input);
  std::istringstream in(bytes);
  const ClaimGraph graph = read_graph(in);

  AnalysisConfig ac;
  ac.labels = *filter;
  ac.horizon = cfg.horizon;
  ac.seed = cfg.seed;
  const std::string fp = fingerprint(bytes);
  for (const auto& m : metrics) {
    const MetricReport rep = run_metric(m, graph, ac, fp);
    write_file_atomic(target(dir, m + ".csv", cfg), rep.to_csv());
    write_file_atomic(target(dir, m + ".json", cfg), rep.to_json());
    out << m << ": " << rep.rows.size() << " rows\n";
  }
  return kOk;
}

int cmd_eval(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  require_file(cfg.input, "input");
  require_file(cfg.splits, "splits");
  if (cfg.baseline.empty()) {
    require_file(cfg.predictions, "pred");
  } else if (cfg.baseline != "majority") {
    throw InvalidArgument("--baseline supports only \"majority\"");
  }
  auto split = parse_split(cfg.split);
  if (!split) throw InvalidArgument("--split must be train, validation or test");
  const fs::path dir = prepare_out_dir(cfg);

  const Corpus corpus = load_corpus(cfg.input);
  auto sin = open_input(cfg.splits);
  const SplitAssignment splits = read_splits(sin);
  const auto gold = gold_instances(corpus, &splits, *split);

  std::vector<LabeledInstance> preds;
  if (cfg.baseline == "majority") {
    std::vector<InstanceKey> keys;
    for (const auto& g : gold) keys.push_back(g.key);
    preds = majority_baseline(gold_instances(corpus, &splits, Split::train), keys);
    write_atomic(target(dir, "majority_predictions.jsonl", cfg),
                 [&](std::ostream& os) { write_predictions(os, preds); });
  } else {
    auto pin = open_input(cfg.predictions);
    preds = read_predictions(pin);
  }

  EvalResult res;
  try {
    res = macro_prf(gold, preds);
  } catch (const KeyMismatchError& e) {
    err << "eval: " << e.what() << '\n';
    out << e.key() << '\n';
    return kUsageError;
  }
  write_file_atomic(target(dir, "eval.json", cfg), res.to_json());
  out << fixed3(res.macro_precision) << '\t' << fixed3(res.macro_recall) << '\t'
      << fixed3(res.macro_f1) << '\n';
  return kOk;
}

int cmd_export(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  require_file(cfg.input, "input");
  const fs::path dir = prepare_out_dir(cfg);
  const ClaimGraph graph = load_graph(cfg.input);

  MetricReport edges;
  edges.columns = {"citing_claim", "cited_claim", "label", "citing_year", "cited_year"};
  for (const auto& e : graph.edges())
    edges.rows.push_back({graph.nodes()[e.citing].id, graph.nodes()[e.cited].id,
                          to_string(e.label), e.citing_year, e.cited_year});
  MetricReport nodes;
  nodes.columns = {"claim_id", "paper_id", "year", "venue", "k_in", "k_out"};
  for (std::size_t h = 0; h < graph.nodes().size(); ++h) {
    const auto& n = graph.nodes()[h];
    nodes.rows.push_back({n.id, graph.paper_of(h).id, n.year, graph.paper_of(h).venue,
                          graph.in_neighbors(h).size(), graph.out_neighbors(h).size()});
  }
  write_file_atomic(target(dir, "edges.csv", cfg), edges.to_csv());
  write_file_atomic(target(dir, "nodes.csv", cfg), nodes.to_csv());
  out << "nodes " << nodes.rows.size() << "\nedges " << edges.rows.size() << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"claimflow: claim-graph construction and longitudinal analytics", "claimflow"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", cfg.input, "Input file")->required();
    sub->add_option("--out", cfg.out, "Output directory (CLAIMFLOW_OUT overrides)");
  };

  auto* ingest = app.add_subcommand("ingest", "Validate a corpus bundle and restrict citations");
  add_common(ingest);
  ingest->add_flag("--lenient", cfg.lenient, "Drop offending records instead of failing");

  auto* canon = app.add_subcommand("canonicalize", "Merge near-duplicate claims within papers");
  add_common(canon);
  canon->add_option("--embeddings", cfg.embeddings, "Embedding table")->required();
  canon->add_option("--tau", cfg.tau, "Cosine similarity threshold")->capture_default_str();

  auto* build = app.add_subcommand("build-graph", "Build the claim interaction graph");
  add_common(build);

  auto* split = app.add_subcommand("split", "Paper-level stratified train/validation/test split");
  add_common(split);
  split->add_option("--seed", cfg.seed, "Seed")->capture_default_str();

  auto* analyze = app.add_subcommand("analyze", "Compute metric reports from a graph file");
  add_common(analyze);
  analyze->add_option("--metrics", cfg.metrics, "Comma-separated metric names")->delimiter(',');
  analyze->add_option("--labels", cfg.labels, "all | substantive")->capture_default_str();
  analyze->add_option("--horizon", cfg.horizon, "Censoring horizon year");
  analyze->add_option("--seed", cfg.seed, "Modularity seed")->capture_default_str();

  auto* eval = app.add_subcommand("eval", "Score relation predictions against gold labels");
  add_common(eval);
  eval->add_option("--splits", cfg.splits, "Split file")->required();
  eval->add_option("--split", cfg.split, "Split to score")->capture_default_str();
  eval->add_option("--pred", cfg.predictions, "Prediction file");
  eval->add_option("--baseline", cfg.baseline, "Built-in predictor (majority)");

  auto* exp = app.add_subcommand("export", "Export graph node and edge tables as CSV");
  add_common(exp);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }
  if (const char* env = std::getenv("CLAIMFLOW_OUT"); env && *env) cfg.out = env;

  const std::vector<std::pair<CLI::App*, std::function<int(const RunConfig&, std::ostream&,
                                                           std::ostream&)>>>
      commands{{ingest, cmd_ingest},   {canon, cmd_canonicalize}, {build, cmd_build_graph},
               {split, cmd_split},     {analyze, cmd_analyze},    {eval, cmd_eval},
               {exp, cmd_export}};
  try {
    for (const auto& [sub, fn] : commands)
      if (sub->parsed()) return fn(cfg, out, err);
  } catch (const KeyMismatchError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsageError;
}

}  // namespace claimflow::cli
