// spellvar: extract spelling-variant pairs and evaluate embedding tables.

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "spellvar/baseline.hpp"
#include "spellvar/bootstrap.hpp"
#include "spellvar/corpus.hpp"
#include "spellvar/crf.hpp"
#include "spellvar/errors.hpp"
#include "spellvar/evalsim.hpp"
#include "spellvar/pairs.hpp"
#include "spellvar/parallel.hpp"
#include "spellvar/selftrain.hpp"
#include "spellvar/synthetic.hpp"
#include "spellvar/version.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace spellvar;

namespace {

struct GlobalOptions {
  int threads = 0;
  bool serial = false;

  Execution exec() const { return serial ? Execution::serial : Execution::parallel; }
};

struct ExtractOptions {
  std::string method;
  std::string corpus;
  std::string annotations;
  std::string out;
  std::string seeds;
  std::string rules;
  std::string stopwords = std::string(SPELLVAR_DATA_DIR) + "/stopwords.txt";
  bool no_stopwords = false;
  std::optional<int> iterations;
  std::size_t top_n = 10;
  std::size_t top_n_patterns = 10;
  double alpha = 0.7;
  double beta = 0.7;
  int window = 3;
  std::optional<double> tau;
  bool tuple_count = false;
  bool strict = false;
  std::string gold;
  double l1 = 2.35;
  double l2 = 0.08;
  int max_optimizer_iterations = 200;
  bool search = false;
  int trials = 50;
  int folds = 3;
  std::uint64_t seed = 0;
};

struct EvalOptions {
  std::string pairs;
  std::vector<std::string> embeddings;
  std::string formal_vocab;
  std::vector<std::size_t> ks{1, 20, 50, 100};
  std::string out;
};

struct CorrelateOptions {
  std::string intrinsic;
  std::string extrinsic;
  std::vector<std::string> keys;
  std::vector<std::string> intrinsic_cols;
  std::vector<std::string> extrinsic_cols;
  std::string out;
};

struct AnnotateOptions {
  std::string corpus;
  std::string annotations;
  std::string out;
};

struct GenOptions {
  std::string kind;
  std::string out;
  std::uint64_t seed = 1;
};

void require_file(const std::string& path, std::string_view what) {
  if (path.empty()) throw ConfigError(fmt::format("{} is required", what));
  if (!fs::is_regular_file(path)) throw ConfigError(fmt::format("{} not found: {}", what, path));
}

fs::path prepare_out_dir(const std::string& out) {
  if (out.empty()) throw ConfigError("--out is required");
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw ConfigError(fmt::format("cannot create output directory {}: {}", out, ec.message()));
  return fs::path(out);
}

void write_manifest(const fs::path& dir, std::string_view command, std::uint64_t seed,
                    json config, const std::vector<std::string>& outputs) {
  json m;
  m["tool"] = "spellvar";
  m["version"] = kVersion;
  m["command"] = command;
  m["seed"] = seed;
  m["config"] = std::move(config);
  m["outputs"] = outputs;
  write_text_file(dir / "manifest.json", m.dump(2) + "\n");
}

Corpus load_corpus(const std::string& corpus_path, const std::string& annotations) {
  require_file(corpus_path, "corpus file");
  if (!annotations.empty()) {
    require_file(annotations, "annotation file");
    return load_conllu(corpus_path, annotations);
  }
  return load_jsonl(corpus_path);
}

std::vector<bootstrap::Tuple> to_tuples(const std::vector<VariantPair>& pairs) {
  std::vector<bootstrap::Tuple> out;
  for (const auto& p : pairs) out.emplace_back(p.informal, p.formal);
  return out;
}

int run_extract(const ExtractOptions& o, const GlobalOptions& g) {
  const fs::path out = prepare_out_dir(o.out);
  json cfg;
  cfg["method"] = o.method;
  cfg["corpus"] = o.corpus;
  if (!o.annotations.empty()) cfg["annotations"] = o.annotations;

  std::vector<VariantPair> pairs;
  std::string trace;
  std::vector<std::string> outputs{"pairs.tsv", "trace.jsonl"};

  if (o.method == "baseline") {
    const auto rules = o.rules.empty() ? baseline::default_rules()
                                       : (require_file(o.rules, "rules file"), baseline::load_rules(o.rules));
    const Corpus corpus = load_corpus(o.corpus, o.annotations);
    pairs = baseline::extract_baseline(corpus, rules, g.exec());
    json t;
    t["entries"] = corpus.size();
    t["rules"] = rules.size();
    t["pairs"] = pairs.size();
    trace = t.dump() + "\n";
    cfg["rules"] = o.rules.empty() ? "(built-in)" : o.rules;
  } else if (o.method == "bootstrap") {
    require_file(o.seeds, "seeds file");
    bootstrap::BootstrapConfig bc;
    bc.seeds = to_tuples(load_seeds(o.seeds));
    bc.max_iterations = o.iterations.value_or(8);
    bc.pattern_threshold = o.alpha;
    bc.tuple_threshold = o.beta;
    bc.window = o.window;
    bc.top_n_tuples = o.top_n;
    bc.top_n_patterns = o.top_n_patterns;
    bc.levenshtein_tau = o.tau.value_or(0.5);
    bc.use_tuple_count_variant = o.tuple_count;
    bc.strict_constraint = o.strict;
    if (!o.no_stopwords) {
      require_file(o.stopwords, "stopword file");
      bc.stopwords = load_stopwords(o.stopwords);
    }
    bc.exec = g.exec();
    bc.validate();
    const Corpus corpus = load_corpus(o.corpus, o.annotations);
    auto result = bootstrap::run(corpus, bc);
    pairs = std::move(result.pairs);
    trace = bootstrap::format_trace_jsonl(result.trace);
    cfg["seeds"] = o.seeds;
    cfg["stopwords"] = o.no_stopwords ? "" : o.stopwords;
    cfg["iterations"] = bc.max_iterations;
    cfg["alpha"] = bc.pattern_threshold;
    cfg["beta"] = bc.tuple_threshold;
    cfg["window"] = bc.window;
    cfg["top_n"] = bc.top_n_tuples;
    cfg["top_n_patterns"] = bc.top_n_patterns;
    cfg["tau"] = bc.levenshtein_tau;
    cfg["tuple_count_variant"] = bc.use_tuple_count_variant;
    cfg["strict_constraint"] = bc.strict_constraint;
  } else if (o.method == "selftrain") {
    require_file(o.gold, "gold data file");
    selftrain::SelfTrainConfig sc;
    sc.max_iterations = o.iterations.value_or(5);
    sc.confidence_tau = o.tau.value_or(0.9);
    sc.window = o.window;
    sc.train.l1 = o.l1;
    sc.train.l2 = o.l2;
    sc.train.max_optimizer_iterations = o.max_optimizer_iterations;
    sc.train.window = o.window;
    sc.exec = g.exec();
    sc.validate();
    auto gold = crf::load_labeled(o.gold);
    if (gold.empty()) throw DataError(fmt::format("{}: no labeled sequences", o.gold));
    const Corpus unlabeled = load_corpus(o.corpus, o.annotations);

    if (o.search) {
      selftrain::SearchSpace space;
      space.trials = o.trials;
      space.folds = o.folds;
      space.seed = o.seed;
      auto annotated_gold = gold;
      crf::annotate_labeled(annotated_gold, FallbackAnnotator{});
      const auto found = selftrain::random_search(crf::to_sequences(annotated_gold, o.window), space,
                                                  sc.train, g.exec());
      sc.train.l1 = found.best_l1;
      sc.train.l2 = found.best_l2;
      json s;
      s["best_l1"] = found.best_l1;
      s["best_l2"] = found.best_l2;
      s["best_mean_f1"] = found.best_mean_f1;
      s["fold_scores"] = found.fold_scores;
      auto trials = json::array();
      for (const auto& t : found.trials) {
        trials.push_back(json{{"l1", t.l1}, {"l2", t.l2}, {"mean_f1", t.mean_f1}, {"fold_f1", t.fold_f1}});
      }
      s["trials"] = std::move(trials);
      write_text_file(out / "search.json", s.dump(2) + "\n");
      outputs.push_back("search.json");
    }

    auto result = selftrain::self_train(gold, unlabeled, sc);
    pairs = std::move(result.pairs);
    trace = selftrain::format_trace_jsonl(result.trace);
    crf::save_model(result.model, out / "model.crf");
    outputs.push_back("model.crf");

    std::vector<crf::LabeledEntry> silver;
    std::map<std::string, const DictEntry*> by_id;
    for (const auto& e : unlabeled.entries) by_id[e.entry_id] = &e;
    for (const auto& rec : result.silver) {
      crf::LabeledEntry le{*by_id.at(rec.entry_id), rec.labels};
      silver.push_back(std::move(le));
    }
    write_text_file(out / "silver.tsv", crf::format_labeled(silver));
    outputs.push_back("silver.tsv");
    if (result.model.info.degenerate_labels) {
      std::cerr << "warning: training data contains a single label\n";
    }

    cfg["gold"] = o.gold;
    cfg["iterations"] = sc.max_iterations;
    cfg["tau"] = sc.confidence_tau;
    cfg["window"] = sc.window;
    cfg["l1"] = sc.train.l1;
    cfg["l2"] = sc.train.l2;
    cfg["max_optimizer_iterations"] = sc.train.max_optimizer_iterations;
    cfg["search"] = o.search;
    if (o.search) {
      cfg["trials"] = o.trials;
      cfg["folds"] = o.folds;
    }
  } else {
    throw ConfigError(fmt::format("unknown method \"{}\"", o.method));
  }

  write_pairs_tsv(out / "pairs.tsv", pairs);
  write_text_file(out / "trace.jsonl", trace);
  write_manifest(out, "extract", o.seed, std::move(cfg), outputs);
  std::cout << fmt::format("{} pairs written to {}\n", pairs.size(), (out / "pairs.tsv").string());
  return 0;
}

int run_eval(const EvalOptions& o, const GlobalOptions& g) {
  require_file(o.pairs, "pairs file");
  require_file(o.formal_vocab, "formal vocabulary file");
  if (o.embeddings.empty()) throw ConfigError("at least one --embeddings file is required");
  for (const auto& e : o.embeddings) require_file(e, "embeddings file");
  const fs::path out = prepare_out_dir(o.out);

  const auto pairs = load_pairs_tsv(o.pairs);
  const auto vocab = evalsim::load_vocab(o.formal_vocab);

  std::string summary_tsv = "embeddings\tk\thits\tmatched\taccuracy\n";
  auto summary = json::array();
  std::vector<std::string> outputs;
  for (std::size_t i = 0; i < o.embeddings.size(); ++i) {
    const auto& path = o.embeddings[i];
    const auto table = evalsim::load_embeddings(path);
    evalsim::EvalReport report;
    try {
      report = evalsim::evaluate_pairs(table, pairs, vocab, o.ks, g.exec());
    } catch (const DataError& e) {
      throw DataError(fmt::format("{}: {}", path, e.what()));
    }
    const std::string name = fmt::format("report-{}-{}.tsv", i + 1, fs::path(path).stem().string());
    write_text_file(out / name, evalsim::format_report_tsv(report));
    outputs.push_back(name);
    std::cout << evalsim::format_summary(report, path);

    json rec;
    rec["embeddings"] = path;
    rec["dimension"] = table.dimension();
    rec["vocabulary"] = table.size();
    rec["pairs"] = report.per_pair.size();
    rec["matched_pairs"] = report.matched_pairs;
    json acc;
    for (const auto k : report.ks) {
      acc[std::to_string(k)] = report.accuracy.at(k);
      summary_tsv += fmt::format("{}\t{}\t{}\t{}\t{:.6f}\n", path, k, report.hits.at(k),
                                 report.matched_pairs, report.accuracy.at(k));
    }
    rec["accuracy"] = std::move(acc);
    summary.push_back(std::move(rec));
  }
  write_text_file(out / "summary.tsv", summary_tsv);
  write_text_file(out / "summary.json", summary.dump(2) + "\n");
  outputs.push_back("summary.tsv");
  outputs.push_back("summary.json");

  json cfg;
  cfg["pairs"] = o.pairs;
  cfg["embeddings"] = o.embeddings;
  cfg["formal_vocab"] = o.formal_vocab;
  cfg["ks"] = o.ks;
  write_manifest(out, "eval", 0, std::move(cfg), outputs);
  return 0;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name, const std::string& path) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw DataError(fmt::format("{}: no column \"{}\"", path, name));
    return static_cast<std::size_t>(it - header.begin());
  }
};

std::vector<std::string> split_tabs(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find('\t', start);
    out.emplace_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

Table load_table(const std::string& path) {
  require_file(path, "table");
  const std::string text = read_file(path);
  Table t;
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;
    auto cells = split_tabs(line);
    if (t.header.empty()) {
      t.header = std::move(cells);
      continue;
    }
    if (cells.size() != t.header.size()) {
      throw DataError(fmt::format("{}: line {}: {} cells, header has {}", path, line_no, cells.size(),
                                  t.header.size()));
    }
    t.rows.push_back(std::move(cells));
  }
  if (t.header.empty()) throw DataError(fmt::format("{}: empty table", path));
  return t;
}

std::optional<double> parse_real(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

// Non-key columns whose every cell is numeric.
std::vector<std::string> numeric_columns(const Table& t, const std::set<std::string>& keys) {
  std::vector<std::string> out;
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    if (keys.count(t.header[c])) continue;
    const bool numeric = std::all_of(t.rows.begin(), t.rows.end(),
                                     [&](const auto& r) { return parse_real(r[c]).has_value(); });
    if (numeric) out.push_back(t.header[c]);
  }
  return out;
}

std::map<std::vector<std::string>, std::size_t> index_rows(const Table& t,
                                                           const std::vector<std::size_t>& key_cols,
                                                           const std::string& path) {
  std::map<std::vector<std::string>, std::size_t> idx;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    std::vector<std::string> key;
    for (const auto c : key_cols) key.push_back(t.rows[r][c]);
    if (!idx.emplace(key, r).second) throw DataError(fmt::format("{}: duplicate key row {}", path, r + 2));
  }
  return idx;
}

int run_correlate(const CorrelateOptions& o) {
  if (o.keys.empty()) throw ConfigError("--keys must name at least one column");
  const Table in = load_table(o.intrinsic);
  const Table ex = load_table(o.extrinsic);
  const std::set<std::string> keys(o.keys.begin(), o.keys.end());

  std::vector<std::size_t> in_keys, ex_keys;
  for (const auto& k : o.keys) {
    in_keys.push_back(in.column(k, o.intrinsic));
    ex_keys.push_back(ex.column(k, o.extrinsic));
  }
  const auto in_idx = index_rows(in, in_keys, o.intrinsic);
  const auto ex_idx = index_rows(ex, ex_keys, o.extrinsic);
  std::vector<std::pair<std::size_t, std::size_t>> joined;
  for (const auto& [key, r] : in_idx) {
    const auto it = ex_idx.find(key);
    if (it != ex_idx.end()) joined.emplace_back(r, it->second);
  }
  if (joined.empty()) throw DataError("no rows share the join keys");

  const bool explicit_cols = !o.intrinsic_cols.empty() || !o.extrinsic_cols.empty();
  const auto in_cols = o.intrinsic_cols.empty() ? numeric_columns(in, keys) : o.intrinsic_cols;
  const auto ex_cols = o.extrinsic_cols.empty() ? numeric_columns(ex, keys) : o.extrinsic_cols;
  if (in_cols.empty() || ex_cols.empty()) throw DataError("no numeric columns to correlate");

  auto values = [&](const Table& t, const std::string& col, const std::string& path, bool left) {
    const std::size_t c = t.column(col, path);
    std::vector<double> v;
    for (const auto& [a, b] : joined) {
      const auto& cell = t.rows[left ? a : b][c];
      const auto x = parse_real(cell);
      if (!x) throw DataError(fmt::format("{}: column \"{}\" has non-numeric cell \"{}\"", path, col, cell));
      v.push_back(*x);
    }
    return v;
  };

  std::string report = "intrinsic\textrinsic\tn\tpearson\n";
  for (const auto& ic : in_cols) {
    const auto xs = values(in, ic, o.intrinsic, true);
    for (const auto& ec : ex_cols) {
      const auto ys = values(ex, ec, o.extrinsic, false);
      try {
        const double r = evalsim::pearson(xs, ys);
        report += fmt::format("{}\t{}\t{}\t{:.6f}\n", ic, ec, xs.size(), r);
      } catch (const std::invalid_argument& e) {
        if (explicit_cols) throw DataError(fmt::format("{} x {}: {}", ic, ec, e.what()));
        std::cerr << fmt::format("skipping {} x {}: {}\n", ic, ec, e.what());
      }
    }
  }
  if (o.out.empty()) {
    std::cout << report;
  } else {
    write_text_file(o.out, report);
  }
  return 0;
}

int run_annotate(const AnnotateOptions& o) {
  const Corpus corpus = load_corpus(o.corpus, o.annotations);
  const Corpus annotated = annotate(corpus, FallbackAnnotator{});
  const std::string text = to_conllu(annotated);
  if (o.out.empty()) {
    std::cout << text;
  } else {
    write_text_file(o.out, text);
  }
  return 0;
}

std::string pairs_text(const std::vector<synthetic::Pair>& pairs) {
  std::string out;
  for (const auto& [a, b] : pairs) out += fmt::format("{}\t{}\n", a, b);
  return out;
}

int run_gen(const GenOptions& o) {
  const fs::path out = prepare_out_dir(o.out);
  std::vector<std::string> outputs;
  if (o.kind == "bootstrap") {
    synthetic::BootstrapCorpusOptions opts;
    opts.seed = o.seed;
    const auto c = synthetic::make_bootstrap_corpus(opts);
    write_text_file(out / "corpus.jsonl", synthetic::format_jsonl(c.corpus));
    write_text_file(out / "seeds.tsv", pairs_text(c.seeds));
    write_text_file(out / "truth.tsv",
                    pairs_text(std::vector<synthetic::Pair>(c.truth.begin(), c.truth.end())));
    outputs = {"corpus.jsonl", "seeds.tsv", "truth.tsv"};
  } else if (o.kind == "selftrain") {
    synthetic::SelfTrainCorpusOptions opts;
    opts.seed = o.seed;
    const auto c = synthetic::make_selftrain_corpus(opts);
    write_text_file(out / "gold.tsv", crf::format_labeled(c.gold));
    write_text_file(out / "unlabeled.jsonl", synthetic::format_jsonl(c.unlabeled));
    write_text_file(out / "truth.tsv",
                    pairs_text(std::vector<synthetic::Pair>(c.truth.begin(), c.truth.end())));
    outputs = {"gold.tsv", "unlabeled.jsonl", "truth.tsv"};
  } else if (o.kind == "embeddings") {
    const auto f = synthetic::make_embedding_fixture(100, 20, 16, o.seed);
    write_text_file(out / "embeddings.txt", f.text);
    write_pairs_tsv(out / "pairs.tsv", f.pairs);
    std::string vocab;
    for (const auto& w : f.formal_vocab) vocab += w + "\n";
    write_text_file(out / "formal_vocab.txt", vocab);
    outputs = {"embeddings.txt", "pairs.tsv", "formal_vocab.txt"};
  } else {
    throw ConfigError(fmt::format("unknown kind \"{}\"", o.kind));
  }
  write_manifest(out, "gen-synthetic", o.seed, json{{"kind", o.kind}}, outputs);
  std::cout << fmt::format("wrote {} files to {}\n", outputs.size(), out.string());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mine spelling-variant pairs from dictionary corpora and evaluate embeddings"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "INI/TOML config file; [section] per subcommand, flags win");
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  GlobalOptions g;
  app.add_option("--threads", g.threads, "worker threads for parallel kernels (0 = default)")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--serial", g.serial, "run every kernel on its serial reference path");

  ExtractOptions ex;
  auto* extract = app.add_subcommand("extract", "extract variant pairs from a corpus");
  extract->add_option("--method", ex.method, "baseline | bootstrap | selftrain")
      ->required()
      ->check(CLI::IsMember({"baseline", "bootstrap", "selftrain"}));
  extract->add_option("--corpus", ex.corpus, "JSONL corpus (unlabeled pool for selftrain)")->required();
  extract->add_option("--annotations", ex.annotations, "CoNLL-U parses for the corpus");
  extract->add_option("--out", ex.out, "output directory")->required();
  extract->add_option("--seeds", ex.seeds, "seed tuples, informal TAB formal (bootstrap)");
  extract->add_option("--rules", ex.rules, "rule file (baseline; default: built-in rules)");
  extract->add_option("--stopwords", ex.stopwords, "stopword list (bootstrap)")->capture_default_str();
  extract->add_flag("--no-stopwords", ex.no_stopwords, "disable the stopword constraint");
  extract->add_option("--iterations", ex.iterations, "M for bootstrap (8), N for selftrain (5)");
  extract->add_option("--top-n", ex.top_n, "tuples promoted per iteration")->capture_default_str();
  extract->add_option("--top-n-patterns", ex.top_n_patterns, "patterns promoted per iteration")->capture_default_str();
  extract->add_option("--alpha", ex.alpha, "pattern threshold, fraction of the best score")->capture_default_str();
  extract->add_option("--beta", ex.beta, "tuple threshold, fraction of the best score")->capture_default_str();
  extract->add_option("--window", ex.window, "context window")->capture_default_str();
  extract->add_option("--tau", ex.tau,
                      "Levenshtein threshold for bootstrap (0.5), confidence threshold for selftrain (0.9)");
  extract->add_flag("--tuple-count", ex.tuple_count, "RlogF with tuple count");
  extract->add_flag("--strict", ex.strict, "apply the Levenshtein test to every candidate");
  extract->add_option("--gold", ex.gold, "labeled gold data (selftrain)");
  extract->add_option("--l1", ex.l1, "L1 penalty")->capture_default_str();
  extract->add_option("--l2", ex.l2, "L2 penalty")->capture_default_str();
  extract->add_option("--max-optimizer-iterations", ex.max_optimizer_iterations, "optimizer iteration cap")->capture_default_str();
  extract->add_flag("--search", ex.search, "pick l1/l2 by random search with cross-validation");
  extract->add_option("--trials", ex.trials, "random search trials")->capture_default_str();
  extract->add_option("--folds", ex.folds, "cross-validation folds")->capture_default_str();
  extract->add_option("--seed", ex.seed, "global random seed")->capture_default_str();

  EvalOptions ev;
  auto* eval = app.add_subcommand("eval", "score embedding tables on the variant similarity task");
  eval->add_option("--pairs", ev.pairs, "pairs TSV")->required();
  eval->add_option("--embeddings", ev.embeddings, "embedding text file(s)")->required();
  eval->add_option("--formal-vocab", ev.formal_vocab, "formal vocabulary, one word per line")->required();
  eval->add_option("--ks", ev.ks, "cutoffs")->capture_default_str()->delimiter(',');
  eval->add_option("--out", ev.out, "output directory")->required();

  CorrelateOptions co;
  auto* correlate = app.add_subcommand("correlate", "Pearson correlation of intrinsic vs extrinsic scores");
  correlate->add_option("--intrinsic", co.intrinsic, "intrinsic scores TSV")->required();
  correlate->add_option("--extrinsic", co.extrinsic, "extrinsic scores TSV")->required();
  correlate->add_option("--keys", co.keys, "join key columns")->required()->delimiter(',');
  correlate->add_option("--intrinsic-cols", co.intrinsic_cols, "intrinsic columns (default: numeric)")
      ->delimiter(',');
  correlate->add_option("--extrinsic-cols", co.extrinsic_cols, "extrinsic columns (default: numeric)")
      ->delimiter(',');
  correlate->add_option("--out", co.out, "output TSV (default: stdout)");

  AnnotateOptions an;
  auto* annot = app.add_subcommand("annotate", "write the corpus as CoNLL-U");
  annot->add_option("--corpus", an.corpus, "JSONL corpus")->required();
  annot->add_option("--annotations", an.annotations, "CoNLL-U parses to merge");
  annot->add_option("--out", an.out, "output file (default: stdout)");

  GenOptions gen;
  auto* gensyn = app.add_subcommand("gen-synthetic", "write planted-template test data");
  gensyn->add_option("--kind", gen.kind, "bootstrap | selftrain | embeddings")
      ->required()
      ->check(CLI::IsMember({"bootstrap", "selftrain", "embeddings"}));
  gensyn->add_option("--out", gen.out, "output directory")->required();
  gensyn->add_option("--seed", gen.seed, "generator seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (g.threads > 0) set_threads(g.threads);
    if (*extract) return run_extract(ex, g);
    if (*eval) return run_eval(ev, g);
    if (*correlate) return run_correlate(co);
    if (*annot) return run_annotate(an);
    if (*gensyn) return run_gen(gen);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
