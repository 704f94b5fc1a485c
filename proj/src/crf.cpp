#include "spellvar/crf.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "spellvar/errors.hpp"
#include "spellvar/owlqn.hpp"

namespace spellvar::crf {

namespace {

constexpr std::size_t kO = 0;
constexpr std::size_t kI = 1;

double log_sum_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

std::string_view bool_text(bool b) { return b ? "True" : "False"; }

bool is_set(std::string_view field) { return field != kSentinel && !field.empty(); }

const Token& head_of(const std::vector<Token>& tokens, std::size_t t) {
  const std::size_t h = tokens[t].head;
  return h < tokens.size() ? tokens[h] : tokens[t];
}

void add_current(std::vector<std::string>& out, const std::vector<Token>& tokens, std::size_t t) {
  const Token& tok = tokens[t];
  const Token& head = head_of(tokens, t);
  out.push_back("word.lower=" + tok.lower);
  out.push_back(fmt::format("word.istitle={}", bool_text(tok.is_title)));
  out.push_back(fmt::format("word.isdigit={}", bool_text(tok.is_digit)));
  if (is_set(tok.upos)) out.push_back("pos_=" + tok.upos);
  if (is_set(tok.xpos)) out.push_back("tag_=" + tok.xpos);
  if (is_set(tok.dep)) out.push_back("dep_=" + tok.dep);
  if (is_set(tok.lemma)) out.push_back("lemma_=" + tok.lemma);
  out.push_back("head_text=" + head.surface);
  if (is_set(head.upos)) out.push_back("head_pos=" + head.upos);
  if (is_set(head.xpos)) out.push_back("head_tag=" + head.xpos);
}

void add_context(std::vector<std::string>& out, const std::vector<Token>& tokens, std::size_t c,
                 const std::string& prefix) {
  const Token& tok = tokens[c];
  const Token& head = head_of(tokens, c);
  out.push_back(prefix + "word.lower=" + tok.lower);
  out.push_back(fmt::format("{}word.istitle={}", prefix, bool_text(tok.is_title)));
  out.push_back(fmt::format("{}word.isdigit={}", prefix, bool_text(tok.is_digit)));
  if (is_set(tok.upos)) out.push_back(prefix + "pos_=" + tok.upos);
  if (is_set(tok.xpos)) out.push_back(prefix + "tag_=" + tok.xpos);
  if (is_set(tok.lemma)) out.push_back(prefix + "lemma_=" + tok.lemma);
  out.push_back(prefix + "head_text=" + head.surface);
  if (is_set(head.upos)) out.push_back(prefix + "head_pos=" + head.upos);
}

}  // namespace

char tag_char(Tag t) { return t == Tag::I ? 'I' : 'O'; }

Tag parse_tag(std::string_view s) {
  if (s == "I") return Tag::I;
  if (s == "O") return Tag::O;
  throw DataError(fmt::format("unknown tag \"{}\" (expected I or O)", s));
}

FeatureSet extract_features(const std::vector<Token>& tokens, int window) {
  const std::size_t n = tokens.size();
  FeatureSet out(n);
  for (std::size_t t = 0; t < n; ++t) {
    auto& f = out[t];
    f.emplace_back("bias");
    add_current(f, tokens, t);
    for (int o = 1; o <= window; ++o) {
      const auto off = static_cast<std::size_t>(o);
      if (t >= off) add_context(f, tokens, t - off, fmt::format("-{}:", o));
      if (t + off < n) add_context(f, tokens, t + off, fmt::format("+{}:", o));
    }
    if (t == 0) f.emplace_back("-1:BOS");
    if (t + 1 == n) f.emplace_back("+1:EOS");
  }
  return out;
}

FeatureSet extract_features(const DictEntry& entry, int window) {
  return extract_features(entry.definition, window);
}

double path_score(const Lattice& lattice, const TagSequence& path) {
  double s = 0.0;
  for (std::size_t t = 0; t < path.size(); ++t) {
    const auto y = static_cast<std::size_t>(path[t]);
    s += lattice.emissions[t][y];
    if (t > 0) s += lattice.transitions[static_cast<std::size_t>(path[t - 1])][y];
  }
  return s;
}

Decoded viterbi(const Lattice& lattice) {
  const std::size_t n = lattice.emissions.size();
  Decoded out;
  if (n == 0) return out;
  std::vector<LabelScores> delta(n);
  std::vector<std::array<std::uint8_t, kNumLabels>> back(n);
  delta[0] = lattice.emissions[0];
  for (std::size_t t = 1; t < n; ++t) {
    for (std::size_t y = 0; y < kNumLabels; ++y) {
      // O is examined first and only a strictly better I replaces it.
      std::size_t best = kO;
      double best_score = delta[t - 1][kO] + lattice.transitions[kO][y];
      const double via_i = delta[t - 1][kI] + lattice.transitions[kI][y];
      if (via_i > best_score) {
        best = kI;
        best_score = via_i;
      }
      delta[t][y] = best_score + lattice.emissions[t][y];
      back[t][y] = static_cast<std::uint8_t>(best);
    }
  }
  std::size_t y = delta[n - 1][kI] > delta[n - 1][kO] ? kI : kO;
  out.score = delta[n - 1][y];
  out.labels.resize(n);
  for (std::size_t t = n; t-- > 0;) {
    out.labels[t] = static_cast<Tag>(y);
    if (t > 0) y = back[t][y];
  }
  return out;
}

ForwardBackward forward_backward(const Lattice& lattice) {
  const std::size_t n = lattice.emissions.size();
  ForwardBackward fb;
  fb.alpha.resize(n);
  fb.beta.resize(n);
  if (n == 0) return fb;
  const auto& tr = lattice.transitions;
  fb.alpha[0] = lattice.emissions[0];
  for (std::size_t t = 1; t < n; ++t) {
    for (std::size_t y = 0; y < kNumLabels; ++y) {
      fb.alpha[t][y] = log_sum_exp(fb.alpha[t - 1][kO] + tr[kO][y], fb.alpha[t - 1][kI] + tr[kI][y]) +
                       lattice.emissions[t][y];
    }
  }
  fb.beta[n - 1] = {0.0, 0.0};
  for (std::size_t t = n - 1; t-- > 0;) {
    for (std::size_t y = 0; y < kNumLabels; ++y) {
      fb.beta[t][y] = log_sum_exp(tr[y][kO] + lattice.emissions[t + 1][kO] + fb.beta[t + 1][kO],
                                  tr[y][kI] + lattice.emissions[t + 1][kI] + fb.beta[t + 1][kI]);
    }
  }
  fb.log_z = log_sum_exp(fb.alpha[n - 1][kO], fb.alpha[n - 1][kI]);
  return fb;
}

std::vector<LabelScores> lattice_marginals(const Lattice& lattice) {
  const auto fb = forward_backward(lattice);
  std::vector<LabelScores> out(lattice.emissions.size());
  for (std::size_t t = 0; t < out.size(); ++t) {
    for (std::size_t y = 0; y < kNumLabels; ++y) {
      out[t][y] = std::exp(fb.alpha[t][y] + fb.beta[t][y] - fb.log_z);
    }
  }
  return out;
}

void TrainConfig::validate() const {
  if (!(l1 >= 0.0) || !std::isfinite(l1)) throw ConfigError("l1 must be a non-negative number");
  if (!(l2 >= 0.0) || !std::isfinite(l2)) throw ConfigError("l2 must be a non-negative number");
  if (max_optimizer_iterations < 0) throw ConfigError("max optimizer iterations must be >= 0");
  if (!(gradient_tolerance > 0.0)) throw ConfigError("gradient tolerance must be positive");
  if (window < 0) throw ConfigError("window must be >= 0");
}

Lattice CrfModel::lattice(const FeatureSet& features) const {
  Lattice l;
  l.transitions = transitions;
  l.emissions.resize(features.size(), LabelScores{0.0, 0.0});
  for (std::size_t t = 0; t < features.size(); ++t) {
    for (const auto& f : features[t]) {
      const auto it = state_weights.find(f);
      if (it == state_weights.end()) continue;
      l.emissions[t][kO] += it->second[kO];
      l.emissions[t][kI] += it->second[kI];
    }
  }
  return l;
}

std::size_t CrfModel::zero_state_weight_count() const {
  std::size_t zeros = 0;
  for (const auto& [name, w] : state_weights) {
    zeros += static_cast<std::size_t>(w[kO] == 0.0) + static_cast<std::size_t>(w[kI] == 0.0);
  }
  return zeros;
}

Decoded viterbi_decode(const CrfModel& model, const FeatureSet& features) {
  return viterbi(model.lattice(features));
}

std::vector<LabelScores> marginals(const CrfModel& model, const FeatureSet& features) {
  return lattice_marginals(model.lattice(features));
}

CompiledData compile(std::span<const LabeledSequence> data) {
  CompiledData out;
  std::unordered_map<std::string, std::uint32_t> ids;
  out.sequences.reserve(data.size());
  for (std::size_t s = 0; s < data.size(); ++s) {
    const auto& seq = data[s];
    if (seq.features.size() != seq.labels.size()) {
      throw DataError(fmt::format("sequence {}: {} feature positions but {} labels", s,
                                  seq.features.size(), seq.labels.size()));
    }
    CompiledSequence c;
    c.labels = seq.labels;
    c.features.resize(seq.features.size());
    for (std::size_t t = 0; t < seq.features.size(); ++t) {
      for (const auto& f : seq.features[t]) {
        auto [it, inserted] = ids.try_emplace(f, static_cast<std::uint32_t>(out.feature_names.size()));
        if (inserted) out.feature_names.push_back(f);
        c.features[t].push_back(it->second);
      }
    }
    out.sequences.push_back(std::move(c));
  }
  return out;
}

namespace {

Lattice compiled_lattice(std::span<const double> w, const CompiledData& data,
                         const CompiledSequence& seq) {
  Lattice l;
  const std::size_t off = data.transition_offset();
  for (std::size_t a = 0; a < kNumLabels; ++a) {
    for (std::size_t b = 0; b < kNumLabels; ++b) l.transitions[a][b] = w[off + a * kNumLabels + b];
  }
  l.emissions.resize(seq.features.size(), LabelScores{0.0, 0.0});
  for (std::size_t t = 0; t < seq.features.size(); ++t) {
    for (const auto f : seq.features[t]) {
      l.emissions[t][kO] += w[f * kNumLabels + kO];
      l.emissions[t][kI] += w[f * kNumLabels + kI];
    }
  }
  return l;
}

// Adds one sequence's log-likelihood to `value` and its gradient to `grad`.
void accumulate_sequence(std::span<const double> w, const CompiledData& data,
                         const CompiledSequence& seq, double& value, std::span<double> grad) {
  const std::size_t n = seq.labels.size();
  if (n == 0) return;
  const Lattice lat = compiled_lattice(w, data, seq);
  const auto fb = forward_backward(lat);
  value += path_score(lat, seq.labels) - fb.log_z;

  const std::size_t off = data.transition_offset();
  for (std::size_t t = 0; t < n; ++t) {
    LabelScores p{};
    for (std::size_t y = 0; y < kNumLabels; ++y) {
      p[y] = std::exp(fb.alpha[t][y] + fb.beta[t][y] - fb.log_z);
    }
    const auto gold = static_cast<std::size_t>(seq.labels[t]);
    for (const auto f : seq.features[t]) {
      for (std::size_t y = 0; y < kNumLabels; ++y) {
        grad[f * kNumLabels + y] += (y == gold ? 1.0 : 0.0) - p[y];
      }
    }
    if (t == 0) continue;
    const auto prev_gold = static_cast<std::size_t>(seq.labels[t - 1]);
    grad[off + prev_gold * kNumLabels + gold] += 1.0;
    for (std::size_t a = 0; a < kNumLabels; ++a) {
      for (std::size_t b = 0; b < kNumLabels; ++b) {
        const double pair = std::exp(fb.alpha[t - 1][a] + lat.transitions[a][b] +
                                     lat.emissions[t][b] + fb.beta[t][b] - fb.log_z);
        grad[off + a * kNumLabels + b] -= pair;
      }
    }
  }
}

}  // namespace

ObjectiveValue log_likelihood_and_gradient(std::span<const double> weights,
                                           const CompiledData& data, double l2, Execution exec) {
  const std::size_t dim = data.num_weights();
  if (weights.size() != dim) {
    throw std::invalid_argument(
        fmt::format("weight vector has {} entries, expected {}", weights.size(), dim));
  }
  ObjectiveValue out;
  out.gradient.assign(dim, 0.0);

  if (exec == Execution::serial) {
    for (const auto& seq : data.sequences) {
      accumulate_sequence(weights, data, seq, out.value, out.gradient);
    }
  } else {
    const auto blocks = reduction_blocks(data.sequences.size());
    std::vector<double> values(blocks.size(), 0.0);
    std::vector<std::vector<double>> grads(blocks.size());
    for_each_index(blocks.size(), exec, [&](std::size_t b) {
      grads[b].assign(dim, 0.0);
      for (std::size_t s = blocks[b].begin; s < blocks[b].end; ++s) {
        accumulate_sequence(weights, data, data.sequences[s], values[b], grads[b]);
      }
    });
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      out.value += values[b];
      for (std::size_t i = 0; i < dim; ++i) out.gradient[i] += grads[b][i];
    }
  }

  if (l2 != 0.0) {
    double sq = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      sq += weights[i] * weights[i];
      out.gradient[i] -= l2 * weights[i];
    }
    out.value -= 0.5 * l2 * sq;
  }
  return out;
}

ObjectiveValue log_likelihood_and_gradient(std::span<const double> weights,
                                           std::span<const LabeledSequence> data, double l2,
                                           Execution exec) {
  return log_likelihood_and_gradient(weights, compile(data), l2, exec);
}

CrfModel model_from_weights(const CompiledData& data, std::span<const double> weights, int window) {
  CrfModel m;
  m.window = window;
  for (std::size_t f = 0; f < data.num_features(); ++f) {
    m.state_weights.emplace(data.feature_names[f],
                            LabelScores{weights[f * kNumLabels + kO], weights[f * kNumLabels + kI]});
  }
  const std::size_t off = data.transition_offset();
  for (std::size_t a = 0; a < kNumLabels; ++a) {
    for (std::size_t b = 0; b < kNumLabels; ++b) m.transitions[a][b] = weights[off + a * kNumLabels + b];
  }
  return m;
}

CrfModel train(std::span<const LabeledSequence> data, const TrainConfig& config, Execution exec) {
  config.validate();
  if (data.empty()) throw DataError("no training sequences");
  const CompiledData compiled = compile(data);

  bool has_i = false;
  bool has_o = false;
  for (const auto& seq : compiled.sequences) {
    for (const auto y : seq.labels) (y == Tag::I ? has_i : has_o) = true;
  }

  const double l2 = config.l2;
  optim::SmoothObjective objective = [&](std::span<const double> x, std::span<double> grad) {
    auto r = log_likelihood_and_gradient(x, compiled, l2, exec);
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] = -r.gradient[i];
    return -r.value;
  };

  optim::OwlqnOptions opts;
  opts.l1 = config.l1;
  opts.max_iterations = config.max_optimizer_iterations;
  opts.gradient_tolerance = config.gradient_tolerance;

  optim::OwlqnResult result;
  try {
    result = optim::minimize(objective, std::vector<double>(compiled.num_weights(), 0.0), opts);
  } catch (const std::runtime_error& e) {
    throw DataError(fmt::format("CRF training failed: {}", e.what()));
  }
  if (!std::isfinite(result.value)) throw DataError("CRF training produced a non-finite objective");

  CrfModel model = model_from_weights(compiled, result.x, config.window);
  model.info.iterations = result.iterations;
  model.info.objective = result.value;
  model.info.converged = result.converged;
  model.info.stop_reason = result.stop_reason;
  model.info.degenerate_labels = !(has_i && has_o);
  model.info.objective_history = std::move(result.history);
  return model;
}

std::string serialize_model(const CrfModel& model) {
  std::string out;
  out += fmt::format("{} {}\n", CrfModel::kFormatTag, CrfModel::kFormatVersion);
  out += fmt::format("window {}\n", model.window);
  out += "labels O I\n";
  for (std::size_t a = 0; a < kNumLabels; ++a) {
    for (std::size_t b = 0; b < kNumLabels; ++b) {
      out += fmt::format("transition {} {} {:.17g}\n", tag_char(static_cast<Tag>(a)),
                         tag_char(static_cast<Tag>(b)), model.transitions[a][b]);
    }
  }
  std::vector<const std::pair<const std::string, LabelScores>*> rows;
  rows.reserve(model.state_weights.size());
  for (const auto& kv : model.state_weights) rows.push_back(&kv);
  std::sort(rows.begin(), rows.end(), [](auto* a, auto* b) { return a->first < b->first; });
  out += fmt::format("features {}\n", rows.size());
  for (const auto* kv : rows) {
    out += fmt::format("{}\t{:.17g}\t{:.17g}\n", kv->first, kv->second[kO], kv->second[kI]);
  }
  out += "end\n";
  return out;
}

namespace {

double parse_double(std::string_view s, std::size_t line) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw DataError(fmt::format("model line {}: bad number \"{}\"", line, s));
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  std::string_view next() {
    if (pos_ >= text_.size()) throw DataError("model file truncated");
    auto end = text_.find('\n', pos_);
    if (end == std::string_view::npos) end = text_.size();
    auto line = text_.substr(pos_, end - pos_);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos_ = end + 1;
    ++line_no_;
    return line;
  }
  std::size_t line_no() const { return line_no_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
};

}  // namespace

CrfModel parse_model(std::string_view text) {
  LineReader in(text);
  CrfModel m;

  const auto header = split(in.next(), ' ');
  if (header.size() != 2 || header[0] != CrfModel::kFormatTag) {
    throw DataError("not a spellvar CRF model file");
  }
  if (header[1] != std::to_string(CrfModel::kFormatVersion)) {
    throw DataError(fmt::format("unsupported model version \"{}\"", header[1]));
  }

  const auto window = split(in.next(), ' ');
  if (window.size() != 2 || window[0] != "window") throw DataError("model file: missing window");
  const auto* wend = window[1].data() + window[1].size();
  if (std::from_chars(window[1].data(), wend, m.window).ptr != wend || m.window < 0) {
    throw DataError("model file: bad window");
  }
  if (in.next() != "labels O I") throw DataError("model file: unexpected label set");

  for (std::size_t a = 0; a < kNumLabels; ++a) {
    for (std::size_t b = 0; b < kNumLabels; ++b) {
      const auto parts = split(in.next(), ' ');
      if (parts.size() != 4 || parts[0] != "transition" ||
          parts[1] != std::string(1, tag_char(static_cast<Tag>(a))) ||
          parts[2] != std::string(1, tag_char(static_cast<Tag>(b)))) {
        throw DataError(fmt::format("model line {}: bad transition row", in.line_no()));
      }
      m.transitions[a][b] = parse_double(parts[3], in.line_no());
    }
  }

  const auto count_line = split(in.next(), ' ');
  std::size_t count = 0;
  if (count_line.size() != 2 || count_line[0] != "features") {
    throw DataError("model file: missing feature count");
  }
  const auto* cend = count_line[1].data() + count_line[1].size();
  if (std::from_chars(count_line[1].data(), cend, count).ptr != cend) {
    throw DataError("model file: bad feature count");
  }
  for (std::size_t i = 0; i < count; ++i) {
    const auto line = in.next();
    const auto parts = split(line, '\t');
    if (parts.size() != 3 || parts[0].empty()) {
      throw DataError(fmt::format("model line {}: expected feature TAB w_O TAB w_I", in.line_no()));
    }
    const LabelScores w{parse_double(parts[1], in.line_no()), parse_double(parts[2], in.line_no())};
    if (!m.state_weights.emplace(std::string(parts[0]), w).second) {
      throw DataError(fmt::format("model line {}: duplicate feature", in.line_no()));
    }
  }
  if (in.next() != "end") throw DataError("model file: missing end marker");
  return m;
}

void save_model(const CrfModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(fmt::format("cannot write {}", path.string()));
  out << serialize_model(model);
  if (!out) throw DataError(fmt::format("error writing {}", path.string()));
}

CrfModel load_model(const std::filesystem::path& path) { return parse_model(read_file(path)); }

std::vector<LabeledEntry> parse_labeled(std::string_view text) {
  std::vector<LabeledEntry> out;
  LabeledEntry cur;
  bool annotated_cols = false;
  std::vector<std::size_t> heads;  // CoNLL-U convention until the block closes
  std::size_t line_no = 0;
  std::size_t block_start = 0;

  auto flush = [&]() {
    if (cur.entry.definition.empty()) {
      cur = LabeledEntry{};
      return;
    }
    const std::size_t n = cur.entry.definition.size();
    if (annotated_cols) {
      for (std::size_t t = 0; t < n; ++t) {
        if (heads[t] > n) {
          throw DataError(fmt::format("line {}: head {} out of range", block_start + t, heads[t]));
        }
        cur.entry.definition[t].head = heads[t] == 0 ? t : heads[t] - 1;
      }
    }
    std::string raw;
    for (const auto& tok : cur.entry.definition) {
      if (!raw.empty()) raw += ' ';
      raw += tok.surface;
    }
    cur.entry.raw_definition = std::move(raw);
    if (cur.entry.entry_id.empty()) cur.entry.entry_id = fmt::format("S{}", out.size() + 1);
    out.push_back(std::move(cur));
    cur = LabeledEntry{};
    heads.clear();
  };

  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (trim(line).empty()) {
      flush();
      if (end == text.size()) break;
      continue;
    }
    if (line.front() == '#') {
      const auto body = trim(line.substr(1));
      const auto eq = body.find('=');
      if (eq != std::string_view::npos) {
        const auto key = trim(body.substr(0, eq));
        const auto val = std::string(trim(body.substr(eq + 1)));
        if (key == "word") cur.entry.headword = to_lower(val);
        if (key == "id") cur.entry.entry_id = val;
      }
      if (end == text.size()) break;
      continue;
    }
    const auto cols = split(line, '\t');
    if (cols.size() != 2 && cols.size() != 7) {
      throw DataError(fmt::format("line {}: expected 2 or 7 tab-separated columns, got {}", line_no,
                                  cols.size()));
    }
    if (cols[0].empty()) throw DataError(fmt::format("line {}: empty token", line_no));
    const bool with_annotation = cols.size() == 7;
    if (cur.entry.definition.empty()) {
      annotated_cols = with_annotation;
      block_start = line_no;
    } else if (annotated_cols != with_annotation) {
      throw DataError(fmt::format("line {}: column count changes within a block", line_no));
    }
    Tag tag;
    try {
      tag = parse_tag(cols[1]);
    } catch (const DataError& e) {
      throw DataError(fmt::format("line {}: {}", line_no, e.what()));
    }
    Token tok = make_token(std::string(cols[0]), cur.entry.definition.size());
    if (with_annotation) {
      tok.lemma = std::string(cols[2]);
      tok.upos = std::string(cols[3]);
      tok.xpos = std::string(cols[4]);
      tok.dep = std::string(cols[5]);
      std::size_t h = 0;
      const auto* hend = cols[6].data() + cols[6].size();
      if (std::from_chars(cols[6].data(), hend, h).ptr != hend) {
        throw DataError(fmt::format("line {}: bad head \"{}\"", line_no, cols[6]));
      }
      heads.push_back(h);
    }
    cur.entry.definition.push_back(std::move(tok));
    cur.labels.push_back(tag);
    if (end == text.size()) break;
  }
  flush();
  return out;
}

std::vector<LabeledEntry> load_labeled(const std::filesystem::path& path) {
  try {
    return parse_labeled(read_file(path));
  } catch (const DataError& e) {
    throw DataError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

std::string format_labeled(const std::vector<LabeledEntry>& data) {
  std::string out;
  for (const auto& le : data) {
    if (!le.entry.entry_id.empty()) out += fmt::format("# id = {}\n", le.entry.entry_id);
    if (!le.entry.headword.empty()) out += fmt::format("# word = {}\n", le.entry.headword);
    const auto& toks = le.entry.definition;
    for (std::size_t t = 0; t < toks.size(); ++t) {
      const auto& tok = toks[t];
      out += fmt::format("{}\t{}", tok.surface, tag_char(le.labels[t]));
      if (tok.upos != kSentinel) {
        const std::size_t head = tok.head == t ? 0 : tok.head + 1;
        out += fmt::format("\t{}\t{}\t{}\t{}\t{}", tok.lemma, tok.upos, tok.xpos, tok.dep, head);
      }
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

void annotate_labeled(std::vector<LabeledEntry>& data, const Annotator& provider) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    auto& entry = data[i].entry;
    const bool bare = std::all_of(entry.definition.begin(), entry.definition.end(),
                                  [](const Token& t) { return t.upos == kSentinel; });
    if (!bare) continue;
    auto tokens = provider.annotate(entry, i);
    if (tokens.size() != entry.definition.size()) {
      throw DataError(fmt::format("entry {}: annotator changed the token count", entry.entry_id));
    }
    entry.definition = std::move(tokens);
  }
}

std::vector<LabeledSequence> to_sequences(const std::vector<LabeledEntry>& data, int window) {
  std::vector<LabeledSequence> out;
  out.reserve(data.size());
  for (const auto& le : data) out.push_back({extract_features(le.entry, window), le.labels});
  return out;
}

}  // namespace spellvar::crf
