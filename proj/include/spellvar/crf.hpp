#pragma once

// Linear-chain CRF over I/O tags: feature templates, penalized likelihood
// training, Viterbi decoding and forward-backward marginals.

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "spellvar/corpus.hpp"
#include "spellvar/parallel.hpp"

namespace spellvar::crf {

enum class Tag : std::uint8_t { O = 0, I = 1 };
inline constexpr std::size_t kNumLabels = 2;

using TagSequence = std::vector<Tag>;
using LabelScores = std::array<double, kNumLabels>;
using TransitionTable = std::array<LabelScores, kNumLabels>;  // [prev][cur]

char tag_char(Tag t);
Tag parse_tag(std::string_view s);

// Per-position feature strings, e.g. "word.lower=your", "-1:pos_=VERB".
using FeatureSet = std::vector<std::vector<std::string>>;

// Current-token templates: word.lower, word.istitle, word.isdigit, pos_, tag_,
// dep_, lemma_, head_text, head_pos, head_tag. Context templates at offsets
// 1..window on each side, prefixed "-k:" / "+k:": word.lower, word.istitle,
// word.isdigit, pos_, tag_, lemma_, head_text, head_pos. "-1:BOS" at the first
// position, "+1:EOS" at the last, plus a constant "bias". Templates whose
// source field is the sentinel are skipped.
FeatureSet extract_features(const DictEntry& entry, int window);
FeatureSet extract_features(const std::vector<Token>& tokens, int window);

struct LabeledSequence {
  FeatureSet features;
  TagSequence labels;
};

// Scores for one sequence: emissions[t][label] plus label-pair transitions.
struct Lattice {
  std::vector<LabelScores> emissions;
  TransitionTable transitions{};
};

double path_score(const Lattice& lattice, const TagSequence& path);

struct Decoded {
  TagSequence labels;
  double score = 0.0;
};

// Argmax path; equal-scoring alternatives resolve toward O.
Decoded viterbi(const Lattice& lattice);

struct ForwardBackward {
  std::vector<LabelScores> alpha;  // log forward scores
  std::vector<LabelScores> beta;   // log backward scores
  double log_z = 0.0;
};

ForwardBackward forward_backward(const Lattice& lattice);
// Posterior P(y_t = label | x) per position.
std::vector<LabelScores> lattice_marginals(const Lattice& lattice);

struct TrainConfig {
  double l1 = 2.35;
  double l2 = 0.08;
  int max_optimizer_iterations = 200;
  double gradient_tolerance = 1e-5;
  int window = 3;

  void validate() const;
};

struct TrainingInfo {
  int iterations = 0;
  double objective = 0.0;  // penalized negative log-likelihood at the solution
  bool converged = false;
  std::string stop_reason;
  bool degenerate_labels = false;  // only one label occurs in the data
  std::vector<double> objective_history;
};

struct CrfModel {
  static constexpr std::string_view kFormatTag = "spellvar-crf";
  static constexpr int kFormatVersion = 1;

  int window = 3;
  std::unordered_map<std::string, LabelScores> state_weights;
  TransitionTable transitions{};
  TrainingInfo info;

  // Unknown features contribute nothing.
  Lattice lattice(const FeatureSet& features) const;
  std::size_t state_weight_count() const { return state_weights.size() * kNumLabels; }
  std::size_t zero_state_weight_count() const;
};

Decoded viterbi_decode(const CrfModel& model, const FeatureSet& features);
std::vector<LabelScores> marginals(const CrfModel& model, const FeatureSet& features);

// Training data with features mapped to dense ids. Weight layout: state
// weight (f, label) at f * kNumLabels + label, then the transition table
// row-major at the end.
struct CompiledSequence {
  std::vector<std::vector<std::uint32_t>> features;
  TagSequence labels;
};

struct CompiledData {
  std::vector<std::string> feature_names;
  std::vector<CompiledSequence> sequences;

  std::size_t num_features() const { return feature_names.size(); }
  std::size_t num_weights() const { return feature_names.size() * kNumLabels + kNumLabels * kNumLabels; }
  std::size_t transition_offset() const { return feature_names.size() * kNumLabels; }
};

// Throws DataError when a sequence's feature and label lengths differ.
CompiledData compile(std::span<const LabeledSequence> data);

struct ObjectiveValue {
  double value = 0.0;  // sum of log-likelihoods minus (l2/2)||w||^2
  std::vector<double> gradient;
};

// Penalized log-likelihood and its exact gradient. The parallel path sums
// fixed blocks of sequences in block order; Execution::serial is the plain
// sequence-by-sequence reference.
ObjectiveValue log_likelihood_and_gradient(std::span<const double> weights,
                                           const CompiledData& data, double l2,
                                           Execution exec = Execution::parallel);
ObjectiveValue log_likelihood_and_gradient(std::span<const double> weights,
                                           std::span<const LabeledSequence> data, double l2,
                                           Execution exec = Execution::parallel);

CrfModel model_from_weights(const CompiledData& data, std::span<const double> weights, int window);

// Maximizes the elastic-net penalized likelihood with OWL-QN.
CrfModel train(std::span<const LabeledSequence> data, const TrainConfig& config,
               Execution exec = Execution::parallel);

std::string serialize_model(const CrfModel& model);
CrfModel parse_model(std::string_view text);
void save_model(const CrfModel& model, const std::filesystem::path& path);
CrfModel load_model(const std::filesystem::path& path);

// Labeled data: one token per line as "token TAB tag", optionally followed by
// lemma, upos, xpos, dep, head (CoNLL-U head convention) columns. Blocks are
// separated by blank lines; "# word = X" and "# id = X" comments name the
// headword and entry id.
struct LabeledEntry {
  DictEntry entry;
  TagSequence labels;
};

std::vector<LabeledEntry> parse_labeled(std::string_view text);
std::vector<LabeledEntry> load_labeled(const std::filesystem::path& path);
std::string format_labeled(const std::vector<LabeledEntry>& data);

// Applies `provider` to entries whose tokens still carry sentinel POS tags.
void annotate_labeled(std::vector<LabeledEntry>& data, const Annotator& provider);

std::vector<LabeledSequence> to_sequences(const std::vector<LabeledEntry>& data, int window);

}  // namespace spellvar::crf
