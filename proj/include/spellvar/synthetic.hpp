#pragma once

// Planted-template generators with known ground truth, used by
// `spellvar gen-synthetic` and the test suites.

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "spellvar/corpus.hpp"
#include "spellvar/crf.hpp"
#include "spellvar/evalsim.hpp"
#include "spellvar/pairs.hpp"

namespace spellvar::synthetic {

using Pair = std::pair<std::string, std::string>;  // (informal, formal)

// Forty hand-picked (informal, formal) spelling variants.
const std::vector<Pair>& planted_pairs();

DictEntry make_entry(std::string id, std::string headword, std::string_view definition);

struct BootstrapCorpusOptions {
  std::size_t entries = 200;
  std::size_t pairs = 40;
  std::size_t seeds = 5;
  std::size_t templates_per_pair = 3;
  std::size_t traps = 10;  // stopword-filled template entries
  std::uint64_t seed = 1;
};

struct BootstrapCorpus {
  Corpus corpus;
  std::vector<Pair> seeds;
  std::set<Pair> truth;  // every planted pair, seeds included
};

// Each planted pair is written into `templates_per_pair` of three templates
// ("another way of saying X", "another word for X", "the incorrect spelling
// of X"). The rest
// of the corpus is trap entries whose slot holds a stopword and noise
// definitions under made-up headwords.
BootstrapCorpus make_bootstrap_corpus(const BootstrapCorpusOptions& options = {});

struct SelfTrainCorpusOptions {
  std::size_t gold_positive = 30;
  std::size_t gold_negative = 30;
  std::size_t unlabeled_per_template = 40;
  std::size_t unlabeled_noise = 40;
  std::uint64_t seed = 2;
};

enum class Template { noise, way_of_saying, word_for };

struct SelfTrainCorpus {
  std::vector<crf::LabeledEntry> gold;
  Corpus unlabeled;
  std::vector<Template> unlabeled_template;  // parallel to unlabeled.entries
  std::set<Pair> truth;
};

// Gold covers the "way of saying X" template plus all-O negatives; the
// unlabeled pool mixes that template, "another word for X" and noise.
SelfTrainCorpus make_selftrain_corpus(const SelfTrainCorpusOptions& options = {});

struct EmbeddingFixture {
  std::string text;  // embedding file contents
  evalsim::EmbeddingTable table;
  std::vector<VariantPair> pairs;
  std::set<std::string> formal_vocab;
};

// `words` random vectors, of which `planted` pairs share one vector.
EmbeddingFixture make_embedding_fixture(std::size_t words = 100, std::size_t planted = 20,
                                        std::size_t dim = 16, std::uint64_t seed = 3);

std::string format_jsonl(const Corpus& corpus);

}  // namespace spellvar::synthetic
