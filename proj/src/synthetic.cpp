#include "spellvar/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>
#include <json.hpp>

#include "spellvar/errors.hpp"
#include "spellvar/random.hpp"

namespace spellvar::synthetic {

const std::vector<Pair>& planted_pairs() {
  static const std::vector<Pair> pairs = {
      {"m8", "mate"},         {"gr8", "great"},      {"gurl", "girl"},       {"plz", "please"},
      {"ppl", "people"},      {"thx", "thanks"},     {"2nite", "tonight"},   {"2moro", "tomorrow"},
      {"luv", "love"},        {"l8r", "later"},      {"srsly", "seriously"}, {"watevs", "whatever"},
      {"bf", "boyfriend"},    {"gf", "girlfriend"},  {"prolly", "probably"}, {"def", "definitely"},
      {"awsum", "awesome"},   {"kewl", "cool"},      {"cray", "crazy"},      {"dood", "dude"},
      {"frend", "friend"},    {"hom", "home"},       {"kis", "kiss"},        {"lulz", "laughs"},
      {"munny", "money"},     {"muzik", "music"},    {"nyce", "nice"},       {"partee", "party"},
      {"fone", "phone"},      {"pic", "picture"},    {"skool", "school"},    {"sis", "sister"},
      {"bro", "brother"},     {"sleepz", "sleep"},   {"txt", "text"},        {"weerd", "weird"},
      {"wikked", "wicked"},   {"msg", "message"},    {"inet", "internet"},   {"h8", "hate"},
  };
  return pairs;
}

DictEntry make_entry(std::string id, std::string headword, std::string_view definition) {
  DictEntry e;
  e.entry_id = std::move(id);
  e.headword = std::move(headword);
  e.raw_definition = std::string(definition);
  e.definition = tokenize(definition);
  return e;
}

namespace {

const std::vector<std::string> kNouns = {"dance", "song",  "food",  "game", "party", "city",
                                         "movie", "shirt", "car",   "dog",  "drink", "show",
                                         "class", "team",  "phone", "bed",  "beach", "job"};
const std::vector<std::string> kAdjectives = {"loud", "cheap", "fancy", "old",   "weird",
                                              "huge", "tiny",  "slow",  "happy", "angry"};
const std::vector<std::string> kVerbs = {"eat", "drive", "sing", "run", "watch", "play", "talk"};

const std::vector<std::string> kWayPrefixes = {"another", "a cool", "a lazy", "a texting",
                                               "a short", "an online"};
const std::vector<std::string> kSuffixes = {"", "", " .", " in texting", " when chatting online"};

std::string noise_definition(std::size_t kind, Rng& rng) {
  switch (kind % 5) {
    case 0:
      return fmt::format("a kind of {}", rng.pick(kNouns));
    case 1:
      return fmt::format("a {} {} that people use for {}", rng.pick(kAdjectives), rng.pick(kNouns),
                         rng.pick(kNouns));
    case 2:
      return fmt::format("something good for {} and {}", rng.pick(kNouns), rng.pick(kNouns));
    case 3:
      return fmt::format("when you {} too much {}", rng.pick(kVerbs), rng.pick(kNouns));
    default:
      return fmt::format("the {} of a {} {}", rng.pick(kNouns), rng.pick(kAdjectives),
                         rng.pick(kNouns));
  }
}

class NameMaker {
 public:
  explicit NameMaker(Rng& rng) : rng_(rng) {
    for (const auto& [informal, formal] : planted_pairs()) used_.insert(informal);
  }

  // Pronounceable nonsense word of 2 or 3 syllables.
  std::string word() {
    static const std::vector<std::string> syllables = {"zo", "ra", "bli", "tu", "ke", "mo", "gla",
                                                       "vi", "dra", "po", "su", "ne", "fri", "lo"};
    // After repeated collisions the short names are nearly used up; grow the
    // syllable count instead of spinning.
    for (std::uint64_t extra = 0, attempts = 0;; ++attempts) {
      if (attempts == 200) {
        ++extra;
        attempts = 0;
      }
      std::string w;
      const auto n = 2 + rng_.below(2) + extra;
      for (std::uint64_t i = 0; i < n; ++i) w += rng_.pick(syllables);
      if (used_.insert(w).second) return w;
    }
  }

  // Short consonant cluster sharing no letter with the stopword fillers.
  std::string acronym() {
    static const std::string letters = "cfjkpqwxz";
    for (std::uint64_t extra = 0, attempts = 0;; ++attempts) {
      if (attempts == 200) {
        ++extra;
        attempts = 0;
      }
      std::string w;
      const auto n = 2 + rng_.below(2) + extra;
      for (std::uint64_t i = 0; i < n; ++i) w += letters[rng_.below(letters.size())];
      if (used_.insert(w).second) return w;
    }
  }

 private:
  Rng& rng_;
  std::set<std::string> used_;
};

// Varied wording (prefixes and trailing phrases) for the CRF corpora; the
// bootstrap corpus keeps every template's context fixed.
std::string suffix(Rng& rng, bool varied) { return varied ? rng.pick(kSuffixes) : ""; }

std::string way_of_saying(const std::string& x, Rng& rng, bool varied) {
  return fmt::format("{} way of saying {}{}", varied ? rng.pick(kWayPrefixes) : "another", x,
                     suffix(rng, varied));
}

std::string word_for(const std::string& x, Rng& rng, bool varied) {
  return fmt::format("another word for {}{}", x, suffix(rng, varied));
}

std::string incorrect_spelling(const std::string& x, Rng& rng, bool varied) {
  return fmt::format("the incorrect spelling of {}{}", x, suffix(rng, varied));
}

}  // namespace

BootstrapCorpus make_bootstrap_corpus(const BootstrapCorpusOptions& options) {
  const auto& all = planted_pairs();
  if (options.pairs > all.size()) {
    throw ConfigError(fmt::format("at most {} planted pairs are available", all.size()));
  }
  if (options.seeds > options.pairs) throw ConfigError("more seeds than planted pairs");
  if (options.templates_per_pair < 1 || options.templates_per_pair > 3) {
    throw ConfigError("templates per pair must be 1, 2 or 3");
  }
  const std::size_t fixed = options.templates_per_pair * options.pairs + options.traps;
  if (options.entries < fixed) {
    throw ConfigError(fmt::format("{} entries cannot hold {} planted and trap entries",
                                  options.entries, fixed));
  }

  Rng rng(options.seed);
  NameMaker names(rng);
  BootstrapCorpus out;
  std::vector<std::pair<std::string, std::string>> rows;  // (headword, definition)

  for (std::size_t i = 0; i < options.pairs; ++i) {
    const auto& [informal, formal] = all[i];
    out.truth.insert(all[i]);
    if (i < options.seeds) out.seeds.push_back(all[i]);
    for (std::size_t k = 0; k < options.templates_per_pair; ++k) {
      const std::size_t t = (i + k) % 3;
      std::string def = t == 0   ? way_of_saying(formal, rng, false)
                        : t == 1 ? word_for(formal, rng, false)
                                 : incorrect_spelling(formal, rng, false);
      rows.emplace_back(informal, std::move(def));
    }
  }

  static const std::vector<std::string> fillers = {"someone", "something", "somebody", "anything",
                                                   "everyone"};
  for (std::size_t i = 0; i < options.traps; ++i) {
    const auto& sw = fillers[i % fillers.size()];
    std::string def;
    switch (i % 3) {
      case 0:
        def = fmt::format("another way of saying {} is really {}", sw, rng.pick(kAdjectives));
        break;
      case 1:
        def = fmt::format("another word for {} you should not {}", sw, rng.pick(kVerbs));
        break;
      default:
        def = fmt::format("the incorrect spelling of {} {}", sw, rng.pick(kAdjectives));
        break;
    }
    rows.emplace_back(names.acronym(), std::move(def));
  }

  for (std::size_t i = 0; rows.size() < options.entries; ++i) {
    rows.emplace_back(names.word(), noise_definition(i, rng));
  }

  rng.shuffle(rows);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.corpus.entries.push_back(
        make_entry(fmt::format("syn-{:04}", i + 1), std::move(rows[i].first), rows[i].second));
  }
  return out;
}

SelfTrainCorpus make_selftrain_corpus(const SelfTrainCorpusOptions& options) {
  const auto& all = planted_pairs();
  Rng rng(options.seed);
  NameMaker names(rng);
  SelfTrainCorpus out;

  auto labeled = [](DictEntry e, const std::string& formal) {
    crf::LabeledEntry le;
    le.labels.assign(e.definition.size(), crf::Tag::O);
    for (std::size_t t = 0; t < e.definition.size(); ++t) {
      if (e.definition[t].lower == formal) le.labels[t] = crf::Tag::I;
    }
    le.entry = std::move(e);
    return le;
  };

  std::vector<crf::LabeledEntry> gold;
  for (std::size_t i = 0; i < options.gold_positive; ++i) {
    const auto& [informal, formal] = all[i % all.size()];
    gold.push_back(labeled(make_entry(fmt::format("gold-{:04}", gold.size() + 1), informal,
                                      way_of_saying(formal, rng, true)),
                           formal));
  }
  for (std::size_t i = 0; i < options.gold_negative; ++i) {
    gold.push_back(labeled(make_entry(fmt::format("gold-{:04}", gold.size() + 1), names.word(),
                                      noise_definition(i, rng)),
                           ""));
  }
  rng.shuffle(gold);
  out.gold = std::move(gold);

  std::vector<std::pair<Template, DictEntry>> pool;
  for (std::size_t i = 0; i < options.unlabeled_per_template; ++i) {
    const auto& a = all[(i + options.gold_positive) % all.size()];
    pool.emplace_back(Template::way_of_saying, make_entry("", a.first, way_of_saying(a.second, rng, true)));
    out.truth.insert(a);
    const auto& b = all[(i + 7) % all.size()];
    pool.emplace_back(Template::word_for, make_entry("", b.first, word_for(b.second, rng, true)));
    out.truth.insert(b);
  }
  for (std::size_t i = 0; i < options.unlabeled_noise; ++i) {
    pool.emplace_back(Template::noise, make_entry("", names.word(), noise_definition(i, rng)));
  }
  rng.shuffle(pool);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    pool[i].second.entry_id = fmt::format("unl-{:04}", i + 1);
    out.unlabeled_template.push_back(pool[i].first);
    out.unlabeled.entries.push_back(std::move(pool[i].second));
  }
  return out;
}

EmbeddingFixture make_embedding_fixture(std::size_t words, std::size_t planted, std::size_t dim,
                                        std::uint64_t seed) {
  const auto& all = planted_pairs();
  if (planted > all.size()) {
    throw ConfigError(fmt::format("at most {} planted pairs are available", all.size()));
  }
  if (2 * planted > words) throw ConfigError("table too small for the planted pairs");
  if (dim == 0) throw ConfigError("dimension must be positive");

  Rng rng(seed);
  auto gaussian_row = [&]() {
    std::string row;
    for (std::size_t d = 0; d < dim; ++d) {
      // Box-Muller; 1 - u keeps the log argument positive.
      const double u1 = 1.0 - rng.uniform();
      const double u2 = rng.uniform();
      const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
      row += fmt::format(" {:.6f}", z);
    }
    return row;
  };

  EmbeddingFixture out;
  std::vector<std::string> lines;
  for (std::size_t i = 0; i < planted; ++i) {
    const auto& [informal, formal] = all[i];
    const std::string vec = gaussian_row();
    lines.push_back(informal + vec);
    lines.push_back(formal + vec);
    VariantPair p;
    p.informal = informal;
    p.formal = formal;
    p.score = 1.0;
    out.pairs.push_back(std::move(p));
    out.formal_vocab.insert(formal);
  }
  for (std::size_t i = 2 * planted; i < words; ++i) {
    const std::string w = fmt::format("word{:03}", i);
    lines.push_back(w + gaussian_row());
    out.formal_vocab.insert(w);
  }
  rng.shuffle(lines);
  out.text = fmt::format("{} {}\n", lines.size(), dim);
  for (const auto& l : lines) out.text += l + "\n";
  out.table = evalsim::parse_embeddings(out.text);
  return out;
}

std::string format_jsonl(const Corpus& corpus) {
  std::string out;
  for (const auto& e : corpus.entries) {
    nlohmann::ordered_json rec;
    rec["id"] = e.entry_id;
    rec["word"] = e.headword;
    rec["definition"] = e.raw_definition;
    if (e.example) rec["example"] = *e.example;
    if (e.author) rec["author"] = *e.author;
    if (e.upvotes) rec["upvotes"] = *e.upvotes;
    if (e.downvotes) rec["downvotes"] = *e.downvotes;
    out += rec.dump();
    out += '\n';
  }
  return out;
}

}  // namespace spellvar::synthetic
