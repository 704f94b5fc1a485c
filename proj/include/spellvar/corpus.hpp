#pragma once

// Dictionary entries, tokenization and linguistic annotation.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace spellvar {

// Placeholder for linguistic fields no annotator has filled (CoNLL-U style).
inline constexpr std::string_view kSentinel = "_";

struct Token {
  std::string surface;
  std::string lower;
  std::string lemma{kSentinel};
  std::string upos{kSentinel};
  std::string xpos{kSentinel};
  std::string dep{kSentinel};
  std::size_t head = 0;  // index into the owning definition; self for roots
  bool is_title = false;
  bool is_digit = false;
};

// Builds a token with the surface-derived fields filled and sentinels
// elsewhere. `index` is the token's own position (its default head).
Token make_token(std::string surface, std::size_t index);

struct DictEntry {
  std::string entry_id;
  std::string headword;
  std::string raw_definition;
  std::vector<Token> definition;
  std::optional<std::string> example;
  std::optional<std::string> author;
  std::optional<std::uint64_t> upvotes;
  std::optional<std::uint64_t> downvotes;
};

struct Corpus {
  std::vector<DictEntry> entries;
  bool annotated = false;

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
};

// ASCII case folding; bytes >= 0x80 pass through unchanged.
std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);

// Python str.istitle / str.isdigit semantics restricted to ASCII.
bool is_title_case(std::string_view s);
bool is_all_digits(std::string_view s);

// Whitespace split, then leading and trailing punctuation (quotes included)
// peeled off one character per token. Interior punctuation, e.g. the
// apostrophe in "don't", stays inside the word.
std::vector<Token> tokenize(std::string_view text);

// One JSON object per line with required "word" and "definition" strings and
// optional "example", "author", "upvotes", "downvotes", "id". Entries without
// an "id" get "L<line>". Blank lines are skipped.
Corpus load_jsonl(const std::filesystem::path& path);
Corpus parse_jsonl(std::string_view text);

// Checks that every token carries non-sentinel upos and lemma.
bool is_fully_annotated(const Corpus& corpus);

class Annotator {
 public:
  virtual ~Annotator() = default;
  // Returns annotated tokens for `entry`, the `index`-th entry of its corpus.
  // Must keep the token count and every surface.
  virtual std::vector<Token> annotate(const DictEntry& entry, std::size_t index) const = 0;
};

// Standalone annotator: lemma = lowercased surface, POS from a closed-class
// lexicon and suffix rules, dep left as sentinel, head = self.
class FallbackAnnotator final : public Annotator {
 public:
  std::vector<Token> annotate(const DictEntry& entry, std::size_t index) const override;

  struct Tags {
    std::string upos;
    std::string xpos;
  };
  static Tags tag_word(std::string_view surface);
};

// One CoNLL-U token block per non-empty definition, in corpus order.
struct ConlluRow {
  std::string surface;
  std::string lemma;
  std::string upos;
  std::string xpos;
  std::string dep;
  std::size_t head = 0;  // CoNLL-U convention: 1-based, 0 = root
};
using ConlluBlock = std::vector<ConlluRow>;

std::vector<ConlluBlock> parse_conllu(std::string_view text);
std::vector<ConlluBlock> load_conllu_blocks(const std::filesystem::path& path);

// Merges pre-computed parses by position. Entries with an empty definition
// consume no block.
class ConlluAnnotator final : public Annotator {
 public:
  ConlluAnnotator(std::vector<ConlluBlock> blocks, const Corpus& corpus);
  std::vector<Token> annotate(const DictEntry& entry, std::size_t index) const override;

 private:
  std::vector<ConlluBlock> blocks_;
  std::vector<std::size_t> block_of_entry_;
};

// Returns an annotated copy. A corpus that is already annotated is returned
// unchanged. Provider failures are rethrown as DataError naming the entry.
Corpus annotate(const Corpus& corpus, const Annotator& provider);

Corpus load_conllu(const std::filesystem::path& corpus_path,
                   const std::filesystem::path& annotations_path);

// Writes the corpus annotations as 10-column CoNLL-U blocks.
std::string to_conllu(const Corpus& corpus);

// One lowercase word per line; '#' starts a comment line.
std::set<std::string> load_stopwords(const std::filesystem::path& path);
std::set<std::string> parse_word_list(std::string_view text);

std::string read_file(const std::filesystem::path& path);

}  // namespace spellvar
