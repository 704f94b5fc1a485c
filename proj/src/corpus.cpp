#include "spellvar/corpus.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>
#include <json.hpp>

#include "spellvar/errors.hpp"

namespace spellvar {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_punct(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u < 0x80 && std::ispunct(u);
}

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    auto line = text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = nl + 1;
  }
  return lines;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      cols.push_back(line.substr(start));
      return cols;
    }
    cols.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::optional<std::string> optional_string(const nlohmann::json& rec, const char* key,
                                           std::size_t line_no) {
  const auto it = rec.find(key);
  if (it == rec.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw DataError(fmt::format("line {}: field \"{}\" must be a string", line_no, key));
  }
  return it->get<std::string>();
}

std::optional<std::uint64_t> optional_count(const nlohmann::json& rec, const char* key,
                                            std::size_t line_no) {
  const auto it = rec.find(key);
  if (it == rec.end() || it->is_null()) return std::nullopt;
  const bool ok = it->is_number_unsigned() || (it->is_number_integer() && it->get<long long>() >= 0);
  if (!ok) {
    throw DataError(
        fmt::format("line {}: field \"{}\" must be a non-negative integer", line_no, key));
  }
  return it->get<std::uint64_t>();
}

// Closed-class lexicon for the fallback tagger: word -> (upos, xpos).
const std::unordered_map<std::string_view, FallbackAnnotator::Tags>& closed_class() {
  static const std::unordered_map<std::string_view, FallbackAnnotator::Tags> table = {
      {"the", {"DET", "DT"}},       {"a", {"DET", "DT"}},          {"an", {"DET", "DT"}},
      {"this", {"DET", "DT"}},      {"that", {"DET", "DT"}},       {"these", {"DET", "DT"}},
      {"those", {"DET", "DT"}},     {"another", {"DET", "DT"}},    {"some", {"DET", "DT"}},
      {"any", {"DET", "DT"}},       {"every", {"DET", "DT"}},      {"each", {"DET", "DT"}},
      {"i", {"PRON", "PRP"}},       {"you", {"PRON", "PRP"}},      {"he", {"PRON", "PRP"}},
      {"she", {"PRON", "PRP"}},     {"it", {"PRON", "PRP"}},       {"we", {"PRON", "PRP"}},
      {"they", {"PRON", "PRP"}},    {"me", {"PRON", "PRP"}},       {"him", {"PRON", "PRP"}},
      {"us", {"PRON", "PRP"}},      {"them", {"PRON", "PRP"}},     {"my", {"PRON", "PRP$"}},
      {"your", {"PRON", "PRP$"}},   {"his", {"PRON", "PRP$"}},     {"her", {"PRON", "PRP$"}},
      {"its", {"PRON", "PRP$"}},    {"our", {"PRON", "PRP$"}},     {"their", {"PRON", "PRP$"}},
      {"someone", {"PRON", "NN"}},  {"something", {"PRON", "NN"}}, {"anyone", {"PRON", "NN"}},
      {"everyone", {"PRON", "NN"}}, {"of", {"ADP", "IN"}},         {"for", {"ADP", "IN"}},
      {"in", {"ADP", "IN"}},        {"on", {"ADP", "IN"}},         {"at", {"ADP", "IN"}},
      {"by", {"ADP", "IN"}},        {"with", {"ADP", "IN"}},       {"from", {"ADP", "IN"}},
      {"about", {"ADP", "IN"}},     {"into", {"ADP", "IN"}},       {"like", {"ADP", "IN"}},
      {"to", {"PART", "TO"}},       {"and", {"CCONJ", "CC"}},      {"or", {"CCONJ", "CC"}},
      {"but", {"CCONJ", "CC"}},     {"is", {"AUX", "VBZ"}},        {"are", {"AUX", "VBP"}},
      {"was", {"AUX", "VBD"}},      {"were", {"AUX", "VBD"}},      {"be", {"AUX", "VB"}},
      {"been", {"AUX", "VBN"}},     {"am", {"AUX", "VBP"}},        {"do", {"AUX", "VBP"}},
      {"does", {"AUX", "VBZ"}},     {"did", {"AUX", "VBD"}},       {"has", {"AUX", "VBZ"}},
      {"have", {"AUX", "VBP"}},     {"had", {"AUX", "VBD"}},       {"can", {"AUX", "MD"}},
      {"will", {"AUX", "MD"}},      {"would", {"AUX", "MD"}},      {"not", {"PART", "RB"}},
      {"very", {"ADV", "RB"}},      {"really", {"ADV", "RB"}},     {"just", {"ADV", "RB"}},
      {"so", {"ADV", "RB"}},        {"too", {"ADV", "RB"}},        {"also", {"ADV", "RB"}},
      {"if", {"SCONJ", "IN"}},      {"because", {"SCONJ", "IN"}},  {"yes", {"INTJ", "UH"}},
      {"oh", {"INTJ", "UH"}},       {"lol", {"INTJ", "UH"}},       {"say", {"VERB", "VB"}},
  };
  return table;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (is_upper(c)) c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool is_title_case(std::string_view s) {
  bool cased = false;
  bool prev_cased = false;
  for (char c : s) {
    if (is_upper(c)) {
      if (prev_cased) return false;
      prev_cased = cased = true;
    } else if (is_lower(c)) {
      if (!prev_cased) return false;
      prev_cased = cased = true;
    } else {
      prev_cased = false;
    }
  }
  return cased;
}

bool is_all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

Token make_token(std::string surface, std::size_t index) {
  Token t;
  t.lower = to_lower(surface);
  t.is_title = is_title_case(surface);
  t.is_digit = is_all_digits(surface);
  t.surface = std::move(surface);
  t.head = index;
  return t;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  auto emit = [&](std::string_view piece) {
    tokens.push_back(make_token(std::string(piece), tokens.size()));
  };

  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && is_space(text[pos])) ++pos;
    const std::size_t start = pos;
    while (pos < text.size() && !is_space(text[pos])) ++pos;
    if (start == pos) break;
    const std::string_view chunk = text.substr(start, pos - start);

    std::size_t lo = 0;
    while (lo < chunk.size() && is_punct(chunk[lo])) emit(chunk.substr(lo++, 1));
    std::size_t hi = chunk.size();
    while (hi > lo && is_punct(chunk[hi - 1])) --hi;
    if (lo < hi) emit(chunk.substr(lo, hi - lo));
    for (std::size_t i = hi; i < chunk.size(); ++i) emit(chunk.substr(i, 1));
  }
  return tokens;
}

Corpus parse_jsonl(std::string_view text) {
  Corpus corpus;
  std::unordered_set<std::string> ids;
  std::size_t line_no = 0;
  for (const auto raw_line : split_lines(text)) {
    ++line_no;
    const auto line = trim(raw_line);
    if (line.empty()) continue;

    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError(fmt::format("line {}: malformed record: {}", line_no, e.what()));
    }
    if (!rec.is_object()) {
      throw DataError(fmt::format("line {}: malformed record: expected a JSON object", line_no));
    }
    for (const char* key : {"word", "definition"}) {
      if (!rec.contains(key)) {
        throw DataError(fmt::format("line {}: missing required field \"{}\"", line_no, key));
      }
    }

    DictEntry entry;
    const auto word = optional_string(rec, "word", line_no);
    const auto definition = optional_string(rec, "definition", line_no);
    if (!word || !definition) {
      throw DataError(
          fmt::format("line {}: required fields \"word\" and \"definition\" must be strings",
                      line_no));
    }
    entry.headword = std::string(trim(*word));
    if (entry.headword.empty()) {
      throw DataError(fmt::format("line {}: field \"word\" is empty", line_no));
    }
    entry.raw_definition = *definition;
    entry.definition = tokenize(entry.raw_definition);
    entry.example = optional_string(rec, "example", line_no);
    entry.author = optional_string(rec, "author", line_no);
    entry.upvotes = optional_count(rec, "upvotes", line_no);
    entry.downvotes = optional_count(rec, "downvotes", line_no);

    if (const auto it = rec.find("id"); it != rec.end() && !it->is_null()) {
      if (it->is_string()) {
        entry.entry_id = it->get<std::string>();
      } else if (it->is_number_integer()) {
        entry.entry_id = it->dump();
      } else {
        throw DataError(fmt::format("line {}: field \"id\" must be a string or integer", line_no));
      }
    } else {
      entry.entry_id = fmt::format("L{}", line_no);
    }
    if (!ids.insert(entry.entry_id).second) {
      throw DataError(fmt::format("line {}: duplicate entry_id \"{}\"", line_no, entry.entry_id));
    }
    corpus.entries.push_back(std::move(entry));
  }
  return corpus;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Corpus load_jsonl(const std::filesystem::path& path) {
  try {
    return parse_jsonl(read_file(path));
  } catch (const DataError& e) {
    throw DataError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

bool is_fully_annotated(const Corpus& corpus) {
  for (const auto& e : corpus.entries) {
    for (const auto& t : e.definition) {
      if (t.upos == kSentinel || t.lemma == kSentinel) return false;
    }
  }
  return true;
}

FallbackAnnotator::Tags FallbackAnnotator::tag_word(std::string_view surface) {
  bool all_punct = !surface.empty();
  for (char c : surface) all_punct = all_punct && is_punct(c);
  if (all_punct) {
    if (surface == "." || surface == "!" || surface == "?") return {"PUNCT", "."};
    if (surface == ",") return {"PUNCT", ","};
    if (surface == ":" || surface == ";") return {"PUNCT", ":"};
    if (surface == "\"" || surface == "'") return {"PUNCT", "''"};
    if (surface == "(" || surface == "[") return {"PUNCT", "-LRB-"};
    if (surface == ")" || surface == "]") return {"PUNCT", "-RRB-"};
    return {"PUNCT", "NFP"};
  }
  if (is_all_digits(surface)) return {"NUM", "CD"};

  const std::string lower = to_lower(surface);
  const auto& lexicon = closed_class();
  if (const auto it = lexicon.find(lower); it != lexicon.end()) return it->second;

  if (lower.size() > 4 && ends_with(lower, "ing")) return {"VERB", "VBG"};
  if (lower.size() > 3 && ends_with(lower, "ed")) return {"VERB", "VBD"};
  if (lower.size() > 3 && ends_with(lower, "ly")) return {"ADV", "RB"};
  if (ends_with(lower, "tion") || ends_with(lower, "ness") || ends_with(lower, "ment")) {
    return {"NOUN", "NN"};
  }
  if (lower.size() > 3 && ends_with(lower, "s") && !ends_with(lower, "ss")) {
    return {"NOUN", "NNS"};
  }
  if (is_title_case(surface)) return {"PROPN", "NNP"};
  return {"NOUN", "NN"};
}

std::vector<Token> FallbackAnnotator::annotate(const DictEntry& entry, std::size_t) const {
  std::vector<Token> tokens = entry.definition;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto& t = tokens[i];
    auto tags = tag_word(t.surface);
    t.lemma = t.lower;
    t.upos = std::move(tags.upos);
    t.xpos = std::move(tags.xpos);
    t.dep = std::string(kSentinel);
    t.head = i;
  }
  return tokens;
}

std::vector<ConlluBlock> parse_conllu(std::string_view text) {
  std::vector<ConlluBlock> blocks;
  ConlluBlock current;
  std::size_t line_no = 0;
  for (const auto line : split_lines(text)) {
    ++line_no;
    if (trim(line).empty()) {
      if (!current.empty()) blocks.push_back(std::move(current));
      current.clear();
      continue;
    }
    if (line.front() == '#') continue;
    const auto cols = split_tabs(line);
    if (cols.size() != 10) {
      throw DataError(fmt::format("annotation line {}: expected 10 tab-separated columns, got {}",
                                  line_no, cols.size()));
    }
    // Multiword ranges ("1-2") and empty nodes ("1.1") carry no surface token.
    if (cols[0].find_first_of("-.") != std::string_view::npos) continue;

    ConlluRow row;
    row.surface = std::string(cols[1]);
    row.lemma = std::string(cols[2]);
    row.upos = std::string(cols[3]);
    row.xpos = std::string(cols[4]);
    row.dep = std::string(cols[7]);
    const auto head_col = cols[6];
    const auto [ptr, ec] = std::from_chars(head_col.data(), head_col.data() + head_col.size(), row.head);
    if (ec != std::errc{} || ptr != head_col.data() + head_col.size()) {
      throw DataError(fmt::format("annotation line {}: head \"{}\" is not a non-negative integer",
                                  line_no, head_col));
    }
    current.push_back(std::move(row));
  }
  if (!current.empty()) blocks.push_back(std::move(current));
  return blocks;
}

std::vector<ConlluBlock> load_conllu_blocks(const std::filesystem::path& path) {
  try {
    return parse_conllu(read_file(path));
  } catch (const DataError& e) {
    throw DataError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

ConlluAnnotator::ConlluAnnotator(std::vector<ConlluBlock> blocks, const Corpus& corpus)
    : blocks_(std::move(blocks)), block_of_entry_(corpus.size(), SIZE_MAX) {
  std::size_t next = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& entry = corpus.entries[i];
    if (entry.definition.empty()) continue;
    if (next >= blocks_.size()) {
      throw DataError(fmt::format("entry {}: no annotation block (file has {} blocks)",
                                  entry.entry_id, blocks_.size()));
    }
    block_of_entry_[i] = next++;
  }
  if (next != blocks_.size()) {
    throw DataError(fmt::format("annotation file has {} blocks but corpus has {} non-empty definitions",
                                blocks_.size(), next));
  }
}

std::vector<Token> ConlluAnnotator::annotate(const DictEntry& entry, std::size_t index) const {
  std::vector<Token> tokens = entry.definition;
  if (tokens.empty()) return tokens;
  const auto& block = blocks_.at(block_of_entry_.at(index));
  if (block.size() != tokens.size()) {
    throw DataError(fmt::format("token count mismatch: annotation block has {} rows, definition has {} tokens",
                                block.size(), tokens.size()));
  }
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& row = block[i];
    auto& t = tokens[i];
    if (row.surface != t.surface) {
      throw DataError(fmt::format("surface mismatch at position {}: annotation \"{}\" vs token \"{}\"",
                                  i, row.surface, t.surface));
    }
    if (row.head > tokens.size()) {
      throw DataError(fmt::format("head index {} out of range at position {} ({} tokens)", row.head,
                                  i, tokens.size()));
    }
    t.lemma = row.lemma;
    t.upos = row.upos;
    t.xpos = row.xpos;
    t.dep = row.dep;
    t.head = row.head == 0 ? i : row.head - 1;
  }
  return tokens;
}

Corpus annotate(const Corpus& corpus, const Annotator& provider) {
  if (corpus.annotated) return corpus;
  Corpus out = corpus;
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto& entry = out.entries[i];
    std::vector<Token> tokens;
    try {
      tokens = provider.annotate(entry, i);
    } catch (const std::exception& e) {
      throw DataError(fmt::format("entry {}: {}", entry.entry_id, e.what()));
    }
    if (tokens.size() != entry.definition.size()) {
      throw DataError(fmt::format("entry {}: annotator changed the token count", entry.entry_id));
    }
    for (std::size_t k = 0; k < tokens.size(); ++k) {
      if (tokens[k].surface != entry.definition[k].surface) {
        throw DataError(
            fmt::format("entry {}: annotator changed the surface at position {}", entry.entry_id, k));
      }
    }
    entry.definition = std::move(tokens);
  }
  out.annotated = true;
  return out;
}

Corpus load_conllu(const std::filesystem::path& corpus_path,
                   const std::filesystem::path& annotations_path) {
  const Corpus corpus = load_jsonl(corpus_path);
  const ConlluAnnotator provider(load_conllu_blocks(annotations_path), corpus);
  return annotate(corpus, provider);
}

std::string to_conllu(const Corpus& corpus) {
  std::string out;
  for (const auto& entry : corpus.entries) {
    if (entry.definition.empty()) continue;
    out += fmt::format("# entry_id = {}\n", entry.entry_id);
    for (std::size_t i = 0; i < entry.definition.size(); ++i) {
      const auto& t = entry.definition[i];
      const std::size_t head = t.head == i ? 0 : t.head + 1;
      out += fmt::format("{}\t{}\t{}\t{}\t{}\t_\t{}\t{}\t_\t_\n", i + 1, t.surface, t.lemma, t.upos,
                         t.xpos, head, t.dep);
    }
    out += '\n';
  }
  return out;
}

std::set<std::string> parse_word_list(std::string_view text) {
  std::set<std::string> words;
  for (const auto line : split_lines(text)) {
    const auto word = trim(line);
    if (word.empty() || word.front() == '#') continue;
    words.insert(to_lower(word));
  }
  return words;
}

std::set<std::string> load_stopwords(const std::filesystem::path& path) {
  return parse_word_list(read_file(path));
}

}  // namespace spellvar
