#include "spellvar/baseline.hpp"

#include <set>
#include <utility>

#include <fmt/format.h>

#include "spellvar/errors.hpp"

namespace spellvar::baseline {

namespace {

bool is_name_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

constexpr auto kRuleFlags = boost::regex::perl | boost::regex::icase | boost::regex::no_mod_m;

}  // namespace

std::vector<std::string> named_groups(std::string_view p) {
  std::vector<std::string> names;
  bool in_class = false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const char c = p[i];
    if (c == '\\') {
      ++i;
      continue;
    }
    if (in_class) {
      if (c == ']') in_class = false;
      continue;
    }
    if (c == '[') {
      in_class = true;
      // A ']' right after '[' or '[^' is a literal member.
      if (i + 1 < p.size() && p[i + 1] == '^') ++i;
      if (i + 1 < p.size() && p[i + 1] == ']') ++i;
      continue;
    }
    if (c != '(' || i + 2 >= p.size() || p[i + 1] != '?') continue;
    std::size_t j = i + 2;
    char close = '>';
    if (p[j] == 'P' && j + 1 < p.size() && p[j + 1] == '<') {
      j += 2;
    } else if (p[j] == '<' && j + 1 < p.size() && is_name_char(p[j + 1])) {
      j += 1;
    } else if (p[j] == '\'') {
      j += 1;
      close = '\'';
    } else {
      continue;
    }
    std::size_t k = j;
    while (k < p.size() && is_name_char(p[k])) ++k;
    if (k < p.size() && p[k] == close && k > j) names.emplace_back(p.substr(j, k - j));
  }
  return names;
}

std::string translate_python_syntax(std::string_view p) {
  std::string out;
  out.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == '\\' && i + 1 < p.size()) {
      out += p.substr(i, 2);
      ++i;
      continue;
    }
    if (p.substr(i, 4) == "(?P<") {
      out += "(?<";
      i += 3;
      continue;
    }
    if (p.substr(i, 4) == "(?P=") {
      const auto close = p.find(')', i);
      if (close != std::string_view::npos) {
        out += fmt::format("\\k<{}>", p.substr(i + 4, close - i - 4));
        i = close;
        continue;
      }
    }
    out += p[i];
  }
  return out;
}

SurfaceRule compile_rule(std::string rule_id, std::string pattern_source, std::string description) {
  const auto groups = named_groups(pattern_source);
  if (groups.size() != 1 || groups.front() != kTargetGroup) {
    throw DataError(fmt::format("rule {}: pattern must contain exactly one named group \"{}\"",
                                rule_id, kTargetGroup));
  }
  SurfaceRule rule;
  try {
    rule.compiled = boost::regex(translate_python_syntax(pattern_source), kRuleFlags);
  } catch (const boost::regex_error& e) {
    throw DataError(fmt::format("rule {}: pattern does not compile: {}", rule_id, e.what()));
  }
  rule.rule_id = std::move(rule_id);
  rule.pattern_source = std::move(pattern_source);
  rule.description = std::move(description);
  return rule;
}

std::vector<SurfaceRule> parse_rules(std::string_view text) {
  std::vector<SurfaceRule> rules;
  std::set<std::string> ids;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(start, nl - start);
    start = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || line.front() == '#') continue;

    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw DataError(fmt::format("rules line {}: expected rule_id TAB pattern", line_no));
    }
    std::string id(trim(line.substr(0, tab)));
    auto rest = line.substr(tab + 1);
    std::string description;
    if (const auto tab2 = rest.find('\t'); tab2 != std::string_view::npos) {
      description = std::string(rest.substr(tab2 + 1));
      rest = rest.substr(0, tab2);
    }
    if (id.empty()) throw DataError(fmt::format("rules line {}: empty rule_id", line_no));
    if (!ids.insert(id).second) {
      throw DataError(fmt::format("rules line {}: duplicate rule_id {}", line_no, id));
    }
    rules.push_back(compile_rule(std::move(id), std::string(rest), std::move(description)));
  }
  return rules;
}

std::vector<SurfaceRule> load_rules(const std::filesystem::path& path) {
  try {
    return parse_rules(read_file(path));
  } catch (const DataError& e) {
    throw DataError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

const std::vector<SurfaceRule>& default_rules() {
  static const std::vector<SurfaceRule> rules = [] {
    std::vector<SurfaceRule> r;
    r.push_back(compile_rule("spelling-dq",
                             R"(spelling[^\.,]{0,3}?( of| for| to|:| the word| include|)[^\.,]{0,5}?\"(?P<Spelling>\w+)\")",
                             "(kewl, cool), (crao, crap)"));
    r.push_back(compile_rule("spelling-sq",
                             R"(spelling[^\.,]{0,3}?( of| for| to|:| the word| include|)[^\.,]{0,5}?'(?P<Spelling>\w+)')",
                             "(dentisit, dentist), (yuo, you)"));
    r.push_back(compile_rule("meaning-dq", R"(^meaning \"(?P<Spelling>[\w']+)\")",
                             "(bewtuh, better), (nair, no)"));
    r.push_back(compile_rule("meaning-sq", R"(^meaning '(?P<Spelling>\w+)')",
                             "(oned, owned), (fidoosh, finished)"));
    r.push_back(compile_rule("way-of-saying-dq", R"(way of saying \"(?P<Spelling>[\w']+)\")",
                             "(Ogay, Okay), (gorl, girl)"));
    r.push_back(compile_rule("way-of-saying-sq", R"(way of saying '(?P<Spelling>\w+)')",
                             "(heauge, huge), (Ochea, OK)"));
    r.push_back(compile_rule("form-of-dq", R"(form of [^\.,]{0,3}?\"(?P<Spelling>[\w']+)\")",
                             "(oof, oops), (F8, faight)"));
    r.push_back(compile_rule("form-of-sq", R"(form of '(?P<Spelling>\w+)')",
                             "(bab, baby), (gr8, great)"));
    r.push_back(compile_rule("short-for-dq", R"(^short for \"(?P<Spelling>[\w']+)\")",
                             "(fend, defend), (fied, satisfied)"));
    r.push_back(compile_rule("short-for-sq", R"(^short for '(?P<Spelling>\w+)')",
                             "(inet, internet), (hols, holidays)"));
    return r;
  }();
  return rules;
}

std::vector<VariantPair> extract_baseline(const Corpus& corpus,
                                          const std::vector<SurfaceRule>& rules, Execution exec) {
  std::vector<std::vector<VariantPair>> per_entry(corpus.size());
  for_each_index(corpus.size(), exec, [&](std::size_t i) {
    const auto& entry = corpus.entries[i];
    const std::string& text = entry.raw_definition;
    for (const auto& rule : rules) {
      boost::sregex_iterator it(text.begin(), text.end(), rule.compiled,
                                boost::match_default | boost::match_not_dot_newline);
      for (; it != boost::sregex_iterator(); ++it) {
        const auto& group = (*it)[std::string(kTargetGroup)];
        if (!group.matched || group.length() == 0) continue;
        VariantPair p;
        p.informal = entry.headword;
        p.formal = group.str();
        p.score = 1.0;
        p.method = Method::baseline;
        p.source_entry = entry.entry_id;
        p.rule_id = rule.rule_id;
        per_entry[i].push_back(std::move(p));
      }
    }
  });

  std::vector<VariantPair> out;
  std::set<std::pair<std::string, std::string>> seen;
  for (auto& bucket : per_entry) {
    for (auto& p : bucket) {
      if (is_identity_pair(p.informal, p.formal)) continue;
      if (!seen.emplace(p.informal, p.formal).second) continue;
      out.push_back(std::move(p));
    }
  }
  return out;
}

}  // namespace spellvar::baseline
