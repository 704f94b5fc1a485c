#pragma once

// Hand-written lexico-syntactic surface rules matched as regular expressions
// against raw definition text.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <boost/regex.hpp>

#include "spellvar/corpus.hpp"
#include "spellvar/pairs.hpp"
#include "spellvar/parallel.hpp"

namespace spellvar::baseline {

inline constexpr std::string_view kTargetGroup = "Spelling";

struct SurfaceRule {
  std::string rule_id;
  std::string pattern_source;  // as written, Python named-group syntax allowed
  std::string description;
  boost::regex compiled;       // case-insensitive, '^' anchors at text start only
};

// Validates and compiles one rule. Throws DataError naming the rule when the
// pattern does not compile or does not have exactly one named group, called
// "Spelling".
SurfaceRule compile_rule(std::string rule_id, std::string pattern_source,
                         std::string description = {});

// Rewrites Python-only regex syntax ("(?P<name>", "(?P=name)") into the Perl
// forms Boost understands.
std::string translate_python_syntax(std::string_view pattern);

// Names of all named capture groups in the pattern, in order of appearance.
std::vector<std::string> named_groups(std::string_view pattern);

// "rule_id TAB pattern [TAB description]" per line; blank and '#' lines skipped.
std::vector<SurfaceRule> parse_rules(std::string_view text);
std::vector<SurfaceRule> load_rules(const std::filesystem::path& path);

// The ten shipped rules.
const std::vector<SurfaceRule>& default_rules();

// Every match of every rule becomes (headword, captured text). Output order is
// entry order, then rule order, then match position; identity pairs are
// dropped and duplicates keep their first occurrence.
std::vector<VariantPair> extract_baseline(const Corpus& corpus,
                                          const std::vector<SurfaceRule>& rules,
                                          Execution exec = Execution::parallel);

}  // namespace spellvar::baseline
