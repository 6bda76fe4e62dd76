// INI-style configuration files.
//
// Syntax: `[section]` headers, `key = value` assignments, `#` or `;` line
// comments, blank lines ignored, surrounding whitespace trimmed.  Values keep
// internal whitespace.  Later assignments to the same key win.
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "debateforge/classify.hpp"
#include "debateforge/sentiment.hpp"
#include "debateforge/textrank.hpp"

namespace debateforge {

class IniFile {
 public:
  // Throws CorpusIoError with "file:line: why" on syntax errors.
  static IniFile load(const std::filesystem::path& file);
  static IniFile parse(const std::string& text, const std::string& origin = "<config>");

  std::optional<std::string> get(const std::string& section, const std::string& key) const;
  // Keys of one section in sorted order; empty when the section is absent.
  std::vector<std::string> keys(const std::string& section) const;
  bool empty() const { return sections_.empty(); }

 private:
  // section -> key -> value; both levels keep the last assignment.
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

// Each applier overwrites only the keys present in its section and throws
// std::invalid_argument naming "section.key" on unparseable or out-of-range
// values.  Unknown keys in a known section are also an error: a typo silently
// ignored is worse than a hard stop.
//
// [textrank]   damping, epsilon, max_iterations, summary_ratio, keyword_ratio,
//              cooccurrence_window
// [sentiment]  negation_scale, negation_window, booster_window, exclaim_bonus, alpha
// [classify]   learning_rate, dim, word_ngram, epochs, loss, bucket_count,
//              min_token_count, seed, char_ngrams, char_ngram_min, char_ngram_max
void apply_textrank(const IniFile& config, RankConfig& out);
void apply_sentiment(const IniFile& config, SentimentRules& out);
void apply_classify(const IniFile& config, TrainConfig& out);

}  // namespace debateforge
