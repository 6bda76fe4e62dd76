#include "debateforge/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "debateforge/corpus.hpp"
#include "debateforge/text_util.hpp"

namespace debateforge {

IniFile IniFile::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw CorpusIoError("cannot open config file: " + file.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), file.string());
}

IniFile IniFile::parse(const std::string& text, const std::string& origin) {
  IniFile ini;
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto fail = [&](const std::string& why) {
      throw CorpusIoError(origin + ":" + std::to_string(line_no) + ": " + why);
    };
    std::string trimmed = trim(line);
    if (trimmed.empty() || trimmed[0] == '#' || trimmed[0] == ';') continue;
    if (trimmed.front() == '[') {
      if (trimmed.back() != ']') fail("section header missing closing ']'");
      section = trim(trimmed.substr(1, trimmed.size() - 2));
      if (section.empty()) fail("empty section name");
      ini.sections_[section];
      continue;
    }
    const std::size_t eq = trimmed.find('=');
    if (eq == std::string::npos) fail("expected 'key = value' or '[section]'");
    const std::string key = trim(trimmed.substr(0, eq));
    const std::string value = trim(trimmed.substr(eq + 1));
    if (key.empty()) fail("empty key");
    if (section.empty()) fail("assignment before any [section]");
    ini.sections_[section][key] = value;
  }
  return ini;
}

std::optional<std::string> IniFile::get(const std::string& section,
                                        const std::string& key) const {
  auto sec = sections_.find(section);
  if (sec == sections_.end()) return std::nullopt;
  auto it = sec->second.find(key);
  if (it == sec->second.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> IniFile::keys(const std::string& section) const {
  std::vector<std::string> result;
  auto sec = sections_.find(section);
  if (sec == sections_.end()) return result;
  for (const auto& [key, value] : sec->second) result.push_back(key);
  return result;
}

namespace {

[[noreturn]] void bad_value(const std::string& section, const std::string& key,
                            const std::string& value, const std::string& expected) {
  throw std::invalid_argument("config " + section + "." + key + ": '" + value + "' is not " +
                              expected);
}

double parse_double(const std::string& section, const std::string& key,
                    const std::string& value) {
  char* end = nullptr;
  const double parsed = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0') bad_value(section, key, value, "a number");
  return parsed;
}

long long parse_int(const std::string& section, const std::string& key,
                    const std::string& value) {
  char* end = nullptr;
  const long long parsed = std::strtoll(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0') bad_value(section, key, value, "an integer");
  return parsed;
}

std::uint64_t parse_u64(const std::string& section, const std::string& key,
                        const std::string& value) {
  if (!value.empty() && value[0] == '-') {
    bad_value(section, key, value, "a non-negative integer");
  }
  char* end = nullptr;
  const unsigned long long parsed = std::strtoull(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0') {
    bad_value(section, key, value, "a non-negative integer");
  }
  return parsed;
}

bool parse_bool(const std::string& section, const std::string& key, const std::string& value) {
  const std::string lower = to_lower(value);
  if (lower == "true" || lower == "1" || lower == "yes" || lower == "on") return true;
  if (lower == "false" || lower == "0" || lower == "no" || lower == "off") return false;
  bad_value(section, key, value, "a boolean (true/false)");
}

// Dispatches every key present in `section` through `handler(key, value)`.
// A key outside `known` is a typo the user should hear about, not silently
// keep defaults for.
template <typename Handler>
void apply_section(const IniFile& config, const std::string& section,
                   const std::set<std::string>& known, Handler&& handler) {
  for (const std::string& key : config.keys(section)) {
    if (!known.count(key)) {
      throw std::invalid_argument("config " + section + "." + key + ": unknown key");
    }
    handler(key, *config.get(section, key));
  }
}

}  // namespace

void apply_textrank(const IniFile& config, RankConfig& out) {
  static const std::set<std::string> known = {"damping",       "epsilon",
                                              "max_iterations", "summary_ratio",
                                              "keyword_ratio",  "cooccurrence_window"};
  apply_section(config, "textrank", known, [&](const std::string& key, const std::string& v) {
    if (key == "damping") out.damping = parse_double("textrank", key, v);
    else if (key == "epsilon") out.epsilon = parse_double("textrank", key, v);
    else if (key == "max_iterations")
      out.max_iterations = static_cast<int>(parse_int("textrank", key, v));
    else if (key == "summary_ratio") out.summary_ratio = parse_double("textrank", key, v);
    else if (key == "keyword_ratio") out.keyword_ratio = parse_double("textrank", key, v);
    else if (key == "cooccurrence_window")
      out.cooccurrence_window = static_cast<int>(parse_int("textrank", key, v));
  });
  out.validate();
}

void apply_sentiment(const IniFile& config, SentimentRules& out) {
  static const std::set<std::string> known = {"negation_scale", "negation_window",
                                              "booster_window", "exclaim_bonus", "alpha"};
  apply_section(config, "sentiment", known, [&](const std::string& key, const std::string& v) {
    if (key == "negation_scale") out.negation_scale = parse_double("sentiment", key, v);
    else if (key == "negation_window")
      out.negation_window = static_cast<int>(parse_int("sentiment", key, v));
    else if (key == "booster_window")
      out.booster_window = static_cast<int>(parse_int("sentiment", key, v));
    else if (key == "exclaim_bonus") out.exclaim_bonus = parse_double("sentiment", key, v);
    else if (key == "alpha") out.alpha = parse_double("sentiment", key, v);
  });
  out.validate();
}

void apply_classify(const IniFile& config, TrainConfig& out) {
  static const std::set<std::string> known = {
      "learning_rate", "dim",          "word_ngram",      "epochs",
      "loss",          "bucket_count", "min_token_count", "seed",
      "char_ngrams",   "char_ngram_min", "char_ngram_max"};
  apply_section(config, "classify", known, [&](const std::string& key, const std::string& v) {
    if (key == "learning_rate") out.learning_rate = parse_double("classify", key, v);
    else if (key == "dim") out.dim = static_cast<int>(parse_int("classify", key, v));
    else if (key == "word_ngram")
      out.word_ngram = static_cast<int>(parse_int("classify", key, v));
    else if (key == "epochs") out.epochs = static_cast<int>(parse_int("classify", key, v));
    else if (key == "loss") {
      try {
        out.loss = loss_from_string(v);
      } catch (const std::invalid_argument&) {
        bad_value("classify", key, v, "a loss name (softmax|hs)");
      }
    } else if (key == "bucket_count") out.bucket_count = parse_u64("classify", key, v);
    else if (key == "min_token_count")
      out.min_token_count = static_cast<int>(parse_int("classify", key, v));
    else if (key == "seed") out.seed = parse_u64("classify", key, v);
    else if (key == "char_ngrams") out.char_ngrams = parse_bool("classify", key, v);
    else if (key == "char_ngram_min")
      out.char_ngram_min = static_cast<int>(parse_int("classify", key, v));
    else if (key == "char_ngram_max")
      out.char_ngram_max = static_cast<int>(parse_int("classify", key, v));
  });
  out.validate();
}

}  // namespace debateforge
