#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "debateforge/corpus.hpp"

namespace debateforge {

// Every constant of the rule scheme in one record so tests and config files
// can override them coherently.
struct SentimentRules {
  double negation_scale = 0.74;  // sign flip dampening applied once per hit
  int negation_window = 3;       // tokens looked back for a negator
  int booster_window = 2;        // tokens looked back for boosters
  double exclaim_bonus = 0.292;  // added once with the sum's sign for a trailing '!'
  double alpha = 15.0;           // normalization: s / sqrt(s^2 + alpha)

  // Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

// Token -> valence lexicon with booster and negator sections. Immutable after
// load; scoring is pure, so speeches can be scored in parallel.
class SentimentLexicon {
 public:
  // TSV: `token<TAB>valence` per line; `#boosters` starts a
  // `token<TAB>increment` section; `#negators` starts a token-per-line
  // section. Other `#` lines are comments. Throws CorpusIoError on malformed
  // lines or non-finite valences.
  static SentimentLexicon load(const std::filesystem::path& file);
  static SentimentLexicon parse(const std::string& text, const std::string& origin = "<memory>");
  // Small built-in lexicon; real runs should pass --lexicon.
  static const SentimentLexicon& packaged();

  void set_valence(const std::string& token, double valence);
  void set_booster(const std::string& token, double increment);
  void add_negator(const std::string& token);

  std::optional<double> valence(const std::string& token) const;
  std::optional<double> booster(const std::string& token) const;
  bool is_negator(const std::string& token) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, double> entries_;
  std::unordered_map<std::string, double> boosters_;
  std::unordered_set<std::string> negators_;
};

// Lowercased runs of letters keeping inner apostrophes, so contractions like
// "don't" survive as negator tokens.
std::vector<std::string> sentiment_tokens(const std::string& sentence);

// Rule-based score in (-1, 1): sum lexicon valences; a negator within
// rules.negation_window preceding tokens flips the valence's sign and scales
// it by rules.negation_scale (applied once per valence); each booster within
// rules.booster_window preceding tokens adds its increment with the current
// valence's sign; a trailing '!' adds rules.exclaim_bonus with the sum's sign
// once; the total s is normalized to s / sqrt(s^2 + rules.alpha). Sentences
// with no lexicon hits score exactly 0.
double score_sentence(const std::string& sentence, const SentimentLexicon& lexicon,
                      const SentimentRules& rules = {});

// Splits the speech with split_sentences, scores each sentence, and returns
// the sign of the sum: > 0 Positive, < 0 Negative, == 0 Neutral (exact
// comparison on the accumulated value). Empty text is Neutral.
Polarity classify_speech(const std::string& speech_text, const SentimentLexicon& lexicon,
                         const SentimentRules& rules = {});

struct PolarityReport {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t neutral = 0;
  std::size_t total = 0;  // all speeches, scored or not

  bool operator==(const PolarityReport&) const = default;
};

// Counts existing polarity fields; call apply_sentiment (or classify each
// speech) first so positive + negative + neutral == total.
PolarityReport polarity_report(const Corpus& corpus);

// Sets the polarity of every speech in place.
void apply_sentiment(Corpus& corpus, const SentimentLexicon& lexicon,
                     const SentimentRules& rules = {});

}  // namespace debateforge
