#include "debateforge/sentiment.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "debateforge/default_data.hpp"
#include "debateforge/text_util.hpp"
#include "debateforge/textrank.hpp"

namespace debateforge {

namespace {

double sign_of(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

}  // namespace

void SentimentRules::validate() const {
  if (!(negation_scale > 0) || !std::isfinite(negation_scale))
    throw std::invalid_argument("sentiment: negation_scale must be positive and finite");
  if (negation_window < 0) throw std::invalid_argument("sentiment: negation_window must be >= 0");
  if (booster_window < 0) throw std::invalid_argument("sentiment: booster_window must be >= 0");
  if (!std::isfinite(exclaim_bonus) || exclaim_bonus < 0)
    throw std::invalid_argument("sentiment: exclaim_bonus must be >= 0 and finite");
  if (!(alpha > 0) || !std::isfinite(alpha))
    throw std::invalid_argument("sentiment: alpha must be positive and finite");
}

SentimentLexicon SentimentLexicon::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw CorpusIoError("cannot open lexicon file: " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), file.string());
}

SentimentLexicon SentimentLexicon::parse(const std::string& text, const std::string& origin) {
  enum class Section { Entries, Boosters, Negators };
  SentimentLexicon lex;
  Section section = Section::Entries;
  std::size_t line_no = 0;
  for (const std::string& raw : split_lines(text)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string marker = to_lower(line);
      if (marker == "#boosters") {
        section = Section::Boosters;
      } else if (marker == "#negators") {
        section = Section::Negators;
      }
      continue;  // any other '#' line is a comment
    }
    auto fail = [&](const std::string& why) {
      throw CorpusIoError(origin + ":" + std::to_string(line_no) + ": " + why);
    };
    if (section == Section::Negators) {
      lex.add_negator(to_lower(line));
      continue;
    }
    auto tab = line.find('\t');
    if (tab == std::string::npos) fail("expected token<TAB>value");
    std::string token = to_lower(trim(line.substr(0, tab)));
    std::string value_text = trim(line.substr(tab + 1));
    if (token.empty()) fail("empty token");
    double value = 0;
    try {
      std::size_t used = 0;
      value = std::stod(value_text, &used);
      if (used != value_text.size()) fail("trailing characters after value");
    } catch (const std::logic_error&) {
      fail("cannot parse value '" + value_text + "'");
    }
    if (!std::isfinite(value)) fail("value must be finite");
    if (section == Section::Entries) {
      lex.set_valence(token, value);
    } else {
      lex.set_booster(token, value);
    }
  }
  return lex;
}

const SentimentLexicon& SentimentLexicon::packaged() {
  static const SentimentLexicon kPackaged =
      parse(std::string(data::kDefaultLexicon), "<packaged lexicon>");
  return kPackaged;
}

void SentimentLexicon::set_valence(const std::string& token, double valence) {
  entries_[to_lower(token)] = valence;
}

void SentimentLexicon::set_booster(const std::string& token, double increment) {
  boosters_[to_lower(token)] = increment;
}

void SentimentLexicon::add_negator(const std::string& token) { negators_.insert(to_lower(token)); }

std::optional<double> SentimentLexicon::valence(const std::string& token) const {
  auto it = entries_.find(token);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::optional<double> SentimentLexicon::booster(const std::string& token) const {
  auto it = boosters_.find(token);
  if (it == boosters_.end()) return std::nullopt;
  return it->second;
}

bool SentimentLexicon::is_negator(const std::string& token) const {
  return negators_.count(token) != 0;
}

std::vector<std::string> sentiment_tokens(const std::string& sentence) {
  std::vector<std::string> tokens;
  std::string current;
  auto is_word_char = [](unsigned char c) {
    return std::isalpha(c) != 0 || c >= 0x80 || c == '\'';
  };
  for (unsigned char c : sentence) {
    if (is_word_char(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  // Strip apostrophes used as quotes rather than contractions.
  for (std::string& t : tokens) {
    std::size_t begin = t.find_first_not_of('\'');
    std::size_t end = t.find_last_not_of('\'');
    t = begin == std::string::npos ? std::string() : t.substr(begin, end - begin + 1);
  }
  std::erase_if(tokens, [](const std::string& t) { return t.empty(); });
  return tokens;
}

double score_sentence(const std::string& sentence, const SentimentLexicon& lexicon,
                      const SentimentRules& rules) {
  rules.validate();
  const std::vector<std::string> tokens = sentiment_tokens(sentence);
  double sum = 0.0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto valence = lexicon.valence(tokens[i]);
    if (!valence) continue;
    double v = *valence;
    const std::size_t neg_begin =
        i >= static_cast<std::size_t>(rules.negation_window) ? i - rules.negation_window : 0;
    for (std::size_t j = neg_begin; j < i; ++j) {
      if (lexicon.is_negator(tokens[j])) {
        v = -v * rules.negation_scale;
        break;  // one flip even when several negators precede
      }
    }
    const std::size_t boost_begin =
        i >= static_cast<std::size_t>(rules.booster_window) ? i - rules.booster_window : 0;
    for (std::size_t j = boost_begin; j < i; ++j) {
      if (auto inc = lexicon.booster(tokens[j])) v += sign_of(v) * *inc;
    }
    sum += v;
  }
  const std::string trimmed = trim(sentence);
  if (!trimmed.empty() && trimmed.back() == '!') sum += sign_of(sum) * rules.exclaim_bonus;
  if (sum == 0.0) return 0.0;
  return sum / std::sqrt(sum * sum + rules.alpha);
}

Polarity classify_speech(const std::string& speech_text, const SentimentLexicon& lexicon,
                         const SentimentRules& rules) {
  double sum = 0.0;
  for (const std::string& sentence : split_sentences(speech_text)) {
    sum += score_sentence(sentence, lexicon, rules);
  }
  if (sum > 0) return Polarity::Positive;
  if (sum < 0) return Polarity::Negative;
  return Polarity::Neutral;
}

PolarityReport polarity_report(const Corpus& corpus) {
  PolarityReport report;
  for (const Debate& debate : corpus.debates) {
    for (const SpeechTurn& speech : debate.speeches) {
      ++report.total;
      switch (speech.polarity) {
        case Polarity::Positive: ++report.positive; break;
        case Polarity::Negative: ++report.negative; break;
        case Polarity::Neutral: ++report.neutral; break;
        case Polarity::Unset: break;
      }
    }
  }
  return report;
}

void apply_sentiment(Corpus& corpus, const SentimentLexicon& lexicon, const SentimentRules& rules) {
  for (Debate& debate : corpus.debates) {
    for (SpeechTurn& speech : debate.speeches) {
      speech.polarity = classify_speech(speech.text, lexicon, rules);
    }
  }
}

}  // namespace debateforge
