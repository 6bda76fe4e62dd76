#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"

#include "debateforge/corpus.hpp"
#include "debateforge/sentiment.hpp"
#include "temp_dir.hpp"

using namespace debateforge;
using debateforge::testing::TempDir;
using debateforge::testing::write_file;

namespace {

// Normalization computed from first principles, independent of the scorer.
double normalized(double sum, double alpha = 15.0) {
  return sum / std::sqrt(sum * sum + alpha);
}

SentimentLexicon tiny_lexicon() {
  SentimentLexicon lexicon;
  lexicon.set_valence("good", 1.9);
  lexicon.set_valence("terrible", -2.1);
  lexicon.set_valence("awful", -1.9);
  lexicon.set_valence("support", 1.2);
  lexicon.set_booster("very", 0.293);
  lexicon.set_booster("extremely", 0.293);
  lexicon.add_negator("not");
  lexicon.add_negator("never");
  return lexicon;
}

}  // namespace

TEST_CASE("rules validation") {
  SentimentRules rules;
  CHECK_NOTHROW(rules.validate());
  rules.alpha = 0.0;
  CHECK_THROWS_AS(rules.validate(), std::invalid_argument);
}

TEST_CASE("tokenization keeps contractions and lowercases") {
  const auto tokens = sentiment_tokens("Don't call it Good-Bad! It's fine.");
  CHECK(tokens == std::vector<std::string>{"don't", "call", "it", "good", "bad", "it's", "fine"});
}

TEST_CASE("single positive hit normalizes as s/sqrt(s^2+15)") {
  // Hand-frozen: 1.9 / sqrt(1.9^2 + 15) = 1.9 / sqrt(18.61) = 0.4404337.
  const double score = score_sentence("The scheme is good.", tiny_lexicon());
  CHECK(score == doctest::Approx(0.4404).epsilon(1e-4));
  CHECK(score == doctest::Approx(normalized(1.9)).epsilon(1e-12));
}

TEST_CASE("negation flips and dampens: not good") {
  // Hand-frozen: -0.74 * 1.9 = -1.406; -1.406 / sqrt(16.976836) = -0.3412376.
  const double score = score_sentence("The scheme is not good.", tiny_lexicon());
  CHECK(score == doctest::Approx(-0.3412).epsilon(1e-4));
  CHECK(score == doctest::Approx(normalized(-0.74 * 1.9)).epsilon(1e-12));
}

TEST_CASE("negation window is three tokens") {
  const SentimentLexicon lexicon = tiny_lexicon();
  // "not" three tokens before "good": flips.
  CHECK(score_sentence("not at all good", lexicon) ==
        doctest::Approx(normalized(-0.74 * 1.9)).epsilon(1e-12));
  // Four tokens back: out of window, stays positive.
  CHECK(score_sentence("not a b c good", lexicon) ==
        doctest::Approx(normalized(1.9)).epsilon(1e-12));
}

TEST_CASE("negation applies once per valence") {
  const SentimentLexicon lexicon = tiny_lexicon();
  // Two negators before one valence token still flip only once.
  CHECK(score_sentence("never not good", lexicon) ==
        doctest::Approx(normalized(-0.74 * 1.9)).epsilon(1e-12));
}

TEST_CASE("boosters add their increment with the valence's sign") {
  const SentimentLexicon lexicon = tiny_lexicon();
  CHECK(score_sentence("very good", lexicon) ==
        doctest::Approx(normalized(1.9 + 0.293)).epsilon(1e-12));
  // Negative valence: booster pushes further negative.
  CHECK(score_sentence("very terrible", lexicon) ==
        doctest::Approx(normalized(-2.1 - 0.293)).epsilon(1e-12));
  // Booster after negation: sign follows the flipped valence.
  CHECK(score_sentence("not very good", lexicon) ==
        doctest::Approx(normalized(-0.74 * 1.9 - 0.293)).epsilon(1e-12));
  // Two boosters within the window both add.
  CHECK(score_sentence("extremely very good", lexicon) ==
        doctest::Approx(normalized(1.9 + 2 * 0.293)).epsilon(1e-12));
}

TEST_CASE("booster window is two tokens") {
  const SentimentLexicon lexicon = tiny_lexicon();
  CHECK(score_sentence("very much good", lexicon) ==
        doctest::Approx(normalized(1.9 + 0.293)).epsilon(1e-12));
  CHECK(score_sentence("very much so good", lexicon) ==
        doctest::Approx(normalized(1.9)).epsilon(1e-12));
}

TEST_CASE("trailing exclamation adds 0.292 with the sum's sign, once") {
  const SentimentLexicon lexicon = tiny_lexicon();
  CHECK(score_sentence("good!", lexicon) ==
        doctest::Approx(normalized(1.9 + 0.292)).epsilon(1e-12));
  CHECK(score_sentence("good!!", lexicon) ==
        doctest::Approx(normalized(1.9 + 0.292)).epsilon(1e-12));
  CHECK(score_sentence("terrible!", lexicon) ==
        doctest::Approx(normalized(-2.1 - 0.292)).epsilon(1e-12));
  // No lexicon hits: the bonus has no sign to take; score stays exactly 0.
  CHECK(score_sentence("nothing matched here!", lexicon) == 0.0);
}

TEST_CASE("no-hit and empty sentences score exactly zero") {
  const SentimentLexicon lexicon = tiny_lexicon();
  CHECK(score_sentence("completely unrelated words", lexicon) == 0.0);
  CHECK(score_sentence("", lexicon) == 0.0);
}

TEST_CASE("score is within (-1, 1)") {
  SentimentLexicon lexicon = tiny_lexicon();
  lexicon.set_valence("stellar", 4.0);
  const double score =
      score_sentence("stellar stellar stellar stellar stellar stellar!", lexicon);
  CHECK(score < 1.0);
  CHECK(score > 0.9);
}

TEST_CASE("classify_speech takes the sign of the sentence-score sum") {
  const SentimentLexicon lexicon = tiny_lexicon();
  CHECK(classify_speech("The scheme is good. The plan is good.", lexicon) == Polarity::Positive);
  CHECK(classify_speech("It is terrible. It is not good.", lexicon) == Polarity::Negative);
  CHECK(classify_speech("Nothing scored here at all.", lexicon) == Polarity::Neutral);
  CHECK(classify_speech("", lexicon) == Polarity::Neutral);
  // Valences +1.9 and -1.9 normalize to exact opposites; the sum is exactly
  // zero, which classifies as Neutral rather than either sign.
  CHECK(classify_speech("It is good. It is awful.", lexicon) == Polarity::Neutral);
}

TEST_CASE("lexicon TSV parsing: sections, comments, errors") {
  SUBCASE("well-formed file") {
    const SentimentLexicon lexicon = SentimentLexicon::parse(
        "# comment\n"
        "good\t1.9\n"
        "terrible\t-2.1\n"
        "#boosters\n"
        "very\t0.293\n"
        "#negators\n"
        "not\n",
        "inline");
    CHECK(lexicon.valence("good") == doctest::Approx(1.9));
    CHECK(lexicon.valence("missing") == std::nullopt);
    CHECK(lexicon.booster("very") == doctest::Approx(0.293));
    CHECK(lexicon.is_negator("not"));
    CHECK_FALSE(lexicon.is_negator("very"));
  }
  SUBCASE("malformed valence names file and line") {
    try {
      SentimentLexicon::parse("good\t1.9\nbad\tnotanumber\n", "lex.tsv");
      FAIL("expected CorpusIoError");
    } catch (const CorpusIoError& e) {
      const std::string what = e.what();
      CHECK(what.find("lex.tsv:2") != std::string::npos);
    }
  }
  SUBCASE("valence line without a tab is an error") {
    CHECK_THROWS_AS(SentimentLexicon::parse("good 1.9\n", "x"), CorpusIoError);
  }
  SUBCASE("load from disk") {
    TempDir tmp("lexicon");
    write_file(tmp.file("lex.tsv"), "good\t1.9\n#negators\nnot\n");
    const SentimentLexicon lexicon = SentimentLexicon::load(tmp.file("lex.tsv"));
    CHECK(lexicon.valence("good") == doctest::Approx(1.9));
    CHECK(lexicon.is_negator("not"));
  }
}

TEST_CASE("packaged lexicon is usable") {
  const SentimentLexicon& lexicon = SentimentLexicon::packaged();
  CHECK(lexicon.size() > 100);
  REQUIRE(lexicon.valence("good").has_value());
  CHECK(*lexicon.valence("good") > 0);
  REQUIRE(lexicon.valence("bad").has_value());
  CHECK(*lexicon.valence("bad") < 0);
  CHECK(lexicon.is_negator("not"));
  CHECK(lexicon.booster("very").has_value());
}

TEST_CASE("apply_sentiment fills polarity for every speech") {
  Corpus corpus;
  corpus.members.push_back({"m000001", "SOME MEMBER", "", ""});
  Debate debate;
  debate.id = "d000001";
  SpeechTurn a;
  a.order_index = 1;
  a.member_id = "m000001";
  a.text = "The scheme is good.";
  SpeechTurn b;
  b.order_index = 2;
  b.member_id = "m000001";
  b.text = "It is terrible.";
  SpeechTurn c;
  c.order_index = 3;
  c.member_id = "m000001";
  c.text = "Unscored words only.";
  debate.speeches = {a, b, c};
  corpus.debates.push_back(debate);

  const PolarityReport before = polarity_report(corpus);
  CHECK(before.total == 3);
  CHECK(before.positive + before.negative + before.neutral == 0);  // all Unset

  apply_sentiment(corpus, tiny_lexicon());
  const PolarityReport after = polarity_report(corpus);
  CHECK(after.positive == 1);
  CHECK(after.negative == 1);
  CHECK(after.neutral == 1);
  CHECK(after.total == 3);
  CHECK(after.positive + after.negative + after.neutral == after.total);
}
