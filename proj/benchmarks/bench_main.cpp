// Microbenchmarks for the hot paths: sentence ranking, sentiment scoring,
// and classifier featurization/training. Inputs are synthesized
// deterministically so numbers are comparable across runs and machines.
#include <benchmark/benchmark.h>

#include <cstdint>
#include <string>
#include <vector>

#include "debateforge/classify.hpp"
#include "debateforge/rng.hpp"
#include "debateforge/sentiment.hpp"
#include "debateforge/textrank.hpp"

namespace {

using namespace debateforge;

const std::vector<std::string>& word_pool() {
  static const std::vector<std::string> kPool = {
      "government", "minister",  "railway",  "scheme",   "village",   "water",
      "education",  "farmers",   "industry", "policy",   "district",  "hospital",
      "road",       "budget",    "relief",   "pension",  "taxation",  "amendment",
      "committee",  "assembly",  "welfare",  "drought",  "irrigation", "employment",
      "good",       "bad",       "great",    "terrible", "urgent",    "immediate"};
  return kPool;
}

// `n_sentences` sentences of 8..15 pool words each, first word capitalized.
std::string synth_text(std::size_t n_sentences, std::uint64_t seed) {
  SplitRng rng(seed);
  const auto& pool = word_pool();
  std::string text;
  for (std::size_t s = 0; s < n_sentences; ++s) {
    const std::size_t words = 8 + rng.below(8);
    for (std::size_t w = 0; w < words; ++w) {
      std::string word = pool[rng.below(pool.size())];
      if (w == 0) word[0] = static_cast<char>(word[0] - 'a' + 'A');
      text += word;
      text.push_back(w + 1 == words ? '.' : ' ');
    }
    if (s + 1 < n_sentences) text.push_back(' ');
  }
  return text;
}

std::vector<LabeledDoc> synth_docs(std::size_t n, std::uint64_t seed) {
  SplitRng rng(seed);
  const auto& pool = word_pool();
  std::vector<LabeledDoc> docs;
  docs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    LabeledDoc doc;
    doc.label = (i % 2 == 0) ? "for" : "against";
    // One label-specific trigger plus noise keeps the task learnable.
    doc.text = doc.label == "for" ? "support passage" : "oppose rejection";
    const std::size_t words = 10 + rng.below(20);
    for (std::size_t w = 0; w < words; ++w) {
      doc.text.push_back(' ');
      doc.text += pool[rng.below(pool.size())];
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

void BM_SplitSentences(benchmark::State& state) {
  const std::string text = synth_text(static_cast<std::size_t>(state.range(0)), 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(split_sentences(text));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SplitSentences)->Arg(16)->Arg(128);

void BM_RankNodes(benchmark::State& state) {
  // Ring plus long chords: connected, irregular weights.
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  RankedGraph base;
  base.node_count = n;
  for (std::size_t i = 0; i < n; ++i) {
    base.add_edge(i, (i + 1) % n, 1.0 + static_cast<double>(i % 7));
    if (i + 5 < n) base.add_edge(i, i + 5, 0.5);
  }
  const RankConfig cfg;
  for (auto _ : state) {
    RankedGraph graph = base;
    rank_nodes(graph, cfg);
    benchmark::DoNotOptimize(graph.scores.data());
  }
}
BENCHMARK(BM_RankNodes)->Arg(64)->Arg(512);

void BM_Summarize(benchmark::State& state) {
  const std::string text = synth_text(static_cast<std::size_t>(state.range(0)), 23);
  const RankConfig cfg;
  const StopwordList& stop = StopwordList::packaged();
  for (auto _ : state) {
    benchmark::DoNotOptimize(summarize(text, cfg, stop));
  }
}
BENCHMARK(BM_Summarize)->Arg(16)->Arg(64);

void BM_ExtractKeywords(benchmark::State& state) {
  const std::string text = synth_text(static_cast<std::size_t>(state.range(0)), 31);
  const RankConfig cfg;
  const StopwordList& stop = StopwordList::packaged();
  for (auto _ : state) {
    benchmark::DoNotOptimize(extract_keywords(text, cfg, stop));
  }
}
BENCHMARK(BM_ExtractKeywords)->Arg(16)->Arg(64);

void BM_ScoreSentence(benchmark::State& state) {
  const SentimentLexicon& lexicon = SentimentLexicon::packaged();
  const std::string sentence =
      "The honourable Minister has not taken any good decision on this very "
      "important matter and the delay is terrible!";
  for (auto _ : state) {
    benchmark::DoNotOptimize(score_sentence(sentence, lexicon));
  }
}
BENCHMARK(BM_ScoreSentence);

void BM_ClassifySpeech(benchmark::State& state) {
  const SentimentLexicon& lexicon = SentimentLexicon::packaged();
  const std::string speech = synth_text(static_cast<std::size_t>(state.range(0)), 47);
  for (auto _ : state) {
    benchmark::DoNotOptimize(classify_speech(speech, lexicon));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ClassifySpeech)->Arg(8)->Arg(32);

void BM_Featurize(benchmark::State& state) {
  TrainConfig cfg;
  cfg.word_ngram = 2;
  const std::vector<LabeledDoc> docs = synth_docs(64, 5);
  const Vocabulary vocab = Vocabulary::build(docs);
  const std::string text = synth_text(4, 17);
  for (auto _ : state) {
    benchmark::DoNotOptimize(featurize(text, cfg, vocab));
  }
}
BENCHMARK(BM_Featurize);

void BM_Train(benchmark::State& state) {
  TrainConfig cfg;
  cfg.dim = 32;
  cfg.epochs = static_cast<int>(state.range(0));
  cfg.word_ngram = 2;
  cfg.bucket_count = 1 << 12;
  const std::vector<LabeledDoc> docs = synth_docs(200, 9);
  for (auto _ : state) {
    benchmark::DoNotOptimize(train(docs, cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 200);
}
BENCHMARK(BM_Train)->Arg(1)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
