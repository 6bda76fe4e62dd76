#include "synthetic.hpp"

#include <algorithm>
#include <string>

#include "debateforge/ingest.hpp"
#include "debateforge/rng.hpp"

namespace debateforge::testing {

namespace {

// Pure-alphabetic vocabulary words so the classifier tokenizer keeps each
// trigger intact: prefix + two letters, e.g. "xforaa".
std::vector<std::string> make_vocab(const std::string& prefix, std::size_t size) {
  std::vector<std::string> words;
  words.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    words.push_back(prefix + static_cast<char>('a' + i / 26) + static_cast<char>('a' + i % 26));
  }
  return words;
}

// The first `count` indices of a seeded shuffle of [0, total).
std::vector<bool> pick_members(std::size_t total, std::size_t count, SplitRng& rng) {
  std::vector<std::size_t> indices(total);
  for (std::size_t i = 0; i < total; ++i) indices[i] = i;
  rng.shuffle(indices);
  std::vector<bool> member(total, false);
  for (std::size_t i = 0; i < count && i < total; ++i) member[indices[i]] = true;
  return member;
}

void append_tokens(std::vector<std::string>& doc, const std::vector<std::string>& vocab,
                   std::size_t count, SplitRng& rng) {
  for (std::size_t i = 0; i < count; ++i) {
    doc.push_back(vocab[rng.below(vocab.size())]);
  }
}

}  // namespace

std::vector<DatasetDoc> make_synthetic_docs(const SyntheticSpec& spec) {
  const std::vector<std::string> for_vocab = make_vocab("xfor", 20);
  const std::vector<std::string> against_vocab = make_vocab("xagn", 20);
  const std::vector<std::string> issue_vocab = make_vocab("xiss", 20);
  const std::vector<std::string> blame_vocab = make_vocab("xblm", 20);
  const std::vector<std::string> appreciate_vocab = make_vocab("xapp", 20);
  const std::vector<std::string> action_vocab = make_vocab("xcfa", 20);
  const std::vector<std::string> filler_vocab = make_vocab("zcom", 30);

  SplitRng rng(spec.seed);
  const std::vector<bool> has_issue = pick_members(spec.total_docs, spec.issue_count, rng);
  const std::vector<bool> has_blame = pick_members(spec.total_docs, spec.blame_count, rng);
  const std::vector<bool> has_appreciate =
      pick_members(spec.total_docs, spec.appreciate_count, rng);
  const std::vector<bool> has_action =
      pick_members(spec.total_docs, spec.call_for_action_count, rng);

  std::vector<DatasetDoc> docs;
  docs.reserve(spec.total_docs);
  for (std::size_t i = 0; i < spec.total_docs; ++i) {
    DatasetDoc doc;
    doc.stance = i < spec.for_count ? Stance::For : Stance::Against;

    std::vector<std::string> tokens;
    append_tokens(tokens, *doc.stance == Stance::For ? for_vocab : against_vocab, 8, rng);
    if (has_issue[i]) {
      doc.categories.insert(Category::Issue);
      append_tokens(tokens, issue_vocab, 6, rng);
    }
    if (has_blame[i]) {
      doc.categories.insert(Category::Blame);
      append_tokens(tokens, blame_vocab, 6, rng);
    }
    if (has_appreciate[i]) {
      doc.categories.insert(Category::Appreciate);
      append_tokens(tokens, appreciate_vocab, 6, rng);
    }
    if (has_action[i]) {
      doc.categories.insert(Category::CallForAction);
      append_tokens(tokens, action_vocab, 6, rng);
    }
    append_tokens(tokens, filler_vocab, 10, rng);
    rng.shuffle(tokens);

    for (std::size_t t = 0; t < tokens.size(); ++t) {
      if (t > 0) doc.text.push_back(' ');
      doc.text += tokens[t];
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

Corpus make_synthetic_corpus(const SyntheticSpec& spec) {
  const std::vector<DatasetDoc> docs = make_synthetic_docs(spec);

  Corpus corpus;
  corpus.debate_types.push_back({make_record_id("dt", 1), "Discussion"});

  constexpr std::size_t kMemberCount = 25;
  for (std::size_t m = 1; m <= kMemberCount; ++m) {
    corpus.members.push_back(
        {make_record_id("m", m), "SYNTHETIC MEMBER " + std::to_string(m), "Lok Sabha", ""});
  }

  Debate debate;
  debate.id = make_record_id("d", 1);
  debate.topic = "Synthetic classification corpus";
  for (std::size_t i = 0; i < docs.size(); ++i) {
    SpeechTurn turn;
    turn.order_index = static_cast<int>(i + 1);
    turn.member_id = make_record_id("m", i % kMemberCount + 1);
    turn.text = docs[i].text;
    turn.stance = docs[i].stance;
    turn.categories = docs[i].categories;
    debate.speeches.push_back(std::move(turn));
  }
  corpus.debates.push_back(std::move(debate));

  Session session;
  session.id = make_record_id("s", 1);
  session.english_date = "Monday, January 5, 2026";
  session.house_name = "Lok Sabha";
  session.debates.emplace_back(corpus.debate_types[0].id, corpus.debates[0].id);
  corpus.sessions.push_back(std::move(session));
  return corpus;
}

}  // namespace debateforge::testing
