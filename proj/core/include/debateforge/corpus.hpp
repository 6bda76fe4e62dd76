#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace debateforge {

enum class Polarity { Positive, Negative, Neutral, Unset };
enum class Stance { For, Against };
enum class Category { Issue, Blame, Appreciate, CallForAction };

std::string to_string(Polarity p);
std::string to_string(Stance s);
std::string to_string(Category c);
Polarity polarity_from_string(const std::string& s);
Stance stance_from_string(const std::string& s);
Category category_from_string(const std::string& s);

// Human-facing name ("CallForAction" -> "Call for Action").
std::string display_name(Category c);

constexpr Category kAllCategories[] = {Category::Issue, Category::Blame, Category::Appreciate,
                                       Category::CallForAction};

struct SpeechTurn {
  int order_index = 0;
  std::string member_id;
  std::string text;
  Polarity polarity = Polarity::Unset;
  std::optional<Stance> stance;
  std::set<Category> categories;

  bool operator==(const SpeechTurn&) const = default;
};

struct Debate {
  std::string id;
  std::string topic;
  std::vector<std::string> keywords;
  std::string summary;
  std::vector<SpeechTurn> speeches;

  bool operator==(const Debate&) const = default;
};

struct Session {
  std::string id;
  std::string english_date;
  std::string indian_date;
  std::string house_name;
  std::string secretary_general;
  // (debate_type_id, debate_id) pairs in document order. A pair list rather
  // than a map so the original proceeding order survives serialization.
  std::vector<std::pair<std::string, std::string>> debates;

  bool operator==(const Session&) const = default;
};

struct Member {
  std::string id;
  std::string name;
  std::string house;
  std::string party;

  bool operator==(const Member&) const = default;
};

struct Bill {
  std::string id;
  std::string name;

  bool operator==(const Bill&) const = default;
};

struct DebateType {
  std::string id;
  std::string name;

  bool operator==(const DebateType&) const = default;
};

// The five collections, cross-referenced by id.
struct Corpus {
  std::vector<Session> sessions;
  std::vector<Member> members;
  std::vector<Bill> bills;
  std::vector<DebateType> debate_types;
  std::vector<Debate> debates;

  bool operator==(const Corpus&) const = default;
};

struct Violation {
  std::string path;     // e.g. "debates[d000002].speeches[3].member_id"
  std::string message;

  bool operator==(const Violation&) const = default;
};

struct CorpusStats {
  std::size_t session_count = 0;
  std::size_t debate_count = 0;
  std::size_t speech_count = 0;
  std::size_t word_count = 0;
  std::map<std::string, std::size_t> debate_type_histogram;
  std::map<std::string, std::size_t> polarity_histogram;
  std::map<std::string, std::size_t> annotation_histogram;

  bool operator==(const CorpusStats&) const = default;
};

class CorpusIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Returns every referential-integrity and invariant violation; empty means
// valid. Violations are data, not failures.
std::vector<Violation> validate_corpus(const Corpus& corpus);

// One JSON Lines file per collection (sessions.jsonl, members.jsonl,
// debates.jsonl, bills.jsonl, debate_types.jsonl), canonical key order,
// one record per line. load(save(c)) == c.
void save_corpus(const Corpus& corpus, const std::filesystem::path& dir);
Corpus load_corpus(const std::filesystem::path& dir);

CorpusStats corpus_stats(const Corpus& corpus);

}  // namespace debateforge
