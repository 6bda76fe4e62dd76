#include "debateforge/corpus.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "debateforge/text_util.hpp"
#include "json.hpp"

namespace debateforge {

using nlohmann::json;

std::string to_string(Polarity p) {
  switch (p) {
    case Polarity::Positive: return "Positive";
    case Polarity::Negative: return "Negative";
    case Polarity::Neutral: return "Neutral";
    case Polarity::Unset: return "Unset";
  }
  return "Unset";
}

std::string to_string(Stance s) { return s == Stance::For ? "For" : "Against"; }

std::string to_string(Category c) {
  switch (c) {
    case Category::Issue: return "Issue";
    case Category::Blame: return "Blame";
    case Category::Appreciate: return "Appreciate";
    case Category::CallForAction: return "CallForAction";
  }
  return "Issue";
}

std::string display_name(Category c) {
  return c == Category::CallForAction ? "Call for Action" : to_string(c);
}

Polarity polarity_from_string(const std::string& s) {
  if (s == "Positive") return Polarity::Positive;
  if (s == "Negative") return Polarity::Negative;
  if (s == "Neutral") return Polarity::Neutral;
  if (s == "Unset") return Polarity::Unset;
  throw CorpusIoError("unknown polarity value: \"" + s + "\"");
}

Stance stance_from_string(const std::string& s) {
  if (s == "For") return Stance::For;
  if (s == "Against") return Stance::Against;
  throw CorpusIoError("unknown stance value: \"" + s + "\"");
}

Category category_from_string(const std::string& s) {
  if (s == "Issue") return Category::Issue;
  if (s == "Blame") return Category::Blame;
  if (s == "Appreciate") return Category::Appreciate;
  if (s == "CallForAction") return Category::CallForAction;
  throw CorpusIoError("unknown category value: \"" + s + "\"");
}

namespace {

json speech_to_json(const SpeechTurn& sp) {
  json j;
  j["order_index"] = sp.order_index;
  j["member_id"] = sp.member_id;
  j["text"] = sp.text;
  j["polarity"] = to_string(sp.polarity);
  if (sp.stance) j["stance"] = to_string(*sp.stance);
  json cats = json::array();
  for (Category c : kAllCategories) {
    if (sp.categories.count(c)) cats.push_back(to_string(c));
  }
  j["categories"] = cats;
  return j;
}

SpeechTurn speech_from_json(const json& j) {
  SpeechTurn sp;
  sp.order_index = j.at("order_index").get<int>();
  sp.member_id = j.at("member_id").get<std::string>();
  sp.text = j.at("text").get<std::string>();
  sp.polarity = polarity_from_string(j.at("polarity").get<std::string>());
  if (j.contains("stance") && !j.at("stance").is_null()) {
    sp.stance = stance_from_string(j.at("stance").get<std::string>());
  }
  for (const auto& c : j.at("categories")) {
    sp.categories.insert(category_from_string(c.get<std::string>()));
  }
  return sp;
}

json session_to_json(const Session& s) {
  json j;
  j["id"] = s.id;
  j["english_date"] = s.english_date;
  j["indian_date"] = s.indian_date;
  j["house_name"] = s.house_name;
  j["secretary_general"] = s.secretary_general;
  json refs = json::array();
  for (const auto& [type_id, debate_id] : s.debates) {
    refs.push_back(json::array({type_id, debate_id}));
  }
  j["debates"] = refs;
  return j;
}

Session session_from_json(const json& j) {
  Session s;
  s.id = j.at("id").get<std::string>();
  s.english_date = j.at("english_date").get<std::string>();
  s.indian_date = j.at("indian_date").get<std::string>();
  s.house_name = j.at("house_name").get<std::string>();
  s.secretary_general = j.at("secretary_general").get<std::string>();
  for (const auto& ref : j.at("debates")) {
    s.debates.emplace_back(ref.at(0).get<std::string>(), ref.at(1).get<std::string>());
  }
  return s;
}

json debate_to_json(const Debate& d) {
  json j;
  j["id"] = d.id;
  j["topic"] = d.topic;
  j["keywords"] = d.keywords;
  j["summary"] = d.summary;
  json speeches = json::array();
  for (const auto& sp : d.speeches) speeches.push_back(speech_to_json(sp));
  j["speeches"] = speeches;
  return j;
}

Debate debate_from_json(const json& j) {
  Debate d;
  d.id = j.at("id").get<std::string>();
  d.topic = j.at("topic").get<std::string>();
  d.keywords = j.at("keywords").get<std::vector<std::string>>();
  d.summary = j.at("summary").get<std::string>();
  for (const auto& sp : j.at("speeches")) d.speeches.push_back(speech_from_json(sp));
  return d;
}

template <typename Record, typename ToJson>
void write_collection(const std::filesystem::path& file, const std::vector<Record>& records,
                      ToJson to_json) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw CorpusIoError("cannot open for writing: " + file.string());
  for (const auto& r : records) {
    out << to_json(r).dump() << '\n';
  }
  if (!out) throw CorpusIoError("write failed: " + file.string());
}

template <typename Record, typename FromJson>
std::vector<Record> read_collection(const std::filesystem::path& file, FromJson from_json) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw CorpusIoError("cannot open for reading: " + file.string());
  std::vector<Record> records;
  std::string line;
  int line_no = 0;
  std::unordered_set<std::string> seen_ids;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
      Record r = from_json(j);
      if (!seen_ids.insert(r.id).second) {
        throw CorpusIoError("duplicate id \"" + r.id + "\"");
      }
      records.push_back(std::move(r));
    } catch (const CorpusIoError& e) {
      throw CorpusIoError(file.filename().string() + ":" + std::to_string(line_no) + ": " +
                          e.what());
    } catch (const json::exception& e) {
      throw CorpusIoError(file.filename().string() + ":" + std::to_string(line_no) +
                          ": malformed record: " + e.what());
    }
  }
  return records;
}

}  // namespace

void save_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_collection(dir / "sessions.jsonl", corpus.sessions, session_to_json);
  write_collection(dir / "members.jsonl", corpus.members, [](const Member& m) {
    return json{{"id", m.id}, {"name", m.name}, {"house", m.house}, {"party", m.party}};
  });
  write_collection(dir / "bills.jsonl", corpus.bills,
                   [](const Bill& b) { return json{{"id", b.id}, {"name", b.name}}; });
  write_collection(dir / "debate_types.jsonl", corpus.debate_types,
                   [](const DebateType& t) { return json{{"id", t.id}, {"name", t.name}}; });
  write_collection(dir / "debates.jsonl", corpus.debates, debate_to_json);
}

Corpus load_corpus(const std::filesystem::path& dir) {
  Corpus corpus;
  corpus.sessions = read_collection<Session>(dir / "sessions.jsonl", session_from_json);
  corpus.members = read_collection<Member>(dir / "members.jsonl", [](const json& j) {
    Member m;
    m.id = j.at("id").get<std::string>();
    m.name = j.at("name").get<std::string>();
    m.house = j.at("house").get<std::string>();
    m.party = j.at("party").get<std::string>();
    return m;
  });
  corpus.bills = read_collection<Bill>(dir / "bills.jsonl", [](const json& j) {
    Bill b;
    b.id = j.at("id").get<std::string>();
    b.name = j.at("name").get<std::string>();
    return b;
  });
  corpus.debate_types = read_collection<DebateType>(dir / "debate_types.jsonl", [](const json& j) {
    DebateType t;
    t.id = j.at("id").get<std::string>();
    t.name = j.at("name").get<std::string>();
    return t;
  });
  corpus.debates = read_collection<Debate>(dir / "debates.jsonl", debate_from_json);
  return corpus;
}

std::vector<Violation> validate_corpus(const Corpus& corpus) {
  std::vector<Violation> violations;
  auto add = [&](std::string path, std::string message) {
    violations.push_back({std::move(path), std::move(message)});
  };

  std::unordered_set<std::string> member_ids, debate_ids, type_ids;
  std::unordered_map<std::string, std::string> member_names;  // normalized -> id
  std::unordered_set<std::string> type_names;

  for (const auto& m : corpus.members) {
    if (!member_ids.insert(m.id).second) add("members[" + m.id + "]", "duplicate member id");
    if (m.name.empty()) {
      add("members[" + m.id + "].name", "member name is empty");
      continue;
    }
    std::string norm = normalize_person_name(m.name);
    auto [it, inserted] = member_names.emplace(norm, m.id);
    if (!inserted) {
      add("members[" + m.id + "].name",
          "name duplicates member " + it->second + " after normalization");
    }
  }
  for (const auto& d : corpus.debates) {
    if (!debate_ids.insert(d.id).second) add("debates[" + d.id + "]", "duplicate debate id");
  }
  for (const auto& t : corpus.debate_types) {
    if (!type_ids.insert(t.id).second) add("debate_types[" + t.id + "]", "duplicate type id");
    if (t.name.empty()) {
      add("debate_types[" + t.id + "].name", "debate type name is empty");
    } else if (!type_names.insert(t.name).second) {
      add("debate_types[" + t.id + "].name", "duplicate debate type name \"" + t.name + "\"");
    }
  }
  std::unordered_set<std::string> bill_ids;
  for (const auto& b : corpus.bills) {
    if (!bill_ids.insert(b.id).second) add("bills[" + b.id + "]", "duplicate bill id");
    if (b.name.empty()) add("bills[" + b.id + "].name", "bill name is empty");
  }

  std::unordered_set<std::string> session_ids;
  for (const auto& s : corpus.sessions) {
    std::string base = "sessions[" + s.id + "]";
    if (!session_ids.insert(s.id).second) add(base, "duplicate session id");
    if (s.english_date.empty()) add(base + ".english_date", "english date is empty");
    for (const auto& [type_id, debate_id] : s.debates) {
      if (!type_ids.count(type_id)) {
        add(base + ".debates[" + type_id + "]", "unknown debate type id \"" + type_id + "\"");
      }
      if (!debate_ids.count(debate_id)) {
        add(base + ".debates[" + type_id + "]", "unknown debate id \"" + debate_id + "\"");
      }
    }
  }

  for (const auto& d : corpus.debates) {
    std::string base = "debates[" + d.id + "]";
    for (std::size_t i = 0; i < d.speeches.size(); ++i) {
      const auto& sp = d.speeches[i];
      std::string sp_base = base + ".speeches[" + std::to_string(i + 1) + "]";
      if (sp.order_index != static_cast<int>(i) + 1) {
        add(sp_base + ".order_index", "expected " + std::to_string(i + 1) + ", found " +
                                          std::to_string(sp.order_index));
      }
      if (sp.text.empty()) add(sp_base + ".text", "speech text is empty");
      if (!member_ids.count(sp.member_id)) {
        add(sp_base + ".member_id", "unresolved member id \"" + sp.member_id + "\"");
      }
    }
  }
  return violations;
}

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats stats;
  stats.session_count = corpus.sessions.size();
  stats.debate_count = corpus.debates.size();

  std::unordered_map<std::string, std::string> type_names;
  for (const auto& t : corpus.debate_types) type_names[t.id] = t.name;
  for (const auto& s : corpus.sessions) {
    for (const auto& [type_id, debate_id] : s.debates) {
      auto it = type_names.find(type_id);
      if (it != type_names.end()) ++stats.debate_type_histogram[it->second];
    }
  }

  for (const auto& d : corpus.debates) {
    stats.speech_count += d.speeches.size();
    for (const auto& sp : d.speeches) {
      stats.word_count += whitespace_tokens(sp.text).size();
      ++stats.polarity_histogram[to_string(sp.polarity)];
      for (Category c : sp.categories) ++stats.annotation_histogram[to_string(c)];
      if (sp.stance) ++stats.annotation_histogram[to_string(*sp.stance)];
    }
  }
  return stats;
}

}  // namespace debateforge
