#include "debateforge/agreement.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <stdexcept>

#include "json.hpp"

namespace debateforge {

using nlohmann::json;

double raw_agreement(const std::vector<LabelPair>& pairs) {
  if (pairs.empty()) throw std::invalid_argument("raw_agreement: empty input");
  std::size_t matches = 0;
  for (const LabelPair& p : pairs) {
    if (p.label_a == p.label_b) ++matches;
  }
  return static_cast<double>(matches) / static_cast<double>(pairs.size());
}

double cohen_kappa(const std::vector<LabelPair>& pairs, bool* degenerate) {
  if (pairs.empty()) throw std::invalid_argument("cohen_kappa: empty input");
  if (degenerate != nullptr) *degenerate = false;
  const double n = static_cast<double>(pairs.size());
  std::map<std::string, std::size_t> count_a;
  std::map<std::string, std::size_t> count_b;
  for (const LabelPair& p : pairs) {
    ++count_a[p.label_a];
    ++count_b[p.label_b];
  }
  double p_e = 0.0;
  for (const auto& [label, na] : count_a) {
    auto it = count_b.find(label);
    if (it == count_b.end()) continue;
    p_e += (static_cast<double>(na) / n) * (static_cast<double>(it->second) / n);
  }
  if (p_e == 1.0) {  // both annotators constant and equal
    if (degenerate != nullptr) *degenerate = true;
    return 1.0;
  }
  const double p_o = raw_agreement(pairs);
  return (p_o - p_e) / (1.0 - p_e);
}

std::vector<AnnotationRecord> load_annotations(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw CorpusIoError("cannot open annotation file: " + file.string());
  std::vector<AnnotationRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fail = [&](const std::string& why) {
      throw CorpusIoError(file.string() + ":" + std::to_string(line_no) + ": " + why);
    };
    json doc = json::parse(line, nullptr, false);
    if (doc.is_discarded()) fail("malformed JSON");
    if (!doc.is_object()) fail("record must be a JSON object");
    AnnotationRecord record;
    try {
      record.speech_id = doc.at("speech_id").get<std::string>();
      record.annotator = doc.at("annotator").get<std::string>();
      if (doc.contains("stance") && !doc["stance"].is_null()) {
        record.stance = stance_from_string(doc["stance"].get<std::string>());
      }
      if (doc.contains("categories")) {
        for (const json& c : doc.at("categories")) {
          record.categories.insert(category_from_string(c.get<std::string>()));
        }
      }
    } catch (const json::exception& e) {
      fail(e.what());
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
    if (record.speech_id.empty()) fail("empty speech_id");
    if (record.annotator.empty()) fail("empty annotator");
    records.push_back(std::move(record));
  }
  return records;
}

AgreementReport agreement_report(const std::vector<AnnotationRecord>& annotations) {
  std::set<std::string> annotators;
  for (const AnnotationRecord& r : annotations) annotators.insert(r.annotator);
  if (annotators.size() != 2) {
    throw std::invalid_argument("agreement_report: expected exactly 2 annotators, got " +
                                std::to_string(annotators.size()));
  }
  const std::string annotator_a = *annotators.begin();
  const std::string annotator_b = *std::next(annotators.begin());

  AgreementReport report;
  // speech_id -> the two records, ordered (a, b). std::map keeps item order
  // deterministic regardless of input order.
  std::map<std::string, std::pair<const AnnotationRecord*, const AnnotationRecord*>> by_speech;
  for (const AnnotationRecord& r : annotations) {
    auto& slot = by_speech[r.speech_id];
    auto*& side = r.annotator == annotator_a ? slot.first : slot.second;
    if (side != nullptr) {
      report.warnings.push_back("speech " + r.speech_id + ": duplicate record from annotator '" +
                                r.annotator + "', keeping the first");
      continue;
    }
    side = &r;
  }

  std::vector<std::pair<const AnnotationRecord*, const AnnotationRecord*>> complete;
  for (const auto& [speech_id, slot] : by_speech) {
    if (slot.first == nullptr || slot.second == nullptr) {
      report.warnings.push_back("speech " + speech_id + ": only one annotator, skipped");
      continue;
    }
    complete.emplace_back(slot.first, slot.second);
  }

  auto add_row = [&report](const std::string& name, const std::vector<LabelPair>& pairs) {
    if (pairs.empty()) {
      throw std::invalid_argument("agreement_report: no items for row '" + name + "'");
    }
    AgreementRow row;
    row.category = name;
    bool degenerate = false;
    row.kappa = cohen_kappa(pairs, &degenerate);
    row.raw = raw_agreement(pairs);
    row.n_items = pairs.size();
    if (degenerate) {
      report.warnings.push_back("row '" + name +
                                "': chance agreement is 1, kappa reported as 1.0 by convention");
    }
    report.rows.push_back(row);
  };

  for (Category c : kAllCategories) {
    std::vector<LabelPair> pairs;
    pairs.reserve(complete.size());
    for (const auto& [a, b] : complete) {
      pairs.push_back({a->speech_id, a->categories.count(c) ? "present" : "absent",
                       b->categories.count(c) ? "present" : "absent"});
    }
    add_row(display_name(c), pairs);
  }

  std::vector<LabelPair> stance_pairs;
  for (const auto& [a, b] : complete) {
    if (!a->stance || !b->stance) {
      report.warnings.push_back("speech " + a->speech_id +
                                ": stance missing from one annotator, skipped for stance row");
      continue;
    }
    stance_pairs.push_back({a->speech_id, to_string(*a->stance), to_string(*b->stance)});
  }
  add_row("Stance", stance_pairs);
  return report;
}

}  // namespace debateforge
