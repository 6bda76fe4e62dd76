#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "debateforge/corpus.hpp"

namespace debateforge {

// One item labeled by both annotators. Labels are opaque strings drawn from
// the same finite set.
struct LabelPair {
  std::string item_id;
  std::string label_a;
  std::string label_b;

  bool operator==(const LabelPair&) const = default;
};

// Fraction of pairs with label_a == label_b. Throws std::invalid_argument on
// empty input (the metric is undefined).
double raw_agreement(const std::vector<LabelPair>& pairs);

// Cohen's kappa: (p_o - p_e) / (1 - p_e) with p_e the chance agreement from
// the annotators' marginal label distributions. Returns 1.0 by convention
// when p_e == 1 (both annotators constant and equal); `degenerate`, when
// non-null, is set to whether that convention fired. Throws
// std::invalid_argument on empty input.
double cohen_kappa(const std::vector<LabelPair>& pairs, bool* degenerate = nullptr);

// One speech labeled by one annotator, as read from the annotation file.
struct AnnotationRecord {
  std::string speech_id;
  std::string annotator;
  std::optional<Stance> stance;
  std::set<Category> categories;

  bool operator==(const AnnotationRecord&) const = default;
};

// JSON Lines of {speech_id, annotator, stance?, categories[]}. Throws
// CorpusIoError with file:line context on malformed records.
std::vector<AnnotationRecord> load_annotations(const std::filesystem::path& file);

struct AgreementRow {
  std::string category;  // display name, or "Stance"
  double kappa = 0.0;
  double raw = 0.0;
  std::size_t n_items = 0;
};

struct AgreementReport {
  std::vector<AgreementRow> rows;
  std::vector<std::string> warnings;
};

// Pairs the two annotators' records per speech and reports kappa and raw
// agreement per category. Each category is an independent binary
// present/absent task (speeches are multi-label, and the reference table has
// one row per category); a final row covers stance. Speeches missing one
// annotator are skipped with a warning. Throws std::invalid_argument when the
// records do not contain exactly two annotators or a row would be empty.
AgreementReport agreement_report(const std::vector<AnnotationRecord>& annotations);

}  // namespace debateforge
