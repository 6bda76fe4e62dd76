#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "debateforge/corpus.hpp"

namespace debateforge {

enum class LossKind { Softmax, HierarchicalSoftmax };

std::string to_string(LossKind loss);
LossKind loss_from_string(const std::string& s);  // "softmax" | "hs"

struct TrainConfig {
  double learning_rate = 0.8;
  int dim = 100;
  int word_ngram = 2;  // 1 = unigrams only; n adds hashed 2..n-grams
  int epochs = 100;
  LossKind loss = LossKind::HierarchicalSoftmax;
  std::size_t bucket_count = std::size_t{1} << 21;  // hashed n-gram id space
  int min_token_count = 1;
  std::uint64_t seed = 42;
  // Optional character-n-gram mode: additionally hash <token>-wrapped char
  // n-grams of each token into the bucket space.
  bool char_ngrams = false;
  int char_ngram_min = 3;
  int char_ngram_max = 6;

  // Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

struct LabeledDoc {
  std::string text;
  std::string label;

  bool operator==(const LabeledDoc&) const = default;
};

// Unigram token table. Ids are assigned in first-appearance order over the
// training documents.
class Vocabulary {
 public:
  static Vocabulary build(const std::vector<LabeledDoc>& docs, int min_token_count = 1);

  // Appends a token (id = current size). Used by tests and model loading.
  std::uint32_t add(const std::string& token);

  std::optional<std::uint32_t> id(const std::string& token) const;
  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

// Feature ids for one document: vocabulary unigram ids (OOV unigrams
// skipped), then hashed word n-grams (2..word_ngram) in
// [vocab.size(), vocab.size() + bucket_count), then hashed char n-grams when
// enabled. Preprocessing = lowercased alphanumeric runs. Stable across runs:
// FNV-1a 64 reduced modulo bucket_count.
std::vector<std::uint32_t> featurize(const std::string& text, const TrainConfig& cfg,
                                     const Vocabulary& vocab);

// Hashed-bag-of-features linear classifier: document vector = mean of feature
// embeddings, linear output layer under softmax or hierarchical softmax.
struct LinearEmbedModel {
  TrainConfig config;
  std::vector<std::string> labels;        // lexicographically sorted
  std::vector<std::uint64_t> label_counts;  // training frequency per label
  Vocabulary vocab;
  // (vocab.size() + bucket_count) rows of config.dim floats.
  std::vector<float> embeddings;
  // Softmax: labels.size() rows; hierarchical softmax: labels.size()-1
  // internal-node rows. config.dim floats each.
  std::vector<float> output;

  std::size_t feature_rows() const { return vocab.size() + config.bucket_count; }
};

// Huffman coding of the label set by training frequency; ties broken by node
// id so the tree is deterministic. For each label, the root-to-leaf sequence
// of (internal node id, branch bit).
struct HuffmanTree {
  std::vector<std::vector<std::pair<std::uint32_t, std::uint8_t>>> paths;
  std::size_t internal_nodes = 0;

  static HuffmanTree build(const std::vector<std::uint64_t>& label_counts);
};

// Negative log-likelihood of one document under the current parameters.
double doc_loss(const LinearEmbedModel& model, const std::vector<std::uint32_t>& features,
                std::uint32_t label_index);

// One SGD update at fixed learning rate. The hidden-layer gradient is
// computed against the pre-update output weights, so every parameter moves by
// exactly -lr * dLoss/dParam (used by the gradient-check tests).
void sgd_step(LinearEmbedModel& model, const std::vector<std::uint32_t>& features,
              std::uint32_t label_index, double lr);

struct TrainResult {
  LinearEmbedModel model;
  std::vector<double> epoch_losses;  // mean train NLL evaluated after each epoch
  std::vector<std::string> warnings;
};

// Single-threaded deterministic SGD: per-epoch document shuffle from the
// seeded generator, learning rate decaying linearly to zero over the total
// feature updates. Throws std::invalid_argument when fewer than two labels
// are present and std::runtime_error when the loss turns non-finite.
TrainResult train(const std::vector<LabeledDoc>& train_docs, const TrainConfig& cfg);

struct Prediction {
  std::string label;
  std::vector<double> probs;  // aligned with model.labels, sums to 1 (1e-6)
  bool degenerate = false;    // no usable features: uniform distribution
};

Prediction predict(const LinearEmbedModel& model, const std::string& text);

// Stratified split of indices [0, strata.size()): per stratum, a seeded
// shuffle then the first floor(ratio*n) to train, the rest to test. Strata
// with fewer than 2 members go wholly to train with a warning. Strata are
// processed in lexicographic key order from one generator, so results are
// fully deterministic.
struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  std::vector<std::string> warnings;
};

Split split_train_test(const std::vector<std::string>& strata, double ratio, std::uint64_t seed);

// One speech as a classification example.
struct DatasetDoc {
  std::string text;
  std::optional<Stance> stance;
  std::set<Category> categories;

  bool operator==(const DatasetDoc&) const = default;
};

// JSON Lines of {text, stance?, categories[]}.
std::vector<DatasetDoc> load_dataset(const std::filesystem::path& file);
void save_dataset(const std::vector<DatasetDoc>& docs, const std::filesystem::path& file);
std::vector<DatasetDoc> dataset_from_corpus(const Corpus& corpus);

inline constexpr const char* kOvrPositive = "positive";
inline constexpr const char* kOvrNegative = "negative";

// One binary model per category: positives = docs containing the category,
// negatives = the rest. Binary models always use plain softmax. Categories
// without both a positive and a negative example are skipped with a warning.
struct OvrResult {
  std::vector<std::pair<Category, LinearEmbedModel>> models;  // category enum order
  std::vector<std::string> warnings;
};

OvrResult train_ovr(const std::vector<DatasetDoc>& docs, const TrainConfig& cfg,
                    bool parallel = false);

// TF-IDF + linear hinge baseline, binary tasks only.
struct BaselineConfig {
  double learning_rate = 0.1;
  double l2 = 1e-4;
  int epochs = 10;
  std::uint64_t seed = 42;
};

struct BaselineModel {
  BaselineConfig config;
  std::vector<std::string> labels;  // exactly 2, sorted; labels[1] is the +1 class
  std::vector<std::string> terms;   // unigrams + bigrams, first-appearance order
  std::unordered_map<std::string, std::uint32_t> term_index;
  std::vector<double> idf;  // ln((1+N)/(1+df)) + 1
  std::vector<double> weights;
  double bias = 0.0;
};

BaselineModel train_baseline(const std::vector<LabeledDoc>& train_docs,
                             const BaselineConfig& cfg = {});
Prediction predict(const BaselineModel& model, const std::string& text);

struct EvalReport {
  std::size_t n_test = 0;
  std::size_t correct = 0;
  double accuracy = 0.0;
  std::vector<std::string> labels;
  // labels.size()^2 counts, row = true label, column = predicted.
  std::vector<std::size_t> confusion;
};

EvalReport evaluate(const LinearEmbedModel& model, const std::vector<LabeledDoc>& test_docs);
EvalReport evaluate(const BaselineModel& model, const std::vector<LabeledDoc>& test_docs);

struct CategoryEval {
  Category category;
  EvalReport report;
};

// Per-category binary accuracy of each OVR model on the held-out docs.
std::vector<CategoryEval> evaluate_ovr(const OvrResult& ovr,
                                       const std::vector<DatasetDoc>& test_docs);

struct SweepRow {
  int epochs = 0;
  double accuracy = 0.0;
};

// Trains one model per epoch count on the identical 8:2 split and reports
// held-out accuracy per row. epoch_list must be nonempty and ascending.
std::vector<SweepRow> epoch_sweep(const std::vector<LabeledDoc>& docs, const TrainConfig& cfg,
                                  const std::vector<int>& epoch_list);

// Versioned little-endian binary containers. Magic bytes: "DFMD1" single
// model, "DFOV1" one-vs-rest bundle, "DFBL1" baseline.
void save_model(const LinearEmbedModel& model, const std::filesystem::path& file);
LinearEmbedModel load_model(const std::filesystem::path& file);
void save_ovr(const OvrResult& ovr, const std::filesystem::path& file);
OvrResult load_ovr(const std::filesystem::path& file);
void save_baseline(const BaselineModel& model, const std::filesystem::path& file);
BaselineModel load_baseline(const std::filesystem::path& file);

// First five bytes of the file ("DFMD1", "DFOV1", "DFBL1"), for dispatch.
std::string peek_model_magic(const std::filesystem::path& file);

}  // namespace debateforge
