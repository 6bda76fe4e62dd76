#include "debateforge/classify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <future>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "debateforge/rng.hpp"
#include "debateforge/text_util.hpp"

namespace debateforge {

using nlohmann::json;

std::string to_string(LossKind loss) {
  return loss == LossKind::Softmax ? "softmax" : "hs";
}

LossKind loss_from_string(const std::string& s) {
  if (s == "softmax") return LossKind::Softmax;
  if (s == "hs" || s == "hierarchical_softmax") return LossKind::HierarchicalSoftmax;
  throw std::invalid_argument("unknown loss '" + s + "' (expected softmax|hs)");
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0) || !std::isfinite(learning_rate))
    throw std::invalid_argument("classify: learning_rate must be positive and finite");
  if (dim < 1) throw std::invalid_argument("classify: dim must be >= 1");
  if (word_ngram < 1) throw std::invalid_argument("classify: word_ngram must be >= 1");
  if (epochs < 1) throw std::invalid_argument("classify: epochs must be >= 1");
  if (bucket_count < 1) throw std::invalid_argument("classify: bucket_count must be >= 1");
  if (min_token_count < 1) throw std::invalid_argument("classify: min_token_count must be >= 1");
  if (char_ngrams && (char_ngram_min < 1 || char_ngram_max < char_ngram_min))
    throw std::invalid_argument("classify: need 1 <= char_ngram_min <= char_ngram_max");
}

// ---------------------------------------------------------------------------
// Vocabulary and features

Vocabulary Vocabulary::build(const std::vector<LabeledDoc>& docs, int min_token_count) {
  // Count first, then admit tokens in first-appearance order.
  std::unordered_map<std::string, std::size_t> counts;
  for (const LabeledDoc& doc : docs) {
    for (const std::string& token : alnum_tokens(doc.text)) ++counts[token];
  }
  Vocabulary vocab;
  for (const LabeledDoc& doc : docs) {
    for (const std::string& token : alnum_tokens(doc.text)) {
      if (counts[token] < static_cast<std::size_t>(min_token_count)) continue;
      if (!vocab.index_.count(token)) vocab.add(token);
    }
  }
  return vocab;
}

std::uint32_t Vocabulary::add(const std::string& token) {
  const auto id = static_cast<std::uint32_t>(tokens_.size());
  tokens_.push_back(token);
  index_.emplace(token, id);
  return id;
}

std::optional<std::uint32_t> Vocabulary::id(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::uint32_t> featurize(const std::string& text, const TrainConfig& cfg,
                                     const Vocabulary& vocab) {
  const std::vector<std::string> tokens = alnum_tokens(text);
  std::vector<std::uint32_t> features;
  features.reserve(tokens.size() * static_cast<std::size_t>(cfg.word_ngram));

  for (const std::string& token : tokens) {
    if (auto id = vocab.id(token)) features.push_back(*id);
  }

  const auto base = static_cast<std::uint64_t>(vocab.size());
  auto bucket_id = [&](std::string_view key) {
    return static_cast<std::uint32_t>(base + fnv1a64(key) % cfg.bucket_count);
  };

  // Word n-grams, joined with a separator no token can contain.
  for (int n = 2; n <= cfg.word_ngram; ++n) {
    if (tokens.size() < static_cast<std::size_t>(n)) break;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
      std::string key = tokens[i];
      for (int k = 1; k < n; ++k) {
        key.push_back('\x1f');
        key += tokens[i + k];
      }
      features.push_back(bucket_id(key));
    }
  }

  if (cfg.char_ngrams) {
    for (const std::string& token : tokens) {
      const std::string wrapped = "<" + token + ">";
      for (int n = cfg.char_ngram_min; n <= cfg.char_ngram_max; ++n) {
        if (wrapped.size() < static_cast<std::size_t>(n)) break;
        for (std::size_t i = 0; i + n <= wrapped.size(); ++i) {
          features.push_back(bucket_id(std::string_view(wrapped).substr(i, n)));
        }
      }
    }
  }
  return features;
}

// ---------------------------------------------------------------------------
// Huffman tree

HuffmanTree HuffmanTree::build(const std::vector<std::uint64_t>& label_counts) {
  const std::size_t leaves = label_counts.size();
  if (leaves < 2) throw std::invalid_argument("HuffmanTree: need at least 2 labels");

  struct Node {
    std::uint64_t count;
    std::int32_t parent = -1;
    std::uint8_t bit = 0;  // branch taken from the parent to reach this node
  };
  std::vector<Node> nodes;
  nodes.reserve(2 * leaves - 1);
  for (std::uint64_t c : label_counts) nodes.push_back({c});

  using Item = std::pair<std::uint64_t, std::uint32_t>;  // (count, node id)
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  for (std::uint32_t i = 0; i < leaves; ++i) heap.emplace(nodes[i].count, i);

  while (heap.size() > 1) {
    const auto [ca, a] = heap.top();
    heap.pop();
    const auto [cb, b] = heap.top();
    heap.pop();
    const auto parent = static_cast<std::uint32_t>(nodes.size());
    nodes.push_back({ca + cb});
    nodes[a].parent = static_cast<std::int32_t>(parent);
    nodes[a].bit = 0;
    nodes[b].parent = static_cast<std::int32_t>(parent);
    nodes[b].bit = 1;
    heap.emplace(ca + cb, parent);
  }

  HuffmanTree tree;
  tree.internal_nodes = leaves - 1;
  tree.paths.resize(leaves);
  for (std::size_t l = 0; l < leaves; ++l) {
    std::vector<std::pair<std::uint32_t, std::uint8_t>> path;
    std::uint32_t node = static_cast<std::uint32_t>(l);
    while (nodes[node].parent >= 0) {
      const auto parent = static_cast<std::uint32_t>(nodes[node].parent);
      path.emplace_back(parent - static_cast<std::uint32_t>(leaves), nodes[node].bit);
      node = parent;
    }
    std::reverse(path.begin(), path.end());
    tree.paths[l] = std::move(path);
  }
  return tree;
}

// ---------------------------------------------------------------------------
// Forward/backward

namespace {

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double log_sigmoid(double x) {
  if (x >= 0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

// Mean of the feature embedding rows, in doubles.
std::vector<double> compute_hidden(const LinearEmbedModel& model,
                                   const std::vector<std::uint32_t>& features) {
  const std::size_t dim = static_cast<std::size_t>(model.config.dim);
  std::vector<double> hidden(dim, 0.0);
  if (features.empty()) return hidden;
  for (std::uint32_t f : features) {
    const float* row = &model.embeddings[static_cast<std::size_t>(f) * dim];
    for (std::size_t d = 0; d < dim; ++d) hidden[d] += row[d];
  }
  const double inv = 1.0 / static_cast<double>(features.size());
  for (double& h : hidden) h *= inv;
  return hidden;
}

std::vector<double> softmax_probs(const LinearEmbedModel& model,
                                  const std::vector<double>& hidden) {
  const std::size_t dim = static_cast<std::size_t>(model.config.dim);
  const std::size_t n_labels = model.labels.size();
  std::vector<double> logits(n_labels, 0.0);
  for (std::size_t l = 0; l < n_labels; ++l) {
    const float* row = &model.output[l * dim];
    double dot = 0.0;
    for (std::size_t d = 0; d < dim; ++d) dot += row[d] * hidden[d];
    logits[l] = dot;
  }
  const double max_logit = *std::max_element(logits.begin(), logits.end());
  double denom = 0.0;
  for (double& l : logits) {
    l = std::exp(l - max_logit);
    denom += l;
  }
  for (double& l : logits) l /= denom;
  return logits;
}

std::vector<double> hs_probs(const LinearEmbedModel& model, const HuffmanTree& tree,
                             const std::vector<double>& hidden) {
  const std::size_t dim = static_cast<std::size_t>(model.config.dim);
  std::vector<double> probs(model.labels.size(), 0.0);
  for (std::size_t l = 0; l < probs.size(); ++l) {
    double log_p = 0.0;
    for (const auto& [node, bit] : tree.paths[l]) {
      const float* row = &model.output[static_cast<std::size_t>(node) * dim];
      double x = 0.0;
      for (std::size_t d = 0; d < dim; ++d) x += row[d] * hidden[d];
      log_p += log_sigmoid(bit ? x : -x);
    }
    probs[l] = std::exp(log_p);
  }
  return probs;
}

void apply_hidden_gradient(LinearEmbedModel& model, const std::vector<std::uint32_t>& features,
                           const std::vector<double>& grad_hidden, double lr) {
  if (features.empty()) return;
  const std::size_t dim = static_cast<std::size_t>(model.config.dim);
  const double scale = lr / static_cast<double>(features.size());
  for (std::uint32_t f : features) {
    float* row = &model.embeddings[static_cast<std::size_t>(f) * dim];
    for (std::size_t d = 0; d < dim; ++d) {
      row[d] = static_cast<float>(row[d] - scale * grad_hidden[d]);
    }
  }
}

double doc_loss_with_tree(const LinearEmbedModel& model, const HuffmanTree* tree,
                          const std::vector<std::uint32_t>& features, std::uint32_t label_index) {
  const std::vector<double> hidden = compute_hidden(model, features);
  if (model.config.loss == LossKind::Softmax) {
    const std::vector<double> probs = softmax_probs(model, hidden);
    return -std::log(std::max(probs[label_index], 1e-300));
  }
  const std::size_t dim = static_cast<std::size_t>(model.config.dim);
  double loss = 0.0;
  for (const auto& [node, bit] : tree->paths[label_index]) {
    const float* row = &model.output[static_cast<std::size_t>(node) * dim];
    double x = 0.0;
    for (std::size_t d = 0; d < dim; ++d) x += row[d] * hidden[d];
    loss -= log_sigmoid(bit ? x : -x);
  }
  return loss;
}

void sgd_step_with_tree(LinearEmbedModel& model, const HuffmanTree* tree,
                        const std::vector<std::uint32_t>& features, std::uint32_t label_index,
                        double lr) {
  const std::size_t dim = static_cast<std::size_t>(model.config.dim);
  const std::vector<double> hidden = compute_hidden(model, features);
  std::vector<double> grad_hidden(dim, 0.0);

  if (model.config.loss == LossKind::Softmax) {
    const std::vector<double> probs = softmax_probs(model, hidden);
    // grad_hidden uses the pre-update output weights; collect it first.
    for (std::size_t l = 0; l < model.labels.size(); ++l) {
      const double dlogit = probs[l] - (l == label_index ? 1.0 : 0.0);
      const float* row = &model.output[l * dim];
      for (std::size_t d = 0; d < dim; ++d) grad_hidden[d] += dlogit * row[d];
    }
    for (std::size_t l = 0; l < model.labels.size(); ++l) {
      const double dlogit = probs[l] - (l == label_index ? 1.0 : 0.0);
      float* row = &model.output[l * dim];
      for (std::size_t d = 0; d < dim; ++d) {
        row[d] = static_cast<float>(row[d] - lr * dlogit * hidden[d]);
      }
    }
  } else {
    const auto& path = tree->paths[label_index];
    std::vector<double> dx(path.size());
    for (std::size_t s = 0; s < path.size(); ++s) {
      const auto [node, bit] = path[s];
      const float* row = &model.output[static_cast<std::size_t>(node) * dim];
      double x = 0.0;
      for (std::size_t d = 0; d < dim; ++d) x += row[d] * hidden[d];
      dx[s] = sigmoid(x) - static_cast<double>(bit);
      for (std::size_t d = 0; d < dim; ++d) grad_hidden[d] += dx[s] * row[d];
    }
    for (std::size_t s = 0; s < path.size(); ++s) {
      float* row = &model.output[static_cast<std::size_t>(path[s].first) * dim];
      for (std::size_t d = 0; d < dim; ++d) {
        row[d] = static_cast<float>(row[d] - lr * dx[s] * hidden[d]);
      }
    }
  }
  apply_hidden_gradient(model, features, grad_hidden, lr);
}

}  // namespace

double doc_loss(const LinearEmbedModel& model, const std::vector<std::uint32_t>& features,
                std::uint32_t label_index) {
  if (model.config.loss == LossKind::Softmax) {
    return doc_loss_with_tree(model, nullptr, features, label_index);
  }
  const HuffmanTree tree = HuffmanTree::build(model.label_counts);
  return doc_loss_with_tree(model, &tree, features, label_index);
}

void sgd_step(LinearEmbedModel& model, const std::vector<std::uint32_t>& features,
              std::uint32_t label_index, double lr) {
  if (model.config.loss == LossKind::Softmax) {
    sgd_step_with_tree(model, nullptr, features, label_index, lr);
    return;
  }
  const HuffmanTree tree = HuffmanTree::build(model.label_counts);
  sgd_step_with_tree(model, &tree, features, label_index, lr);
}

// ---------------------------------------------------------------------------
// Training

TrainResult train(const std::vector<LabeledDoc>& train_docs, const TrainConfig& cfg) {
  cfg.validate();

  std::map<std::string, std::uint64_t> label_counts;
  for (const LabeledDoc& doc : train_docs) ++label_counts[doc.label];
  if (label_counts.size() < 2) {
    throw std::invalid_argument("train: need at least 2 distinct labels, got " +
                                std::to_string(label_counts.size()));
  }

  TrainResult result;
  LinearEmbedModel& model = result.model;
  model.config = cfg;
  for (const auto& [label, count] : label_counts) {
    model.labels.push_back(label);  // std::map iterates lexicographically
    model.label_counts.push_back(count);
  }
  std::unordered_map<std::string, std::uint32_t> label_index;
  for (std::uint32_t i = 0; i < model.labels.size(); ++i) label_index[model.labels[i]] = i;

  model.vocab = Vocabulary::build(train_docs, cfg.min_token_count);

  const std::size_t dim = static_cast<std::size_t>(cfg.dim);
  SplitRng rng(cfg.seed);
  model.embeddings.resize(model.feature_rows() * dim);
  const double init_range = 1.0 / static_cast<double>(cfg.dim);
  for (float& value : model.embeddings) {
    value = static_cast<float>((rng.next_unit() * 2.0 - 1.0) * init_range);
  }
  const std::size_t output_rows =
      cfg.loss == LossKind::Softmax ? model.labels.size() : model.labels.size() - 1;
  model.output.assign(output_rows * dim, 0.0f);

  const HuffmanTree tree = cfg.loss == LossKind::HierarchicalSoftmax
                               ? HuffmanTree::build(model.label_counts)
                               : HuffmanTree{};
  const HuffmanTree* tree_ptr = cfg.loss == LossKind::HierarchicalSoftmax ? &tree : nullptr;

  std::vector<std::vector<std::uint32_t>> features(train_docs.size());
  std::vector<std::uint32_t> labels(train_docs.size());
  std::size_t total_features = 0;
  std::size_t empty_docs = 0;
  for (std::size_t i = 0; i < train_docs.size(); ++i) {
    features[i] = featurize(train_docs[i].text, cfg, model.vocab);
    labels[i] = label_index.at(train_docs[i].label);
    total_features += features[i].size();
    if (features[i].empty()) ++empty_docs;
  }
  if (total_features == 0) {
    throw std::invalid_argument("train: no document produced any features");
  }
  if (empty_docs > 0) {
    result.warnings.push_back(std::to_string(empty_docs) +
                              " documents have no features and are skipped during updates");
  }

  const double total_updates =
      static_cast<double>(total_features) * static_cast<double>(cfg.epochs);
  double processed = 0.0;
  std::vector<std::size_t> order(train_docs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t idx : order) {
      if (features[idx].empty()) continue;
      // Linear decay over total feature updates, fastText-style.
      const double lr = cfg.learning_rate * (1.0 - processed / total_updates);
      sgd_step_with_tree(model, tree_ptr, features[idx], labels[idx], lr);
      processed += static_cast<double>(features[idx].size());
    }

    double loss_sum = 0.0;
    std::size_t loss_count = 0;
    for (std::size_t i = 0; i < train_docs.size(); ++i) {
      if (features[i].empty()) continue;
      loss_sum += doc_loss_with_tree(model, tree_ptr, features[i], labels[i]);
      ++loss_count;
    }
    const double epoch_loss = loss_sum / static_cast<double>(loss_count);
    if (!std::isfinite(epoch_loss)) {
      throw std::runtime_error(
          "train: non-finite loss after epoch " + std::to_string(epoch + 1) + " (lr " +
          std::to_string(cfg.learning_rate) + ", dim " + std::to_string(cfg.dim) +
          "); reduce the learning rate");
    }
    result.epoch_losses.push_back(epoch_loss);
  }
  return result;
}

Prediction predict(const LinearEmbedModel& model, const std::string& text) {
  Prediction prediction;
  const std::vector<std::uint32_t> features = featurize(text, model.config, model.vocab);
  const std::size_t n_labels = model.labels.size();
  if (features.empty()) {
    prediction.degenerate = true;
    prediction.probs.assign(n_labels, 1.0 / static_cast<double>(n_labels));
    prediction.label = model.labels.front();
    return prediction;
  }
  const std::vector<double> hidden = compute_hidden(model, features);
  if (model.config.loss == LossKind::Softmax) {
    prediction.probs = softmax_probs(model, hidden);
  } else {
    const HuffmanTree tree = HuffmanTree::build(model.label_counts);
    prediction.probs = hs_probs(model, tree, hidden);
  }
  const std::size_t best = static_cast<std::size_t>(
      std::max_element(prediction.probs.begin(), prediction.probs.end()) -
      prediction.probs.begin());
  prediction.label = model.labels[best];
  return prediction;
}

// ---------------------------------------------------------------------------
// Splits and datasets

Split split_train_test(const std::vector<std::string>& strata, double ratio, std::uint64_t seed) {
  if (strata.size() < 5) {
    throw std::invalid_argument("split_train_test: need at least 5 docs, got " +
                                std::to_string(strata.size()));
  }
  if (!(ratio > 0.0) || !(ratio < 1.0)) {
    throw std::invalid_argument("split_train_test: ratio must be in (0, 1)");
  }
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < strata.size(); ++i) groups[strata[i]].push_back(i);

  Split split;
  SplitRng rng(seed);
  for (auto& [key, indices] : groups) {
    rng.shuffle(indices);
    if (indices.size() < 2) {
      split.warnings.push_back("stratum '" + key + "' has fewer than 2 docs; all go to train");
      split.train.insert(split.train.end(), indices.begin(), indices.end());
      continue;
    }
    const auto n_train = static_cast<std::size_t>(
        std::floor(ratio * static_cast<double>(indices.size())));
    split.train.insert(split.train.end(), indices.begin(), indices.begin() + n_train);
    split.test.insert(split.test.end(), indices.begin() + n_train, indices.end());
  }
  return split;
}

std::vector<DatasetDoc> load_dataset(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw CorpusIoError("cannot open dataset: " + file.string());
  std::vector<DatasetDoc> docs;
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
    DatasetDoc out;
    try {
      out.text = doc.at("text").get<std::string>();
      if (doc.contains("stance") && !doc["stance"].is_null()) {
        out.stance = stance_from_string(doc["stance"].get<std::string>());
      }
      if (doc.contains("categories")) {
        for (const json& c : doc.at("categories")) {
          out.categories.insert(category_from_string(c.get<std::string>()));
        }
      }
    } catch (const json::exception& e) {
      fail(e.what());
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
    if (out.text.empty()) fail("empty text");
    docs.push_back(std::move(out));
  }
  return docs;
}

void save_dataset(const std::vector<DatasetDoc>& docs, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw CorpusIoError("cannot write dataset: " + file.string());
  for (const DatasetDoc& doc : docs) {
    json record;
    record["text"] = doc.text;
    if (doc.stance) record["stance"] = to_string(*doc.stance);
    json cats = json::array();
    for (Category c : doc.categories) cats.push_back(to_string(c));
    record["categories"] = std::move(cats);
    out << record.dump() << '\n';
  }
  if (!out) throw CorpusIoError("write failed: " + file.string());
}

std::vector<DatasetDoc> dataset_from_corpus(const Corpus& corpus) {
  std::vector<DatasetDoc> docs;
  for (const Debate& debate : corpus.debates) {
    for (const SpeechTurn& speech : debate.speeches) {
      docs.push_back({speech.text, speech.stance, speech.categories});
    }
  }
  return docs;
}

// ---------------------------------------------------------------------------
// One-vs-rest

OvrResult train_ovr(const std::vector<DatasetDoc>& docs, const TrainConfig& cfg, bool parallel) {
  OvrResult result;
  TrainConfig binary_cfg = cfg;
  binary_cfg.loss = LossKind::Softmax;  // two labels: plain softmax

  struct Job {
    Category category;
    std::vector<LabeledDoc> labeled;
  };
  std::vector<Job> jobs;
  for (Category category : kAllCategories) {
    std::size_t positives = 0;
    for (const DatasetDoc& doc : docs) {
      if (doc.categories.count(category)) ++positives;
    }
    if (positives == 0) {
      result.warnings.push_back("category '" + display_name(category) +
                                "' skipped: no positive examples");
      continue;
    }
    if (positives == docs.size()) {
      result.warnings.push_back("category '" + display_name(category) +
                                "' skipped: no negative examples");
      continue;
    }
    Job job;
    job.category = category;
    job.labeled.reserve(docs.size());
    for (const DatasetDoc& doc : docs) {
      job.labeled.push_back(
          {doc.text, doc.categories.count(category) ? kOvrPositive : kOvrNegative});
    }
    jobs.push_back(std::move(job));
  }

  auto run = [&binary_cfg](const Job& job) { return train(job.labeled, binary_cfg); };

  std::vector<TrainResult> trained(jobs.size());
  if (parallel) {
    // Models share no state, so concurrent training stays deterministic.
    std::vector<std::future<TrainResult>> futures;
    futures.reserve(jobs.size());
    for (const Job& job : jobs) {
      futures.push_back(std::async(std::launch::async, run, std::cref(job)));
    }
    for (std::size_t i = 0; i < futures.size(); ++i) trained[i] = futures[i].get();
  } else {
    for (std::size_t i = 0; i < jobs.size(); ++i) trained[i] = run(jobs[i]);
  }

  for (std::size_t i = 0; i < jobs.size(); ++i) {
    for (const std::string& w : trained[i].warnings) {
      result.warnings.push_back(display_name(jobs[i].category) + ": " + w);
    }
    result.models.emplace_back(jobs[i].category, std::move(trained[i].model));
  }
  return result;
}

// ---------------------------------------------------------------------------
// TF-IDF + hinge baseline

namespace {

std::vector<std::string> baseline_terms_of(const std::string& text) {
  const std::vector<std::string> tokens = alnum_tokens(text);
  std::vector<std::string> terms = tokens;
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    terms.push_back(tokens[i] + " " + tokens[i + 1]);
  }
  return terms;
}

// L2-normalized sparse tf-idf vector over the model's term space.
std::vector<std::pair<std::uint32_t, double>> baseline_vector(const BaselineModel& model,
                                                              const std::string& text) {
  std::map<std::uint32_t, double> tf;
  for (const std::string& term : baseline_terms_of(text)) {
    auto it = model.term_index.find(term);
    if (it != model.term_index.end()) tf[it->second] += 1.0;
  }
  std::vector<std::pair<std::uint32_t, double>> vec;
  vec.reserve(tf.size());
  double norm_sq = 0.0;
  for (const auto& [id, count] : tf) {
    const double value = count * model.idf[id];
    vec.emplace_back(id, value);
    norm_sq += value * value;
  }
  if (norm_sq > 0) {
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (auto& [id, value] : vec) value *= inv;
  }
  return vec;
}

double baseline_margin(const BaselineModel& model,
                       const std::vector<std::pair<std::uint32_t, double>>& vec) {
  double dot = model.bias;
  for (const auto& [id, value] : vec) dot += model.weights[id] * value;
  return dot;
}

}  // namespace

BaselineModel train_baseline(const std::vector<LabeledDoc>& train_docs,
                             const BaselineConfig& cfg) {
  std::set<std::string> label_set;
  for (const LabeledDoc& doc : train_docs) label_set.insert(doc.label);
  if (label_set.size() != 2) {
    throw std::invalid_argument("train_baseline: need exactly 2 labels, got " +
                                std::to_string(label_set.size()));
  }

  BaselineModel model;
  model.config = cfg;
  model.labels.assign(label_set.begin(), label_set.end());

  std::vector<std::size_t> df;
  for (const LabeledDoc& doc : train_docs) {
    std::set<std::string> seen;
    for (const std::string& term : baseline_terms_of(doc.text)) {
      if (!seen.insert(term).second) continue;
      auto it = model.term_index.find(term);
      if (it == model.term_index.end()) {
        model.term_index.emplace(term, static_cast<std::uint32_t>(model.terms.size()));
        model.terms.push_back(term);
        df.push_back(1);
      } else {
        ++df[it->second];
      }
    }
  }
  const double n = static_cast<double>(train_docs.size());
  model.idf.resize(model.terms.size());
  for (std::size_t t = 0; t < model.terms.size(); ++t) {
    model.idf[t] = std::log((1.0 + n) / (1.0 + static_cast<double>(df[t]))) + 1.0;
  }
  model.weights.assign(model.terms.size(), 0.0);
  model.bias = 0.0;

  std::vector<std::vector<std::pair<std::uint32_t, double>>> vectors(train_docs.size());
  std::vector<double> targets(train_docs.size());
  for (std::size_t i = 0; i < train_docs.size(); ++i) {
    vectors[i] = baseline_vector(model, train_docs[i].text);
    targets[i] = train_docs[i].label == model.labels[1] ? 1.0 : -1.0;
  }

  SplitRng rng(cfg.seed);
  std::vector<std::size_t> order(train_docs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t idx : order) {
      const double y = targets[idx];
      const double margin = y * baseline_margin(model, vectors[idx]);
      // L2 shrink on every step; the hinge term only inside the margin.
      const double shrink = 1.0 - cfg.learning_rate * cfg.l2;
      for (double& w : model.weights) w *= shrink;
      if (margin < 1.0) {
        for (const auto& [id, value] : vectors[idx]) {
          model.weights[id] += cfg.learning_rate * y * value;
        }
        model.bias += cfg.learning_rate * y;
      }
    }
  }
  return model;
}

Prediction predict(const BaselineModel& model, const std::string& text) {
  Prediction prediction;
  const auto vec = baseline_vector(model, text);
  const double margin = baseline_margin(model, vec);
  prediction.degenerate = vec.empty();
  const double p_positive = sigmoid(margin);
  prediction.probs = {1.0 - p_positive, p_positive};
  prediction.label = margin >= 0 ? model.labels[1] : model.labels[0];
  return prediction;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

template <typename Model>
EvalReport evaluate_with(const Model& model, const std::vector<LabeledDoc>& test_docs) {
  EvalReport report;
  report.labels = model.labels;
  report.confusion.assign(report.labels.size() * report.labels.size(), 0);
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < report.labels.size(); ++i) index[report.labels[i]] = i;

  for (const LabeledDoc& doc : test_docs) {
    const Prediction prediction = predict(model, doc.text);
    ++report.n_test;
    const bool match = prediction.label == doc.label;
    if (match) ++report.correct;
    auto truth = index.find(doc.label);
    auto predicted = index.find(prediction.label);
    if (truth != index.end() && predicted != index.end()) {
      ++report.confusion[truth->second * report.labels.size() + predicted->second];
    }
  }
  report.accuracy = report.n_test == 0
                        ? 0.0
                        : static_cast<double>(report.correct) / static_cast<double>(report.n_test);
  return report;
}

}  // namespace

EvalReport evaluate(const LinearEmbedModel& model, const std::vector<LabeledDoc>& test_docs) {
  return evaluate_with(model, test_docs);
}

EvalReport evaluate(const BaselineModel& model, const std::vector<LabeledDoc>& test_docs) {
  return evaluate_with(model, test_docs);
}

std::vector<CategoryEval> evaluate_ovr(const OvrResult& ovr,
                                       const std::vector<DatasetDoc>& test_docs) {
  std::vector<CategoryEval> rows;
  for (const auto& [category, model] : ovr.models) {
    std::vector<LabeledDoc> labeled;
    labeled.reserve(test_docs.size());
    for (const DatasetDoc& doc : test_docs) {
      labeled.push_back(
          {doc.text, doc.categories.count(category) ? kOvrPositive : kOvrNegative});
    }
    rows.push_back({category, evaluate(model, labeled)});
  }
  return rows;
}

std::vector<SweepRow> epoch_sweep(const std::vector<LabeledDoc>& docs, const TrainConfig& cfg,
                                  const std::vector<int>& epoch_list) {
  if (epoch_list.empty()) throw std::invalid_argument("epoch_sweep: empty epoch list");
  for (std::size_t i = 1; i < epoch_list.size(); ++i) {
    if (epoch_list[i] <= epoch_list[i - 1]) {
      throw std::invalid_argument("epoch_sweep: epoch list must be ascending");
    }
  }
  std::vector<std::string> strata;
  strata.reserve(docs.size());
  for (const LabeledDoc& doc : docs) strata.push_back(doc.label);
  const Split split = split_train_test(strata, 0.8, cfg.seed);

  std::vector<LabeledDoc> train_docs;
  std::vector<LabeledDoc> test_docs;
  train_docs.reserve(split.train.size());
  test_docs.reserve(split.test.size());
  for (std::size_t i : split.train) train_docs.push_back(docs[i]);
  for (std::size_t i : split.test) test_docs.push_back(docs[i]);

  std::vector<SweepRow> rows;
  for (int epochs : epoch_list) {
    TrainConfig row_cfg = cfg;
    row_cfg.epochs = epochs;
    const TrainResult trained = train(train_docs, row_cfg);
    rows.push_back({epochs, evaluate(trained.model, test_docs).accuracy});
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

static_assert(std::endian::native == std::endian::little,
              "model containers are little-endian; add byte swapping for this platform");

void put_bytes(std::ostream& out, const void* data, std::size_t size) {
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
}

template <typename T>
void put_pod(std::ostream& out, T value) {
  put_bytes(out, &value, sizeof(T));
}

void put_string(std::ostream& out, const std::string& s) {
  put_pod(out, static_cast<std::uint32_t>(s.size()));
  put_bytes(out, s.data(), s.size());
}

void get_bytes(std::istream& in, void* data, std::size_t size, const char* what) {
  in.read(static_cast<char*>(data), static_cast<std::streamsize>(size));
  if (static_cast<std::size_t>(in.gcount()) != size) {
    throw std::runtime_error(std::string("model file truncated reading ") + what);
  }
}

template <typename T>
T get_pod(std::istream& in, const char* what) {
  T value;
  get_bytes(in, &value, sizeof(T), what);
  return value;
}

std::string get_string(std::istream& in, const char* what) {
  const auto size = get_pod<std::uint32_t>(in, what);
  std::string s(size, '\0');
  if (size > 0) get_bytes(in, s.data(), size, what);
  return s;
}

constexpr char kModelMagic[5] = {'D', 'F', 'M', 'D', '1'};
constexpr char kOvrMagic[5] = {'D', 'F', 'O', 'V', '1'};
constexpr char kBaselineMagic[5] = {'D', 'F', 'B', 'L', '1'};

void write_model(std::ostream& out, const LinearEmbedModel& model) {
  put_bytes(out, kModelMagic, sizeof(kModelMagic));
  const TrainConfig& cfg = model.config;
  put_pod<std::uint8_t>(out, cfg.loss == LossKind::Softmax ? 0 : 1);
  put_pod<std::uint8_t>(out, cfg.char_ngrams ? 1 : 0);
  put_pod<double>(out, cfg.learning_rate);
  put_pod<std::int32_t>(out, cfg.dim);
  put_pod<std::int32_t>(out, cfg.word_ngram);
  put_pod<std::int32_t>(out, cfg.epochs);
  put_pod<std::uint64_t>(out, cfg.bucket_count);
  put_pod<std::int32_t>(out, cfg.min_token_count);
  put_pod<std::uint64_t>(out, cfg.seed);
  put_pod<std::int32_t>(out, cfg.char_ngram_min);
  put_pod<std::int32_t>(out, cfg.char_ngram_max);

  put_pod<std::uint32_t>(out, static_cast<std::uint32_t>(model.labels.size()));
  for (std::size_t i = 0; i < model.labels.size(); ++i) {
    put_string(out, model.labels[i]);
    put_pod<std::uint64_t>(out, model.label_counts[i]);
  }
  put_pod<std::uint32_t>(out, static_cast<std::uint32_t>(model.vocab.size()));
  for (const std::string& token : model.vocab.tokens()) put_string(out, token);

  put_pod<std::uint64_t>(out, model.embeddings.size());
  put_bytes(out, model.embeddings.data(), model.embeddings.size() * sizeof(float));
  put_pod<std::uint64_t>(out, model.output.size());
  put_bytes(out, model.output.data(), model.output.size() * sizeof(float));
}

LinearEmbedModel read_model(std::istream& in) {
  char magic[5];
  get_bytes(in, magic, sizeof(magic), "magic");
  if (std::memcmp(magic, kModelMagic, sizeof(magic)) != 0) {
    throw std::runtime_error("not a DFMD1 model file");
  }
  LinearEmbedModel model;
  TrainConfig& cfg = model.config;
  cfg.loss = get_pod<std::uint8_t>(in, "loss") == 0 ? LossKind::Softmax
                                                    : LossKind::HierarchicalSoftmax;
  cfg.char_ngrams = get_pod<std::uint8_t>(in, "char_ngrams") != 0;
  cfg.learning_rate = get_pod<double>(in, "learning_rate");
  cfg.dim = get_pod<std::int32_t>(in, "dim");
  cfg.word_ngram = get_pod<std::int32_t>(in, "word_ngram");
  cfg.epochs = get_pod<std::int32_t>(in, "epochs");
  cfg.bucket_count = get_pod<std::uint64_t>(in, "bucket_count");
  cfg.min_token_count = get_pod<std::int32_t>(in, "min_token_count");
  cfg.seed = get_pod<std::uint64_t>(in, "seed");
  cfg.char_ngram_min = get_pod<std::int32_t>(in, "char_ngram_min");
  cfg.char_ngram_max = get_pod<std::int32_t>(in, "char_ngram_max");
  cfg.validate();

  const auto n_labels = get_pod<std::uint32_t>(in, "label count");
  for (std::uint32_t i = 0; i < n_labels; ++i) {
    model.labels.push_back(get_string(in, "label"));
    model.label_counts.push_back(get_pod<std::uint64_t>(in, "label count value"));
  }
  const auto n_vocab = get_pod<std::uint32_t>(in, "vocab size");
  for (std::uint32_t i = 0; i < n_vocab; ++i) model.vocab.add(get_string(in, "vocab token"));

  const auto n_emb = get_pod<std::uint64_t>(in, "embedding size");
  const std::size_t dim = static_cast<std::size_t>(cfg.dim);
  if (n_emb != model.feature_rows() * dim) {
    throw std::runtime_error("model file corrupt: embedding size mismatch");
  }
  model.embeddings.resize(n_emb);
  get_bytes(in, model.embeddings.data(), n_emb * sizeof(float), "embeddings");

  const auto n_out = get_pod<std::uint64_t>(in, "output size");
  const std::size_t expected_rows =
      cfg.loss == LossKind::Softmax ? model.labels.size() : model.labels.size() - 1;
  if (n_out != expected_rows * dim) {
    throw std::runtime_error("model file corrupt: output size mismatch");
  }
  model.output.resize(n_out);
  get_bytes(in, model.output.data(), n_out * sizeof(float), "output");
  return model;
}

}  // namespace

void save_model(const LinearEmbedModel& model, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model file: " + file.string());
  write_model(out, model);
  if (!out) throw std::runtime_error("model write failed: " + file.string());
}

LinearEmbedModel load_model(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file: " + file.string());
  return read_model(in);
}

void save_ovr(const OvrResult& ovr, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model file: " + file.string());
  put_bytes(out, kOvrMagic, sizeof(kOvrMagic));
  put_pod<std::uint32_t>(out, static_cast<std::uint32_t>(ovr.models.size()));
  for (const auto& [category, model] : ovr.models) {
    put_string(out, to_string(category));
    std::ostringstream blob;
    write_model(blob, model);
    const std::string bytes = blob.str();
    put_pod<std::uint64_t>(out, bytes.size());
    put_bytes(out, bytes.data(), bytes.size());
  }
  if (!out) throw std::runtime_error("model write failed: " + file.string());
}

OvrResult load_ovr(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file: " + file.string());
  char magic[5];
  get_bytes(in, magic, sizeof(magic), "magic");
  if (std::memcmp(magic, kOvrMagic, sizeof(magic)) != 0) {
    throw std::runtime_error("not a DFOV1 model file");
  }
  OvrResult ovr;
  const auto count = get_pod<std::uint32_t>(in, "model count");
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::string category = get_string(in, "category");
    get_pod<std::uint64_t>(in, "blob size");  // length prefix; models are read inline
    ovr.models.emplace_back(category_from_string(category), read_model(in));
  }
  return ovr;
}

void save_baseline(const BaselineModel& model, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model file: " + file.string());
  put_bytes(out, kBaselineMagic, sizeof(kBaselineMagic));
  put_pod<double>(out, model.config.learning_rate);
  put_pod<double>(out, model.config.l2);
  put_pod<std::int32_t>(out, model.config.epochs);
  put_pod<std::uint64_t>(out, model.config.seed);
  put_string(out, model.labels[0]);
  put_string(out, model.labels[1]);
  put_pod<std::uint32_t>(out, static_cast<std::uint32_t>(model.terms.size()));
  for (const std::string& term : model.terms) put_string(out, term);
  put_bytes(out, model.idf.data(), model.idf.size() * sizeof(double));
  put_bytes(out, model.weights.data(), model.weights.size() * sizeof(double));
  put_pod<double>(out, model.bias);
  if (!out) throw std::runtime_error("model write failed: " + file.string());
}

BaselineModel load_baseline(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file: " + file.string());
  char magic[5];
  get_bytes(in, magic, sizeof(magic), "magic");
  if (std::memcmp(magic, kBaselineMagic, sizeof(magic)) != 0) {
    throw std::runtime_error("not a DFBL1 model file");
  }
  BaselineModel model;
  model.config.learning_rate = get_pod<double>(in, "learning_rate");
  model.config.l2 = get_pod<double>(in, "l2");
  model.config.epochs = get_pod<std::int32_t>(in, "epochs");
  model.config.seed = get_pod<std::uint64_t>(in, "seed");
  model.labels.push_back(get_string(in, "label"));
  model.labels.push_back(get_string(in, "label"));
  const auto n_terms = get_pod<std::uint32_t>(in, "term count");
  for (std::uint32_t i = 0; i < n_terms; ++i) {
    model.term_index.emplace(get_string(in, "term"), i);
    model.terms.push_back({});
  }
  for (const auto& [term, id] : model.term_index) model.terms[id] = term;
  model.idf.resize(n_terms);
  get_bytes(in, model.idf.data(), n_terms * sizeof(double), "idf");
  model.weights.resize(n_terms);
  get_bytes(in, model.weights.data(), n_terms * sizeof(double), "weights");
  model.bias = get_pod<double>(in, "bias");
  return model;
}

std::string peek_model_magic(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file: " + file.string());
  char magic[5];
  get_bytes(in, magic, sizeof(magic), "magic");
  return std::string(magic, sizeof(magic));
}

}  // namespace debateforge
