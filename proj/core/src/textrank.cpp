#include "debateforge/textrank.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "debateforge/default_data.hpp"
#include "debateforge/text_util.hpp"

namespace debateforge {

namespace {

const std::unordered_set<std::string>& abbreviations() {
  static const std::unordered_set<std::string> kAbbrev = {"shri.", "dr.", "hon.", "no.", "rs."};
  return kAbbrev;
}

// Word ending at text[i] inclusive (i points at the '.').
std::string word_ending_at(const std::string& text, std::size_t i) {
  std::size_t start = i;
  while (start > 0 && !std::isspace(static_cast<unsigned char>(text[start - 1]))) --start;
  return to_lower(std::string_view(text).substr(start, i - start + 1));
}

}  // namespace

void RankConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("RankConfig: " + what); };
  if (!(damping > 0.0 && damping < 1.0)) fail("damping must be in (0,1)");
  if (!(epsilon > 0.0)) fail("epsilon must be positive");
  if (max_iterations < 1) fail("max_iterations must be >= 1");
  if (!(summary_ratio > 0.0 && summary_ratio <= 1.0)) fail("summary_ratio must be in (0,1]");
  if (!(keyword_ratio > 0.0 && keyword_ratio <= 1.0)) fail("keyword_ratio must be in (0,1]");
  if (cooccurrence_window < 2) fail("cooccurrence_window must be >= 2");
}

void RankedGraph::add_edge(std::size_t a, std::size_t b, double weight) {
  if (a == b) throw std::invalid_argument("RankedGraph: self-loop");
  if (!(weight >= 0.0) || !std::isfinite(weight)) {
    throw std::invalid_argument("RankedGraph: edge weight must be finite and >= 0");
  }
  if (a >= node_count || b >= node_count) throw std::invalid_argument("RankedGraph: node out of range");
  edges.push_back({a, b, weight});
}

StopwordList StopwordList::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open stopword file: " + file.string());
  StopwordList list;
  std::string line;
  while (std::getline(in, line)) {
    std::string token = trim(line);
    if (token.empty() || token[0] == '#') continue;
    list.words_.insert(to_lower(token));
  }
  return list;
}

const StopwordList& StopwordList::packaged() {
  static const StopwordList kPackaged = [] {
    StopwordList list;
    std::istringstream in{std::string(data::kDefaultStopwords)};
    std::string line;
    while (std::getline(in, line)) {
      std::string token = trim(line);
      if (token.empty() || token[0] == '#') continue;
      list.words_.insert(to_lower(token));
    }
    return list;
  }();
  return kPackaged;
}

std::vector<std::string> split_sentences(const std::string& text) {
  std::vector<std::string> sentences;
  std::size_t start = 0;
  std::size_t i = 0;
  auto flush = [&](std::size_t end) {
    std::string s = trim(std::string_view(text).substr(start, end - start));
    if (!s.empty()) sentences.push_back(std::move(s));
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '.' || c == '!' || c == '?') {
      std::size_t run_start = i;
      while (i + 1 < text.size() &&
             (text[i + 1] == '.' || text[i + 1] == '!' || text[i + 1] == '?')) {
        ++i;
      }
      bool abbrev = (i == run_start && c == '.' && abbreviations().count(word_ending_at(text, i)));
      if (!abbrev) {
        std::size_t j = i + 1;
        bool saw_space = false;
        while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) {
          saw_space = true;
          ++j;
        }
        bool capital_next = j < text.size() && std::isupper(static_cast<unsigned char>(text[j]));
        if (j >= text.size() || (saw_space && capital_next)) {
          flush(i + 1);
          start = j;
          i = j;
          continue;
        }
      }
    }
    ++i;
  }
  if (start < text.size()) flush(text.size());
  return sentences;
}

std::vector<std::string> similarity_tokens(const std::string& sentence, const StopwordList& stop) {
  std::vector<std::string> tokens;
  for (auto& t : alpha_tokens(sentence)) {
    if (!stop.contains(t)) tokens.push_back(std::move(t));
  }
  return tokens;
}

double sentence_similarity(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.size() < 2 || b.size() < 2) return 0.0;
  std::unordered_set<std::string> set_a(a.begin(), a.end());
  std::unordered_set<std::string> shared;
  for (const auto& t : b) {
    if (set_a.count(t)) shared.insert(t);
  }
  return static_cast<double>(shared.size()) /
         (std::log(static_cast<double>(a.size())) + std::log(static_cast<double>(b.size())));
}

void rank_nodes(RankedGraph& graph, const RankConfig& cfg) {
  cfg.validate();
  const std::size_t n = graph.node_count;
  if (n == 0) throw std::invalid_argument("rank_nodes: graph has no nodes");

  // Adjacency with positive-weight edges only; zero-weight edges carry no mass.
  std::vector<std::vector<std::pair<std::size_t, double>>> adj(n);
  std::vector<double> out_sum(n, 0.0);
  for (const auto& e : graph.edges) {
    if (e.weight <= 0.0) continue;
    adj[e.a].emplace_back(e.b, e.weight);
    adj[e.b].emplace_back(e.a, e.weight);
    out_sum[e.a] += e.weight;
    out_sum[e.b] += e.weight;
  }

  const double d = cfg.damping;
  std::vector<double> scores(n, 1.0);
  std::vector<double> next(n, 0.0);
  int iter = 0;
  while (iter < cfg.max_iterations) {
    ++iter;
    double max_delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0.0;
      for (const auto& [j, w] : adj[i]) {
        sum += w / out_sum[j] * scores[j];
      }
      next[i] = (1.0 - d) + d * sum;
      max_delta = std::max(max_delta, std::fabs(next[i] - scores[i]));
    }
    scores.swap(next);
    if (max_delta < cfg.epsilon) break;
  }
  graph.scores = std::move(scores);
  graph.iterations = iter;
}

std::string summarize(const std::string& text, const RankConfig& cfg, const StopwordList& stop) {
  cfg.validate();
  std::vector<std::string> sentences = split_sentences(text);
  if (sentences.empty()) return "";
  const std::size_t n = sentences.size();

  std::vector<std::vector<std::string>> tokens;
  tokens.reserve(n);
  for (const auto& s : sentences) tokens.push_back(similarity_tokens(s, stop));

  RankedGraph graph;
  graph.node_count = n;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double sim = sentence_similarity(tokens[i], tokens[j]);
      if (sim > 0.0) graph.add_edge(i, j, sim);
    }
  }
  rank_nodes(graph, cfg);

  std::size_t k = static_cast<std::size_t>(
      std::ceil(cfg.summary_ratio * static_cast<double>(n)));
  k = std::min(std::max<std::size_t>(k, 1), n);

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (graph.scores[a] != graph.scores[b]) return graph.scores[a] > graph.scores[b];
    return a < b;
  });
  order.resize(k);
  std::sort(order.begin(), order.end());

  std::string out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i > 0) out.push_back('\n');
    out += sentences[order[i]];
  }
  return out;
}

namespace {

struct TokenGraph {
  std::vector<std::string> tokens;                      // unique, first-seen order
  std::unordered_map<std::string, std::size_t> index;   // token -> node
  RankedGraph graph;
};

TokenGraph build_token_graph(const std::string& text, const RankConfig& cfg,
                             const StopwordList& stop) {
  TokenGraph tg;
  std::vector<std::string> seq;
  for (auto& t : alpha_tokens(text)) {
    if (stop.contains(t)) continue;
    if (!tg.index.count(t)) {
      tg.index.emplace(t, tg.tokens.size());
      tg.tokens.push_back(t);
    }
    seq.push_back(std::move(t));
  }
  tg.graph.node_count = tg.tokens.size();

  std::map<std::pair<std::size_t, std::size_t>, double> weights;
  const std::size_t window = static_cast<std::size_t>(cfg.cooccurrence_window);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    for (std::size_t j = i + 1; j < seq.size() && j < i + window; ++j) {
      std::size_t a = tg.index[seq[i]];
      std::size_t b = tg.index[seq[j]];
      if (a == b) continue;
      weights[{std::min(a, b), std::max(a, b)}] += 1.0;
    }
  }
  for (const auto& [key, w] : weights) tg.graph.add_edge(key.first, key.second, w);
  return tg;
}

}  // namespace

std::vector<ScoredToken> rank_tokens(const std::string& text, const RankConfig& cfg,
                                     const StopwordList& stop) {
  cfg.validate();
  TokenGraph tg = build_token_graph(text, cfg, stop);
  if (tg.tokens.empty()) return {};
  rank_nodes(tg.graph, cfg);

  std::vector<ScoredToken> ranked;
  ranked.reserve(tg.tokens.size());
  for (std::size_t i = 0; i < tg.tokens.size(); ++i) {
    ranked.push_back({tg.tokens[i], tg.graph.scores[i]});
  }
  std::sort(ranked.begin(), ranked.end(), [](const ScoredToken& a, const ScoredToken& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.token < b.token;
  });
  return ranked;
}

std::vector<std::string> extract_keywords(const std::string& text, const RankConfig& cfg,
                                          const StopwordList& stop) {
  std::vector<ScoredToken> ranked = rank_tokens(text, cfg, stop);
  if (ranked.empty()) return {};

  std::size_t k = static_cast<std::size_t>(
      std::ceil(cfg.keyword_ratio * static_cast<double>(ranked.size())));
  k = std::min(std::max<std::size_t>(k, 1), ranked.size());

  std::unordered_map<std::string, double> selected;
  for (std::size_t i = 0; i < k; ++i) selected.emplace(ranked[i].token, ranked[i].score);

  // Merge selected tokens that are adjacent in the original text (stopwords
  // and unselected tokens break a run; so does a repeated token).
  std::vector<std::string> original = alpha_tokens(text);
  std::map<std::string, double> phrases;  // phrase -> score (max over members)
  std::unordered_set<std::string> absorbed;
  std::size_t i = 0;
  while (i < original.size()) {
    if (!selected.count(original[i])) {
      ++i;
      continue;
    }
    std::vector<std::string> run = {original[i]};
    std::unordered_set<std::string> in_run = {original[i]};
    std::size_t j = i + 1;
    while (j < original.size() && selected.count(original[j]) && !in_run.count(original[j])) {
      run.push_back(original[j]);
      in_run.insert(original[j]);
      ++j;
    }
    if (run.size() >= 2) {
      std::string phrase;
      double score = 0.0;
      for (const auto& t : run) {
        if (!phrase.empty()) phrase.push_back(' ');
        phrase += t;
        score = std::max(score, selected[t]);
        absorbed.insert(t);
      }
      auto [it, inserted] = phrases.emplace(phrase, score);
      if (!inserted) it->second = std::max(it->second, score);
    }
    i = j;
  }

  struct Out {
    std::string text;
    double score;
  };
  std::vector<Out> outs;
  for (const auto& [phrase, score] : phrases) outs.push_back({phrase, score});
  for (std::size_t r = 0; r < k; ++r) {
    if (!absorbed.count(ranked[r].token)) outs.push_back({ranked[r].token, ranked[r].score});
  }
  std::sort(outs.begin(), outs.end(), [](const Out& a, const Out& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.text < b.text;
  });

  std::vector<std::string> keywords;
  keywords.reserve(outs.size());
  for (auto& o : outs) keywords.push_back(std::move(o.text));
  return keywords;
}

}  // namespace debateforge
