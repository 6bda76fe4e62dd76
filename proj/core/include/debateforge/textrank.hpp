#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace debateforge {

struct RankConfig {
  double damping = 0.85;
  double epsilon = 1e-6;
  int max_iterations = 100;
  double summary_ratio = 0.2;
  double keyword_ratio = 0.05;
  int cooccurrence_window = 2;

  // Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

// Weighted undirected graph over sentences or tokens. Edges are stored once;
// both directions are implied.
struct RankedGraph {
  struct Edge {
    std::size_t a;
    std::size_t b;
    double weight;
  };

  std::size_t node_count = 0;
  std::vector<Edge> edges;
  std::vector<double> scores;
  int iterations = 0;  // filled by rank_nodes

  // No self-loops; weight must be finite and >= 0.
  void add_edge(std::size_t a, std::size_t b, double weight);
};

class StopwordList {
 public:
  static StopwordList load(const std::filesystem::path& file);
  static const StopwordList& packaged();

  bool contains(const std::string& token) const { return words_.count(token) != 0; }
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

// Sentence splitting on . ! ? followed by whitespace and a capital, with an
// abbreviation exception list (Shri., Dr., Hon., No., Rs.).
std::vector<std::string> split_sentences(const std::string& text);

// Tokens for similarity: lowercased alphabetic tokens minus stopwords.
std::vector<std::string> similarity_tokens(const std::string& sentence, const StopwordList& stop);

// |distinct shared tokens| / (log|a| + log|b|), natural log over the filtered
// token counts; 0 when either side has fewer than 2 tokens. Symmetric.
double sentence_similarity(const std::vector<std::string>& a, const std::vector<std::string>& b);

// Weighted PageRank: score(i) = (1-d) + d * sum_j w_ij / outsum_j * score(j),
// iterated from all-ones until the max per-node delta drops below epsilon or
// max_iterations is hit. Isolated nodes score (1-d).
void rank_nodes(RankedGraph& graph, const RankConfig& cfg);

// Extractive summary: top ceil(summary_ratio * n) sentences by score (ties to
// the earlier sentence), re-emitted in document order joined by newlines.
std::string summarize(const std::string& text, const RankConfig& cfg, const StopwordList& stop);

struct ScoredToken {
  std::string token;
  double score;
};

// Unique tokens of the co-occurrence graph ranked by score descending, ties
// broken lexicographically.
std::vector<ScoredToken> rank_tokens(const std::string& text, const RankConfig& cfg,
                                     const StopwordList& stop);

// Top ceil(keyword_ratio * unique_tokens) ranked tokens; selected tokens that
// sit adjacent in the original text are merged into multiword keyphrases.
std::vector<std::string> extract_keywords(const std::string& text, const RankConfig& cfg,
                                          const StopwordList& stop);

}  // namespace debateforge
