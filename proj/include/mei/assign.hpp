#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "mei/types.hpp"

namespace mei {

/// Dense rows-by-cols score matrix, higher is better.
struct ScoreMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  ScoreMatrix() = default;
  ScoreMatrix(int rows, int cols) : rows(rows), cols(cols), data(std::size_t(rows) * cols, 0.0) {}

  double& at(int r, int c) { return data[std::size_t(r) * cols + c]; }
  double at(int r, int c) const { return data[std::size_t(r) * cols + c]; }
};

/// Maximum-score assignment of size min(rows, cols), returned as
/// (row, col) pairs sorted by row. Among equal-score matchings the
/// lexicographically smallest one (by row, then col) is returned.
std::vector<std::pair<int, int>> kuhn_munkres_max(const ScoreMatrix& matrix);

std::size_t levenshtein(const std::string& a, const std::string& b);

/// Normalized Levenshtein similarity on case-folded strings in [0, 1].
/// Two empty strings score 1.
double fuzzy_ratio(const std::string& a, const std::string& b);

/// Sum of fuzzy_ratio(phrase, mention text) over the cluster's mentions.
double fuzzy_score(const std::string& phrase, const Cluster& cluster,
                   const std::vector<std::string>& tokens);

/// Vector source for cosine-based mapping. Implementations must be
/// deterministic and fixed-dimension.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::vector<double> embed_phrase(const std::string& phrase,
                                           const MeiDocument& doc) const = 0;
  virtual std::vector<double> embed_cluster(const Cluster& cluster,
                                            const MeiDocument& doc) const = 0;
};

/// Deterministic text-hash embeddings: character n-gram features of the
/// phrase; clusters embed as the mean of their mention-text vectors.
class HashEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit HashEmbeddingProvider(std::size_t dimension = 64) : dimension_(dimension) {}
  std::vector<double> embed_phrase(const std::string& phrase, const MeiDocument& doc) const override;
  std::vector<double> embed_cluster(const Cluster& cluster, const MeiDocument& doc) const override;

 private:
  std::size_t dimension_;
};

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

enum class MapMode { kFuzzy, kCosine };

/// Labels every mention of each matched cluster with its entity; mentions of
/// unmatched clusters are omitted. Throws MissingProvider in cosine mode
/// without a provider and DuplicateSpan when input clusters share a span.
PredictionSet map_clusters(const MeiDocument& doc, const std::vector<Cluster>& clusters,
                           MapMode mode, const EmbeddingProvider* provider = nullptr);

}  // namespace mei
