#include "mei/assign.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "mei/errors.hpp"

namespace mei {

namespace {

/// Assignment cost with a dominated tie-break component. The solver
/// minimizes `main` exactly; among main-optimal solutions the `tie`
/// component selects the lexicographically smallest matching.
struct LexCost {
  double main = 0.0;
  long double tie = 0.0L;

  LexCost operator+(const LexCost& o) const { return {main + o.main, tie + o.tie}; }
  LexCost operator-(const LexCost& o) const { return {main - o.main, tie - o.tie}; }
  bool operator<(const LexCost& o) const {
    if (main != o.main) return main < o.main;
    return tie < o.tie;
  }
};

constexpr double kInfCost = 1e300;

/// Jonker-Volgenant style shortest augmenting path solver for the square
/// min-cost assignment problem, O(n^3). `cost(i, j)` is 0-based.
template <typename CostFn>
std::vector<int> solve_min_assignment(int n, const CostFn& cost) {
  std::vector<LexCost> u(n + 1), v(n + 1);
  std::vector<int> match(n + 1, 0);  // column (1-based) -> row (1-based)
  for (int i = 1; i <= n; ++i) {
    std::vector<LexCost> minv(n + 1, LexCost{kInfCost, 0.0L});
    std::vector<int> way(n + 1, 0);
    std::vector<char> used(n + 1, false);
    int j0 = 0;
    match[0] = i;
    do {
      used[j0] = true;
      int i0 = match[j0];
      int j1 = 0;
      LexCost delta{kInfCost, 0.0L};
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        LexCost cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] = u[match[j]] + delta;
          v[j] = v[j] - delta;
        } else {
          minv[j] = minv[j] - delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  return match;
}

std::string lowercase(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::uint64_t fnv1a(const std::string& s, std::uint64_t seed) {
  std::uint64_t h = 14695981039346656037ull ^ seed;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<double> hash_text_vector(const std::string& text, std::size_t dimension) {
  std::vector<double> v(dimension, 0.0);
  std::string lowered = lowercase(text);
  std::string padded = "^" + lowered + "$";
  for (std::size_t n = 2; n <= 3; ++n) {
    if (padded.size() < n) continue;
    for (std::size_t i = 0; i + n <= padded.size(); ++i) {
      std::uint64_t h = fnv1a(padded.substr(i, n), n);
      double sign = (h >> 32) & 1 ? 1.0 : -1.0;
      v[h % dimension] += sign;
    }
  }
  double norm = 0.0;
  for (double x : v) norm += x * x;
  if (norm > 0.0) {
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
  }
  return v;
}

}  // namespace

std::vector<std::pair<int, int>> kuhn_munkres_max(const ScoreMatrix& matrix) {
  const int rows = matrix.rows;
  const int cols = matrix.cols;
  if (rows < 1 || cols < 1) return {};
  const int n = std::max(rows, cols);

  double pad = 0.0;
  for (double x : matrix.data) pad = std::max(pad, -x);
  pad += 1.0;  // strictly worse (higher cost) than any negated real entry

  // Row weights make the tie component a positional radix encoding of the
  // column sequence, so minimizing it picks the lexicographically smallest
  // matching. Exact while (n+1)^rows fits a long double; beyond that the
  // tie-break degrades gracefully and the main objective is unaffected.
  std::vector<long double> weight(n, 0.0L);
  for (int i = 0; i < rows; ++i) {
    weight[i] = std::pow(static_cast<long double>(n + 1), static_cast<long double>(rows - 1 - i));
  }

  auto cost = [&](int i, int j) -> LexCost {
    double main = (i < rows && j < cols) ? -matrix.at(i, j) : pad;
    return LexCost{main, weight[i] * j};
  };
  std::vector<int> match = solve_min_assignment(n, cost);

  std::vector<std::pair<int, int>> pairs;
  for (int j = 1; j <= n; ++j) {
    int i = match[j];
    if (i >= 1 && i - 1 < rows && j - 1 < cols) pairs.emplace_back(i - 1, j - 1);
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

std::size_t levenshtein(const std::string& a, const std::string& b) {
  const std::size_t la = a.size();
  const std::size_t lb = b.size();
  std::vector<std::size_t> prev(lb + 1), cur(lb + 1);
  for (std::size_t j = 0; j <= lb; ++j) prev[j] = j;
  for (std::size_t i = 1; i <= la; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= lb; ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[lb];
}

double fuzzy_ratio(const std::string& a, const std::string& b) {
  std::string fa = lowercase(a);
  std::string fb = lowercase(b);
  std::size_t longest = std::max(fa.size(), fb.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein(fa, fb)) / static_cast<double>(longest);
}

double fuzzy_score(const std::string& phrase, const Cluster& cluster,
                   const std::vector<std::string>& tokens) {
  double total = 0.0;
  for (const auto& m : cluster.mentions) total += fuzzy_ratio(phrase, span_text(tokens, m));
  return total;
}

std::vector<double> HashEmbeddingProvider::embed_phrase(const std::string& phrase,
                                                        const MeiDocument&) const {
  return hash_text_vector(phrase, dimension_);
}

std::vector<double> HashEmbeddingProvider::embed_cluster(const Cluster& cluster,
                                                         const MeiDocument& doc) const {
  std::vector<double> mean(dimension_, 0.0);
  if (cluster.mentions.empty()) return mean;
  for (const auto& m : cluster.mentions) {
    auto v = hash_text_vector(span_text(doc.tokens, m, doc.doc_id), dimension_);
    for (std::size_t i = 0; i < dimension_; ++i) mean[i] += v[i];
  }
  for (double& x : mean) x /= static_cast<double>(cluster.mentions.size());
  return mean;
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw DimensionMismatch(a.size(), b.size());
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

PredictionSet map_clusters(const MeiDocument& doc, const std::vector<Cluster>& clusters,
                           MapMode mode, const EmbeddingProvider* provider) {
  if (mode == MapMode::kCosine && !provider) throw MissingProvider();

  std::set<Span> seen;
  for (const auto& c : clusters) {
    for (const auto& m : c.mentions) {
      if (!seen.insert(m).second) throw DuplicateSpan(doc.doc_id, m.start, m.end);
      span_text(doc.tokens, m, doc.doc_id);  // bounds check
    }
  }

  PredictionSet out;
  out.doc_id = doc.doc_id;
  if (doc.entities.empty() || clusters.empty()) return out;

  ScoreMatrix matrix(static_cast<int>(doc.entities.size()), static_cast<int>(clusters.size()));
  if (mode == MapMode::kFuzzy) {
    for (int i = 0; i < matrix.rows; ++i) {
      for (int j = 0; j < matrix.cols; ++j) {
        matrix.at(i, j) = fuzzy_score(doc.entities[i].phrase, clusters[j], doc.tokens);
      }
    }
  } else {
    std::vector<std::vector<double>> phrase_vecs;
    for (const auto& e : doc.entities) phrase_vecs.push_back(provider->embed_phrase(e.phrase, doc));
    std::vector<std::vector<double>> cluster_vecs;
    for (const auto& c : clusters) cluster_vecs.push_back(provider->embed_cluster(c, doc));
    for (int i = 0; i < matrix.rows; ++i) {
      for (int j = 0; j < matrix.cols; ++j) {
        matrix.at(i, j) = cosine_similarity(phrase_vecs[i], cluster_vecs[j]);
      }
    }
  }

  for (const auto& [row, col] : kuhn_munkres_max(matrix)) {
    int entity_id = doc.entities[row].entity_id;
    for (const auto& m : clusters[col].mentions) {
      out.assignments.push_back(Assignment{m, entity_id});
    }
  }
  canonicalize_assignments(out);
  return out;
}

}  // namespace mei
