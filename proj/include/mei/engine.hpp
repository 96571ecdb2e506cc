#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mei/types.hpp"

namespace mei {

using Vec = std::vector<double>;

/// Number of log2 distance buckets (0..8); distances of 256 and beyond share
/// the top bucket.
constexpr int kDistanceBuckets = 9;

/// Pairwise scoring context: how far back (in mention ordinals) the entity
/// was last assigned, bucketed, or none() when it never was.
struct Metadata {
  std::optional<int> distance_bucket;

  static Metadata none() { return Metadata{}; }
  static Metadata at_bucket(int bucket) { return Metadata{bucket}; }

  bool operator==(const Metadata&) const = default;
};

/// bucket = min(8, floor(log2(d))) for d >= 1; throws NonPositiveDistance.
int bucket_distance(long d);

/// Mention-vs-entity compatibility function.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual double score(const Vec& mention, const Vec& entity, const Metadata& metadata) const = 0;
};

class DotProductScorer : public Scorer {
 public:
  double score(const Vec& mention, const Vec& entity, const Metadata&) const override;
};

/// Adapts an arbitrary callable, handy for tests and experiments.
class FunctionScorer : public Scorer {
 public:
  using Fn = std::function<double(const Vec&, const Vec&, const Metadata&)>;
  explicit FunctionScorer(Fn fn) : fn_(std::move(fn)) {}
  double score(const Vec& mention, const Vec& entity, const Metadata& metadata) const override {
    return fn_(mention, entity, metadata);
  }

 private:
  Fn fn_;
};

/// One tracked entity's working-memory state. The designative phrase counts
/// as the first observation, so assigned_count starts at 1.
struct MemoryEntry {
  int entity_id = 0;
  Vec current;
  Vec initial;
  long assigned_count = 1;
  std::optional<long> last_assigned_ordinal;
};

struct CandidateMention {
  Span span;
  Vec vec;
};

/// Running mean with `count` prior observations: (count*current + mention) / (count+1).
Vec running_mean_update(const Vec& current, const Vec& mention, long count);

/// Scores every mention independently against the initial entity vectors
/// (metadata always none); label = best entity if its score is strictly
/// above tau, otherwise null. Output is order-independent.
PredictionSet identify_static(const std::string& doc_id,
                              const std::vector<CandidateMention>& mentions,
                              const std::vector<MemoryEntry>& entities, const Scorer& scorer,
                              double tau = 0.0);

/// Processes mentions strictly in the given order; each mention's entity
/// scores average the current and initial slots, and an assignment updates
/// the winner's current vector, count, and last-assigned ordinal.
PredictionSet identify_hybrid(const std::string& doc_id,
                              const std::vector<CandidateMention>& mentions,
                              std::vector<MemoryEntry> entities, const Scorer& scorer,
                              double tau = 0.0);

/// Produces vectors for document spans. encode_entity defaults to encoding
/// the entity's phrase occurrence span and throws MissingPhraseSpan when the
/// phrase never occurs verbatim.
class SpanEncoder {
 public:
  virtual ~SpanEncoder() = default;
  virtual Vec encode_span(const MeiDocument& doc, const Span& span) const = 0;
  virtual Vec encode_entity(const MeiDocument& doc, const MajorEntity& entity) const;
  virtual std::size_t dimension() const = 0;
};

/// Deterministic character n-gram hash features of the span text.
class HashFeatureEncoder : public SpanEncoder {
 public:
  explicit HashFeatureEncoder(std::size_t dimension = 64) : dimension_(dimension) {}
  Vec encode_span(const MeiDocument& doc, const Span& span) const override;
  std::size_t dimension() const override { return dimension_; }

 private:
  std::size_t dimension_;
};

/// Precomputed vectors loaded from a jsonlines file: per document a line
/// {"doc_id", "spans": [[s,e]...], "vectors": [[...]...],
///  "entities": [{"id", "vector"}...]}.
class FileVectorEncoder : public SpanEncoder {
 public:
  explicit FileVectorEncoder(const std::string& path);
  Vec encode_span(const MeiDocument& doc, const Span& span) const override;
  Vec encode_entity(const MeiDocument& doc, const MajorEntity& entity) const override;
  std::size_t dimension() const override { return dimension_; }

 private:
  struct DocVectors {
    std::vector<std::pair<Span, Vec>> spans;
    std::vector<std::pair<int, Vec>> entities;
  };
  const DocVectors& doc_vectors(const std::string& doc_id) const;

  std::size_t dimension_ = 0;
  std::vector<std::pair<std::string, DocVectors>> docs_;
};

enum class MemoryMode { kStatic, kHybrid };

/// Encodes candidates and entities, then dispatches to identify_static or
/// identify_hybrid. Duplicate candidate spans are dropped, keeping the first.
PredictionSet run_engine(const MeiDocument& doc, const std::vector<Span>& candidates,
                         const SpanEncoder& encoder, MemoryMode mode, const Scorer& scorer,
                         double tau = 0.0);

}  // namespace mei
