#include "mei/types.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "mei/errors.hpp"

namespace mei {

const MajorEntity* MeiDocument::find_entity(int entity_id) const {
  for (const auto& e : entities) {
    if (e.entity_id == entity_id) return &e;
  }
  return nullptr;
}

std::string span_text(const std::vector<std::string>& tokens, const Span& span,
                      const std::string& doc_id) {
  if (span.start < 0 || span.end < span.start ||
      static_cast<std::size_t>(span.end) >= tokens.size()) {
    throw SchemaViolation(doc_id, "span",
                          "[" + std::to_string(span.start) + ", " + std::to_string(span.end) +
                              "] out of bounds for " + std::to_string(tokens.size()) + " tokens");
  }
  std::string out;
  for (int i = span.start; i <= span.end; ++i) {
    if (i > span.start) out += ' ';
    out += tokens[i];
  }
  return out;
}

void canonicalize_mentions(std::vector<Span>& mentions) {
  std::sort(mentions.begin(), mentions.end());
  mentions.erase(std::unique(mentions.begin(), mentions.end()), mentions.end());
}

void canonicalize_assignments(PredictionSet& predictions) {
  std::stable_sort(predictions.assignments.begin(), predictions.assignments.end(),
                   [](const Assignment& a, const Assignment& b) { return a.span < b.span; });
  auto last = std::unique(predictions.assignments.begin(), predictions.assignments.end(),
                          [](const Assignment& a, const Assignment& b) { return a.span == b.span; });
  predictions.assignments.erase(last, predictions.assignments.end());
}

namespace {

void check_span_bounds(const std::string& doc_id, const std::string& field, const Span& s,
                       std::size_t token_count) {
  if (s.start < 0 || s.end < s.start || static_cast<std::size_t>(s.end) >= token_count) {
    throw SchemaViolation(doc_id, field,
                          "span [" + std::to_string(s.start) + ", " + std::to_string(s.end) +
                              "] out of bounds for " + std::to_string(token_count) + " tokens");
  }
}

void check_sentences(const std::string& doc_id, const std::vector<Span>& sentences,
                     std::size_t token_count) {
  int expected_start = 0;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const auto& s = sentences[i];
    const std::string field = "sentences[" + std::to_string(i) + "]";
    if (s.start != expected_start) {
      throw SchemaViolation(doc_id, field,
                            "expected start " + std::to_string(expected_start) + ", got " +
                                std::to_string(s.start));
    }
    if (s.end <= s.start) throw SchemaViolation(doc_id, field, "sentence must be non-empty");
    expected_start = s.end;
  }
  if (token_count > 0 || !sentences.empty()) {
    if (sentences.empty() || static_cast<std::size_t>(sentences.back().end) != token_count) {
      throw SchemaViolation(doc_id, "sentences",
                            "sentence boundaries must cover all " + std::to_string(token_count) +
                                " tokens");
    }
  }
}

}  // namespace

void validate_document(const AnnotatedDocument& doc) {
  if (doc.doc_id.empty()) throw SchemaViolation(doc.doc_id, "doc_id", "must be non-empty");
  check_sentences(doc.doc_id, doc.sentences, doc.tokens.size());
  for (std::size_t c = 0; c < doc.clusters.size(); ++c) {
    const auto& cluster = doc.clusters[c];
    const std::string field = "clusters[" + std::to_string(c) + "]";
    if (cluster.cluster_id != static_cast<int>(c)) {
      throw SchemaViolation(doc.doc_id, field,
                            "cluster ids must be dense 0..n-1, got " +
                                std::to_string(cluster.cluster_id));
    }
    if (cluster.mentions.empty()) throw SchemaViolation(doc.doc_id, field, "cluster is empty");
    for (const auto& m : cluster.mentions) check_span_bounds(doc.doc_id, field, m, doc.tokens.size());
    if (!std::is_sorted(cluster.mentions.begin(), cluster.mentions.end())) {
      throw SchemaViolation(doc.doc_id, field, "mentions must be sorted by (start, end)");
    }
    if (std::adjacent_find(cluster.mentions.begin(), cluster.mentions.end()) !=
        cluster.mentions.end()) {
      throw SchemaViolation(doc.doc_id, field, "duplicate mention span within cluster");
    }
  }
}

void validate_document(const MeiDocument& doc) {
  if (doc.doc_id.empty()) throw SchemaViolation(doc.doc_id, "doc_id", "must be non-empty");
  check_sentences(doc.doc_id, doc.sentences, doc.tokens.size());

  std::set<int> ids;
  for (std::size_t i = 0; i < doc.entities.size(); ++i) {
    const auto& e = doc.entities[i];
    const std::string field = "entities[" + std::to_string(i) + "]";
    if (e.entity_id != static_cast<int>(i) + 1) {
      throw SchemaViolation(doc.doc_id, field,
                            "entity ids must be dense 1..n, got " + std::to_string(e.entity_id));
    }
    if (e.phrase.empty()) throw SchemaViolation(doc.doc_id, field, "phrase must be non-empty");
    if (e.phrase_span) check_span_bounds(doc.doc_id, field, *e.phrase_span, doc.tokens.size());
    if (e.mention_count <= 0) throw SchemaViolation(doc.doc_id, field, "count must be positive");
    ids.insert(e.entity_id);
  }

  std::set<Span> gold_spans;
  for (std::size_t i = 0; i < doc.gold.size(); ++i) {
    const auto& g = doc.gold[i];
    const std::string field = "gold[" + std::to_string(i) + "]";
    check_span_bounds(doc.doc_id, field, g.span, doc.tokens.size());
    if (!ids.count(g.entity_id)) {
      throw SchemaViolation(doc.doc_id, field,
                            "entity id " + std::to_string(g.entity_id) + " is not declared");
    }
    if (!gold_spans.insert(g.span).second) {
      throw SchemaViolation(doc.doc_id, field, "duplicate gold span");
    }
  }
  if (!std::is_sorted(doc.gold.begin(), doc.gold.end())) {
    throw SchemaViolation(doc.doc_id, "gold", "gold mentions must be sorted");
  }

  for (std::size_t i = 0; i < doc.other_mentions.size(); ++i) {
    const auto& s = doc.other_mentions[i];
    const std::string field = "other_mentions[" + std::to_string(i) + "]";
    check_span_bounds(doc.doc_id, field, s, doc.tokens.size());
    if (gold_spans.count(s)) {
      throw SchemaViolation(doc.doc_id, field, "span also appears as a gold mention");
    }
  }
  if (!std::is_sorted(doc.other_mentions.begin(), doc.other_mentions.end())) {
    throw SchemaViolation(doc.doc_id, "other_mentions", "mentions must be sorted");
  }
  if (std::adjacent_find(doc.other_mentions.begin(), doc.other_mentions.end()) !=
      doc.other_mentions.end()) {
    throw SchemaViolation(doc.doc_id, "other_mentions", "duplicate mention span");
  }
}

}  // namespace mei
