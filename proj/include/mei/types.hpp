#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

namespace mei {

/// Token span over a document, [start, end] inclusive, token-indexed.
struct Span {
  int start = 0;
  int end = 0;

  auto operator<=>(const Span&) const = default;
};

/// A coreference cluster: every mention of one discourse entity.
struct Cluster {
  int cluster_id = 0;
  std::vector<Span> mentions;  // sorted by (start, end), no duplicates

  auto operator<=>(const Cluster&) const = default;
};

/// A document with full coreference annotation.
struct AnnotatedDocument {
  std::string doc_id;
  std::vector<std::string> tokens;
  std::vector<Span> sentences;  // [start, end) half-open over token indices
  std::vector<Cluster> clusters;

  bool operator==(const AnnotatedDocument&) const = default;
};

/// One of the frequent entities a document is tracked against.
struct MajorEntity {
  int entity_id = 0;  // 1-based, dense within a document
  std::string phrase;
  std::optional<Span> phrase_span;  // first occurrence of the phrase, if it appears verbatim
  int mention_count = 0;

  bool operator==(const MajorEntity&) const = default;
};

/// A gold mention of a major entity.
struct GoldMention {
  Span span;
  int entity_id = 0;

  auto operator<=>(const GoldMention&) const = default;
};

/// A document paired with its major entities, their gold mentions, and the
/// remaining (non-major) mentions.
struct MeiDocument {
  std::string doc_id;
  std::vector<std::string> tokens;
  std::vector<Span> sentences;
  std::vector<MajorEntity> entities;  // ordered by entity_id
  std::vector<GoldMention> gold;      // sorted by (span, entity_id)
  std::vector<Span> other_mentions;   // sorted, disjoint from gold spans

  bool operator==(const MeiDocument&) const = default;

  const MajorEntity* find_entity(int entity_id) const;
};

/// One predicted label for a span. A missing label is the explicit
/// "none of the tracked entities" verdict.
struct Assignment {
  Span span;
  std::optional<int> label;  // entity_id, or nullopt for the null entity

  auto operator<=>(const Assignment&) const = default;
};

/// All predictions for one document, in canonical order.
struct PredictionSet {
  std::string doc_id;
  std::vector<Assignment> assignments;  // sorted by span, spans unique

  bool operator==(const PredictionSet&) const = default;
};

/// Non-fatal observations (dropped tags, unmatched mentions, ...) collected
/// by lenient operations.
struct Diagnostics {
  std::vector<std::string> warnings;

  void warn(std::string message) { warnings.push_back(std::move(message)); }
};

/// Space-joined text of a span. Throws SchemaViolation when out of bounds.
std::string span_text(const std::vector<std::string>& tokens, const Span& span,
                      const std::string& doc_id = "");

/// Sorts mentions by (start, end) and drops exact duplicates.
void canonicalize_mentions(std::vector<Span>& mentions);

/// Sorts assignments by span and verifies span uniqueness.
/// Duplicate spans keep the first occurrence.
void canonicalize_assignments(PredictionSet& predictions);

/// Validates cross-field invariants (bounds, ordering, id density,
/// gold/other disjointness). Throws SchemaViolation on failure.
void validate_document(const AnnotatedDocument& doc);
void validate_document(const MeiDocument& doc);

}  // namespace mei
