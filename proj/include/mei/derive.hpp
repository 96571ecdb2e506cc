#pragma once

#include <map>
#include <string>
#include <vector>

#include "mei/types.hpp"

namespace mei {

struct RankedCluster {
  int cluster_index = 0;  // index into AnnotatedDocument::clusters
  int mention_count = 0;
  Span first_mention;
};

/// Qualifying clusters (>= min_mentions mentions) ordered by mention count
/// (desc), then earliest first mention, then cluster index.
std::vector<RankedCluster> rank_clusters(const AnnotatedDocument& doc, int min_mentions);

/// The most frequent non-pronoun mention text of a cluster, grouped
/// case-insensitively, with the most frequent original casing emitted and
/// ties broken by earliest occurrence. Falls back to the same rule over all
/// mentions when every mention is a pronoun.
std::string designative_phrase(const AnnotatedDocument& doc, const Cluster& cluster);

/// True for a fixed lexicon of English personal/possessive/reflexive/
/// demonstrative pronouns (case-insensitive).
bool is_pronoun(const std::string& token);

/// Derives the tracked-entity view of one document: the top k qualifying
/// clusters become entities 1..k, their mentions become gold labels, and all
/// remaining mentions land in other_mentions. Throws NoQualifyingEntities
/// when nothing passes the threshold.
MeiDocument select_major_entities(const AnnotatedDocument& doc, int k = 5, int min_mentions = 5);

std::vector<MeiDocument> derive_corpus(const std::vector<AnnotatedDocument>& docs, int k = 5,
                                       int min_mentions = 5);

/// Sets the phrase of one entity and recomputes its phrase_span (first gold
/// mention of that entity whose text equals the phrase, case-insensitive).
void apply_phrase_override(MeiDocument& doc, int entity_id, const std::string& phrase);

struct DatasetStats {
  long document_count = 0;
  long cluster_count = 0;
  long mention_count = 0;
  long nonsingleton_mention_count = 0;  // mentions in clusters of size >= 2
  double avg_cluster_size = 0.0;
  // Average, over all non-first mentions, of how many other mentions start
  // strictly between a mention and its nearest same-cluster predecessor.
  double mean_antecedent_distance = 0.0;
};

DatasetStats corpus_stats(const std::vector<AnnotatedDocument>& docs);
DatasetStats corpus_stats(const std::vector<MeiDocument>& docs);

/// One human-readable TSV block: label, then one "name\tvalue" row per stat.
std::string format_stats(const std::string& label, const DatasetStats& stats);

}  // namespace mei
