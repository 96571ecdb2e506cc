#pragma once

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mei/derive.hpp"
#include "mei/types.hpp"

namespace meitest {

inline std::vector<std::string> words(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

/// Single-sentence document with the given clusters.
inline mei::AnnotatedDocument annotated(std::string doc_id, const std::string& text,
                                        std::vector<std::vector<mei::Span>> clusters) {
  mei::AnnotatedDocument doc;
  doc.doc_id = std::move(doc_id);
  doc.tokens = words(text);
  doc.sentences = {mei::Span{0, static_cast<int>(doc.tokens.size())}};
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    mei::Cluster c;
    c.cluster_id = static_cast<int>(i);
    c.mentions = std::move(clusters[i]);
    mei::canonicalize_mentions(c.mentions);
    doc.clusters.push_back(std::move(c));
  }
  return doc;
}

/// Two-sentence story with two trackable entities and one stray mention.
inline mei::AnnotatedDocument aladdin_annotated() {
  auto doc = annotated("aladdin_mini", "Aladdin lived with his mother in Persia . His mother loved him .",
                       {{{0, 0}, {3, 3}, {8, 8}, {11, 11}}, {{3, 4}, {8, 9}}, {{6, 6}}});
  doc.sentences = {mei::Span{0, 8}, mei::Span{8, 13}};
  return doc;
}

/// The tracked-entity view of aladdin_annotated (k >= 2, min_mentions <= 2).
inline mei::MeiDocument aladdin() {
  return mei::select_major_entities(aladdin_annotated(), 5, 2);
}

inline mei::PredictionSet gold_as_predictions(const mei::MeiDocument& doc) {
  mei::PredictionSet preds;
  preds.doc_id = doc.doc_id;
  for (const auto& g : doc.gold) preds.assignments.push_back(mei::Assignment{g.span, g.entity_id});
  mei::canonicalize_assignments(preds);
  return preds;
}

/// Random tracked-entity document: k entities, distinct gold/other spans.
inline mei::MeiDocument random_mei_document(std::mt19937& rng, int max_entities = 4) {
  std::uniform_int_distribution<int> token_count(10, 30);
  int n = token_count(rng);
  mei::MeiDocument doc;
  doc.doc_id = "random_" + std::to_string(rng());
  for (int i = 0; i < n; ++i) doc.tokens.push_back("tok" + std::to_string(i % 7));
  doc.sentences = {mei::Span{0, n}};

  int k = std::uniform_int_distribution<int>(1, max_entities)(rng);
  for (int e = 1; e <= k; ++e) {
    mei::MajorEntity ent;
    ent.entity_id = e;
    ent.phrase = "entity " + std::to_string(e);
    ent.mention_count = 1;
    doc.entities.push_back(ent);
  }

  std::vector<mei::Span> pool;
  for (int s = 0; s < n; ++s) {
    for (int len = 0; len < 3 && s + len < n; ++len) pool.push_back(mei::Span{s, s + len});
  }
  std::shuffle(pool.begin(), pool.end(), rng);

  std::size_t gold_count = std::uniform_int_distribution<std::size_t>(0, 12)(rng);
  std::size_t other_count = std::uniform_int_distribution<std::size_t>(0, 6)(rng);
  std::size_t used = 0;
  for (; used < gold_count && used < pool.size(); ++used) {
    int e = std::uniform_int_distribution<int>(1, k)(rng);
    doc.gold.push_back(mei::GoldMention{pool[used], e});
  }
  for (std::size_t i = 0; i < other_count && used < pool.size(); ++i, ++used) {
    doc.other_mentions.push_back(pool[used]);
  }
  std::sort(doc.gold.begin(), doc.gold.end());
  mei::canonicalize_mentions(doc.other_mentions);
  return doc;
}

}  // namespace meitest
