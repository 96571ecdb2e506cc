#include "mei/derive.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <set>
#include <unordered_set>

#include "mei/errors.hpp"

namespace mei {

namespace {

std::string lowercase(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

const std::unordered_set<std::string>& pronoun_lexicon() {
  static const std::unordered_set<std::string> lexicon = {
      // personal
      "i", "me", "you", "he", "him", "she", "her", "it", "we", "us", "they", "them",
      // possessive
      "my", "mine", "your", "yours", "his", "hers", "its", "our", "ours", "their", "theirs",
      // reflexive
      "myself", "yourself", "himself", "herself", "itself", "ourselves", "yourselves",
      "themselves", "oneself",
      // demonstrative / indefinite one
      "this", "that", "these", "those", "one", "ones",
      // archaic second person, common in narrative corpora
      "thou", "thee", "thy", "thine", "thyself", "ye"};
  return lexicon;
}

/// Most frequent surface form among the given mention texts, grouping
/// case-insensitively; most frequent original casing wins, ties broken by
/// earliest occurrence.
std::string most_frequent_form(const std::vector<std::string>& texts) {
  struct Group {
    int count = 0;
    std::size_t first_seen = 0;
    std::map<std::string, std::pair<int, std::size_t>> casings;  // form -> (count, first index)
  };
  std::map<std::string, Group> groups;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    std::string key = lowercase(texts[i]);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) it->second.first_seen = i;
    it->second.count++;
    auto [cit, cinserted] = it->second.casings.try_emplace(texts[i], std::make_pair(0, i));
    cit->second.first++;
    if (cinserted) cit->second.second = i;
  }
  const Group* best = nullptr;
  for (const auto& [key, group] : groups) {
    if (!best || group.count > best->count ||
        (group.count == best->count && group.first_seen < best->first_seen)) {
      best = &group;
    }
  }
  std::string form;
  int form_count = 0;
  std::size_t form_first = 0;
  bool have_form = false;
  for (const auto& [casing, stat] : best->casings) {
    if (!have_form || stat.first > form_count ||
        (stat.first == form_count && stat.second < form_first)) {
      form = casing;
      form_count = stat.first;
      form_first = stat.second;
      have_form = true;
    }
  }
  return form;
}

bool is_pronoun_text(const std::string& text) {
  return pronoun_lexicon().count(lowercase(text)) > 0;
}

}  // namespace

bool is_pronoun(const std::string& token) { return is_pronoun_text(token); }

std::vector<RankedCluster> rank_clusters(const AnnotatedDocument& doc, int min_mentions) {
  std::vector<RankedCluster> ranked;
  for (std::size_t c = 0; c < doc.clusters.size(); ++c) {
    const auto& cluster = doc.clusters[c];
    if (static_cast<int>(cluster.mentions.size()) < min_mentions) continue;
    ranked.push_back(RankedCluster{static_cast<int>(c),
                                   static_cast<int>(cluster.mentions.size()),
                                   cluster.mentions.front()});
  }
  std::sort(ranked.begin(), ranked.end(), [](const RankedCluster& a, const RankedCluster& b) {
    if (a.mention_count != b.mention_count) return a.mention_count > b.mention_count;
    if (a.first_mention != b.first_mention) return a.first_mention < b.first_mention;
    return a.cluster_index < b.cluster_index;
  });
  return ranked;
}

std::string designative_phrase(const AnnotatedDocument& doc, const Cluster& cluster) {
  std::vector<std::string> nominal;
  std::vector<std::string> all;
  for (const auto& m : cluster.mentions) {
    std::string text = span_text(doc.tokens, m, doc.doc_id);
    all.push_back(text);
    if (!is_pronoun_text(text)) nominal.push_back(std::move(text));
  }
  return most_frequent_form(nominal.empty() ? all : nominal);
}

MeiDocument select_major_entities(const AnnotatedDocument& doc, int k, int min_mentions) {
  auto ranked = rank_clusters(doc, min_mentions);
  if (ranked.empty()) throw NoQualifyingEntities(doc.doc_id);
  if (static_cast<int>(ranked.size()) > k) ranked.resize(k);

  MeiDocument out;
  out.doc_id = doc.doc_id;
  out.tokens = doc.tokens;
  out.sentences = doc.sentences;

  std::set<int> selected;
  for (std::size_t rank = 0; rank < ranked.size(); ++rank) {
    const auto& cluster = doc.clusters[ranked[rank].cluster_index];
    selected.insert(ranked[rank].cluster_index);

    MajorEntity entity;
    entity.entity_id = static_cast<int>(rank) + 1;
    entity.phrase = designative_phrase(doc, cluster);
    entity.mention_count = static_cast<int>(cluster.mentions.size());
    std::string phrase_key = lowercase(entity.phrase);
    for (const auto& m : cluster.mentions) {
      if (lowercase(span_text(doc.tokens, m, doc.doc_id)) == phrase_key) {
        entity.phrase_span = m;
        break;
      }
    }
    for (const auto& m : cluster.mentions) {
      out.gold.push_back(GoldMention{m, entity.entity_id});
    }
    out.entities.push_back(std::move(entity));
  }
  std::sort(out.gold.begin(), out.gold.end());

  std::set<Span> gold_spans;
  for (const auto& g : out.gold) gold_spans.insert(g.span);
  for (std::size_t c = 0; c < doc.clusters.size(); ++c) {
    if (selected.count(static_cast<int>(c))) continue;
    for (const auto& m : doc.clusters[c].mentions) {
      if (!gold_spans.count(m)) out.other_mentions.push_back(m);
    }
  }
  canonicalize_mentions(out.other_mentions);

  validate_document(out);
  return out;
}

std::vector<MeiDocument> derive_corpus(const std::vector<AnnotatedDocument>& docs, int k,
                                       int min_mentions) {
  std::vector<MeiDocument> out;
  out.reserve(docs.size());
  for (const auto& doc : docs) out.push_back(select_major_entities(doc, k, min_mentions));
  return out;
}

void apply_phrase_override(MeiDocument& doc, int entity_id, const std::string& phrase) {
  MajorEntity* entity = nullptr;
  for (auto& e : doc.entities) {
    if (e.entity_id == entity_id) entity = &e;
  }
  if (!entity) throw UnknownEntity(doc.doc_id, entity_id);
  if (phrase.empty()) throw ConfigError("phrase override must be non-empty");
  entity->phrase = phrase;
  entity->phrase_span.reset();
  std::string key = lowercase(phrase);
  for (const auto& g : doc.gold) {
    if (g.entity_id == entity_id && lowercase(span_text(doc.tokens, g.span, doc.doc_id)) == key) {
      entity->phrase_span = g.span;
      break;
    }
  }
}

namespace {

struct StatsAccumulator {
  long documents = 0;
  long clusters = 0;
  long mentions = 0;
  long nonsingleton_mentions = 0;
  long antecedent_pairs = 0;
  long antecedent_distance_sum = 0;

  /// One document's mention groups (one group per cluster) plus the pooled
  /// mention universe used for the intervening-mention count.
  void add_document(const std::vector<std::vector<Span>>& groups) {
    ++documents;
    std::vector<int> all_starts;
    for (const auto& g : groups) {
      for (const auto& m : g) all_starts.push_back(m.start);
    }
    std::sort(all_starts.begin(), all_starts.end());

    for (const auto& g : groups) {
      ++clusters;
      mentions += static_cast<long>(g.size());
      if (g.size() >= 2) nonsingleton_mentions += static_cast<long>(g.size());
      for (std::size_t i = 1; i < g.size(); ++i) {
        const Span& prev = g[i - 1];
        const Span& cur = g[i];
        auto lo = std::upper_bound(all_starts.begin(), all_starts.end(), prev.start);
        auto hi = std::lower_bound(all_starts.begin(), all_starts.end(), cur.start);
        antecedent_distance_sum += static_cast<long>(hi > lo ? hi - lo : 0);
        ++antecedent_pairs;
      }
    }
  }

  DatasetStats finish() const {
    DatasetStats s;
    s.document_count = documents;
    s.cluster_count = clusters;
    s.mention_count = mentions;
    s.nonsingleton_mention_count = nonsingleton_mentions;
    s.avg_cluster_size = clusters > 0 ? static_cast<double>(mentions) / clusters : 0.0;
    s.mean_antecedent_distance =
        antecedent_pairs > 0 ? static_cast<double>(antecedent_distance_sum) / antecedent_pairs
                             : 0.0;
    return s;
  }
};

}  // namespace

DatasetStats corpus_stats(const std::vector<AnnotatedDocument>& docs) {
  if (docs.empty()) throw EmptyCorpus();
  StatsAccumulator acc;
  for (const auto& doc : docs) {
    std::vector<std::vector<Span>> groups;
    for (const auto& c : doc.clusters) groups.push_back(c.mentions);
    acc.add_document(groups);
  }
  return acc.finish();
}

DatasetStats corpus_stats(const std::vector<MeiDocument>& docs) {
  if (docs.empty()) throw EmptyCorpus();
  StatsAccumulator acc;
  for (const auto& doc : docs) {
    std::vector<std::vector<Span>> groups(doc.entities.size());
    for (const auto& g : doc.gold) groups[g.entity_id - 1].push_back(g.span);
    acc.add_document(groups);
  }
  return acc.finish();
}

std::string format_stats(const std::string& label, const DatasetStats& stats) {
  char buffer[512];
  std::snprintf(buffer, sizeof(buffer),
                "%s\n"
                "documents\t%ld\n"
                "clusters\t%ld\n"
                "mentions\t%ld\n"
                "nonsingleton_mentions\t%ld\n"
                "avg_cluster_size\t%.2f\n"
                "mean_antecedent_distance\t%.2f\n",
                label.c_str(), stats.document_count, stats.cluster_count, stats.mention_count,
                stats.nonsingleton_mention_count, stats.avg_cluster_size,
                stats.mean_antecedent_distance);
  return buffer;
}

}  // namespace mei
