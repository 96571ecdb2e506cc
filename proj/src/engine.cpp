#include "mei/engine.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "mei/errors.hpp"
#include "mei/jsonl.hpp"

namespace mei {

namespace {

void check_dimension(std::size_t expected, const Vec& v) {
  if (v.size() != expected) throw DimensionMismatch(expected, v.size());
}

std::size_t common_dimension(const std::vector<CandidateMention>& mentions,
                             const std::vector<MemoryEntry>& entities) {
  std::size_t dim = 0;
  bool have = false;
  auto check = [&](const Vec& v) {
    if (!have) {
      dim = v.size();
      have = true;
    } else {
      check_dimension(dim, v);
    }
  };
  for (const auto& e : entities) {
    check(e.initial);
    check(e.current);
  }
  for (const auto& m : mentions) check(m.vec);
  return dim;
}

struct Best {
  double score = 0.0;
  const MemoryEntry* entry = nullptr;
  std::size_t index = 0;
};

template <typename ScoreFn>
std::optional<Best> best_entity(const std::vector<MemoryEntry>& entities, const ScoreFn& fn) {
  std::optional<Best> best;
  for (std::size_t j = 0; j < entities.size(); ++j) {
    double s = fn(entities[j]);
    if (!best || s > best->score ||
        (s == best->score && entities[j].entity_id < best->entry->entity_id)) {
      best = Best{s, &entities[j], j};
    }
  }
  return best;
}

std::uint64_t fnv1a(const std::string& s, std::uint64_t seed) {
  std::uint64_t h = 14695981039346656037ull ^ seed;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

int bucket_distance(long d) {
  if (d < 1) throw NonPositiveDistance(d);
  int floor_log2 = std::bit_width(static_cast<unsigned long>(d)) - 1;
  return std::min(kDistanceBuckets - 1, floor_log2);
}

double DotProductScorer::score(const Vec& mention, const Vec& entity, const Metadata&) const {
  if (mention.size() != entity.size()) throw DimensionMismatch(mention.size(), entity.size());
  double dot = 0.0;
  for (std::size_t i = 0; i < mention.size(); ++i) dot += mention[i] * entity[i];
  return dot;
}

Vec running_mean_update(const Vec& current, const Vec& mention, long count) {
  check_dimension(current.size(), mention);
  Vec out(current.size());
  for (std::size_t i = 0; i < current.size(); ++i) {
    out[i] = (static_cast<double>(count) * current[i] + mention[i]) / static_cast<double>(count + 1);
  }
  return out;
}

PredictionSet identify_static(const std::string& doc_id,
                              const std::vector<CandidateMention>& mentions,
                              const std::vector<MemoryEntry>& entities, const Scorer& scorer,
                              double tau) {
  common_dimension(mentions, entities);
  PredictionSet out;
  out.doc_id = doc_id;
  for (const auto& m : mentions) {
    auto best = best_entity(entities, [&](const MemoryEntry& e) {
      return scorer.score(m.vec, e.initial, Metadata::none());
    });
    Assignment a;
    a.span = m.span;
    if (best && best->score > tau) a.label = best->entry->entity_id;
    out.assignments.push_back(a);
  }
  canonicalize_assignments(out);
  return out;
}

PredictionSet identify_hybrid(const std::string& doc_id,
                              const std::vector<CandidateMention>& mentions,
                              std::vector<MemoryEntry> entities, const Scorer& scorer,
                              double tau) {
  common_dimension(mentions, entities);
  PredictionSet out;
  out.doc_id = doc_id;
  for (std::size_t i = 0; i < mentions.size(); ++i) {
    const auto& m = mentions[i];
    auto best = best_entity(entities, [&](const MemoryEntry& e) {
      Metadata md = Metadata::none();
      if (e.last_assigned_ordinal) {
        md = Metadata::at_bucket(
            bucket_distance(static_cast<long>(i) - *e.last_assigned_ordinal));
      }
      return (scorer.score(m.vec, e.current, md) + scorer.score(m.vec, e.initial, md)) / 2.0;
    });
    Assignment a;
    a.span = m.span;
    if (best && best->score > tau) {
      MemoryEntry& winner = entities[best->index];
      a.label = winner.entity_id;
      winner.current = running_mean_update(winner.current, m.vec, winner.assigned_count);
      winner.assigned_count += 1;
      winner.last_assigned_ordinal = static_cast<long>(i);
    }
    out.assignments.push_back(a);
  }
  canonicalize_assignments(out);
  return out;
}

Vec SpanEncoder::encode_entity(const MeiDocument& doc, const MajorEntity& entity) const {
  if (!entity.phrase_span) {
    throw MissingPhraseSpan(doc.doc_id, entity.entity_id,
                            "phrase '" + entity.phrase + "' has no recorded occurrence span");
  }
  return encode_span(doc, *entity.phrase_span);
}

Vec HashFeatureEncoder::encode_span(const MeiDocument& doc, const Span& span) const {
  std::string text = span_text(doc.tokens, span, doc.doc_id);
  std::transform(text.begin(), text.end(), text.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  Vec v(dimension_, 0.0);
  std::string padded = "^" + text + "$";
  for (std::size_t n = 2; n <= 4; ++n) {
    if (padded.size() < n) continue;
    for (std::size_t i = 0; i + n <= padded.size(); ++i) {
      std::uint64_t h = fnv1a(padded.substr(i, n), n);
      double sign = (h >> 32) & 1 ? 1.0 : -1.0;
      v[h % dimension_] += sign;
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

FileVectorEncoder::FileVectorEncoder(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw MalformedLine(line_number, "invalid JSON");
    if (!j.contains("doc_id") || !j["doc_id"].is_string()) {
      throw MalformedLine(line_number, "missing doc_id");
    }
    std::string doc_id = j["doc_id"].get<std::string>();

    auto read_vec = [&](const nlohmann::json& arr, const std::string& field) {
      if (!arr.is_array()) throw SchemaViolation(doc_id, field, "expected an array of numbers");
      Vec v;
      for (const auto& x : arr) {
        if (!x.is_number()) throw SchemaViolation(doc_id, field, "expected numbers");
        v.push_back(x.get<double>());
      }
      if (dimension_ == 0) dimension_ = v.size();
      if (v.size() != dimension_) throw DimensionMismatch(dimension_, v.size());
      return v;
    };

    DocVectors dv;
    const auto& spans = j.value("spans", nlohmann::json::array());
    const auto& vectors = j.value("vectors", nlohmann::json::array());
    if (spans.size() != vectors.size()) {
      throw SchemaViolation(doc_id, "vectors", "spans and vectors must have equal length");
    }
    for (std::size_t i = 0; i < spans.size(); ++i) {
      const auto& s = spans[i];
      if (!s.is_array() || s.size() != 2 || !s[0].is_number_integer() || !s[1].is_number_integer()) {
        throw SchemaViolation(doc_id, "spans", "expected [start, end] pairs");
      }
      dv.spans.emplace_back(Span{s[0].get<int>(), s[1].get<int>()},
                            read_vec(vectors[i], "vectors"));
    }
    for (const auto& e : j.value("entities", nlohmann::json::array())) {
      if (!e.is_object() || !e.contains("id") || !e["id"].is_number_integer() ||
          !e.contains("vector")) {
        throw SchemaViolation(doc_id, "entities", "expected {id, vector} objects");
      }
      dv.entities.emplace_back(e["id"].get<int>(), read_vec(e["vector"], "entities"));
    }
    docs_.emplace_back(std::move(doc_id), std::move(dv));
  }
}

const FileVectorEncoder::DocVectors& FileVectorEncoder::doc_vectors(
    const std::string& doc_id) const {
  for (const auto& [id, dv] : docs_) {
    if (id == doc_id) return dv;
  }
  throw Error("no precomputed vectors for document '" + doc_id + "'");
}

Vec FileVectorEncoder::encode_span(const MeiDocument& doc, const Span& span) const {
  const auto& dv = doc_vectors(doc.doc_id);
  for (const auto& [s, v] : dv.spans) {
    if (s == span) return v;
  }
  throw Error("no precomputed vector for span [" + std::to_string(span.start) + ", " +
              std::to_string(span.end) + "] of document '" + doc.doc_id + "'");
}

Vec FileVectorEncoder::encode_entity(const MeiDocument& doc, const MajorEntity& entity) const {
  const auto& dv = doc_vectors(doc.doc_id);
  for (const auto& [id, v] : dv.entities) {
    if (id == entity.entity_id) return v;
  }
  if (entity.phrase_span) return encode_span(doc, *entity.phrase_span);
  throw MissingPhraseSpan(doc.doc_id, entity.entity_id,
                          "no precomputed entity vector and no phrase occurrence span");
}

PredictionSet run_engine(const MeiDocument& doc, const std::vector<Span>& candidates,
                         const SpanEncoder& encoder, MemoryMode mode, const Scorer& scorer,
                         double tau) {
  std::vector<MemoryEntry> entities;
  for (const auto& e : doc.entities) {
    MemoryEntry entry;
    entry.entity_id = e.entity_id;
    entry.initial = encoder.encode_entity(doc, e);
    entry.current = entry.initial;
    entities.push_back(std::move(entry));
  }

  std::vector<CandidateMention> mentions;
  std::set<Span> seen;
  for (const auto& span : candidates) {
    if (!seen.insert(span).second) continue;
    mentions.push_back(CandidateMention{span, encoder.encode_span(doc, span)});
  }

  if (mode == MemoryMode::kStatic) {
    return identify_static(doc.doc_id, mentions, entities, scorer, tau);
  }
  return identify_hybrid(doc.doc_id, mentions, std::move(entities), scorer, tau);
}

}  // namespace mei
