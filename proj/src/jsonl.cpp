#include "mei/jsonl.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mei/errors.hpp"

namespace mei {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

json parse_line(const std::string& line, std::size_t line_number) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded()) throw MalformedLine(line_number, "invalid JSON");
  if (!j.is_object()) throw MalformedLine(line_number, "expected a JSON object");
  return j;
}

const json& require(const json& j, const char* key, const std::string& doc_id) {
  auto it = j.find(key);
  if (it == j.end()) throw SchemaViolation(doc_id, key, "missing field");
  return *it;
}

std::string doc_id_of(const json& j, std::size_t line_number) {
  auto it = j.find("doc_id");
  if (it == j.end() || !it->is_string()) {
    throw MalformedLine(line_number, "missing or non-string doc_id");
  }
  return it->get<std::string>();
}

std::vector<std::string> read_tokens(const json& j, const std::string& doc_id) {
  const json& t = require(j, "tokens", doc_id);
  if (!t.is_array()) throw SchemaViolation(doc_id, "tokens", "expected an array");
  std::vector<std::string> tokens;
  tokens.reserve(t.size());
  for (const auto& tok : t) {
    if (!tok.is_string()) throw SchemaViolation(doc_id, "tokens", "expected strings");
    tokens.push_back(tok.get<std::string>());
  }
  return tokens;
}

Span read_pair(const json& j, const std::string& doc_id, const std::string& field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw SchemaViolation(doc_id, field, "expected a pair of integers");
  }
  return Span{j[0].get<int>(), j[1].get<int>()};
}

std::vector<Span> read_sentences(const json& j, const std::string& doc_id) {
  const json& s = require(j, "sentences", doc_id);
  if (!s.is_array()) throw SchemaViolation(doc_id, "sentences", "expected an array");
  std::vector<Span> sentences;
  for (std::size_t i = 0; i < s.size(); ++i) {
    sentences.push_back(read_pair(s[i], doc_id, "sentences[" + std::to_string(i) + "]"));
  }
  return sentences;
}

ojson span_json(const Span& s) { return ojson::array({s.start, s.end}); }

template <typename Fn>
void for_each_line(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    fn(line, line_number);
  }
}

template <typename Doc, typename Reader>
std::vector<Doc> read_docs(std::istream& in, Reader&& reader) {
  std::vector<Doc> docs;
  for_each_line(in, [&](const std::string& line, std::size_t line_number) {
    docs.push_back(reader(parse_line(line, line_number), line_number));
  });
  return docs;
}

template <typename T, typename Fn>
std::vector<T> read_jsonl_path(const std::string& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path);
  return fn(in);
}

}  // namespace

std::vector<AnnotatedDocument> read_corpus_jsonl(std::istream& in) {
  return read_docs<AnnotatedDocument>(in, [](const json& j, std::size_t line_number) {
    AnnotatedDocument doc;
    doc.doc_id = doc_id_of(j, line_number);
    doc.tokens = read_tokens(j, doc.doc_id);
    doc.sentences = read_sentences(j, doc.doc_id);
    const json& clusters = require(j, "clusters", doc.doc_id);
    if (!clusters.is_array()) throw SchemaViolation(doc.doc_id, "clusters", "expected an array");
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      const std::string field = "clusters[" + std::to_string(c) + "]";
      if (!clusters[c].is_array()) throw SchemaViolation(doc.doc_id, field, "expected an array");
      Cluster cluster;
      cluster.cluster_id = static_cast<int>(c);
      for (const auto& m : clusters[c]) cluster.mentions.push_back(read_pair(m, doc.doc_id, field));
      canonicalize_mentions(cluster.mentions);
      doc.clusters.push_back(std::move(cluster));
    }
    validate_document(doc);
    return doc;
  });
}

std::vector<MeiDocument> read_mei_jsonl(std::istream& in) {
  return read_docs<MeiDocument>(in, [](const json& j, std::size_t line_number) {
    MeiDocument doc;
    doc.doc_id = doc_id_of(j, line_number);
    doc.tokens = read_tokens(j, doc.doc_id);
    doc.sentences = read_sentences(j, doc.doc_id);

    const json& entities = require(j, "entities", doc.doc_id);
    if (!entities.is_array()) throw SchemaViolation(doc.doc_id, "entities", "expected an array");
    for (std::size_t i = 0; i < entities.size(); ++i) {
      const json& e = entities[i];
      const std::string field = "entities[" + std::to_string(i) + "]";
      if (!e.is_object()) throw SchemaViolation(doc.doc_id, field, "expected an object");
      MajorEntity ent;
      const json& id = require(e, "id", doc.doc_id);
      if (!id.is_number_integer()) throw SchemaViolation(doc.doc_id, field + ".id", "expected an integer");
      ent.entity_id = id.get<int>();
      const json& phrase = require(e, "phrase", doc.doc_id);
      if (!phrase.is_string()) throw SchemaViolation(doc.doc_id, field + ".phrase", "expected a string");
      ent.phrase = phrase.get<std::string>();
      const json& ps = require(e, "phrase_span", doc.doc_id);
      if (!ps.is_null()) ent.phrase_span = read_pair(ps, doc.doc_id, field + ".phrase_span");
      const json& count = require(e, "count", doc.doc_id);
      if (!count.is_number_integer()) throw SchemaViolation(doc.doc_id, field + ".count", "expected an integer");
      ent.mention_count = count.get<int>();
      doc.entities.push_back(std::move(ent));
    }

    const json& gold = require(j, "gold", doc.doc_id);
    if (!gold.is_array()) throw SchemaViolation(doc.doc_id, "gold", "expected an array");
    for (std::size_t i = 0; i < gold.size(); ++i) {
      const json& g = gold[i];
      const std::string field = "gold[" + std::to_string(i) + "]";
      if (!g.is_array() || g.size() != 3 || !g[0].is_number_integer() ||
          !g[1].is_number_integer() || !g[2].is_number_integer()) {
        throw SchemaViolation(doc.doc_id, field, "expected [start, end, entity_id]");
      }
      doc.gold.push_back(GoldMention{Span{g[0].get<int>(), g[1].get<int>()}, g[2].get<int>()});
    }
    std::sort(doc.gold.begin(), doc.gold.end());
    doc.gold.erase(std::unique(doc.gold.begin(), doc.gold.end()), doc.gold.end());

    const json& other = require(j, "other_mentions", doc.doc_id);
    if (!other.is_array()) throw SchemaViolation(doc.doc_id, "other_mentions", "expected an array");
    for (std::size_t i = 0; i < other.size(); ++i) {
      doc.other_mentions.push_back(
          read_pair(other[i], doc.doc_id, "other_mentions[" + std::to_string(i) + "]"));
    }
    canonicalize_mentions(doc.other_mentions);

    validate_document(doc);
    return doc;
  });
}

std::vector<PredictionSet> read_predictions_jsonl(std::istream& in) {
  return read_docs<PredictionSet>(in, [](const json& j, std::size_t line_number) {
    PredictionSet preds;
    preds.doc_id = doc_id_of(j, line_number);
    const json& a = require(j, "assignments", preds.doc_id);
    if (!a.is_array()) throw SchemaViolation(preds.doc_id, "assignments", "expected an array");
    for (std::size_t i = 0; i < a.size(); ++i) {
      const json& entry = a[i];
      const std::string field = "assignments[" + std::to_string(i) + "]";
      if (!entry.is_array() || entry.size() != 3 || !entry[0].is_number_integer() ||
          !entry[1].is_number_integer() ||
          !(entry[2].is_number_integer() || entry[2].is_null())) {
        throw SchemaViolation(preds.doc_id, field, "expected [start, end, label-or-null]");
      }
      Assignment assignment;
      assignment.span = Span{entry[0].get<int>(), entry[1].get<int>()};
      if (!entry[2].is_null()) assignment.label = entry[2].get<int>();
      preds.assignments.push_back(assignment);
    }
    canonicalize_assignments(preds);
    return preds;
  });
}

std::string corpus_json_line(const AnnotatedDocument& doc) {
  ojson j;
  j["doc_id"] = doc.doc_id;
  j["tokens"] = doc.tokens;
  ojson sentences = ojson::array();
  for (const auto& s : doc.sentences) sentences.push_back(span_json(s));
  j["sentences"] = std::move(sentences);
  ojson clusters = ojson::array();
  for (const auto& c : doc.clusters) {
    ojson mentions = ojson::array();
    for (const auto& m : c.mentions) mentions.push_back(span_json(m));
    clusters.push_back(std::move(mentions));
  }
  j["clusters"] = std::move(clusters);
  return j.dump();
}

std::string mei_json_line(const MeiDocument& doc) {
  ojson j;
  j["doc_id"] = doc.doc_id;
  j["tokens"] = doc.tokens;
  ojson sentences = ojson::array();
  for (const auto& s : doc.sentences) sentences.push_back(span_json(s));
  j["sentences"] = std::move(sentences);
  ojson entities = ojson::array();
  for (const auto& e : doc.entities) {
    ojson ent;
    ent["id"] = e.entity_id;
    ent["phrase"] = e.phrase;
    ent["phrase_span"] = e.phrase_span ? ojson(span_json(*e.phrase_span)) : ojson(nullptr);
    ent["count"] = e.mention_count;
    entities.push_back(std::move(ent));
  }
  j["entities"] = std::move(entities);
  ojson gold = ojson::array();
  for (const auto& g : doc.gold) gold.push_back(ojson::array({g.span.start, g.span.end, g.entity_id}));
  j["gold"] = std::move(gold);
  ojson other = ojson::array();
  for (const auto& s : doc.other_mentions) other.push_back(span_json(s));
  j["other_mentions"] = std::move(other);
  return j.dump();
}

std::string predictions_json_line(const PredictionSet& preds) {
  ojson j;
  j["doc_id"] = preds.doc_id;
  ojson assignments = ojson::array();
  for (const auto& a : preds.assignments) {
    ojson entry = ojson::array({a.span.start, a.span.end, nullptr});
    if (a.label) entry[2] = *a.label;
    assignments.push_back(std::move(entry));
  }
  j["assignments"] = std::move(assignments);
  return j.dump();
}

void write_corpus_jsonl(std::ostream& out, const std::vector<AnnotatedDocument>& docs) {
  for (const auto& d : docs) out << corpus_json_line(d) << '\n';
}

void write_mei_jsonl(std::ostream& out, const std::vector<MeiDocument>& docs) {
  for (const auto& d : docs) out << mei_json_line(d) << '\n';
}

void write_predictions_jsonl(std::ostream& out, const std::vector<PredictionSet>& preds) {
  for (const auto& p : preds) out << predictions_json_line(p) << '\n';
}

std::vector<AnnotatedDocument> read_corpus_jsonl_file(const std::string& path) {
  return read_jsonl_path<AnnotatedDocument>(path, [](std::istream& in) { return read_corpus_jsonl(in); });
}

std::vector<MeiDocument> read_mei_jsonl_file(const std::string& path) {
  return read_jsonl_path<MeiDocument>(path, [](std::istream& in) { return read_mei_jsonl(in); });
}

std::vector<PredictionSet> read_predictions_jsonl_file(const std::string& path) {
  return read_jsonl_path<PredictionSet>(path, [](std::istream& in) { return read_predictions_jsonl(in); });
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open file for writing: " + path);
  out << content;
  if (!out) throw Error("failed writing file: " + path);
}

}  // namespace mei
