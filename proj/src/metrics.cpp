#include "mei/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mei/errors.hpp"

namespace mei {

namespace {

double safe_ratio(long num, long den) { return den > 0 ? static_cast<double>(num) / den : 0.0; }

EntityScore finish_score(int entity_id, long tp, long fp, long fn) {
  EntityScore s;
  s.entity_id = entity_id;
  s.tp = tp;
  s.fp = fp;
  s.fn = fn;
  s.precision = safe_ratio(tp, tp + fp);
  s.recall = safe_ratio(tp, tp + fn);
  s.f1 = (s.precision + s.recall) > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
                                        : 0.0;
  return s;
}

double round4(double x) { return std::round(x * 10000.0) / 10000.0; }

std::string fmt4(double x) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.4f", x);
  return buffer;
}

}  // namespace

EntityScore entity_prf(const MeiDocument& gold, const PredictionSet& pred, int entity_id) {
  if (!gold.find_entity(entity_id)) throw UnknownEntity(gold.doc_id, entity_id);

  std::set<Span> gold_spans;
  for (const auto& g : gold.gold) {
    if (g.entity_id == entity_id) gold_spans.insert(g.span);
  }
  long tp = 0;
  long fp = 0;
  for (const auto& a : pred.assignments) {
    if (!a.label) continue;
    if (!gold.find_entity(*a.label)) throw UnknownEntity(gold.doc_id, *a.label);
    if (*a.label != entity_id) continue;
    if (gold_spans.count(a.span)) {
      ++tp;
    } else {
      ++fp;
    }
  }
  long fn = static_cast<long>(gold_spans.size()) - tp;
  return finish_score(entity_id, tp, fp, fn);
}

DocumentScores score_document(const MeiDocument& gold, const PredictionSet& pred) {
  if (gold.doc_id != pred.doc_id) {
    throw CorpusMismatch("document '" + gold.doc_id + "' scored against predictions for '" +
                         pred.doc_id + "'");
  }
  DocumentScores scores;
  scores.doc_id = gold.doc_id;
  for (const auto& e : gold.entities) {
    scores.entities.push_back(entity_prf(gold, pred, e.entity_id));
  }
  return scores;
}

std::vector<DocumentScores> score_corpus(const std::vector<MeiDocument>& gold,
                                         const std::vector<PredictionSet>& preds) {
  if (gold.empty()) throw EmptyCorpus();
  std::map<std::string, const PredictionSet*> by_id;
  for (const auto& p : preds) {
    if (!by_id.emplace(p.doc_id, &p).second) {
      throw CorpusMismatch("duplicate prediction line for document '" + p.doc_id + "'");
    }
  }
  std::vector<std::string> missing;
  std::set<std::string> gold_ids;
  for (const auto& d : gold) {
    gold_ids.insert(d.doc_id);
    if (!by_id.count(d.doc_id)) missing.push_back(d.doc_id);
  }
  std::vector<std::string> extra;
  for (const auto& p : preds) {
    if (!gold_ids.count(p.doc_id)) extra.push_back(p.doc_id);
  }
  if (!missing.empty() || !extra.empty()) {
    std::ostringstream ss;
    if (!missing.empty()) {
      ss << "documents without predictions:";
      for (const auto& id : missing) ss << ' ' << id;
    }
    if (!extra.empty()) {
      if (!missing.empty()) ss << "; ";
      ss << "predictions without documents:";
      for (const auto& id : extra) ss << ' ' << id;
    }
    throw CorpusMismatch(ss.str());
  }

  std::vector<DocumentScores> scores;
  scores.reserve(gold.size());
  for (const auto& d : gold) scores.push_back(score_document(d, *by_id.at(d.doc_id)));
  return scores;
}

double macro_f1(const std::vector<DocumentScores>& scores) {
  if (scores.empty()) throw EmptyCorpus();
  double sum = 0.0;
  long entities = 0;
  for (const auto& doc : scores) {
    for (const auto& e : doc.entities) {
      sum += e.f1;
      ++entities;
    }
  }
  return entities > 0 ? sum / entities : 0.0;
}

double micro_f1(const std::vector<DocumentScores>& scores) {
  if (scores.empty()) throw EmptyCorpus();
  double sum = 0.0;
  for (const auto& doc : scores) {
    double weighted = 0.0;
    long total = 0;
    for (const auto& e : doc.entities) {
      long gold_mentions = e.tp + e.fn;
      weighted += e.f1 * gold_mentions;
      total += gold_mentions;
    }
    sum += total > 0 ? weighted / total : 0.0;
  }
  return sum / scores.size();
}

std::string report_tsv(const std::vector<DocumentScores>& scores) {
  std::ostringstream out;
  out << "doc_id\tentity_id\ttp\tfp\tfn\tprecision\trecall\tf1\n";
  for (const auto& doc : scores) {
    for (const auto& e : doc.entities) {
      out << doc.doc_id << '\t' << e.entity_id << '\t' << e.tp << '\t' << e.fp << '\t' << e.fn
          << '\t' << fmt4(e.precision) << '\t' << fmt4(e.recall) << '\t' << fmt4(e.f1) << '\n';
    }
  }
  out << "macro_f1\t" << fmt4(macro_f1(scores)) << '\n';
  out << "micro_f1\t" << fmt4(micro_f1(scores)) << '\n';
  return out.str();
}

std::string report_json(const std::vector<DocumentScores>& scores) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json docs = nlohmann::ordered_json::array();
  for (const auto& doc : scores) {
    nlohmann::ordered_json entities = nlohmann::ordered_json::array();
    for (const auto& e : doc.entities) {
      nlohmann::ordered_json entry;
      entry["id"] = e.entity_id;
      entry["tp"] = e.tp;
      entry["fp"] = e.fp;
      entry["fn"] = e.fn;
      entry["precision"] = round4(e.precision);
      entry["recall"] = round4(e.recall);
      entry["f1"] = round4(e.f1);
      entities.push_back(std::move(entry));
    }
    nlohmann::ordered_json entry;
    entry["doc_id"] = doc.doc_id;
    entry["entities"] = std::move(entities);
    docs.push_back(std::move(entry));
  }
  j["documents"] = std::move(docs);
  j["macro_f1"] = round4(macro_f1(scores));
  j["micro_f1"] = round4(micro_f1(scores));
  return j.dump();
}

}  // namespace mei
