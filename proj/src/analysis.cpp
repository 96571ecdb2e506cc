#include "mei/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mei/derive.hpp"
#include "mei/errors.hpp"
#include "mei/metrics.hpp"

namespace mei {

namespace {

void witness(std::vector<ErrorWitness>* witnesses, const std::string& category, const Span& span,
             int gold_entity, int pred_entity) {
  if (witnesses) witnesses->push_back(ErrorWitness{category, span, gold_entity, pred_entity});
}

}  // namespace

ErrorCounts classify_errors(const MeiDocument& gold, const PredictionSet& pred,
                            std::vector<ErrorWitness>* witnesses) {
  std::map<Span, int> gold_by_span;
  for (const auto& g : gold.gold) gold_by_span[g.span] = g.entity_id;
  std::set<Span> other(gold.other_mentions.begin(), gold.other_mentions.end());

  std::map<Span, std::optional<int>> pred_by_span;
  for (const auto& a : pred.assignments) {
    if (a.label && !gold.find_entity(*a.label)) throw UnknownEntityLabel(gold.doc_id, *a.label);
    pred_by_span.emplace(a.span, a.label);
  }

  ErrorCounts counts;
  for (const auto& [span, gold_id] : gold_by_span) {
    auto it = pred_by_span.find(span);
    if (it == pred_by_span.end()) {
      ++counts.missing_major;
      witness(witnesses, "missing_major", span, gold_id, 0);
    } else if (!it->second) {
      ++counts.major_other;
      witness(witnesses, "major_other", span, gold_id, 0);
    } else if (*it->second != gold_id) {
      ++counts.major_major;
      witness(witnesses, "major_major", span, gold_id, *it->second);
    }
  }
  for (const auto& [span, label] : pred_by_span) {
    if (!label || gold_by_span.count(span)) continue;
    if (other.count(span)) {
      ++counts.other_major;
      witness(witnesses, "other_major", span, 0, *label);
    } else {
      ++counts.extra_major;
      witness(witnesses, "extra_major", span, 0, *label);
    }
  }
  return counts;
}

ErrorCounts classify_errors(const std::vector<MeiDocument>& gold,
                            const std::vector<PredictionSet>& preds,
                            std::vector<ErrorWitness>* witnesses) {
  if (gold.size() != preds.size()) {
    throw CorpusMismatch("got " + std::to_string(gold.size()) + " documents but " +
                         std::to_string(preds.size()) + " prediction sets");
  }
  ErrorCounts total;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].doc_id != preds[i].doc_id) {
      throw CorpusMismatch("document '" + gold[i].doc_id + "' paired with predictions for '" +
                           preds[i].doc_id + "'");
    }
    ErrorCounts c = classify_errors(gold[i], preds[i], witnesses);
    total.missing_major += c.missing_major;
    total.major_major += c.major_major;
    total.major_other += c.major_other;
    total.other_major += c.other_major;
    total.extra_major += c.extra_major;
  }
  return total;
}

std::string error_report_tsv(const ErrorCounts& counts) {
  std::ostringstream out;
  out << "category\tcount\n";
  out << "missing_major\t" << counts.missing_major << '\n';
  out << "major_major\t" << counts.major_major << '\n';
  out << "major_other\t" << counts.major_other << '\n';
  out << "other_major\t" << counts.other_major << '\n';
  out << "extra_major\t" << counts.extra_major << '\n';
  out << "total\t" << counts.total() << '\n';
  return out.str();
}

std::string error_report_json(const ErrorCounts& counts) {
  nlohmann::ordered_json j;
  j["missing_major"] = counts.missing_major;
  j["major_major"] = counts.major_major;
  j["major_other"] = counts.major_other;
  j["other_major"] = counts.other_major;
  j["extra_major"] = counts.extra_major;
  j["total"] = counts.total();
  return j.dump();
}

VaryingKReport varying_k_report(const AnnotatedDocument& doc, const Predictor& predictor,
                                int k_max, int min_mentions) {
  if (k_max < 1) throw ConfigError("k_max must be at least 1");
  MeiDocument full = select_major_entities(doc, k_max, min_mentions);
  const int n_entities = static_cast<int>(full.entities.size());

  VaryingKReport report;
  report.phrases.reserve(n_entities);
  for (const auto& e : full.entities) report.phrases.push_back(e.phrase);
  report.f1.assign(n_entities, std::vector<double>(k_max + 1,
                                                   std::numeric_limits<double>::quiet_NaN()));

  auto f1_of = [&](const MeiDocument& derived, int entity_id) {
    PredictionSet pred = predictor(derived);
    return entity_prf(derived, pred, entity_id).f1;
  };

  for (int rank = 1; rank <= n_entities; ++rank) {
    // Sole-target column: the rank-r entity as the only tracked one.
    MeiDocument solo = full;
    solo.entities.clear();
    MajorEntity target = full.entities[rank - 1];
    const int original_id = target.entity_id;
    target.entity_id = 1;
    solo.entities.push_back(target);
    solo.gold.clear();
    solo.other_mentions.clear();
    std::set<Span> solo_gold;
    for (const auto& g : full.gold) {
      if (g.entity_id == original_id) {
        solo.gold.push_back(GoldMention{g.span, 1});
        solo_gold.insert(g.span);
      }
    }
    for (const auto& g : full.gold) {
      if (g.entity_id != original_id) solo.other_mentions.push_back(g.span);
    }
    solo.other_mentions.insert(solo.other_mentions.end(), full.other_mentions.begin(),
                               full.other_mentions.end());
    canonicalize_mentions(solo.other_mentions);
    validate_document(solo);
    report.f1[rank - 1][0] = f1_of(solo, 1);
  }

  for (int k = 1; k <= k_max; ++k) {
    MeiDocument derived = select_major_entities(doc, k, min_mentions);
    for (int rank = 1; rank <= static_cast<int>(derived.entities.size()); ++rank) {
      report.f1[rank - 1][k] = f1_of(derived, rank);
    }
  }
  return report;
}

std::string varying_k_tsv(const VaryingKReport& report) {
  std::ostringstream out;
  out << "entity\tsole";
  const int k_max = report.f1.empty() ? 0 : static_cast<int>(report.f1.front().size()) - 1;
  for (int k = 1; k <= k_max; ++k) out << "\tk=" << k;
  out << '\n';
  for (std::size_t r = 0; r < report.f1.size(); ++r) {
    out << report.phrases[r];
    for (double x : report.f1[r]) {
      out << '\t';
      if (!std::isnan(x)) {
        char buffer[32];
        std::snprintf(buffer, sizeof(buffer), "%.4f", x);
        out << buffer;
      }
    }
    out << '\n';
  }
  return out.str();
}

std::string varying_k_json(const VaryingKReport& report) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t r = 0; r < report.f1.size(); ++r) {
    nlohmann::ordered_json row;
    row["entity"] = report.phrases[r];
    nlohmann::ordered_json cells = nlohmann::ordered_json::array();
    for (double x : report.f1[r]) {
      if (std::isnan(x)) {
        cells.push_back(nullptr);
      } else {
        cells.push_back(std::round(x * 10000.0) / 10000.0);
      }
    }
    row["f1"] = std::move(cells);
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j.dump();
}

}  // namespace mei
