#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mei/types.hpp"

namespace mei {

struct ErrorCounts {
  long missing_major = 0;  // gold mention absent from the predictions
  long major_major = 0;    // gold mention labeled as a different tracked entity
  long major_other = 0;    // gold mention explicitly discarded (null label)
  long other_major = 0;    // non-tracked mention labeled as a tracked entity
  long extra_major = 0;    // tracked label on a span that is no mention at all

  long total() const { return missing_major + major_major + major_other + other_major + extra_major; }
  bool operator==(const ErrorCounts&) const = default;
};

/// One classified discrepancy, for diagnostic listings.
struct ErrorWitness {
  std::string category;
  Span span;
  int gold_entity = 0;  // 0 when the span is not a gold major mention
  int pred_entity = 0;  // 0 when predicted null or absent
};

ErrorCounts classify_errors(const MeiDocument& gold, const PredictionSet& pred,
                            std::vector<ErrorWitness>* witnesses = nullptr);

ErrorCounts classify_errors(const std::vector<MeiDocument>& gold,
                            const std::vector<PredictionSet>& preds,
                            std::vector<ErrorWitness>* witnesses = nullptr);

std::string error_report_tsv(const ErrorCounts& counts);
std::string error_report_json(const ErrorCounts& counts);

/// Per-entity F1 as the tracked-entity count grows. Row r (0-based) is the
/// entity ranked r+1; column 0 evaluates it as the sole tracked entity,
/// column k (1-based) evaluates it within the top-k derivation. Cells with
/// r+1 > k hold NaN (rendered blank in TSV, null in JSON).
struct VaryingKReport {
  std::vector<std::string> phrases;             // per rank
  std::vector<std::vector<double>> f1;          // [rank][column], column 0 = sole target
};

using Predictor = std::function<PredictionSet(const MeiDocument&)>;

VaryingKReport varying_k_report(const AnnotatedDocument& doc, const Predictor& predictor,
                                int k_max, int min_mentions = 5);

std::string varying_k_tsv(const VaryingKReport& report);
std::string varying_k_json(const VaryingKReport& report);

}  // namespace mei
