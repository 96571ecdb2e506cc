#pragma once

#include <string>
#include <vector>

#include "mei/types.hpp"

namespace mei {

struct EntityScore {
  int entity_id = 0;
  long tp = 0;
  long fp = 0;
  long fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct DocumentScores {
  std::string doc_id;
  std::vector<EntityScore> entities;  // one per gold entity, in id order
};

/// Per-entity exact-boundary precision/recall/F1. A predicted (span, id) is a
/// true positive iff the gold set contains exactly that pair. Null-labeled
/// predictions never count for or against any entity.
EntityScore entity_prf(const MeiDocument& gold, const PredictionSet& pred, int entity_id);

DocumentScores score_document(const MeiDocument& gold, const PredictionSet& pred);

/// Pairs documents and predictions by doc_id. Throws CorpusMismatch listing
/// unmatched ids; documents with no prediction line are NOT silently skipped.
std::vector<DocumentScores> score_corpus(const std::vector<MeiDocument>& gold,
                                         const std::vector<PredictionSet>& preds);

/// Mean F1 over every (document, entity) pair.
double macro_f1(const std::vector<DocumentScores>& scores);

/// Mean over documents of the gold-frequency-weighted per-document F1.
double micro_f1(const std::vector<DocumentScores>& scores);

/// Report with one row per (document, entity) and corpus summary lines.
/// Values rounded to 4 decimal places in both renderings.
std::string report_tsv(const std::vector<DocumentScores>& scores);
std::string report_json(const std::vector<DocumentScores>& scores);

}  // namespace mei
