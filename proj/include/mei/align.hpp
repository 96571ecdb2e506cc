#pragma once

#include <string>
#include <vector>

namespace mei {

/// Lowercases and strips leading/trailing ASCII punctuation; tokens that are
/// all punctuation keep their raw form (lowercased). Alignment and span
/// searches compare tokens through this normalization.
std::string normalize_token(const std::string& token);

enum class AlignOp {
  kMatch,     // source[i] aligned to other[j] (equal after normalization)
  kMismatch,  // source[i] aligned to other[j] (unequal)
  kSourceGap, // source[i] aligned to a gap
  kOtherGap,  // other[j] aligned to a gap
};

struct AlignStep {
  AlignOp op;
  int source_index = -1;  // set unless op == kOtherGap
  int other_index = -1;   // set unless op == kSourceGap
};

struct Alignment {
  int score = 0;
  std::vector<AlignStep> steps;  // in sequence order
};

/// Global alignment with match +1, mismatch -1, gap -1, comparing tokens
/// case-insensitively after punctuation stripping. Traceback ties prefer
/// diagonal, then consuming a source token, then consuming an other token.
Alignment needleman_wunsch(const std::vector<std::string>& source,
                           const std::vector<std::string>& other);

/// For each position of `other`, the aligned source index or -1 when the
/// token was consumed by a gap.
std::vector<int> align_other_to_source(const std::vector<std::string>& source,
                                       const std::vector<std::string>& other);

}  // namespace mei
