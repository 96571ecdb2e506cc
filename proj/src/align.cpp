#include "mei/align.hpp"

#include <algorithm>
#include <cctype>

namespace mei {

namespace {

constexpr int kMatchScore = 1;
constexpr int kMismatchScore = -1;
constexpr int kGapScore = -1;

enum Move : unsigned char { kDiag = 0, kUp = 1, kLeft = 2, kStart = 3 };

}  // namespace

std::string normalize_token(const std::string& token) {
  std::size_t begin = 0;
  std::size_t end = token.size();
  while (begin < end && std::ispunct(static_cast<unsigned char>(token[begin]))) ++begin;
  while (end > begin && std::ispunct(static_cast<unsigned char>(token[end - 1]))) --end;
  std::string core = begin < end ? token.substr(begin, end - begin) : token;
  std::transform(core.begin(), core.end(), core.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return core;
}

Alignment needleman_wunsch(const std::vector<std::string>& source,
                           const std::vector<std::string>& other) {
  const std::size_t n = source.size();
  const std::size_t m = other.size();

  std::vector<std::string> ns(n), no(m);
  for (std::size_t i = 0; i < n; ++i) ns[i] = normalize_token(source[i]);
  for (std::size_t j = 0; j < m; ++j) no[j] = normalize_token(other[j]);

  // Full move matrix (one byte per cell) with two rolling score rows.
  std::vector<unsigned char> moves((n + 1) * (m + 1), kStart);
  auto move_at = [&](std::size_t i, std::size_t j) -> unsigned char& {
    return moves[i * (m + 1) + j];
  };
  std::vector<int> prev(m + 1), cur(m + 1);
  for (std::size_t j = 1; j <= m; ++j) {
    prev[j] = static_cast<int>(j) * kGapScore;
    move_at(0, j) = kLeft;
  }
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<int>(i) * kGapScore;
    move_at(i, 0) = kUp;
    for (std::size_t j = 1; j <= m; ++j) {
      int diag = prev[j - 1] + (ns[i - 1] == no[j - 1] ? kMatchScore : kMismatchScore);
      int up = prev[j] + kGapScore;
      int left = cur[j - 1] + kGapScore;
      // Tie preference: diagonal, then source-consuming, then other-consuming.
      int best = diag;
      unsigned char move = kDiag;
      if (up > best) {
        best = up;
        move = kUp;
      }
      if (left > best) {
        best = left;
        move = kLeft;
      }
      cur[j] = best;
      move_at(i, j) = move;
    }
    std::swap(prev, cur);
  }

  Alignment result;
  result.score = prev[m];
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    switch (move_at(i, j)) {
      case kDiag: {
        AlignStep step;
        step.op = ns[i - 1] == no[j - 1] ? AlignOp::kMatch : AlignOp::kMismatch;
        step.source_index = static_cast<int>(i) - 1;
        step.other_index = static_cast<int>(j) - 1;
        result.steps.push_back(step);
        --i;
        --j;
        break;
      }
      case kUp: {
        AlignStep step;
        step.op = AlignOp::kSourceGap;
        step.source_index = static_cast<int>(i) - 1;
        result.steps.push_back(step);
        --i;
        break;
      }
      default: {
        AlignStep step;
        step.op = AlignOp::kOtherGap;
        step.other_index = static_cast<int>(j) - 1;
        result.steps.push_back(step);
        --j;
        break;
      }
    }
  }
  std::reverse(result.steps.begin(), result.steps.end());
  return result;
}

std::vector<int> align_other_to_source(const std::vector<std::string>& source,
                                       const std::vector<std::string>& other) {
  std::vector<int> map(other.size(), -1);
  if (source.empty() || other.empty()) return map;
  for (const auto& step : needleman_wunsch(source, other).steps) {
    if (step.op == AlignOp::kMatch || step.op == AlignOp::kMismatch) {
      map[step.other_index] = step.source_index;
    }
  }
  return map;
}

}  // namespace mei
