#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mei/types.hpp"

namespace mei {

/// A tag recovered onto a source token.
struct TaggedToken {
  int source_token_index = 0;
  int entity_id = 0;

  auto operator<=>(const TaggedToken&) const = default;
};

/// One whitespace token of an LLM reply, with its tag when it carried one.
struct TaggedWord {
  std::string word;
  std::optional<int> entity_id;
};

/// Lenient word-tag reader for "word#id" replies. Unknown ids or slugs
/// become untagged words with a warning; a "Coreference:" marker, when
/// present, skips everything before it.
std::vector<TaggedWord> parse_tagged_output(const std::string& llm_text,
                                            const std::vector<MajorEntity>& entities,
                                            Diagnostics* diagnostics = nullptr);

/// Aligns LLM words against the source and projects each tag onto its
/// aligned source token. Tags aligned to gaps (or doubled onto one source
/// token) are dropped with a warning.
std::vector<TaggedToken> align_and_recover(const std::vector<std::string>& source_tokens,
                                           const std::vector<TaggedWord>& llm_words,
                                           Diagnostics* diagnostics = nullptr);

struct HeadSpan {
  int head_index = 0;
  Span span;
};

/// Reads "head (full span text)" parentheticals from a head-expansion reply
/// and locates each parenthetical in the source as the length-matched window
/// containing the head. Falls back to the head singleton with a warning.
std::vector<HeadSpan> parse_h2s_output(const std::string& llm_text,
                                       const std::vector<std::string>& source_tokens,
                                       const std::vector<int>& heads,
                                       Diagnostics* diagnostics = nullptr);

/// Reads a reply to the pre-bracketed linking prompt: each "[mention] (#x)"
/// fill is matched back to the bracketed source span by alignment; "#others"
/// maps to the null label, unfilled or unknown markers are skipped.
PredictionSet parse_linking_output(const std::string& llm_text, const MeiDocument& doc,
                                   Diagnostics* diagnostics = nullptr);

/// Reads a reply that annotated "[span text] (#slug)" freely over an echoed
/// document; bracketed stretches are located in the source by alignment.
PredictionSet parse_single_output(const std::string& llm_text, const MeiDocument& doc,
                                  Diagnostics* diagnostics = nullptr);

}  // namespace mei
