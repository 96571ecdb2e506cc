#pragma once

#include <string>
#include <vector>

#include "mei/types.hpp"

namespace mei {

struct ChatMessage {
  std::string role;  // "system", "user", "assistant"
  std::string content;

  bool operator==(const ChatMessage&) const = default;
};

struct PromptExample {
  std::string input;
  std::string output;
};

/// Instruction plus fixed few-shot examples, loaded from a JSON asset:
/// {"kind": ..., "instruction": ..., "examples": [{"input", "output"}...]}.
struct PromptTemplate {
  std::string kind;
  std::string instruction;
  std::vector<PromptExample> examples;

  /// system(instruction), then user/assistant turns per example, then
  /// user(final_input).
  std::vector<ChatMessage> render(const std::string& final_input) const;
};

PromptTemplate load_template(const std::string& path, const std::string& expected_kind);

struct PromptLibrary {
  PromptTemplate wordlevel;     // word-by-word entity tagging
  PromptTemplate head_to_span;  // expand marked heads to full phrases
  PromptTemplate linking;       // label pre-bracketed mentions
  PromptTemplate single_pass;   // annotate mentions directly

  static PromptLibrary load(const std::string& dir);
};

/// Lowercased phrase with spaces replaced by underscores.
std::string entity_slug(const std::string& phrase);

/// All tokens joined with single spaces.
std::string document_text(const MeiDocument& doc);

/// "N. phrase (#slug)" per entity, one per line.
std::string entity_list_block(const MeiDocument& doc);

/// Document text with "#" appended to each head token.
std::string mark_heads(const MeiDocument& doc, const std::vector<int>& heads);

/// Document text with every gold and other mention wrapped as
/// "[mention] (#)", nested mentions included.
std::string bracketed_document_text(const MeiDocument& doc);

std::vector<ChatMessage> build_wordlevel_prompt(const MeiDocument& doc, const PromptLibrary& lib);
std::vector<ChatMessage> build_h2s_prompt(const MeiDocument& doc, const std::vector<int>& heads,
                                          const PromptLibrary& lib);
std::vector<ChatMessage> build_linking_prompt(const MeiDocument& doc, const PromptLibrary& lib);
std::vector<ChatMessage> build_single_prompt(const MeiDocument& doc, const PromptLibrary& lib);

/// Stable human-readable rendering of a message list, used for golden files.
std::string render_transcript(const std::vector<ChatMessage>& messages);

}  // namespace mei
