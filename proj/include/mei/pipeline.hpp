#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mei/chat_client.hpp"
#include "mei/prompts.hpp"
#include "mei/types.hpp"

namespace mei {

/// Turns a tagged head token into a full mention span.
class HeadToSpanProvider {
 public:
  virtual ~HeadToSpanProvider() = default;
  virtual Span expand(const MeiDocument& doc, int head_index) const = 0;
};

/// The trivial provider: every head expands to itself.
class HeadSingletonProvider : public HeadToSpanProvider {
 public:
  Span expand(const MeiDocument&, int head_index) const override {
    return Span{head_index, head_index};
  }
};

enum class H2sMode { kLlm, kProvider };
enum class PromptStrategy { kTwoStage, kLinking, kSingle };

struct PipelineOptions {
  PromptStrategy strategy = PromptStrategy::kTwoStage;
  H2sMode h2s_mode = H2sMode::kLlm;
  const HeadToSpanProvider* provider = nullptr;  // used when h2s_mode == kProvider
  int max_tokens = 4096;
  int max_parallel = 1;
};

struct PipelineResult {
  PredictionSet predictions;
  Diagnostics diagnostics;
};

/// Word-level tagging, tag recovery by alignment, then head-to-span
/// expansion (second prompt or provider). Spans sharing boundaries keep the
/// first head's label.
PipelineResult run_two_stage(const MeiDocument& doc, ChatClient& client, const PromptLibrary& lib,
                             const PipelineOptions& options = {});

/// Pre-bracketed mention linking in one prompt.
PipelineResult run_linking(const MeiDocument& doc, ChatClient& client, const PromptLibrary& lib,
                           const PipelineOptions& options = {});

/// Direct annotation in one prompt.
PipelineResult run_single(const MeiDocument& doc, ChatClient& client, const PromptLibrary& lib,
                          const PipelineOptions& options = {});

PipelineResult run_document(const MeiDocument& doc, ChatClient& client, const PromptLibrary& lib,
                            const PipelineOptions& options);

/// Processes documents with up to options.max_parallel worker threads;
/// results come back in input order.
std::vector<PipelineResult> run_corpus(const std::vector<MeiDocument>& docs, ChatClient& client,
                                       const PromptLibrary& lib, const PipelineOptions& options);

}  // namespace mei
