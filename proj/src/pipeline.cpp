#include "mei/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <set>
#include <thread>

#include "mei/errors.hpp"
#include "mei/llm_parse.hpp"

namespace mei {

namespace {

ChatRequest make_request(std::vector<ChatMessage> messages, const PipelineOptions& options) {
  ChatRequest request;
  request.messages = std::move(messages);
  request.temperature = 0.0;
  request.max_tokens = options.max_tokens;
  return request;
}

}  // namespace

PipelineResult run_two_stage(const MeiDocument& doc, ChatClient& client, const PromptLibrary& lib,
                             const PipelineOptions& options) {
  PipelineResult result;
  result.predictions.doc_id = doc.doc_id;

  std::string wl_reply =
      client.complete(make_request(build_wordlevel_prompt(doc, lib), options));
  auto words = parse_tagged_output(wl_reply, doc.entities, &result.diagnostics);
  auto tagged = align_and_recover(doc.tokens, words, &result.diagnostics);
  if (tagged.empty()) {
    result.diagnostics.warn("document '" + doc.doc_id + "': no tags recovered from the reply");
    return result;
  }

  std::vector<int> heads;
  std::map<int, int> head_entity;
  for (const auto& t : tagged) {
    heads.push_back(t.source_token_index);
    head_entity[t.source_token_index] = t.entity_id;
  }

  std::vector<std::pair<Span, int>> spans;
  if (options.h2s_mode == H2sMode::kProvider) {
    const HeadSingletonProvider fallback;
    const HeadToSpanProvider& provider = options.provider ? *options.provider : fallback;
    for (int head : heads) {
      Span span = provider.expand(doc, head);
      if (span.start > head || span.end < head) {
        result.diagnostics.warn("provider span for head " + std::to_string(head) +
                                " does not contain it; using the head alone");
        span = Span{head, head};
      }
      spans.emplace_back(span, head_entity.at(head));
    }
  } else {
    std::string h2s_reply =
        client.complete(make_request(build_h2s_prompt(doc, heads, lib), options));
    for (const auto& hs : parse_h2s_output(h2s_reply, doc.tokens, heads, &result.diagnostics)) {
      spans.emplace_back(hs.span, head_entity.at(hs.head_index));
    }
  }

  std::set<Span> seen;
  for (const auto& [span, entity_id] : spans) {
    if (!seen.insert(span).second) continue;
    result.predictions.assignments.push_back(Assignment{span, entity_id});
  }
  canonicalize_assignments(result.predictions);
  return result;
}

PipelineResult run_linking(const MeiDocument& doc, ChatClient& client, const PromptLibrary& lib,
                           const PipelineOptions& options) {
  PipelineResult result;
  std::string reply = client.complete(make_request(build_linking_prompt(doc, lib), options));
  result.predictions = parse_linking_output(reply, doc, &result.diagnostics);
  return result;
}

PipelineResult run_single(const MeiDocument& doc, ChatClient& client, const PromptLibrary& lib,
                          const PipelineOptions& options) {
  PipelineResult result;
  std::string reply = client.complete(make_request(build_single_prompt(doc, lib), options));
  result.predictions = parse_single_output(reply, doc, &result.diagnostics);
  return result;
}

PipelineResult run_document(const MeiDocument& doc, ChatClient& client, const PromptLibrary& lib,
                            const PipelineOptions& options) {
  switch (options.strategy) {
    case PromptStrategy::kTwoStage:
      return run_two_stage(doc, client, lib, options);
    case PromptStrategy::kLinking:
      return run_linking(doc, client, lib, options);
    case PromptStrategy::kSingle:
      return run_single(doc, client, lib, options);
  }
  throw ConfigError("unknown prompt strategy");
}

std::vector<PipelineResult> run_corpus(const std::vector<MeiDocument>& docs, ChatClient& client,
                                       const PromptLibrary& lib, const PipelineOptions& options) {
  std::vector<PipelineResult> results(docs.size());
  if (docs.empty()) return results;

  const int workers = std::max(1, std::min<int>(options.max_parallel,
                                                static_cast<int>(docs.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < docs.size(); ++i) {
      results[i] = run_document(docs[i], client, lib, options);
    }
    return results;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&, w]() {
      try {
        for (std::size_t i = next.fetch_add(1); i < docs.size(); i = next.fetch_add(1)) {
          results[i] = run_document(docs[i], client, lib, options);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace mei
