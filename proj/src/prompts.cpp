#include "mei/prompts.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mei/errors.hpp"
#include "mei/jsonl.hpp"

namespace mei {

std::vector<ChatMessage> PromptTemplate::render(const std::string& final_input) const {
  std::vector<ChatMessage> messages;
  messages.push_back(ChatMessage{"system", instruction});
  for (const auto& ex : examples) {
    messages.push_back(ChatMessage{"user", ex.input});
    messages.push_back(ChatMessage{"assistant", ex.output});
  }
  messages.push_back(ChatMessage{"user", final_input});
  return messages;
}

PromptTemplate load_template(const std::string& path, const std::string& expected_kind) {
  nlohmann::json j = nlohmann::json::parse(read_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw ConfigError("prompt template '" + path + "' is not a JSON object");
  }
  PromptTemplate t;
  t.kind = j.value("kind", "");
  if (t.kind != expected_kind) {
    throw ConfigError("prompt template '" + path + "' has kind '" + t.kind + "', expected '" +
                      expected_kind + "'");
  }
  if (!j.contains("instruction") || !j["instruction"].is_string()) {
    throw ConfigError("prompt template '" + path + "' lacks an instruction string");
  }
  t.instruction = j["instruction"].get<std::string>();
  for (const auto& ex : j.value("examples", nlohmann::json::array())) {
    if (!ex.is_object() || !ex.contains("input") || !ex.contains("output")) {
      throw ConfigError("prompt template '" + path + "' has a malformed example");
    }
    t.examples.push_back(PromptExample{ex["input"].get<std::string>(),
                                       ex["output"].get<std::string>()});
  }
  return t;
}

PromptLibrary PromptLibrary::load(const std::string& dir) {
  PromptLibrary lib;
  lib.wordlevel = load_template(dir + "/wordlevel.json", "wordlevel");
  lib.head_to_span = load_template(dir + "/head_to_span.json", "head_to_span");
  lib.linking = load_template(dir + "/linking.json", "linking");
  lib.single_pass = load_template(dir + "/single_pass.json", "single_pass");
  return lib;
}

std::string entity_slug(const std::string& phrase) {
  std::string slug;
  slug.reserve(phrase.size());
  for (unsigned char c : phrase) {
    slug += c == ' ' ? '_' : static_cast<char>(std::tolower(c));
  }
  return slug;
}

std::string document_text(const MeiDocument& doc) {
  std::string text;
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    if (i > 0) text += ' ';
    text += doc.tokens[i];
  }
  return text;
}

std::string entity_list_block(const MeiDocument& doc) {
  std::string block;
  for (const auto& e : doc.entities) {
    block += std::to_string(e.entity_id) + ". " + e.phrase + " (#" + entity_slug(e.phrase) + ")\n";
  }
  return block;
}

std::string mark_heads(const MeiDocument& doc, const std::vector<int>& heads) {
  std::vector<bool> is_head(doc.tokens.size(), false);
  for (int h : heads) {
    if (h < 0 || static_cast<std::size_t>(h) >= doc.tokens.size()) {
      throw SchemaViolation(doc.doc_id, "heads",
                            "head index " + std::to_string(h) + " out of bounds");
    }
    is_head[h] = true;
  }
  std::string text;
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    if (i > 0) text += ' ';
    text += doc.tokens[i];
    if (is_head[i]) text += '#';
  }
  return text;
}

std::string bracketed_document_text(const MeiDocument& doc) {
  std::vector<Span> spans;
  for (const auto& g : doc.gold) spans.push_back(g.span);
  spans.insert(spans.end(), doc.other_mentions.begin(), doc.other_mentions.end());
  canonicalize_mentions(spans);

  // Brackets opening at a token: outermost (largest end) first. Brackets
  // closing at a token: innermost (largest start) first.
  std::map<int, std::vector<Span>> opens;
  std::map<int, std::vector<Span>> closes;
  for (const auto& s : spans) {
    opens[s.start].push_back(s);
    closes[s.end].push_back(s);
  }
  for (auto& [tok, list] : opens) {
    std::sort(list.begin(), list.end(),
              [](const Span& a, const Span& b) { return a.end > b.end; });
  }
  for (auto& [tok, list] : closes) {
    std::sort(list.begin(), list.end(),
              [](const Span& a, const Span& b) { return a.start > b.start; });
  }

  std::string text;
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    int token = static_cast<int>(i);
    if (i > 0) text += ' ';
    if (auto it = opens.find(token); it != opens.end()) {
      for (std::size_t k = 0; k < it->second.size(); ++k) text += '[';
    }
    text += doc.tokens[i];
    if (auto it = closes.find(token); it != closes.end()) {
      for (std::size_t k = 0; k < it->second.size(); ++k) text += "] (#)";
    }
  }
  return text;
}

namespace {

std::string keyed_input_block(const MeiDocument& doc, const std::string& text) {
  return "Key Entities:\n" + entity_list_block(doc) + "\nText:\n" + text;
}

}  // namespace

std::vector<ChatMessage> build_wordlevel_prompt(const MeiDocument& doc, const PromptLibrary& lib) {
  return lib.wordlevel.render(keyed_input_block(doc, document_text(doc)));
}

std::vector<ChatMessage> build_h2s_prompt(const MeiDocument& doc, const std::vector<int>& heads,
                                          const PromptLibrary& lib) {
  return lib.head_to_span.render(mark_heads(doc, heads));
}

std::vector<ChatMessage> build_linking_prompt(const MeiDocument& doc, const PromptLibrary& lib) {
  return lib.linking.render(keyed_input_block(doc, bracketed_document_text(doc)));
}

std::vector<ChatMessage> build_single_prompt(const MeiDocument& doc, const PromptLibrary& lib) {
  return lib.single_pass.render(keyed_input_block(doc, document_text(doc)));
}

std::string render_transcript(const std::vector<ChatMessage>& messages) {
  std::ostringstream out;
  for (const auto& m : messages) {
    out << "=== " << m.role << " ===\n" << m.content << "\n";
  }
  return out.str();
}

}  // namespace mei
