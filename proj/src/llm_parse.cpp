#include "mei/llm_parse.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "mei/align.hpp"
#include "mei/prompts.hpp"

namespace mei {

namespace {

void warn(Diagnostics* diagnostics, const std::string& message) {
  if (diagnostics) diagnostics->warn(message);
}

/// Everything after the first "Coreference:" marker, or the whole text.
std::string after_preamble(const std::string& text) {
  auto pos = text.find("Coreference:");
  if (pos == std::string::npos) return text;
  return text.substr(pos + std::string("Coreference:").size());
}

std::vector<std::string> whitespace_tokens(const std::string& text) {
  std::vector<std::string> tokens;
  std::istringstream ss(text);
  std::string token;
  while (ss >> token) tokens.push_back(std::move(token));
  return tokens;
}

std::string strip_trailing_punct(const std::string& s) {
  std::size_t end = s.size();
  while (end > 0 && std::ispunct(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(0, end);
}

std::string lowercase(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

/// Resolves a raw tag ("1", "2..", "katharine_hilbery") to an entity id.
std::optional<int> resolve_tag(const std::string& raw, const std::vector<MajorEntity>& entities) {
  if (raw.empty()) return std::nullopt;
  if (std::isdigit(static_cast<unsigned char>(raw[0]))) {
    std::size_t i = 0;
    while (i < raw.size() && std::isdigit(static_cast<unsigned char>(raw[i]))) ++i;
    for (std::size_t k = i; k < raw.size(); ++k) {
      if (!std::ispunct(static_cast<unsigned char>(raw[k]))) return std::nullopt;
    }
    int id = std::stoi(raw.substr(0, i));
    for (const auto& e : entities) {
      if (e.entity_id == id) return id;
    }
    return std::nullopt;
  }
  std::string key = lowercase(strip_trailing_punct(raw));
  for (const auto& e : entities) {
    if (entity_slug(e.phrase) == key) return e.entity_id;
  }
  return std::nullopt;
}

}  // namespace

std::vector<TaggedWord> parse_tagged_output(const std::string& llm_text,
                                            const std::vector<MajorEntity>& entities,
                                            Diagnostics* diagnostics) {
  std::vector<TaggedWord> words;
  for (const auto& token : whitespace_tokens(after_preamble(llm_text))) {
    auto hash = token.find('#');
    if (hash == std::string::npos) {
      words.push_back(TaggedWord{token, std::nullopt});
      continue;
    }
    std::string word = token.substr(0, hash);
    std::string tag = token.substr(hash + 1);
    auto second = tag.find('#');
    if (second != std::string::npos) {
      warn(diagnostics, "multiple tags on token '" + token + "', keeping the first");
      tag = tag.substr(0, second);
    }
    if (word.empty()) {
      warn(diagnostics, "tag without a word: '" + token + "'");
      continue;
    }
    auto id = resolve_tag(tag, entities);
    if (!id) {
      warn(diagnostics, "unknown tag '#" + tag + "' on word '" + word + "'");
      words.push_back(TaggedWord{word, std::nullopt});
      continue;
    }
    words.push_back(TaggedWord{word, id});
  }
  return words;
}

std::vector<TaggedToken> align_and_recover(const std::vector<std::string>& source_tokens,
                                           const std::vector<TaggedWord>& llm_words,
                                           Diagnostics* diagnostics) {
  std::vector<TaggedToken> tagged;
  if (source_tokens.empty() || llm_words.empty()) return tagged;

  std::vector<std::string> words;
  words.reserve(llm_words.size());
  for (const auto& w : llm_words) words.push_back(w.word);

  std::vector<int> aligned = align_other_to_source(source_tokens, words);
  std::set<int> used;
  for (std::size_t j = 0; j < llm_words.size(); ++j) {
    if (!llm_words[j].entity_id) continue;
    int src = aligned[j];
    if (src < 0) {
      warn(diagnostics, "tagged word '" + llm_words[j].word + "' has no aligned source token");
      continue;
    }
    if (!used.insert(src).second) {
      warn(diagnostics, "source token " + std::to_string(src) + " tagged twice, keeping the first");
      continue;
    }
    tagged.push_back(TaggedToken{src, *llm_words[j].entity_id});
  }
  std::sort(tagged.begin(), tagged.end());
  return tagged;
}

namespace {

struct ReplyWord {
  std::string word;
  std::optional<std::string> parenthetical;
};

/// Splits a reply into whitespace words, detaching top-level "(...)" groups
/// and attaching each to the word it follows.
std::vector<ReplyWord> split_words_and_parentheticals(const std::string& text,
                                                      Diagnostics* diagnostics) {
  std::vector<ReplyWord> words;
  std::string current;
  auto flush = [&]() {
    if (!current.empty()) {
      words.push_back(ReplyWord{current, std::nullopt});
      current.clear();
    }
  };
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '(') {
      int depth = 1;
      std::size_t j = i + 1;
      while (j < text.size() && depth > 0) {
        if (text[j] == '(') ++depth;
        if (text[j] == ')') --depth;
        ++j;
      }
      std::string inner = text.substr(i + 1, j - i - 1 - (depth == 0 ? 1 : 0));
      flush();
      if (words.empty()) {
        warn(diagnostics, "parenthetical with no preceding word dropped: (" + inner + ")");
      } else if (words.back().parenthetical) {
        warn(diagnostics, "second parenthetical after '" + words.back().word + "' ignored");
      } else {
        words.back().parenthetical = inner;
      }
      i = j;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
      ++i;
      continue;
    }
    current += c;
    ++i;
  }
  flush();
  return words;
}

bool window_matches(const std::vector<std::string>& source, int start,
                    const std::vector<std::string>& needle) {
  for (std::size_t k = 0; k < needle.size(); ++k) {
    if (normalize_token(source[start + k]) != normalize_token(needle[k])) return false;
  }
  return true;
}

}  // namespace

std::vector<HeadSpan> parse_h2s_output(const std::string& llm_text,
                                       const std::vector<std::string>& source_tokens,
                                       const std::vector<int>& heads,
                                       Diagnostics* diagnostics) {
  std::vector<HeadSpan> result;
  if (heads.empty()) return result;

  auto words = split_words_and_parentheticals(after_preamble(llm_text), diagnostics);
  std::vector<std::string> word_texts;
  word_texts.reserve(words.size());
  for (const auto& w : words) word_texts.push_back(w.word);

  // source index -> reply word index carrying it
  std::vector<int> source_to_word(source_tokens.size(), -1);
  if (!word_texts.empty()) {
    std::vector<int> aligned = align_other_to_source(source_tokens, word_texts);
    for (std::size_t j = 0; j < aligned.size(); ++j) {
      if (aligned[j] >= 0 && source_to_word[aligned[j]] < 0) {
        source_to_word[aligned[j]] = static_cast<int>(j);
      }
    }
  }

  const int n_src = static_cast<int>(source_tokens.size());
  for (int head : heads) {
    if (head < 0 || head >= n_src) continue;
    Span fallback{head, head};
    int word_index = source_to_word[head];
    if (word_index < 0) {
      warn(diagnostics, "head token '" + source_tokens[head] + "' not found in reply");
      result.push_back(HeadSpan{head, fallback});
      continue;
    }
    const auto& parenthetical = words[word_index].parenthetical;
    if (!parenthetical) {
      warn(diagnostics, "no expansion for head '" + source_tokens[head] + "'");
      result.push_back(HeadSpan{head, fallback});
      continue;
    }
    auto needle = whitespace_tokens(*parenthetical);
    if (needle.empty()) {
      warn(diagnostics, "empty expansion for head '" + source_tokens[head] + "'");
      result.push_back(HeadSpan{head, fallback});
      continue;
    }
    const int len = static_cast<int>(needle.size());
    std::optional<Span> found;
    for (int start = std::max(0, head - len + 1); start <= head && start + len <= n_src; ++start) {
      if (window_matches(source_tokens, start, needle)) {
        found = Span{start, start + len - 1};
        break;
      }
    }
    if (!found) {
      warn(diagnostics, "expansion '(" + *parenthetical + ")' does not match the source around '" +
                            source_tokens[head] + "'");
      result.push_back(HeadSpan{head, fallback});
      continue;
    }
    result.push_back(HeadSpan{head, *found});
  }
  return result;
}

namespace {

struct BracketMention {
  std::string text;                  // markup-free mention text
  std::optional<std::string> slug;   // filled "(#...)" value, if any
  int stripped_begin = 0;            // range in markup-free token stream
  int stripped_end = 0;
};

/// Parses "[mention] (#slug)" markup: returns mentions in close order plus
/// the markup-free token stream.
std::vector<BracketMention> scan_bracket_markup(const std::string& text,
                                                std::vector<std::string>* stripped_tokens,
                                                Diagnostics* diagnostics) {
  struct OpenBracket {
    int first_token = 0;
    std::string text;
  };
  std::vector<BracketMention> mentions;
  std::vector<OpenBracket> stack;
  std::vector<std::string> tokens;
  std::string current;
  int just_closed = -1;  // index into mentions of a ']' awaiting its "(#...)"

  auto append_text = [&](const std::string& piece) {
    for (auto& open : stack) {
      if (!open.text.empty() && !piece.empty()) open.text += ' ';
      open.text += piece;
    }
  };
  auto flush = [&]() {
    if (!current.empty()) {
      append_text(current);
      tokens.push_back(current);
      current.clear();
    }
  };

  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '[') {
      flush();
      just_closed = -1;
      stack.push_back(OpenBracket{static_cast<int>(tokens.size()), ""});
      ++i;
      continue;
    }
    if (c == ']') {
      flush();
      if (stack.empty()) {
        warn(diagnostics, "unmatched ']' ignored");
        just_closed = -1;
        ++i;
        continue;
      }
      BracketMention m;
      m.text = stack.back().text;
      m.stripped_begin = stack.back().first_token;
      m.stripped_end = static_cast<int>(tokens.size()) - 1;
      stack.pop_back();
      mentions.push_back(std::move(m));
      just_closed = static_cast<int>(mentions.size()) - 1;
      ++i;
      continue;
    }
    if (c == '(' && just_closed >= 0) {
      // Only a "(#...)" group right after ']' is markup.
      std::size_t j = i + 1;
      while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
      if (j < text.size() && text[j] == '#') {
        std::size_t close = text.find(')', j);
        if (close != std::string::npos) {
          std::string slug = text.substr(j + 1, close - j - 1);
          while (!slug.empty() && std::isspace(static_cast<unsigned char>(slug.back()))) {
            slug.pop_back();
          }
          mentions[just_closed].slug = slug;
          just_closed = -1;
          i = close + 1;
          continue;
        }
      }
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
      ++i;
      continue;
    }
    just_closed = -1;
    current += c;
    ++i;
  }
  flush();
  for (std::size_t k = 0; k < stack.size(); ++k) warn(diagnostics, "unclosed '[' ignored");
  if (stripped_tokens) *stripped_tokens = std::move(tokens);
  return mentions;
}

std::optional<std::optional<int>> slug_to_label(const std::optional<std::string>& slug,
                                                const MeiDocument& doc,
                                                Diagnostics* diagnostics,
                                                const std::string& mention_text) {
  if (!slug || slug->empty()) {
    warn(diagnostics, "mention '[" + mention_text + "]' left unfilled");
    return std::nullopt;  // skip
  }
  std::string key = lowercase(*slug);
  if (key == "others") return std::optional<std::optional<int>>{std::optional<int>{}};
  for (const auto& e : doc.entities) {
    if (entity_slug(e.phrase) == key) {
      return std::optional<std::optional<int>>{std::optional<int>{e.entity_id}};
    }
  }
  auto numeric = resolve_tag(*slug, doc.entities);
  if (numeric) return std::optional<std::optional<int>>{numeric};
  warn(diagnostics, "unknown cluster name '#" + *slug + "' on '[" + mention_text + "]'");
  return std::nullopt;  // skip
}

}  // namespace

PredictionSet parse_linking_output(const std::string& llm_text, const MeiDocument& doc,
                                   Diagnostics* diagnostics) {
  PredictionSet out;
  out.doc_id = doc.doc_id;

  // The spans we bracketed in the prompt, in the close order of their
  // brackets: end ascending, then start descending (inner closes first).
  std::vector<Span> placeholders;
  for (const auto& g : doc.gold) placeholders.push_back(g.span);
  placeholders.insert(placeholders.end(), doc.other_mentions.begin(), doc.other_mentions.end());
  std::sort(placeholders.begin(), placeholders.end(), [](const Span& a, const Span& b) {
    if (a.end != b.end) return a.end < b.end;
    return a.start > b.start;
  });

  auto mentions = scan_bracket_markup(after_preamble(llm_text), nullptr, diagnostics);

  std::vector<std::string> placeholder_texts;
  placeholder_texts.reserve(placeholders.size());
  for (const auto& s : placeholders) placeholder_texts.push_back(span_text(doc.tokens, s, doc.doc_id));
  std::vector<std::string> mention_texts;
  mention_texts.reserve(mentions.size());
  for (const auto& m : mentions) mention_texts.push_back(m.text);

  // Mention-level alignment tolerates dropped or invented brackets.
  std::vector<int> aligned = align_other_to_source(placeholder_texts, mention_texts);
  std::set<Span> filled;
  for (std::size_t j = 0; j < mentions.size(); ++j) {
    if (aligned[j] < 0) {
      warn(diagnostics, "reply mention '[" + mentions[j].text + "]' matches no prompt mention");
      continue;
    }
    const Span& span = placeholders[aligned[j]];
    auto label = slug_to_label(mentions[j].slug, doc, diagnostics, mentions[j].text);
    if (!label) continue;
    if (!filled.insert(span).second) {
      warn(diagnostics, "span [" + std::to_string(span.start) + ", " + std::to_string(span.end) +
                            "] filled twice, keeping the first");
      continue;
    }
    out.assignments.push_back(Assignment{span, *label});
  }
  canonicalize_assignments(out);
  return out;
}

PredictionSet parse_single_output(const std::string& llm_text, const MeiDocument& doc,
                                  Diagnostics* diagnostics) {
  PredictionSet out;
  out.doc_id = doc.doc_id;

  std::vector<std::string> stripped;
  auto mentions = scan_bracket_markup(after_preamble(llm_text), &stripped, diagnostics);
  if (mentions.empty()) return out;

  std::vector<int> aligned = stripped.empty()
                                 ? std::vector<int>{}
                                 : align_other_to_source(doc.tokens, stripped);

  std::set<Span> seen;
  for (const auto& m : mentions) {
    auto label = slug_to_label(m.slug, doc, diagnostics, m.text);
    if (!label) continue;
    if (!*label) {
      // The direct prompt only labels tracked entities; a "#others" fill
      // carries no usable information.
      warn(diagnostics, "'#others' fill ignored on '[" + m.text + "]'");
      continue;
    }
    int lo = -1;
    int hi = -1;
    for (int t = m.stripped_begin; t <= m.stripped_end && t < static_cast<int>(aligned.size());
         ++t) {
      if (aligned[t] < 0) continue;
      if (lo < 0) lo = aligned[t];
      lo = std::min(lo, aligned[t]);
      hi = std::max(hi, aligned[t]);
    }
    if (lo < 0 || hi < 0) {
      warn(diagnostics, "mention '[" + m.text + "]' could not be located in the source");
      continue;
    }
    Span span{lo, hi};
    if (!seen.insert(span).second) continue;
    out.assignments.push_back(Assignment{span, *label});
  }
  canonicalize_assignments(out);
  return out;
}

}  // namespace mei
