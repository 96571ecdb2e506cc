#include "mei/conll.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <vector>

#include "mei/errors.hpp"

namespace mei {

namespace {

struct OpenMention {
  int start = 0;
};

struct DocBuilder {
  AnnotatedDocument doc;
  std::map<int, std::vector<Span>> clusters;  // file-local cluster id -> mentions
  std::vector<int> cluster_order;             // file-local ids by first appearance
  int sentence_start = 0;

  void note_cluster(int file_cluster_id) {
    auto [it, inserted] = clusters.try_emplace(file_cluster_id);
    if (inserted) cluster_order.push_back(file_cluster_id);
  }

  void add_mention(int file_cluster_id, Span span) {
    note_cluster(file_cluster_id);
    clusters[file_cluster_id].push_back(span);
  }

  void close_sentence() {
    int end = static_cast<int>(doc.tokens.size());
    if (end > sentence_start) doc.sentences.push_back(Span{sentence_start, end});
    sentence_start = end;
  }
};

std::vector<std::string> split_whitespace(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream ss(line);
  std::string field;
  while (ss >> field) fields.push_back(std::move(field));
  return fields;
}

bool is_begin_line(const std::string& line) { return line.rfind("#begin document", 0) == 0; }
bool is_end_line(const std::string& line) { return line.rfind("#end document", 0) == 0; }

std::string parse_begin_id(const std::string& line, std::size_t line_number) {
  auto open = line.find('(');
  auto close = line.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close <= open) {
    throw MalformedLine(line_number, "cannot parse document id from begin marker");
  }
  std::string id = line.substr(open + 1, close - open - 1);
  if (id.empty()) throw MalformedLine(line_number, "empty document id");
  return id;
}

/// Applies one coreference field ("(12", "12)", "(12)", "-", "(1(2", "1)|(3")
/// to the per-cluster stacks of open mentions.
void apply_coref_field(const std::string& field, int token_index, std::size_t line_number,
                       std::map<int, std::vector<OpenMention>>& open, DocBuilder& builder) {
  if (field == "-") return;
  std::size_t i = 0;
  while (i < field.size()) {
    if (field[i] == '|') {
      ++i;
      continue;
    }
    bool opens = false;
    if (field[i] == '(') {
      opens = true;
      ++i;
    }
    std::size_t digits_start = i;
    while (i < field.size() && std::isdigit(static_cast<unsigned char>(field[i]))) ++i;
    if (i == digits_start) {
      throw MalformedLine(line_number, "expected cluster id in coreference field '" + field + "'");
    }
    int id = std::stoi(field.substr(digits_start, i - digits_start));
    bool closes = false;
    if (i < field.size() && field[i] == ')') {
      closes = true;
      ++i;
    }
    if (!opens && !closes) {
      throw MalformedLine(line_number,
                          "cluster id without bracket in coreference field '" + field + "'");
    }
    if (opens) {
      builder.note_cluster(id);
      open[id].push_back(OpenMention{token_index});
    }
    if (closes) {
      auto it = open.find(id);
      if (it == open.end() || it->second.empty()) {
        throw UnbalancedCoref(line_number, "closing cluster " + std::to_string(id) +
                                               " which has no open mention");
      }
      builder.add_mention(id, Span{it->second.back().start, token_index});
      it->second.pop_back();
    }
  }
}

AnnotatedDocument finish(DocBuilder&& builder) {
  AnnotatedDocument doc = std::move(builder.doc);
  int next_id = 0;
  for (int file_id : builder.cluster_order) {
    Cluster cluster;
    cluster.cluster_id = next_id++;
    cluster.mentions = std::move(builder.clusters[file_id]);
    canonicalize_mentions(cluster.mentions);
    doc.clusters.push_back(std::move(cluster));
  }
  validate_document(doc);
  return doc;
}

}  // namespace

std::vector<AnnotatedDocument> read_conll(std::istream& in) {
  std::map<std::string, DocBuilder> builders;  // doc id -> accumulated parts
  std::vector<std::string> doc_order;

  DocBuilder* current = nullptr;
  std::map<int, std::vector<OpenMention>> open;
  std::string line;
  std::size_t line_number = 0;

  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();

    if (is_begin_line(line)) {
      if (current) throw MalformedLine(line_number, "begin marker inside an open document");
      std::string id = parse_begin_id(line, line_number);
      auto [it, inserted] = builders.try_emplace(id);
      if (inserted) {
        it->second.doc.doc_id = id;
        doc_order.push_back(id);
      }
      current = &it->second;
      open.clear();
      continue;
    }
    if (is_end_line(line)) {
      if (!current) throw MalformedLine(line_number, "end marker without a begin marker");
      for (const auto& [id, stack] : open) {
        if (!stack.empty()) {
          throw UnbalancedCoref(line_number,
                                "cluster " + std::to_string(id) + " still open at document end");
        }
      }
      current->close_sentence();
      current = nullptr;
      continue;
    }
    if (!current) {
      if (split_whitespace(line).empty() || line[0] == '#') continue;
      throw MalformedLine(line_number, "token row outside of a document");
    }

    auto fields = split_whitespace(line);
    if (fields.empty()) {
      current->close_sentence();
      continue;
    }
    if (line[0] == '#') continue;
    if (fields.size() < 5) {
      throw MalformedLine(line_number, "expected at least 5 columns, got " +
                                           std::to_string(fields.size()));
    }
    int token_index = static_cast<int>(current->doc.tokens.size());
    current->doc.tokens.push_back(fields[3]);
    apply_coref_field(fields.back(), token_index, line_number, open, *current);
  }
  if (current) {
    throw MalformedLine(line_number, "input ended inside document '" + current->doc.doc_id + "'");
  }

  std::vector<AnnotatedDocument> docs;
  docs.reserve(doc_order.size());
  for (const auto& id : doc_order) docs.push_back(finish(std::move(builders[id])));
  return docs;
}

std::vector<AnnotatedDocument> read_conll_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path);
  return read_conll(in);
}

}  // namespace mei
