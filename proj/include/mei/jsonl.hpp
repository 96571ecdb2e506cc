#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mei/types.hpp"

namespace mei {

/// One line per document. Unknown fields are ignored on read; documents are
/// normalized (mentions sorted, duplicates dropped) and validated.
std::vector<AnnotatedDocument> read_corpus_jsonl(std::istream& in);
std::vector<AnnotatedDocument> read_corpus_jsonl_file(const std::string& path);
void write_corpus_jsonl(std::ostream& out, const std::vector<AnnotatedDocument>& docs);

std::vector<MeiDocument> read_mei_jsonl(std::istream& in);
std::vector<MeiDocument> read_mei_jsonl_file(const std::string& path);
void write_mei_jsonl(std::ostream& out, const std::vector<MeiDocument>& docs);

std::vector<PredictionSet> read_predictions_jsonl(std::istream& in);
std::vector<PredictionSet> read_predictions_jsonl_file(const std::string& path);
void write_predictions_jsonl(std::ostream& out, const std::vector<PredictionSet>& preds);

/// Serialization of a single document, used both by the writers above and by
/// byte-stable fixtures.
std::string corpus_json_line(const AnnotatedDocument& doc);
std::string mei_json_line(const MeiDocument& doc);
std::string predictions_json_line(const PredictionSet& preds);

/// Reads a whole file into memory. Throws Error when the file cannot be opened.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace mei
