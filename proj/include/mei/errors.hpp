#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mei {

/// Base class for all toolkit errors. Subclasses carry enough context to
/// point at the offending line, document, or field.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// ---- corpus ingestion ----

class MalformedLine : public Error {
 public:
  MalformedLine(std::size_t line_number, const std::string& detail)
      : Error("malformed line " + std::to_string(line_number) + ": " + detail),
        line_number(line_number) {}
  std::size_t line_number;
};

class UnbalancedCoref : public Error {
 public:
  UnbalancedCoref(std::size_t line_number, const std::string& detail)
      : Error("unbalanced coreference marker at line " + std::to_string(line_number) + ": " +
              detail),
        line_number(line_number) {}
  std::size_t line_number;
};

class SchemaViolation : public Error {
 public:
  SchemaViolation(const std::string& doc_id, const std::string& field, const std::string& detail)
      : Error("schema violation in document '" + doc_id + "', field '" + field + "': " + detail),
        doc_id(doc_id),
        field(field) {}
  std::string doc_id;
  std::string field;
};

// ---- derivation / evaluation ----

class NoQualifyingEntities : public Error {
 public:
  explicit NoQualifyingEntities(const std::string& doc_id)
      : Error("document '" + doc_id + "' has no cluster meeting the mention-count threshold"),
        doc_id(doc_id) {}
  std::string doc_id;
};

class UnknownEntity : public Error {
 public:
  UnknownEntity(const std::string& doc_id, int entity_id)
      : Error("entity id " + std::to_string(entity_id) + " not present in document '" + doc_id +
              "'"),
        doc_id(doc_id),
        entity_id(entity_id) {}
  std::string doc_id;
  int entity_id;
};

class EmptyCorpus : public Error {
 public:
  EmptyCorpus() : Error("corpus is empty") {}
};

class CorpusMismatch : public Error {
 public:
  explicit CorpusMismatch(const std::string& detail) : Error("corpus mismatch: " + detail) {}
};

// ---- cluster mapping ----

class MissingProvider : public Error {
 public:
  MissingProvider() : Error("cosine mapping requires an embedding provider") {}
};

class DuplicateSpan : public Error {
 public:
  DuplicateSpan(const std::string& doc_id, int start, int end)
      : Error("duplicate span [" + std::to_string(start) + ", " + std::to_string(end) +
              "] in document '" + doc_id + "'"),
        doc_id(doc_id),
        start(start),
        end(end) {}
  std::string doc_id;
  int start;
  int end;
};

// ---- identification engine ----

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t expected, std::size_t got)
      : Error("vector dimension mismatch: expected " + std::to_string(expected) + ", got " +
              std::to_string(got)),
        expected(expected),
        got(got) {}
  std::size_t expected;
  std::size_t got;
};

class NonPositiveDistance : public Error {
 public:
  explicit NonPositiveDistance(long d)
      : Error("mention distance must be >= 1, got " + std::to_string(d)), distance(d) {}
  long distance;
};

class MissingPhraseSpan : public Error {
 public:
  MissingPhraseSpan(const std::string& doc_id, int entity_id, const std::string& detail)
      : Error("entity " + std::to_string(entity_id) + " in document '" + doc_id +
              "' has no encodable phrase occurrence: " + detail),
        doc_id(doc_id),
        entity_id(entity_id) {}
  std::string doc_id;
  int entity_id;
};

// ---- chat pipeline ----

class ClientError : public Error {
 public:
  ClientError(int status, const std::string& detail)
      : Error("chat completion failed (status " + std::to_string(status) + "): " + detail),
        status(status) {}
  int status;  // 0 for transport-level failures
};

class BudgetExceeded : public Error {
 public:
  explicit BudgetExceeded(const std::string& detail) : Error("token budget exceeded: " + detail) {}
};

// ---- error analysis ----

class UnknownEntityLabel : public Error {
 public:
  UnknownEntityLabel(const std::string& doc_id, int label)
      : Error("prediction label " + std::to_string(label) + " does not name an entity of '" +
              doc_id + "'"),
        doc_id(doc_id),
        label(label) {}
  std::string doc_id;
  int label;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& detail) : Error("configuration error: " + detail) {}
};

}  // namespace mei
