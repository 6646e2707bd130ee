// In-memory knowledge graph: entities, properties and claims with
// qualifiers, ingested from a JSON-Lines dump and read-only afterwards.

#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace qirk::kg {

enum class ValueType { EntityId, String, Date, Numeric };

std::string_view toString(ValueType type);
std::optional<ValueType> valueTypeFromString(std::string_view name);

// Compares identifiers like Q9 < Q10 (prefix, then numeric suffix); falls
// back to plain string order for anything else.
int compareIds(std::string_view a, std::string_view b);
bool isEntityId(std::string_view id);
bool isPropertyId(std::string_view id);
// YYYY-MM-DD with a real calendar day.
bool isIsoDate(std::string_view text);

class TypedValue {
 public:
  TypedValue() = default;
  static TypedValue entity(std::string id);
  static TypedValue string(std::string text);
  // Throws std::invalid_argument unless `iso` is a calendar date.
  static TypedValue date(std::string iso);
  // Throws std::invalid_argument unless finite.
  static TypedValue numeric(double value);
  // Parses a decimal literal; throws std::invalid_argument.
  static TypedValue numeric(std::string_view literal);

  ValueType type() const { return type_; }
  // Entity id, string or ISO date; canonical decimal text for numerics.
  const std::string& text() const { return text_; }
  double number() const { return number_; }

  bool operator==(const TypedValue& other) const;
  std::strong_ordering operator<=>(const TypedValue& other) const;

 private:
  ValueType type_ = ValueType::String;
  std::string text_;
  double number_ = 0;
};

struct TypedValueHash {
  std::size_t operator()(const TypedValue& v) const;
};

struct EntityRecord {
  std::string id;
  std::string label;
  std::string description;
  std::uint64_t popularity = 0;
  bool operator==(const EntityRecord&) const = default;
};

struct PropertyRecord {
  std::string id;
  std::string label;
  std::string description;
  ValueType datatype = ValueType::EntityId;
  bool operator==(const PropertyRecord&) const = default;
};

struct Qualifier {
  std::string property;
  TypedValue value;
  bool operator==(const Qualifier&) const = default;
};

struct KgStatement {
  std::string statementId;
  std::string subject;
  std::string property;
  TypedValue value;
  std::vector<Qualifier> qualifiers;
  bool operator==(const KgStatement&) const = default;
};

// One qualifier of one statement, as produced by a qualifier scan.
struct QualifierRow {
  const KgStatement* statement = nullptr;
  const Qualifier* qualifier = nullptr;
};

struct IngestReport {
  struct Rejection {
    std::size_t line = 0;
    std::string reason;
  };
  std::size_t lines = 0;
  std::size_t entities = 0;
  std::size_t properties = 0;
  std::size_t statements = 0;
  std::size_t qualifiers = 0;
  std::vector<Rejection> rejected;
};

class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a non-empty dump yields no usable line at all.
class IngestError : public std::runtime_error {
 public:
  IngestError(std::string message, IngestReport report)
      : std::runtime_error(std::move(message)), report_(std::move(report)) {}
  const IngestReport& report() const { return report_; }

 private:
  IngestReport report_;
};

class UnknownStatement : public std::out_of_range {
  using std::out_of_range::out_of_range;
};

class KgStore {
 public:
  struct ScanFilter {
    std::optional<std::string> subject;
    std::optional<std::vector<std::string>> properties;
    std::optional<std::vector<TypedValue>> values;
  };

  struct IngestResult;

  // Reads a JSON-Lines dump. Malformed lines are skipped and reported.
  static IngestResult ingest(const std::filesystem::path& path);
  static IngestResult ingestText(std::string_view text);

  // Writes the store as a normalized dump (statement ids filled in).
  void save(const std::filesystem::path& path) const;
  std::string dumpText() const;

  const EntityRecord* entity(std::string_view id) const;
  const PropertyRecord* property(std::string_view id) const;
  std::span<const EntityRecord> entities() const { return entities_; }
  std::span<const PropertyRecord> properties() const { return properties_; }
  std::span<const KgStatement> statements() const { return statements_; }
  const KgStatement* statement(std::string_view statementId) const;

  // Statements matching every given filter, ordered by statement id.
  std::vector<const KgStatement*> scan(const ScanFilter& filter) const;

  // Qualifiers of one statement, optionally restricted to `properties`.
  std::vector<Qualifier> qualifierScan(
      std::string_view statementId,
      const std::optional<std::vector<std::string>>& properties = {}) const;

  // Every (statement, qualifier) pair whose qualifier property is in
  // `properties` (all when absent), ordered by statement id.
  std::vector<QualifierRow> scanQualifiers(
      const std::optional<std::vector<std::string>>& properties = {}) const;

 private:
  void buildIndexes();

  std::vector<EntityRecord> entities_;
  std::vector<PropertyRecord> properties_;
  std::vector<KgStatement> statements_;  // sorted by statement id
  std::unordered_map<std::string, std::size_t> entityById_;
  std::unordered_map<std::string, std::size_t> propertyById_;
  std::unordered_map<std::string, std::size_t> statementById_;
  std::unordered_map<std::string, std::vector<std::size_t>> bySubject_;
  std::unordered_map<std::string, std::vector<std::size_t>> byProperty_;
  std::unordered_map<std::string, std::vector<std::size_t>> byQualifierProperty_;
};

struct KgStore::IngestResult {
  KgStore store;
  IngestReport report;
};

// DDL for the relational encoding of a store (entities, properties, claims,
// qualifiers). Exactly one value_* column is non-null per claim and qualifier.
std::string emitRelationalSchema();

// INSERT statements loading `store` into the schema above.
std::string emitRelationalData(const KgStore& store);

}  // namespace qirk::kg
