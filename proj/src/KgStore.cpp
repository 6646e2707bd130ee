#include "qirk/KgStore.h"

#include <openssl/sha.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace qirk::kg {

using nlohmann::json;

namespace {

bool hasIdShape(std::string_view id, char prefix) {
  if (id.size() < 2 || id[0] != prefix) return false;
  return std::all_of(id.begin() + 1, id.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

std::string formatNumber(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

std::string sha256Prefix(std::string_view text) {
  unsigned char digest[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(text.data()), text.size(),
         digest);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (int i = 0; i < 8; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

struct LineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string requireString(const json& obj, const char* key, bool nonEmpty) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw LineError(std::string("missing string field '") + key + "'");
  }
  auto s = it->get<std::string>();
  if (nonEmpty && s.empty()) {
    throw LineError(std::string("field '") + key + "' must not be empty");
  }
  return s;
}

std::string optionalString(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  if (!it->is_string()) {
    throw LineError(std::string("field '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

ValueType requireType(const json& obj) {
  auto name = requireString(obj, "datatype", true);
  auto type = valueTypeFromString(name);
  if (!type) throw LineError("unknown datatype '" + name + "'");
  return *type;
}

TypedValue decodeValue(const json& raw, ValueType type) {
  try {
    switch (type) {
      case ValueType::EntityId:
        if (!raw.is_string() || !isEntityId(raw.get<std::string>())) {
          throw LineError("entity value must be a Q-identifier");
        }
        return TypedValue::entity(raw.get<std::string>());
      case ValueType::String:
        if (!raw.is_string()) throw LineError("string value expected");
        return TypedValue::string(raw.get<std::string>());
      case ValueType::Date:
        if (!raw.is_string()) throw LineError("date value must be a string");
        return TypedValue::date(raw.get<std::string>());
      case ValueType::Numeric:
        if (raw.is_number()) return TypedValue::numeric(raw.get<double>());
        if (raw.is_string()) return TypedValue::numeric(raw.get<std::string>());
        throw LineError("numeric value expected");
    }
  } catch (const std::invalid_argument& e) {
    throw LineError(e.what());
  }
  throw LineError("bad value");
}

json encodeValue(const TypedValue& v) {
  if (v.type() == ValueType::Numeric) return v.number();
  return v.text();
}

std::string sqlQuote(std::string_view text) {
  std::string out = "'";
  for (char c : text) {
    if (c == '\'') out.push_back('\'');
    out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

// value_entity, value_string, value_date, value_numeric
std::string sqlValueColumns(const TypedValue& v) {
  std::string cols[4] = {"NULL", "NULL", "NULL", "NULL"};
  switch (v.type()) {
    case ValueType::EntityId: cols[0] = sqlQuote(v.text()); break;
    case ValueType::String: cols[1] = sqlQuote(v.text()); break;
    case ValueType::Date: cols[2] = sqlQuote(v.text()); break;
    case ValueType::Numeric: cols[3] = v.text(); break;
  }
  return cols[0] + ", " + cols[1] + ", " + cols[2] + ", " + cols[3];
}

}  // namespace

// _____________________________________________________________________________
std::string_view toString(ValueType type) {
  switch (type) {
    case ValueType::EntityId: return "entity_id";
    case ValueType::String: return "string";
    case ValueType::Date: return "date";
    case ValueType::Numeric: return "numeric";
  }
  return "?";
}

std::optional<ValueType> valueTypeFromString(std::string_view name) {
  if (name == "entity_id") return ValueType::EntityId;
  if (name == "string") return ValueType::String;
  if (name == "date") return ValueType::Date;
  if (name == "numeric") return ValueType::Numeric;
  return std::nullopt;
}

bool isEntityId(std::string_view id) { return hasIdShape(id, 'Q'); }
bool isPropertyId(std::string_view id) { return hasIdShape(id, 'P'); }

int compareIds(std::string_view a, std::string_view b) {
  auto split = [](std::string_view s) {
    std::size_t i = 0;
    while (i < s.size() && !(s[i] >= '0' && s[i] <= '9')) ++i;
    return std::pair{s.substr(0, i), s.substr(i)};
  };
  auto [pa, na] = split(a);
  auto [pb, nb] = split(b);
  bool digitsA = !na.empty() && std::all_of(na.begin(), na.end(), [](char c) {
    return c >= '0' && c <= '9';
  });
  bool digitsB = !nb.empty() && std::all_of(nb.begin(), nb.end(), [](char c) {
    return c >= '0' && c <= '9';
  });
  if (digitsA && digitsB && pa == pb) {
    auto strip = [](std::string_view s) {
      std::size_t i = 0;
      while (i + 1 < s.size() && s[i] == '0') ++i;
      return s.substr(i);
    };
    auto da = strip(na);
    auto db = strip(nb);
    if (da.size() != db.size()) return da.size() < db.size() ? -1 : 1;
    int c = da.compare(db);
    if (c != 0) return c < 0 ? -1 : 1;
  }
  int c = a.compare(b);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

bool isIsoDate(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return false;
  auto digits = [&](std::size_t from, std::size_t n, int& out) {
    out = 0;
    for (std::size_t i = from; i < from + n; ++i) {
      if (text[i] < '0' || text[i] > '9') return false;
      out = out * 10 + (text[i] - '0');
    }
    return true;
  };
  int year, month, day;
  if (!digits(0, 4, year) || !digits(5, 2, month) || !digits(8, 2, day)) {
    return false;
  }
  if (month < 1 || month > 12 || day < 1) return false;
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
  int maxDay = kDays[month - 1] + (month == 2 && leap ? 1 : 0);
  return day <= maxDay;
}

// _____________________________________________________________________________
TypedValue TypedValue::entity(std::string id) {
  TypedValue v;
  v.type_ = ValueType::EntityId;
  v.text_ = std::move(id);
  return v;
}

TypedValue TypedValue::string(std::string text) {
  TypedValue v;
  v.type_ = ValueType::String;
  v.text_ = std::move(text);
  return v;
}

TypedValue TypedValue::date(std::string iso) {
  if (!isIsoDate(iso)) {
    throw std::invalid_argument("'" + iso + "' is not an ISO-8601 calendar date");
  }
  TypedValue v;
  v.type_ = ValueType::Date;
  v.text_ = std::move(iso);
  return v;
}

TypedValue TypedValue::numeric(double value) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument("numeric value must be finite");
  }
  TypedValue v;
  v.type_ = ValueType::Numeric;
  v.number_ = value == 0 ? 0.0 : value;  // fold -0
  v.text_ = formatNumber(v.number_);
  return v;
}

TypedValue TypedValue::numeric(std::string_view literal) {
  double value = 0;
  auto [end, ec] =
      std::from_chars(literal.data(), literal.data() + literal.size(), value);
  if (ec != std::errc() || end != literal.data() + literal.size()) {
    throw std::invalid_argument("'" + std::string(literal) +
                                "' is not a decimal number");
  }
  return numeric(value);
}

bool TypedValue::operator==(const TypedValue& other) const {
  if (type_ != other.type_) return false;
  if (type_ == ValueType::Numeric) return number_ == other.number_;
  return text_ == other.text_;
}

std::strong_ordering TypedValue::operator<=>(const TypedValue& other) const {
  if (type_ != other.type_) return type_ <=> other.type_;
  if (type_ == ValueType::Numeric) {
    if (number_ < other.number_) return std::strong_ordering::less;
    if (number_ > other.number_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  int c = type_ == ValueType::EntityId ? compareIds(text_, other.text_)
                                       : text_.compare(other.text_);
  return c <=> 0;
}

std::size_t TypedValueHash::operator()(const TypedValue& v) const {
  std::size_t h = std::hash<std::string>{}(v.text());
  return h ^ (static_cast<std::size_t>(v.type()) * 0x9E3779B97F4A7C15ULL);
}

// _____________________________________________________________________________
KgStore::IngestResult KgStore::ingest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dump '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading dump '" + path.string() + "'");
  return ingestText(buf.str());
}

KgStore::IngestResult KgStore::ingestText(std::string_view text) {
  struct Line {
    std::size_t number;
    std::string_view raw;
    json doc;
  };
  IngestResult result;
  IngestReport& report = result.report;
  KgStore& store = result.store;

  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    start = end + 1;
    ++number;
    if (raw.find_first_not_of(" \t") == std::string_view::npos) continue;
    ++report.lines;
    try {
      json doc = json::parse(raw);
      if (!doc.is_object()) throw LineError("line is not a JSON object");
      lines.push_back({number, raw, std::move(doc)});
    } catch (const json::exception& e) {
      report.rejected.push_back({number, std::string("invalid JSON: ") + e.what()});
    } catch (const LineError& e) {
      report.rejected.push_back({number, e.what()});
    }
  }

  // Properties first so that claims can be checked against their datatype.
  std::vector<const Line*> entityLines;
  for (const Line& line : lines) {
    try {
      auto type = requireString(line.doc, "type", true);
      if (type == "entity") {
        entityLines.push_back(&line);
        continue;
      }
      if (type != "property") throw LineError("unknown record type '" + type + "'");
      PropertyRecord p;
      p.id = requireString(line.doc, "id", true);
      if (!isPropertyId(p.id)) throw LineError("property id '" + p.id + "' is not P<digits>");
      p.label = requireString(line.doc, "label", true);
      p.description = optionalString(line.doc, "description");
      p.datatype = requireType(line.doc);
      if (store.propertyById_.contains(p.id)) {
        throw LineError("duplicate property id '" + p.id + "'");
      }
      store.propertyById_.emplace(p.id, store.properties_.size());
      store.properties_.push_back(std::move(p));
    } catch (const LineError& e) {
      report.rejected.push_back({line.number, e.what()});
    } catch (const json::exception& e) {
      report.rejected.push_back({line.number, e.what()});
    }
  }

  std::set<std::string> statementIds;
  for (const Line* line : entityLines) {
    try {
      const json& doc = line->doc;
      EntityRecord e;
      e.id = requireString(doc, "id", true);
      if (!isEntityId(e.id)) throw LineError("entity id '" + e.id + "' is not Q<digits>");
      e.label = requireString(doc, "label", true);
      e.description = optionalString(doc, "description");
      if (auto it = doc.find("popularity"); it != doc.end() && !it->is_null()) {
        if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<std::int64_t>() >= 0)) {
          throw LineError("popularity must be a non-negative integer");
        }
        e.popularity = it->get<std::uint64_t>();
      }
      if (store.entityById_.contains(e.id)) {
        throw LineError("duplicate entity id '" + e.id + "'");
      }

      auto checkedProperty = [&](const json& obj) {
        auto pid = requireString(obj, "property", true);
        auto type = requireType(obj);
        const PropertyRecord* p = store.property(pid);
        if (!p) throw LineError("unknown property '" + pid + "'");
        if (p->datatype != type) {
          throw LineError("datatype of " + pid + " is " +
                          std::string(toString(p->datatype)) + ", not " +
                          std::string(toString(type)));
        }
        auto value = obj.find("value");
        if (value == obj.end()) throw LineError("claim without value");
        return std::pair{pid, decodeValue(*value, type)};
      };

      std::vector<KgStatement> claims;
      std::set<std::string> lineIds;
      if (auto it = doc.find("claims"); it != doc.end() && !it->is_null()) {
        if (!it->is_array()) throw LineError("claims must be an array");
        std::string lineHash;
        for (std::size_t ordinal = 0; ordinal < it->size(); ++ordinal) {
          const json& c = (*it)[ordinal];
          if (!c.is_object()) throw LineError("claim must be an object");
          KgStatement st;
          st.subject = e.id;
          std::tie(st.property, st.value) = checkedProperty(c);
          st.statementId = optionalString(c, "statement_id");
          if (st.statementId.empty()) {
            if (lineHash.empty()) lineHash = sha256Prefix(line->raw);
            st.statementId = e.id + "$" + lineHash + "$" + std::to_string(ordinal);
          }
          if (statementIds.contains(st.statementId) ||
              !lineIds.insert(st.statementId).second) {
            throw LineError("duplicate statement id '" + st.statementId + "'");
          }
          if (auto q = c.find("qualifiers"); q != c.end() && !q->is_null()) {
            if (!q->is_array()) throw LineError("qualifiers must be an array");
            for (const json& qual : *q) {
              if (!qual.is_object()) throw LineError("qualifier must be an object");
              auto [pid, value] = checkedProperty(qual);
              st.qualifiers.push_back({std::move(pid), std::move(value)});
            }
          }
          claims.push_back(std::move(st));
        }
      }

      store.entityById_.emplace(e.id, store.entities_.size());
      store.entities_.push_back(std::move(e));
      for (auto& st : claims) {
        statementIds.insert(st.statementId);
        report.qualifiers += st.qualifiers.size();
        store.statements_.push_back(std::move(st));
      }
    } catch (const LineError& e) {
      report.rejected.push_back({line->number, e.what()});
    } catch (const json::exception& e) {
      report.rejected.push_back({line->number, e.what()});
    }
  }

  std::sort(report.rejected.begin(), report.rejected.end(),
            [](const auto& a, const auto& b) { return a.line < b.line; });
  report.entities = store.entities_.size();
  report.properties = store.properties_.size();
  report.statements = store.statements_.size();
  if (report.lines > 0 && report.rejected.size() == report.lines) {
    throw IngestError("all " + std::to_string(report.lines) +
                          " lines of the dump were rejected",
                      report);
  }
  store.buildIndexes();
  return result;
}

void KgStore::buildIndexes() {
  std::sort(statements_.begin(), statements_.end(),
            [](const KgStatement& a, const KgStatement& b) {
              return a.statementId < b.statementId;
            });
  statementById_.clear();
  bySubject_.clear();
  byProperty_.clear();
  byQualifierProperty_.clear();
  for (std::size_t i = 0; i < statements_.size(); ++i) {
    const KgStatement& st = statements_[i];
    statementById_.emplace(st.statementId, i);
    bySubject_[st.subject].push_back(i);
    byProperty_[st.property].push_back(i);
    std::set<std::string_view> seen;
    for (const Qualifier& q : st.qualifiers) {
      if (seen.insert(q.property).second) {
        byQualifierProperty_[q.property].push_back(i);
      }
    }
  }
}

// _____________________________________________________________________________
std::string KgStore::dumpText() const {
  std::string out;
  for (const PropertyRecord& p : properties_) {
    json line{{"type", "property"},
              {"id", p.id},
              {"label", p.label},
              {"description", p.description},
              {"datatype", std::string(toString(p.datatype))}};
    out += line.dump() + "\n";
  }
  for (const EntityRecord& e : entities_) {
    json claims = json::array();
    if (auto it = bySubject_.find(e.id); it != bySubject_.end()) {
      for (std::size_t idx : it->second) {
        const KgStatement& st = statements_[idx];
        json c{{"statement_id", st.statementId},
               {"property", st.property},
               {"datatype", std::string(toString(st.value.type()))},
               {"value", encodeValue(st.value)}};
        if (!st.qualifiers.empty()) {
          json quals = json::array();
          for (const Qualifier& q : st.qualifiers) {
            quals.push_back({{"property", q.property},
                             {"datatype", std::string(toString(q.value.type()))},
                             {"value", encodeValue(q.value)}});
          }
          c["qualifiers"] = std::move(quals);
        }
        claims.push_back(std::move(c));
      }
    }
    json line{{"type", "entity"},
              {"id", e.id},
              {"label", e.label},
              {"description", e.description},
              {"popularity", e.popularity},
              {"claims", std::move(claims)}};
    out += line.dump() + "\n";
  }
  return out;
}

void KgStore::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write store '" + path.string() + "'");
  out << dumpText();
  if (!out) throw IoError("error writing store '" + path.string() + "'");
}

const EntityRecord* KgStore::entity(std::string_view id) const {
  auto it = entityById_.find(std::string(id));
  return it == entityById_.end() ? nullptr : &entities_[it->second];
}

const PropertyRecord* KgStore::property(std::string_view id) const {
  auto it = propertyById_.find(std::string(id));
  return it == propertyById_.end() ? nullptr : &properties_[it->second];
}

const KgStatement* KgStore::statement(std::string_view statementId) const {
  auto it = statementById_.find(std::string(statementId));
  return it == statementById_.end() ? nullptr : &statements_[it->second];
}

std::vector<const KgStatement*> KgStore::scan(const ScanFilter& filter) const {
  std::vector<std::size_t> positions;
  if (filter.subject) {
    if (auto it = bySubject_.find(*filter.subject); it != bySubject_.end()) {
      positions = it->second;
    }
  } else if (filter.properties) {
    for (const std::string& p : *filter.properties) {
      if (auto it = byProperty_.find(p); it != byProperty_.end()) {
        positions.insert(positions.end(), it->second.begin(), it->second.end());
      }
    }
    std::sort(positions.begin(), positions.end());
    positions.erase(std::unique(positions.begin(), positions.end()),
                    positions.end());
  } else {
    positions.resize(statements_.size());
    for (std::size_t i = 0; i < positions.size(); ++i) positions[i] = i;
  }

  std::vector<const KgStatement*> out;
  for (std::size_t i : positions) {
    const KgStatement& st = statements_[i];
    if (filter.properties &&
        std::find(filter.properties->begin(), filter.properties->end(),
                  st.property) == filter.properties->end()) {
      continue;
    }
    if (filter.values &&
        std::find(filter.values->begin(), filter.values->end(), st.value) ==
            filter.values->end()) {
      continue;
    }
    out.push_back(&st);
  }
  return out;
}

std::vector<Qualifier> KgStore::qualifierScan(
    std::string_view statementId,
    const std::optional<std::vector<std::string>>& properties) const {
  const KgStatement* st = statement(statementId);
  if (!st) {
    throw UnknownStatement("unknown statement '" + std::string(statementId) + "'");
  }
  std::vector<Qualifier> out;
  for (const Qualifier& q : st->qualifiers) {
    if (!properties || std::find(properties->begin(), properties->end(),
                                 q.property) != properties->end()) {
      out.push_back(q);
    }
  }
  return out;
}

std::vector<QualifierRow> KgStore::scanQualifiers(
    const std::optional<std::vector<std::string>>& properties) const {
  std::vector<std::size_t> positions;
  if (properties) {
    for (const std::string& p : *properties) {
      if (auto it = byQualifierProperty_.find(p); it != byQualifierProperty_.end()) {
        positions.insert(positions.end(), it->second.begin(), it->second.end());
      }
    }
    std::sort(positions.begin(), positions.end());
    positions.erase(std::unique(positions.begin(), positions.end()),
                    positions.end());
  } else {
    for (std::size_t i = 0; i < statements_.size(); ++i) {
      if (!statements_[i].qualifiers.empty()) positions.push_back(i);
    }
  }
  std::vector<QualifierRow> out;
  for (std::size_t i : positions) {
    const KgStatement& st = statements_[i];
    for (const Qualifier& q : st.qualifiers) {
      if (!properties || std::find(properties->begin(), properties->end(),
                                   q.property) != properties->end()) {
        out.push_back({&st, &q});
      }
    }
  }
  return out;
}

// _____________________________________________________________________________
std::string emitRelationalSchema() {
  static constexpr std::string_view kValueCheck =
      "  CHECK ((CASE WHEN value_entity IS NULL THEN 0 ELSE 1 END)\n"
      "       + (CASE WHEN value_string IS NULL THEN 0 ELSE 1 END)\n"
      "       + (CASE WHEN value_date IS NULL THEN 0 ELSE 1 END)\n"
      "       + (CASE WHEN value_numeric IS NULL THEN 0 ELSE 1 END) = 1)\n";
  std::string ddl;
  ddl +=
      "CREATE TABLE entities (\n"
      "  id VARCHAR(32) PRIMARY KEY,\n"
      "  label TEXT NOT NULL,\n"
      "  description TEXT NOT NULL,\n"
      "  popularity BIGINT NOT NULL\n"
      ");\n"
      "CREATE TABLE properties (\n"
      "  id VARCHAR(32) PRIMARY KEY,\n"
      "  label TEXT NOT NULL,\n"
      "  description TEXT NOT NULL,\n"
      "  datatype VARCHAR(16) NOT NULL\n"
      ");\n"
      "CREATE TABLE claims (\n"
      "  statement_id VARCHAR(128) PRIMARY KEY,\n"
      "  subject VARCHAR(32) NOT NULL,\n"
      "  property VARCHAR(32) NOT NULL,\n"
      "  value_entity VARCHAR(32),\n"
      "  value_string TEXT,\n"
      "  value_date VARCHAR(10),\n"
      "  value_numeric DOUBLE PRECISION,\n";
  ddl += kValueCheck;
  ddl +=
      ");\n"
      "CREATE TABLE qualifiers (\n"
      "  statement_id VARCHAR(128) NOT NULL REFERENCES claims (statement_id),\n"
      "  property VARCHAR(32) NOT NULL,\n"
      "  value_entity VARCHAR(32),\n"
      "  value_string TEXT,\n"
      "  value_date VARCHAR(10),\n"
      "  value_numeric DOUBLE PRECISION,\n";
  ddl += kValueCheck;
  ddl +=
      ");\n"
      "CREATE INDEX claims_subject ON claims (subject);\n"
      "CREATE INDEX claims_property ON claims (property);\n"
      "CREATE INDEX claims_value_entity ON claims (value_entity);\n"
      "CREATE INDEX qualifiers_statement ON qualifiers (statement_id);\n";
  return ddl;
}

std::string emitRelationalData(const KgStore& store) {
  std::string out;
  for (const EntityRecord& e : store.entities()) {
    out += "INSERT INTO entities VALUES (" + sqlQuote(e.id) + ", " +
           sqlQuote(e.label) + ", " + sqlQuote(e.description) + ", " +
           std::to_string(e.popularity) + ");\n";
  }
  for (const PropertyRecord& p : store.properties()) {
    out += "INSERT INTO properties VALUES (" + sqlQuote(p.id) + ", " +
           sqlQuote(p.label) + ", " + sqlQuote(p.description) + ", " +
           sqlQuote(toString(p.datatype)) + ");\n";
  }
  for (const KgStatement& st : store.statements()) {
    out += "INSERT INTO claims VALUES (" + sqlQuote(st.statementId) + ", " +
           sqlQuote(st.subject) + ", " + sqlQuote(st.property) + ", " +
           sqlValueColumns(st.value) + ");\n";
  }
  for (const KgStatement& st : store.statements()) {
    for (const Qualifier& q : st.qualifiers) {
      out += "INSERT INTO qualifiers VALUES (" + sqlQuote(st.statementId) +
             ", " + sqlQuote(q.property) + ", " + sqlValueColumns(q.value) +
             ");\n";
    }
  }
  return out;
}

}  // namespace qirk::kg
