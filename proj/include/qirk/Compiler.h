// Turns an IR query plus per-keyword candidate lists into an executable
// query graph, and renders that graph as SPARQL and SQL.
//
// Variable naming shares one counter across roles, assigned role by role:
// head variables (H), keyword literals and class names (A), remaining IR
// variables (V), then binary predicates (C), each in order of first
// appearance. `X: movie(X); director(X,Y); married(Y,Z); cast(X,Z)` thus
// becomes H0, A1, V2, V3, C4, C5, C6.

#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "qirk/Ir.h"
#include "qirk/SemanticIndex.h"

namespace qirk::compiler {

enum class VarRole { Head, Anchor, Property, Join };
// Head/Join variables carry a value type; anchors are entities and
// property variables range over property ids.
enum class VarType { Entity, String, Date, Numeric, Statement, Property };

std::string_view toString(VarRole role);
std::string_view toString(VarType type);

struct QueryVar {
  std::string name;  // "H0", "A1", ...
  VarRole role = VarRole::Join;
  VarType type = VarType::Entity;
  // IR variable name (H/V) or keyword text (A/C).
  std::string source;
  // Candidate identifiers of A and C variables.
  std::vector<index::Candidate> candidates;
};

struct PropertySlot {
  std::optional<std::size_t> var;  // C-variable, or
  std::string constant;            // fixed property id (class atoms)
};

struct TriplePattern {
  enum class Kind { Claim, Qualifier };
  Kind kind = Kind::Claim;
  // Claim: entity subject. Qualifier: statement variable.
  std::size_t subject = 0;
  PropertySlot property;
  std::size_t object = 0;
  // Claim patterns of `:=` atoms bind their statement id to this variable.
  std::optional<std::size_t> statement;
  std::size_t atomIndex = 0;
};

struct ExecutableQueryGraph {
  std::vector<QueryVar> vars;
  std::vector<TriplePattern> patterns;
  // H variables in IR head order.
  std::vector<std::size_t> head;
  // A and C variables in projection order.
  std::vector<std::size_t> selection;
  std::optional<ir::AggregateKind> aggregate;
  std::string classProperty = "P31";

  std::optional<std::size_t> findVar(std::string_view name) const;
};

struct CompiledQuery {
  ExecutableQueryGraph graph;
  std::string sparql;
  std::string sql;
};

using KeywordKey = std::pair<index::Kind, std::string>;
using CandidateMap = std::map<KeywordKey, index::CandidateSet>;

struct CompileOptions {
  std::string classProperty = "P31";
};

class CompileError : public std::runtime_error {
 public:
  enum class Kind { MissingCandidates, KindMismatch, Unsupported };
  CompileError(Kind kind, std::string keyword, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind), keyword_(std::move(keyword)) {}
  Kind kind() const { return kind_; }
  const std::string& keyword() const { return keyword_; }

 private:
  Kind kind_;
  std::string keyword_;
};

// Keywords of `query` that need candidates, in order of first appearance:
// literals and class names as entities, binary predicates as properties.
std::vector<KeywordKey> requiredKeywords(const ir::Query& query);

ExecutableQueryGraph bindCandidates(const ir::Query& query,
                                    const ir::QueryGraph& graph,
                                    const CandidateMap& candidates,
                                    const CompileOptions& options = {});

std::string emitSparql(const ExecutableQueryGraph& graph);
std::string emitSql(const ExecutableQueryGraph& graph);

CompiledQuery compile(const ir::Query& query, const CandidateMap& candidates,
                      const CompileOptions& options = {});

void to_json(nlohmann::json& j, const ExecutableQueryGraph& graph);

}  // namespace qirk::compiler
