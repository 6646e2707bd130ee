// Intermediate representation: a small logic-like query language whose
// predicates and constants are natural-language keywords.
//
//   query := head ":" atom (";" atom)*
//   head  := var ("," var)* | ("MAX" | "MIN") "(" var ")"
//   atom  := [var ":="] keyword "(" term ("," term)? ")"
//   term  := (var | quoted-string) ["/" type]
//
// Variables and keywords are identifiers `[a-zA-Z_][a-zA-Z0-9_]*`; a keyword
// literal is a double-quoted string (`\"` and `\\` are the only escapes).

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace qirk::ir {

enum class DataType { EntityId, String, Date, Numeric, Qualifier };

std::string_view toString(DataType type);
std::optional<DataType> dataTypeFromString(std::string_view name);

struct SourcePosition {
  std::size_t offset = 0;
  std::size_t line = 1;
  std::size_t column = 1;
};

struct Term {
  enum class Kind { Variable, Keyword };
  Kind kind = Kind::Variable;
  // Variable name or keyword literal text (unescaped).
  std::string text;
  std::optional<DataType> declaredType;

  bool isVariable() const { return kind == Kind::Variable; }
  bool operator==(const Term&) const = default;
};

struct Atom {
  // The `X :=` statement variable, if any.
  std::optional<std::string> qualifierBinding;
  std::string predicate;
  std::vector<Term> terms;

  bool isClassAtom() const { return terms.size() == 1; }
  bool operator==(const Atom&) const = default;
};

enum class AggregateKind { Max, Min };
std::string_view toString(AggregateKind kind);

struct Aggregate {
  AggregateKind kind = AggregateKind::Max;
  std::string variable;
  bool operator==(const Aggregate&) const = default;
};

using VarList = std::vector<std::string>;

struct Query {
  std::variant<VarList, Aggregate> head;
  std::vector<Atom> body;

  bool isAggregate() const { return std::holds_alternative<Aggregate>(head); }
  // Head variables in order; a single variable for aggregate heads.
  std::vector<std::string> headVariables() const;
  // The declared type of a variable, wherever it is declared.
  std::optional<DataType> declaredType(std::string_view variable) const;
  // Variables bound with `:=`.
  std::vector<std::string> statementVariables() const;
  bool operator==(const Query&) const = default;
};

class ParseError : public std::runtime_error {
 public:
  enum class Kind { Syntax, TypeConflict, UnboundHeadVar, DanglingQualifier };

  ParseError(Kind kind, SourcePosition position, std::string message,
             std::vector<std::string> expected = {});

  Kind kind() const { return kind_; }
  const SourcePosition& position() const { return position_; }
  const std::vector<std::string>& expected() const { return expected_; }
  // The message without the position prefix.
  const std::string& detail() const { return detail_; }

 private:
  Kind kind_;
  SourcePosition position_;
  std::string detail_;
  std::vector<std::string> expected_;
};

std::string_view toString(ParseError::Kind kind);

// Parses and validates IR text. Throws ParseError.
Query parseIr(std::string_view text);

// Canonical single-line rendering; parseIr(renderIr(q)) == q.
std::string renderIr(const Query& query);

// _____________________________________________________________________________
// Abstract query graph: variables and constants are nodes, binary atoms are
// directed edges (first term to second term), unary atoms are class
// constraints. A `:=` binding turns the atom's statement into a node of its
// own that later atoms may use as their subject.
struct GraphNode {
  enum class Kind { Variable, Constant };
  Kind kind = Kind::Variable;
  std::string name;
  std::optional<DataType> type;
  bool isStatement = false;
  bool operator==(const GraphNode&) const = default;
};

struct GraphEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  std::string predicate;
  std::size_t atomIndex = 0;
  // Statement node bound to this edge by `:=`.
  std::optional<std::size_t> statementNode;
  bool operator==(const GraphEdge&) const = default;
};

struct ClassConstraint {
  std::size_t node = 0;
  std::string className;
  std::size_t atomIndex = 0;
  std::optional<std::size_t> statementNode;
  bool operator==(const ClassConstraint&) const = default;
};

struct QualifierAttachment {
  std::size_t statementNode = 0;
  // The atom whose statement the node stands for.
  std::size_t atomIndex = 0;
  bool operator==(const QualifierAttachment&) const = default;
};

struct QueryGraph {
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;
  std::vector<ClassConstraint> classConstraints;
  std::vector<QualifierAttachment> qualifiers;

  std::optional<std::size_t> findVariable(std::string_view name) const;
  std::optional<std::size_t> findConstant(std::string_view text) const;
  bool operator==(const QueryGraph&) const = default;
};

QueryGraph buildQueryGraph(const Query& query);

void to_json(nlohmann::json& j, const QueryGraph& graph);

}  // namespace qirk::ir
