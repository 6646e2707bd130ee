#include "qirk/Ir.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

namespace qirk::ir {

namespace {

struct Token {
  enum class Kind {
    Identifier,
    String,
    LParen,
    RParen,
    Comma,
    Semicolon,
    Colon,
    Assign,
    Slash,
    End
  };
  Kind kind = Kind::End;
  std::string text;
  SourcePosition pos;
};

std::string_view describe(Token::Kind kind) {
  switch (kind) {
    case Token::Kind::Identifier: return "identifier";
    case Token::Kind::String: return "quoted string";
    case Token::Kind::LParen: return "'('";
    case Token::Kind::RParen: return "')'";
    case Token::Kind::Comma: return "','";
    case Token::Kind::Semicolon: return "';'";
    case Token::Kind::Colon: return "':'";
    case Token::Kind::Assign: return "':='";
    case Token::Kind::Slash: return "'/'";
    case Token::Kind::End: return "end of input";
  }
  return "?";
}

bool isIdentStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool isIdentChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> tokens;
    while (true) {
      skipSpace();
      Token tok;
      tok.pos = pos_;
      if (atEnd()) {
        tok.kind = Token::Kind::End;
        tokens.push_back(std::move(tok));
        return tokens;
      }
      char c = peek();
      if (isIdentStart(c)) {
        tok.kind = Token::Kind::Identifier;
        while (!atEnd() && isIdentChar(peek())) tok.text.push_back(advance());
      } else if (c == '"') {
        tok.kind = Token::Kind::String;
        advance();
        while (true) {
          if (atEnd()) {
            throw ParseError(ParseError::Kind::Syntax, tok.pos,
                             "unterminated string literal", {"'\"'"});
          }
          char d = advance();
          if (d == '"') break;
          if (d == '\\') {
            if (atEnd()) continue;
            char e = advance();
            if (e != '"' && e != '\\') tok.text.push_back('\\');
            tok.text.push_back(e);
          } else {
            tok.text.push_back(d);
          }
        }
      } else {
        advance();
        switch (c) {
          case '(': tok.kind = Token::Kind::LParen; break;
          case ')': tok.kind = Token::Kind::RParen; break;
          case ',': tok.kind = Token::Kind::Comma; break;
          case ';': tok.kind = Token::Kind::Semicolon; break;
          case '/': tok.kind = Token::Kind::Slash; break;
          case ':':
            if (!atEnd() && peek() == '=') {
              advance();
              tok.kind = Token::Kind::Assign;
            } else {
              tok.kind = Token::Kind::Colon;
            }
            break;
          default:
            throw ParseError(ParseError::Kind::Syntax, tok.pos,
                             std::string("unexpected character '") + c + "'");
        }
      }
      tokens.push_back(std::move(tok));
    }
  }

 private:
  bool atEnd() const { return pos_.offset >= text_.size(); }
  char peek() const { return text_[pos_.offset]; }
  char advance() {
    char c = text_[pos_.offset++];
    if (c == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else {
      ++pos_.column;
    }
    return c;
  }
  void skipSpace() {
    while (!atEnd() && std::isspace(static_cast<unsigned char>(peek()))) {
      advance();
    }
  }

  std::string_view text_;
  SourcePosition pos_;
};

// Source positions of the pieces of a parsed query, used for diagnostics.
struct TermSite {
  std::size_t atom;
  std::size_t term;
  SourcePosition pos;
};

struct QuerySites {
  std::vector<SourcePosition> headVars;
  std::vector<SourcePosition> bindings;  // per atom, valid if bound
  std::vector<TermSite> terms;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Query run(QuerySites& sites) {
    Query q;
    parseHead(q, sites);
    expect(Token::Kind::Colon);
    parseAtom(q, sites);
    while (peek().kind == Token::Kind::Semicolon) {
      next();
      parseAtom(q, sites);
    }
    if (peek().kind != Token::Kind::End) fail({"';'", "end of input"});
    return q;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(cursor_ + ahead, tokens_.size() - 1)];
  }
  const Token& next() { return tokens_[std::min(cursor_++, tokens_.size() - 1)]; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& tok = peek();
    std::string msg = "expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i > 0) msg += i + 1 == expected.size() ? " or " : ", ";
      msg += expected[i];
    }
    msg += " but found ";
    msg += tok.kind == Token::Kind::Identifier || tok.kind == Token::Kind::String
               ? std::string(describe(tok.kind)) + " '" + tok.text + "'"
               : std::string(describe(tok.kind));
    throw ParseError(ParseError::Kind::Syntax, tok.pos, msg,
                     std::move(expected));
  }

  const Token& expect(Token::Kind kind) {
    if (peek().kind != kind) fail({std::string(describe(kind))});
    return next();
  }

  void parseHead(Query& q, QuerySites& sites) {
    const Token& first = peek();
    if (first.kind == Token::Kind::Identifier &&
        (first.text == "MAX" || first.text == "MIN") &&
        peek(1).kind == Token::Kind::LParen) {
      Aggregate agg;
      agg.kind = first.text == "MAX" ? AggregateKind::Max : AggregateKind::Min;
      next();
      next();
      const Token& var = expect(Token::Kind::Identifier);
      agg.variable = var.text;
      sites.headVars.push_back(var.pos);
      expect(Token::Kind::RParen);
      q.head = std::move(agg);
      return;
    }
    VarList vars;
    while (true) {
      const Token& var = expect(Token::Kind::Identifier);
      if (std::find(vars.begin(), vars.end(), var.text) != vars.end()) {
        throw ParseError(ParseError::Kind::Syntax, var.pos,
                         "duplicate head variable '" + var.text + "'");
      }
      vars.push_back(var.text);
      sites.headVars.push_back(var.pos);
      if (peek().kind != Token::Kind::Comma) break;
      next();
    }
    q.head = std::move(vars);
  }

  void parseAtom(Query& q, QuerySites& sites) {
    Atom atom;
    SourcePosition bindingPos;
    if (peek().kind != Token::Kind::Identifier) fail({"keyword", "variable"});
    if (peek(1).kind == Token::Kind::Assign) {
      const Token& var = next();
      atom.qualifierBinding = var.text;
      bindingPos = var.pos;
      next();
    }
    if (peek().kind != Token::Kind::Identifier) fail({"keyword"});
    atom.predicate = next().text;
    expect(Token::Kind::LParen);
    std::size_t atomIndex = q.body.size();
    atom.terms.push_back(parseTerm(atomIndex, 0, sites));
    if (peek().kind == Token::Kind::Comma) {
      next();
      atom.terms.push_back(parseTerm(atomIndex, 1, sites));
    }
    if (peek().kind != Token::Kind::RParen) {
      fail(atom.terms.size() == 1 ? std::vector<std::string>{"','", "')'"}
                                  : std::vector<std::string>{"')'"});
    }
    next();
    sites.bindings.push_back(bindingPos);
    q.body.push_back(std::move(atom));
  }

  Term parseTerm(std::size_t atomIndex, std::size_t termIndex,
                 QuerySites& sites) {
    Term term;
    const Token& tok = peek();
    if (tok.kind == Token::Kind::Identifier) {
      term.kind = Term::Kind::Variable;
    } else if (tok.kind == Token::Kind::String) {
      term.kind = Term::Kind::Keyword;
      if (tok.text.empty()) {
        throw ParseError(ParseError::Kind::Syntax, tok.pos,
                         "keyword literal must not be empty");
      }
    } else {
      fail({"variable", "quoted string"});
    }
    term.text = tok.text;
    sites.terms.push_back({atomIndex, termIndex, tok.pos});
    next();
    if (peek().kind == Token::Kind::Slash) {
      next();
      const Token& type = peek();
      auto parsed = type.kind == Token::Kind::Identifier
                        ? dataTypeFromString(type.text)
                        : std::nullopt;
      if (!parsed) {
        fail({"entity_id", "string", "date", "numeric", "qualifier"});
      }
      term.declaredType = parsed;
      next();
    }
    return term;
  }

  std::vector<Token> tokens_;
  std::size_t cursor_ = 0;
};

void validate(const Query& q, const QuerySites& sites) {
  // Statement variables: bound once, used later, typed only as qualifier.
  std::map<std::string, std::size_t> boundAt;
  for (std::size_t i = 0; i < q.body.size(); ++i) {
    const auto& binding = q.body[i].qualifierBinding;
    if (!binding) continue;
    if (!boundAt.emplace(*binding, i).second) {
      throw ParseError(ParseError::Kind::TypeConflict, sites.bindings[i],
                       "statement variable '" + *binding +
                           "' is bound to two statements");
    }
  }

  std::map<std::string, DataType> declared;
  for (const auto& site : sites.terms) {
    const Term& term = q.body[site.atom].terms[site.term];
    if (!term.declaredType) continue;
    if (!term.isVariable()) {
      throw ParseError(ParseError::Kind::TypeConflict, site.pos,
                       "type annotation on keyword literal \"" + term.text +
                           "\"");
    }
    DataType type = *term.declaredType;
    bool isStatement = boundAt.contains(term.text);
    if (type == DataType::Qualifier && !isStatement) {
      throw ParseError(ParseError::Kind::TypeConflict, site.pos,
                       "variable '" + term.text +
                           "' is declared qualifier but not bound with ':='");
    }
    if (type != DataType::Qualifier && isStatement) {
      throw ParseError(ParseError::Kind::TypeConflict, site.pos,
                       "statement variable '" + term.text +
                           "' cannot be declared " +
                           std::string(toString(type)));
    }
    auto [it, inserted] = declared.emplace(term.text, type);
    if (!inserted && it->second != type) {
      throw ParseError(ParseError::Kind::TypeConflict, site.pos,
                       "variable '" + term.text + "' declared as both " +
                           std::string(toString(it->second)) + " and " +
                           std::string(toString(type)));
    }
  }

  for (const auto& [var, atomIndex] : boundAt) {
    bool used = false;
    for (std::size_t i = atomIndex + 1; i < q.body.size() && !used; ++i) {
      for (const Term& t : q.body[i].terms) {
        if (t.isVariable() && t.text == var) used = true;
      }
    }
    if (!used) {
      throw ParseError(ParseError::Kind::DanglingQualifier,
                       sites.bindings[atomIndex],
                       "statement variable '" + var +
                           "' is never used in a later atom");
    }
  }

  std::set<std::string> bodyVars;
  for (const Atom& atom : q.body) {
    if (atom.qualifierBinding) bodyVars.insert(*atom.qualifierBinding);
    for (const Term& t : atom.terms) {
      if (t.isVariable()) bodyVars.insert(t.text);
    }
  }
  auto headVars = q.headVariables();
  for (std::size_t i = 0; i < headVars.size(); ++i) {
    if (!bodyVars.contains(headVars[i])) {
      throw ParseError(ParseError::Kind::UnboundHeadVar, sites.headVars[i],
                       "head variable '" + headVars[i] +
                           "' does not occur in the body");
    }
  }
}

std::string quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

// _____________________________________________________________________________
std::string_view toString(DataType type) {
  switch (type) {
    case DataType::EntityId: return "entity_id";
    case DataType::String: return "string";
    case DataType::Date: return "date";
    case DataType::Numeric: return "numeric";
    case DataType::Qualifier: return "qualifier";
  }
  return "?";
}

std::optional<DataType> dataTypeFromString(std::string_view name) {
  if (name == "entity_id") return DataType::EntityId;
  if (name == "string") return DataType::String;
  if (name == "date") return DataType::Date;
  if (name == "numeric") return DataType::Numeric;
  if (name == "qualifier") return DataType::Qualifier;
  return std::nullopt;
}

std::string_view toString(AggregateKind kind) {
  return kind == AggregateKind::Max ? "MAX" : "MIN";
}

std::string_view toString(ParseError::Kind kind) {
  switch (kind) {
    case ParseError::Kind::Syntax: return "SyntaxError";
    case ParseError::Kind::TypeConflict: return "TypeConflict";
    case ParseError::Kind::UnboundHeadVar: return "UnboundHeadVar";
    case ParseError::Kind::DanglingQualifier: return "DanglingQualifier";
  }
  return "?";
}

ParseError::ParseError(Kind kind, SourcePosition position, std::string message,
                       std::vector<std::string> expected)
    : std::runtime_error(std::string(toString(kind)) + " at line " +
                         std::to_string(position.line) + ", column " +
                         std::to_string(position.column) + ": " + message),
      kind_(kind),
      position_(position),
      detail_(std::move(message)),
      expected_(std::move(expected)) {}

// _____________________________________________________________________________
std::vector<std::string> Query::headVariables() const {
  if (const auto* agg = std::get_if<Aggregate>(&head)) return {agg->variable};
  return std::get<VarList>(head);
}

std::optional<DataType> Query::declaredType(std::string_view variable) const {
  for (const Atom& atom : body) {
    if (atom.qualifierBinding && *atom.qualifierBinding == variable) {
      return DataType::Qualifier;
    }
    for (const Term& t : atom.terms) {
      if (t.isVariable() && t.text == variable && t.declaredType) {
        return t.declaredType;
      }
    }
  }
  return std::nullopt;
}

std::vector<std::string> Query::statementVariables() const {
  std::vector<std::string> out;
  for (const Atom& atom : body) {
    if (atom.qualifierBinding) out.push_back(*atom.qualifierBinding);
  }
  return out;
}

Query parseIr(std::string_view text) {
  QuerySites sites;
  Query q = Parser(Lexer(text).run()).run(sites);
  validate(q, sites);
  return q;
}

std::string renderIr(const Query& query) {
  std::string out;
  if (const auto* agg = std::get_if<Aggregate>(&query.head)) {
    out += toString(agg->kind);
    out += "(" + agg->variable + ")";
  } else {
    const auto& vars = std::get<VarList>(query.head);
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (i > 0) out += ", ";
      out += vars[i];
    }
  }
  out += ": ";
  for (std::size_t i = 0; i < query.body.size(); ++i) {
    const Atom& atom = query.body[i];
    if (i > 0) out += "; ";
    if (atom.qualifierBinding) out += *atom.qualifierBinding + " := ";
    out += atom.predicate + "(";
    for (std::size_t j = 0; j < atom.terms.size(); ++j) {
      const Term& t = atom.terms[j];
      if (j > 0) out += ", ";
      out += t.isVariable() ? t.text : quote(t.text);
      if (t.declaredType) {
        out += " / ";
        out += toString(*t.declaredType);
      }
    }
    out += ")";
  }
  return out;
}

// _____________________________________________________________________________
std::optional<std::size_t> QueryGraph::findVariable(std::string_view name) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].kind == GraphNode::Kind::Variable && nodes[i].name == name) {
      return i;
    }
  }
  return std::nullopt;
}

std::optional<std::size_t> QueryGraph::findConstant(std::string_view text) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].kind == GraphNode::Kind::Constant && nodes[i].name == text) {
      return i;
    }
  }
  return std::nullopt;
}

QueryGraph buildQueryGraph(const Query& query) {
  QueryGraph g;
  auto statementVars = query.statementVariables();
  auto isStatement = [&](const std::string& v) {
    return std::find(statementVars.begin(), statementVars.end(), v) !=
           statementVars.end();
  };
  auto nodeFor = [&](const Term& term) {
    bool var = term.isVariable();
    auto found = var ? g.findVariable(term.text) : g.findConstant(term.text);
    if (found) return *found;
    GraphNode node;
    node.kind = var ? GraphNode::Kind::Variable : GraphNode::Kind::Constant;
    node.name = term.text;
    if (var) {
      node.isStatement = isStatement(term.text);
      node.type = query.declaredType(term.text);
    }
    g.nodes.push_back(std::move(node));
    return g.nodes.size() - 1;
  };

  for (std::size_t i = 0; i < query.body.size(); ++i) {
    const Atom& atom = query.body[i];
    std::optional<std::size_t> statement;
    if (atom.qualifierBinding) {
      Term t{Term::Kind::Variable, *atom.qualifierBinding, std::nullopt};
      statement = nodeFor(t);
      g.qualifiers.push_back({*statement, i});
    }
    if (atom.isClassAtom()) {
      g.classConstraints.push_back(
          {nodeFor(atom.terms[0]), atom.predicate, i, statement});
    } else {
      std::size_t from = nodeFor(atom.terms[0]);
      std::size_t to = nodeFor(atom.terms[1]);
      g.edges.push_back({from, to, atom.predicate, i, statement});
    }
  }
  return g;
}

void to_json(nlohmann::json& j, const QueryGraph& graph) {
  j = nlohmann::json::object();
  auto& nodes = j["nodes"] = nlohmann::json::array();
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    const GraphNode& n = graph.nodes[i];
    nlohmann::json node{
        {"id", i},
        {"kind", n.kind == GraphNode::Kind::Variable ? "variable" : "constant"},
        {"name", n.name},
        {"statement", n.isStatement}};
    if (n.type) node["type"] = std::string(toString(*n.type));
    nodes.push_back(std::move(node));
  }
  auto& edges = j["edges"] = nlohmann::json::array();
  for (const GraphEdge& e : graph.edges) {
    nlohmann::json edge{{"from", e.from},
                        {"to", e.to},
                        {"predicate", e.predicate},
                        {"atom", e.atomIndex}};
    if (e.statementNode) edge["statement"] = *e.statementNode;
    edges.push_back(std::move(edge));
  }
  auto& classes = j["class_constraints"] = nlohmann::json::array();
  for (const ClassConstraint& c : graph.classConstraints) {
    nlohmann::json cc{
        {"node", c.node}, {"class", c.className}, {"atom", c.atomIndex}};
    if (c.statementNode) cc["statement"] = *c.statementNode;
    classes.push_back(std::move(cc));
  }
  auto& quals = j["qualifiers"] = nlohmann::json::array();
  for (const QualifierAttachment& q : graph.qualifiers) {
    quals.push_back({{"statement", q.statementNode}, {"atom", q.atomIndex}});
  }
}

}  // namespace qirk::ir
