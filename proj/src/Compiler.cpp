#include "qirk/Compiler.h"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

namespace qirk::compiler {

namespace {

// How a property variable is used; decides its SPARQL prefix.
enum class Usage { Direct, Statement, Qualifier };

std::string_view sparqlPrefix(Usage usage) {
  switch (usage) {
    case Usage::Direct: return "wdt:";
    case Usage::Statement: return "p:";
    case Usage::Qualifier: return "pq:";
  }
  return "";
}

VarType fromDeclared(ir::DataType type) {
  switch (type) {
    case ir::DataType::EntityId: return VarType::Entity;
    case ir::DataType::String: return VarType::String;
    case ir::DataType::Date: return VarType::Date;
    case ir::DataType::Numeric: return VarType::Numeric;
    case ir::DataType::Qualifier: return VarType::Statement;
  }
  return VarType::Entity;
}

VarType fromValueType(kg::ValueType type) {
  switch (type) {
    case kg::ValueType::EntityId: return VarType::Entity;
    case kg::ValueType::String: return VarType::String;
    case kg::ValueType::Date: return VarType::Date;
    case kg::ValueType::Numeric: return VarType::Numeric;
  }
  return VarType::Entity;
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

std::string valueColumn(VarType type) {
  switch (type) {
    case VarType::Entity: return "value_entity";
    case VarType::String: return "value_string";
    case VarType::Date: return "value_date";
    case VarType::Numeric: return "value_numeric";
    case VarType::Statement: return "statement_id";
    case VarType::Property: return "property";
  }
  return "value_entity";
}

// Usage of every C-variable; the compiler guarantees there is exactly one.
std::map<std::size_t, Usage> propertyUsage(const ExecutableQueryGraph& g) {
  std::map<std::size_t, Usage> usage;
  for (const TriplePattern& p : g.patterns) {
    if (!p.property.var) continue;
    Usage u = p.kind == TriplePattern::Kind::Qualifier
                  ? Usage::Qualifier
                  : (p.statement ? Usage::Statement : Usage::Direct);
    usage.emplace(*p.property.var, u);
  }
  return usage;
}

}  // namespace

// _____________________________________________________________________________
std::string_view toString(VarRole role) {
  switch (role) {
    case VarRole::Head: return "head";
    case VarRole::Anchor: return "anchor";
    case VarRole::Property: return "property";
    case VarRole::Join: return "join";
  }
  return "?";
}

std::string_view toString(VarType type) {
  switch (type) {
    case VarType::Entity: return "entity_id";
    case VarType::String: return "string";
    case VarType::Date: return "date";
    case VarType::Numeric: return "numeric";
    case VarType::Statement: return "qualifier";
    case VarType::Property: return "property";
  }
  return "?";
}

std::optional<std::size_t> ExecutableQueryGraph::findVar(std::string_view name) const {
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i].name == name) return i;
  }
  return std::nullopt;
}

std::vector<KeywordKey> requiredKeywords(const ir::Query& query) {
  std::vector<KeywordKey> out;
  auto add = [&](index::Kind kind, const std::string& keyword) {
    KeywordKey key{kind, keyword};
    if (std::find(out.begin(), out.end(), key) == out.end()) out.push_back(key);
  };
  for (const ir::Atom& atom : query.body) {
    if (atom.isClassAtom()) {
      add(index::Kind::Entity, atom.predicate);
    } else {
      add(index::Kind::Property, atom.predicate);
    }
    for (const ir::Term& t : atom.terms) {
      if (!t.isVariable()) add(index::Kind::Entity, t.text);
    }
  }
  return out;
}

ExecutableQueryGraph bindCandidates(const ir::Query& query,
                                    const ir::QueryGraph& graph,
                                    const CandidateMap& candidates,
                                    const CompileOptions& options) {
  using index::Kind;
  ExecutableQueryGraph g;
  g.classProperty = options.classProperty;
  if (query.isAggregate()) g.aggregate = std::get<ir::Aggregate>(query.head).kind;

  std::map<std::string, std::size_t> varOf;
  std::map<KeywordKey, std::size_t> keywordOf;
  std::size_t counter = 0;
  auto addVar = [&](VarRole role, std::string source) {
    static constexpr char kPrefix[] = {'H', 'A', 'C', 'V'};
    QueryVar v;
    v.role = role;
    v.name = kPrefix[static_cast<int>(role)] + std::to_string(counter++);
    v.source = std::move(source);
    g.vars.push_back(std::move(v));
    return g.vars.size() - 1;
  };
  auto lookup = [&](Kind kind, const std::string& keyword) {
    auto it = candidates.find({kind, keyword});
    if (it == candidates.end()) {
      Kind other = kind == Kind::Entity ? Kind::Property : Kind::Entity;
      if (candidates.contains({other, keyword})) {
        throw CompileError(CompileError::Kind::KindMismatch, keyword,
                           "keyword \"" + keyword + "\" needs " +
                               std::string(index::toString(kind)) +
                               " candidates but only has " +
                               std::string(index::toString(other)) + " candidates");
      }
      throw CompileError(CompileError::Kind::MissingCandidates, keyword,
                         "no candidates for keyword \"" + keyword + "\"");
    }
    if (it->second.kind != kind) {
      throw CompileError(CompileError::Kind::KindMismatch, keyword,
                         "candidate set for \"" + keyword + "\" has the wrong kind");
    }
    if (it->second.candidates.empty()) {
      throw CompileError(CompileError::Kind::MissingCandidates, keyword,
                         "no candidates for keyword \"" + keyword + "\"");
    }
    return it->second.candidates;
  };
  auto keywordVar = [&](Kind kind, const std::string& keyword) {
    KeywordKey key{kind, keyword};
    if (auto it = keywordOf.find(key); it != keywordOf.end()) return it->second;
    auto list = lookup(kind, keyword);
    std::size_t v = addVar(kind == Kind::Entity ? VarRole::Anchor : VarRole::Property, keyword);
    g.vars[v].type = kind == Kind::Entity ? VarType::Entity : VarType::Property;
    g.vars[v].candidates = std::move(list);
    keywordOf.emplace(std::move(key), v);
    return v;
  };

  for (const std::string& h : query.headVariables()) {
    varOf.emplace(h, addVar(VarRole::Head, h));
    g.head.push_back(varOf.at(h));
  }
  for (const ir::Atom& atom : query.body) {
    if (atom.isClassAtom()) keywordVar(Kind::Entity, atom.predicate);
    for (const ir::Term& t : atom.terms) {
      if (!t.isVariable()) keywordVar(Kind::Entity, t.text);
    }
  }
  auto internVar = [&](const std::string& name) {
    if (!varOf.contains(name)) varOf.emplace(name, addVar(VarRole::Join, name));
  };
  for (const ir::Atom& atom : query.body) {
    if (atom.qualifierBinding) internVar(*atom.qualifierBinding);
    for (const ir::Term& t : atom.terms) {
      if (t.isVariable()) internVar(t.text);
    }
  }
  for (const ir::Atom& atom : query.body) {
    if (!atom.isClassAtom()) keywordVar(Kind::Property, atom.predicate);
  }

  auto statementVars = query.statementVariables();
  auto isStatement = [&](const std::string& name) {
    return std::find(statementVars.begin(), statementVars.end(), name) !=
           statementVars.end();
  };
  auto termVar = [&](const ir::Term& t) {
    return t.isVariable() ? varOf.at(t.text) : keywordOf.at({Kind::Entity, t.text});
  };

  // Value types of IR variables.
  std::set<std::size_t> typed;
  for (const auto& [name, v] : varOf) {
    if (isStatement(name)) {
      g.vars[v].type = VarType::Statement;
      typed.insert(v);
    } else if (auto declared = query.declaredType(name)) {
      g.vars[v].type = fromDeclared(*declared);
      typed.insert(v);
    }
  }

  for (std::size_t i = 0; i < query.body.size(); ++i) {
    const ir::Atom& atom = query.body[i];
    TriplePattern p;
    p.atomIndex = i;
    if (atom.qualifierBinding) p.statement = varOf.at(*atom.qualifierBinding);
    const ir::Term& first = atom.terms[0];
    bool qualifierAtom = first.isVariable() && isStatement(first.text);
    if (atom.isClassAtom()) {
      if (qualifierAtom) {
        throw CompileError(CompileError::Kind::Unsupported, atom.predicate,
                           "statement variable '" + first.text +
                               "' cannot be the member of a class");
      }
      p.subject = termVar(first);
      p.property.constant = g.classProperty;
      p.object = keywordOf.at({Kind::Entity, atom.predicate});
    } else {
      const ir::Term& second = atom.terms[1];
      if (second.isVariable() && isStatement(second.text)) {
        throw CompileError(CompileError::Kind::Unsupported, atom.predicate,
                           "statement variable '" + second.text +
                               "' can only be used as the first argument");
      }
      if (qualifierAtom) {
        p.kind = TriplePattern::Kind::Qualifier;
        if (p.statement) {
          throw CompileError(CompileError::Kind::Unsupported, atom.predicate,
                             "qualifiers cannot themselves be bound with ':='");
        }
      }
      p.subject = termVar(first);
      p.property.var = keywordOf.at({Kind::Property, atom.predicate});
      p.object = termVar(second);
    }
    g.patterns.push_back(std::move(p));
  }

  // Claim subjects are entities.
  for (const TriplePattern& p : g.patterns) {
    if (p.kind != TriplePattern::Kind::Claim) continue;
    QueryVar& s = g.vars[p.subject];
    if (s.role == VarRole::Anchor) continue;
    if (typed.contains(p.subject) && s.type != VarType::Entity) {
      throw CompileError(CompileError::Kind::KindMismatch, s.source,
                         "variable '" + s.source + "' is declared " +
                             std::string(toString(s.type)) +
                             " but used as the subject of a statement");
    }
    s.type = VarType::Entity;
    typed.insert(p.subject);
  }
  // Remaining variables take the datatype of the best-scoring property
  // candidate of their first use as a value.
  for (const TriplePattern& p : g.patterns) {
    if (typed.contains(p.object) || g.vars[p.object].role == VarRole::Anchor) continue;
    VarType type = VarType::Entity;
    if (p.property.var) {
      const auto& list = g.vars[*p.property.var].candidates;
      if (!list.empty() && list.front().datatype) type = fromValueType(*list.front().datatype);
    }
    g.vars[p.object].type = type;
    typed.insert(p.object);
  }

  std::map<std::size_t, std::set<int>> usages;
  for (const TriplePattern& p : g.patterns) {
    if (!p.property.var) continue;
    Usage u = p.kind == TriplePattern::Kind::Qualifier
                  ? Usage::Qualifier
                  : (p.statement ? Usage::Statement : Usage::Direct);
    usages[*p.property.var].insert(static_cast<int>(u));
  }
  for (const auto& [v, set] : usages) {
    if (set.size() > 1) {
      throw CompileError(CompileError::Kind::Unsupported, g.vars[v].source,
                         "property keyword \"" + g.vars[v].source +
                             "\" is used both as a qualifier and as a claim property"
                             " or both with and without ':='");
    }
  }

  std::set<std::size_t> selected;
  auto select = [&](std::size_t v) {
    if (selected.insert(v).second) g.selection.push_back(v);
  };
  for (const ir::Atom& atom : query.body) {
    if (atom.isClassAtom()) select(keywordOf.at({Kind::Entity, atom.predicate}));
    for (const ir::Term& t : atom.terms) {
      if (!t.isVariable()) select(keywordOf.at({Kind::Entity, t.text}));
    }
    if (!atom.isClassAtom()) select(keywordOf.at({Kind::Property, atom.predicate}));
  }
  (void)graph;
  return g;
}

// _____________________________________________________________________________
std::string emitSparql(const ExecutableQueryGraph& g) {
  auto usage = propertyUsage(g);
  auto var = [&](std::size_t v) { return "?" + g.vars[v].name; };
  auto mirror = [&](std::size_t v) { return "?" + g.vars[v].name + "s"; };
  // The ps: twin of a p: property variable is derived from it, so that
  // every candidate id still appears once in the text.
  std::set<std::size_t> derived;

  std::string out = "SELECT";
  for (std::size_t v : g.selection) out += " " + var(v);
  if (g.aggregate) {
    out += " (" + std::string(ir::toString(*g.aggregate)) + "(" + var(g.head.front()) +
           ") AS ?agg)";
  } else {
    for (std::size_t v : g.head) out += " " + var(v);
  }
  out += " WHERE {\n";

  std::string classLine;
  std::string patternLine;
  auto append = [](std::string& line, const std::string& triple) {
    if (!line.empty()) line += " ";
    line += triple;
  };
  for (const TriplePattern& p : g.patterns) {
    std::string& line = p.property.var ? patternLine : classLine;
    std::string predicate;
    std::string valuePredicate;
    if (p.property.var) {
      predicate = var(*p.property.var);
      valuePredicate = mirror(*p.property.var);
    } else {
      predicate = (p.statement ? "p:" : "wdt:") + p.property.constant;
      valuePredicate = "ps:" + p.property.constant;
    }
    if (p.statement) {
      append(line, var(p.subject) + " " + predicate + " " + var(*p.statement) + ".");
      if (p.property.var && derived.insert(*p.property.var).second) {
        append(line, "BIND(IRI(REPLACE(STR(" + predicate + "), \"/prop/\", \"/prop/statement/\")) AS " +
                         valuePredicate + ")");
      }
      append(line, var(*p.statement) + " " + valuePredicate + " " + var(p.object) + ".");
    } else {
      append(line, var(p.subject) + " " + predicate + " " + var(p.object) + ".");
    }
  }
  if (!classLine.empty()) out += classLine + "\n";
  if (!patternLine.empty()) out += patternLine + "\n";

  std::vector<std::string> filters;
  for (std::size_t v : g.selection) {
    const QueryVar& qv = g.vars[v];
    auto inList = [&](const std::string& name, std::string_view prefix) {
      std::string f = name + " IN (";
      for (std::size_t i = 0; i < qv.candidates.size(); ++i) {
        if (i > 0) f += ", ";
        f += std::string(prefix) + qv.candidates[i].id;
      }
      return f + ")";
    };
    if (qv.role == VarRole::Anchor) {
      filters.push_back(inList(var(v), "wd:"));
    } else {
      filters.push_back(inList(var(v), sparqlPrefix(usage.at(v))));
    }
  }
  out += "FILTER (";
  for (std::size_t i = 0; i < filters.size(); ++i) {
    if (i > 0) out += "\n     && ";
    out += filters[i];
  }
  out += ") }";
  if (g.aggregate) {
    out += "\nGROUP BY";
    for (std::size_t v : g.selection) out += " " + var(v);
  }
  return out;
}

std::string emitSql(const ExecutableQueryGraph& g) {
  struct Ref {
    std::size_t pattern;
    std::string column;  // alias.column
    bool isValue;        // object position
  };
  std::vector<std::string> aliases;
  std::size_t claims = 0;
  std::size_t quals = 0;
  for (const TriplePattern& p : g.patterns) {
    aliases.push_back(p.kind == TriplePattern::Kind::Claim
                          ? "c" + std::to_string(claims++)
                          : "q" + std::to_string(quals++));
  }

  std::vector<std::vector<Ref>> refs(g.vars.size());
  std::vector<std::string> constants(g.patterns.size());
  for (std::size_t i = 0; i < g.patterns.size(); ++i) {
    const TriplePattern& p = g.patterns[i];
    const std::string& a = aliases[i];
    if (p.kind == TriplePattern::Kind::Claim) {
      refs[p.subject].push_back({i, a + ".subject", false});
    } else {
      refs[p.subject].push_back({i, a + ".statement_id", false});
    }
    if (p.property.var) {
      refs[*p.property.var].push_back({i, a + ".property", false});
    } else {
      constants[i] = a + ".property = " + sqlQuote(p.property.constant);
    }
    refs[p.object].push_back({i, a + "." + valueColumn(g.vars[p.object].type), true});
    if (p.statement) refs[*p.statement].push_back({i, a + ".statement_id", false});
  }
  auto canonical = [&](std::size_t v) { return refs[v].front().column; };

  std::vector<std::string> on(g.patterns.size());
  std::vector<std::string> where;
  for (std::size_t v = 0; v < g.vars.size(); ++v) {
    for (std::size_t r = 1; r < refs[v].size(); ++r) {
      std::string eq = refs[v][r].column + " = " + canonical(v);
      if (refs[v][r].pattern == refs[v].front().pattern) {
        where.push_back(eq);
      } else {
        std::string& target = on[refs[v][r].pattern];
        target += target.empty() ? eq : " AND " + eq;
      }
    }
  }
  for (std::size_t v : g.selection) {
    const QueryVar& qv = g.vars[v];
    std::string f = canonical(v) + " IN (";
    for (std::size_t i = 0; i < qv.candidates.size(); ++i) {
      if (i > 0) f += ", ";
      f += sqlQuote(qv.candidates[i].id);
    }
    where.push_back(f + ")");
  }
  for (const std::string& c : constants) {
    if (!c.empty()) where.push_back(c);
  }
  for (std::size_t v = 0; v < g.vars.size(); ++v) {
    if (refs[v].empty() || g.vars[v].role == VarRole::Anchor ||
        g.vars[v].role == VarRole::Property) {
      continue;
    }
    if (refs[v].front().isValue) where.push_back(canonical(v) + " IS NOT NULL");
  }

  std::vector<std::string> projected;
  for (std::size_t v : g.selection) {
    projected.push_back(canonical(v) + " AS " + g.vars[v].name);
  }
  std::string out = g.aggregate ? "SELECT " : "SELECT DISTINCT ";
  for (std::size_t i = 0; i < projected.size(); ++i) {
    if (i > 0) out += ", ";
    out += projected[i];
  }
  if (g.aggregate) {
    out += ", " + std::string(ir::toString(*g.aggregate)) + "(" + canonical(g.head.front()) +
           ") AS agg";
  } else {
    for (std::size_t v : g.head) out += ", " + canonical(v) + " AS " + g.vars[v].name;
  }
  out += "\nFROM ";
  for (std::size_t i = 0; i < g.patterns.size(); ++i) {
    std::string table = (g.patterns[i].kind == TriplePattern::Kind::Claim ? "claims AS "
                                                                          : "qualifiers AS ") +
                        aliases[i];
    if (i == 0) {
      out += table;
    } else if (on[i].empty()) {
      out += "\n  CROSS JOIN " + table;
    } else {
      out += "\n  JOIN " + table + " ON " + on[i];
    }
  }
  if (!where.empty()) {
    out += "\nWHERE ";
    for (std::size_t i = 0; i < where.size(); ++i) {
      if (i > 0) out += "\n  AND ";
      out += where[i];
    }
  }
  if (g.aggregate) {
    out += "\nGROUP BY ";
    for (std::size_t i = 0; i < g.selection.size(); ++i) {
      if (i > 0) out += ", ";
      out += canonical(g.selection[i]);
    }
  }
  return out;
}

CompiledQuery compile(const ir::Query& query, const CandidateMap& candidates,
                      const CompileOptions& options) {
  CompiledQuery out;
  out.graph = bindCandidates(query, ir::buildQueryGraph(query), candidates, options);
  out.sparql = emitSparql(out.graph);
  out.sql = emitSql(out.graph);
  return out;
}

void to_json(nlohmann::json& j, const ExecutableQueryGraph& g) {
  j = nlohmann::json::object();
  auto& vars = j["variables"] = nlohmann::json::array();
  for (const QueryVar& v : g.vars) {
    nlohmann::json jv{{"name", v.name},
                      {"role", std::string(toString(v.role))},
                      {"type", std::string(toString(v.type))},
                      {"source", v.source}};
    if (v.role == VarRole::Anchor || v.role == VarRole::Property) {
      auto& list = jv["candidates"] = nlohmann::json::array();
      for (const auto& c : v.candidates) list.push_back({{"id", c.id}, {"score", c.score}});
    }
    vars.push_back(std::move(jv));
  }
  auto& patterns = j["patterns"] = nlohmann::json::array();
  for (const TriplePattern& p : g.patterns) {
    nlohmann::json jp{
        {"kind", p.kind == TriplePattern::Kind::Claim ? "claim" : "qualifier"},
        {"subject", g.vars[p.subject].name},
        {"property", p.property.var ? g.vars[*p.property.var].name : p.property.constant},
        {"object", g.vars[p.object].name},
        {"atom", p.atomIndex}};
    if (p.statement) jp["statement"] = g.vars[*p.statement].name;
    patterns.push_back(std::move(jp));
  }
  if (g.aggregate) j["aggregate"] = std::string(ir::toString(*g.aggregate));
}

}  // namespace qirk::compiler
