#include "qirk/Executor.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <unordered_map>

namespace qirk::exec {

using compiler::ExecutableQueryGraph;
using compiler::TriplePattern;
using compiler::VarRole;
using compiler::VarType;
using kg::TypedValue;

namespace {

using Row = std::vector<TypedValue>;

struct Relation {
  std::vector<std::size_t> vars;
  std::vector<Row> rows;

  std::optional<std::size_t> column(std::size_t var) const {
    auto it = std::find(vars.begin(), vars.end(), var);
    if (it == vars.end()) return std::nullopt;
    return static_cast<std::size_t>(it - vars.begin());
  }
};

struct RowHash {
  std::size_t operator()(const Row& row) const {
    std::size_t h = 0;
    for (const TypedValue& v : row) h = h * 1000003 ^ kg::TypedValueHash{}(v);
    return h;
  }
};

std::optional<kg::ValueType> requiredType(VarType type) {
  switch (type) {
    case VarType::Entity: return kg::ValueType::EntityId;
    case VarType::String: return kg::ValueType::String;
    case VarType::Date: return kg::ValueType::Date;
    case VarType::Numeric: return kg::ValueType::Numeric;
    default: return std::nullopt;
  }
}

// Builds rows while enforcing that a variable occurring twice in one
// pattern gets the same value at both positions.
class RowBuilder {
 public:
  explicit RowBuilder(Relation& rel) : rel_(rel) {}

  void declare(std::size_t var) {
    if (!rel_.column(var)) rel_.vars.push_back(var);
  }

  void begin() {
    row_.assign(rel_.vars.size(), TypedValue());
    set_.assign(rel_.vars.size(), false);
    ok_ = true;
  }

  void put(std::size_t var, TypedValue value) {
    std::size_t c = *rel_.column(var);
    if (set_[c]) {
      ok_ = ok_ && row_[c] == value;
      return;
    }
    row_[c] = std::move(value);
    set_[c] = true;
  }

  void commit() {
    if (ok_) rel_.rows.push_back(std::move(row_));
  }

 private:
  Relation& rel_;
  Row row_;
  std::vector<bool> set_;
  bool ok_ = true;
};

std::vector<std::string> candidateIds(const compiler::QueryVar& v) {
  std::vector<std::string> ids;
  for (const auto& c : v.candidates) ids.push_back(c.id);
  return ids;
}

bool valueAccepted(const ExecutableQueryGraph& g, std::size_t var, const TypedValue& value) {
  const auto& v = g.vars[var];
  if (v.role == VarRole::Anchor) {
    if (value.type() != kg::ValueType::EntityId) return false;
    return std::any_of(v.candidates.begin(), v.candidates.end(),
                       [&](const auto& c) { return c.id == value.text(); });
  }
  auto need = requiredType(v.type);
  return need && value.type() == *need;
}

Relation claimRelation(const ExecutableQueryGraph& g, const TriplePattern& p,
                       const kg::KgStore& store) {
  Relation rel;
  RowBuilder rb(rel);
  rb.declare(p.subject);
  if (p.property.var) rb.declare(*p.property.var);
  rb.declare(p.object);
  if (p.statement) rb.declare(*p.statement);

  kg::KgStore::ScanFilter filter;
  filter.properties = p.property.var
                          ? candidateIds(g.vars[*p.property.var])
                          : std::vector<std::string>{p.property.constant};
  const auto& object = g.vars[p.object];
  if (object.role == VarRole::Anchor) {
    std::vector<TypedValue> values;
    for (const auto& c : object.candidates) values.push_back(TypedValue::entity(c.id));
    filter.values = std::move(values);
  }
  std::vector<std::optional<std::string>> subjects;
  const auto& subject = g.vars[p.subject];
  if (subject.role == VarRole::Anchor) {
    for (const auto& c : subject.candidates) subjects.emplace_back(c.id);
  } else {
    subjects.emplace_back();
  }
  for (const auto& s : subjects) {
    filter.subject = s;
    for (const kg::KgStatement* st : store.scan(filter)) {
      if (!valueAccepted(g, p.object, st->value)) continue;
      rb.begin();
      rb.put(p.subject, TypedValue::entity(st->subject));
      if (p.property.var) rb.put(*p.property.var, TypedValue::entity(st->property));
      rb.put(p.object, st->value);
      if (p.statement) rb.put(*p.statement, TypedValue::entity(st->statementId));
      rb.commit();
    }
  }
  return rel;
}

Relation qualifierRelation(const ExecutableQueryGraph& g, const TriplePattern& p,
                           const kg::KgStore& store) {
  Relation rel;
  RowBuilder rb(rel);
  rb.declare(p.subject);
  rb.declare(*p.property.var);
  rb.declare(p.object);
  for (const kg::QualifierRow& q : store.scanQualifiers(candidateIds(g.vars[*p.property.var]))) {
    if (!valueAccepted(g, p.object, q.qualifier->value)) continue;
    rb.begin();
    rb.put(p.subject, TypedValue::entity(q.statement->statementId));
    rb.put(*p.property.var, TypedValue::entity(q.qualifier->property));
    rb.put(p.object, q.qualifier->value);
    rb.commit();
  }
  return rel;
}

Relation hashJoin(const Relation& left, const Relation& right) {
  std::vector<std::pair<std::size_t, std::size_t>> shared;
  std::vector<std::size_t> rightOnly;
  for (std::size_t c = 0; c < right.vars.size(); ++c) {
    if (auto l = left.column(right.vars[c])) {
      shared.emplace_back(*l, c);
    } else {
      rightOnly.push_back(c);
    }
  }
  Relation out;
  out.vars = left.vars;
  for (std::size_t c : rightOnly) out.vars.push_back(right.vars[c]);

  std::unordered_map<Row, std::vector<std::size_t>, RowHash> table;
  for (std::size_t i = 0; i < right.rows.size(); ++i) {
    Row key;
    for (auto [l, r] : shared) key.push_back(right.rows[i][r]);
    table[std::move(key)].push_back(i);
  }
  for (const Row& lrow : left.rows) {
    Row key;
    for (auto [l, r] : shared) key.push_back(lrow[l]);
    auto it = table.find(key);
    if (it == table.end()) continue;
    for (std::size_t i : it->second) {
      Row row = lrow;
      for (std::size_t c : rightOnly) row.push_back(right.rows[i][c]);
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

bool sharesVar(const Relation& a, const Relation& b) {
  return std::any_of(b.vars.begin(), b.vars.end(), [&](std::size_t v) { return a.column(v); });
}

int compareAssignment(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (int c = kg::compareIds(a[i], b[i]); c != 0) return c;
  }
  return a.size() < b.size() ? -1 : (a.size() > b.size() ? 1 : 0);
}

struct AssignmentLess {
  bool operator()(const std::vector<std::string>& a, const std::vector<std::string>& b) const {
    return compareAssignment(a, b) < 0;
  }
};

bool answerLess(const Answer& a, const Answer& b) {
  if (a.values != b.values) {
    return std::lexicographical_compare(a.values.begin(), a.values.end(), b.values.begin(),
                                        b.values.end());
  }
  return compareAssignment(a.assignment, b.assignment) < 0;
}

double scoreOf(const compiler::QueryVar& v, const std::string& id) {
  for (const auto& c : v.candidates) {
    if (c.id == id) return c.score;
  }
  return 0;
}

}  // namespace

// _____________________________________________________________________________
std::vector<Answer> execute(const ExecutableQueryGraph& g, const kg::KgStore& store) {
  std::vector<Relation> pending;
  for (const TriplePattern& p : g.patterns) {
    pending.push_back(p.kind == TriplePattern::Kind::Claim ? claimRelation(g, p, store)
                                                           : qualifierRelation(g, p, store));
    if (pending.back().rows.empty()) return {};
  }
  if (pending.empty()) return {};

  // Greedy order: smallest relation first, then the smallest relation
  // connected to what has been joined so far.
  auto smallest = [&](auto&& eligible) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      if (!eligible(pending[i])) continue;
      if (!best || pending[i].rows.size() < pending[*best].rows.size()) best = i;
    }
    return best;
  };
  std::size_t first = *smallest([](const Relation&) { return true; });
  Relation result = std::move(pending[first]);
  pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(first));
  while (!pending.empty() && !result.rows.empty()) {
    auto next = smallest([&](const Relation& r) { return sharesVar(result, r); });
    if (!next) next = smallest([](const Relation&) { return true; });
    result = hashJoin(result, pending[*next]);
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(*next));
  }

  std::vector<Answer> answers;
  for (const Row& row : result.rows) {
    Answer a;
    for (std::size_t h : g.head) a.values.push_back(row[*result.column(h)]);
    for (std::size_t s : g.selection) {
      const std::string& id = row[*result.column(s)].text();
      a.assignment.push_back(id);
      a.scores.push_back(scoreOf(g.vars[s], id));
    }
    answers.push_back(std::move(a));
  }
  std::sort(answers.begin(), answers.end(), answerLess);
  answers.erase(std::unique(answers.begin(), answers.end()), answers.end());
  return answers;
}

std::vector<Answer> evaluateAggregate(std::span<const Answer> answers, ir::AggregateKind kind) {
  std::vector<Answer> out;
  std::map<std::vector<std::string>, std::size_t, AssignmentLess> groupOf;
  for (const Answer& a : answers) {
    const TypedValue& v = a.values.at(0);
    if (v.type() != kg::ValueType::Numeric && v.type() != kg::ValueType::Date) {
      throw TypeUnsupported("cannot aggregate " + std::string(kg::toString(v.type())) +
                            " values");
    }
    auto [it, fresh] = groupOf.try_emplace(a.assignment, out.size());
    if (fresh) {
      out.push_back({{v}, a.assignment, a.scores});
      continue;
    }
    TypedValue& best = out[it->second].values[0];
    if (v.type() != best.type()) throw TypeUnsupported("cannot aggregate mixed value types");
    if (kind == ir::AggregateKind::Max ? best < v : v < best) best = v;
  }
  std::sort(out.begin(), out.end(), [](const Answer& a, const Answer& b) {
    return compareAssignment(a.assignment, b.assignment) < 0;
  });
  return out;
}

std::vector<Answer> run(const ExecutableQueryGraph& g, const kg::KgStore& store) {
  if (!g.aggregate) return execute(g, store);
  VarType type = g.vars[g.head.at(0)].type;
  if (type != VarType::Numeric && type != VarType::Date) {
    throw TypeUnsupported("aggregate over " + std::string(compiler::toString(type)) +
                          " variable '" + g.vars[g.head[0]].source + "'");
  }
  return evaluateAggregate(execute(g, store), *g.aggregate);
}

std::vector<AnswerGroup> groupAndRank(std::span<const Answer> answers) {
  std::vector<AnswerGroup> groups;
  std::map<std::vector<std::string>, std::size_t> groupOf;
  for (const Answer& a : answers) {
    auto [it, fresh] = groupOf.try_emplace(a.assignment, groups.size());
    if (fresh) {
      AnswerGroup g;
      g.assignment = a.assignment;
      g.scores = a.scores;
      g.confidence = a.scores.empty() ? 0
                                      : std::accumulate(a.scores.begin(), a.scores.end(), 0.0) /
                                            static_cast<double>(a.scores.size());
      groups.push_back(std::move(g));
    }
    groups[it->second].answers.push_back(a.values);
  }
  std::stable_sort(groups.begin(), groups.end(), [](const AnswerGroup& a, const AnswerGroup& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    return compareAssignment(a.assignment, b.assignment) < 0;
  });
  return groups;
}

}  // namespace qirk::exec
