#include <gtest/gtest.h>

#include <random>
#include <regex>

#include "TestSupport.h"
#include "qirk/Compiler.h"

using namespace qirk::compiler;
using qirk::index::Candidate;
using qirk::index::CandidateSet;
using qirk::index::Kind;
using qirk::ir::parseIr;
using qirk::test::stripWhitespace;

namespace {

const std::string kAwards = R"(X: received_award(X, "Oscar for Merit"); received_award(X, "Turing Award"))";
const std::string kMovies = "X: movie(X); director(X,Y); married(Y,Z); cast(X,Z)";
const std::string kObama = R"(Y: X := holds_position("Barack Obama", "President"); start_time(X, Y / date))";
const std::string kTallest = R"(MAX(Y): position(X,"President of the United States"); height(X,Y / numeric))";

std::vector<std::string> names(const ExecutableQueryGraph& g) {
  std::vector<std::string> out;
  for (const auto& v : g.vars) out.push_back(v.name + "=" + v.source);
  return out;
}

std::string filterPart(const std::string& sparql) { return sparql.substr(sparql.find("FILTER")); }

// All identifiers inside IN-lists, in order of appearance.
std::vector<std::string> inListIds(const std::string& text, const std::regex& idPattern) {
  std::vector<std::string> out;
  std::regex inList(R"(IN \(([^)]*)\))");
  for (auto it = std::sregex_iterator(text.begin(), text.end(), inList); it != std::sregex_iterator(); ++it) {
    std::string inside = (*it)[1];
    for (auto id = std::sregex_iterator(inside.begin(), inside.end(), idPattern); id != std::sregex_iterator(); ++id) {
      out.push_back((*id)[1]);
    }
  }
  return out;
}

std::vector<std::string> candidateIds(const CandidateMap& m) {
  std::vector<std::string> out;
  for (const auto& [k, s] : m) {
    for (const auto& c : s.candidates) out.push_back(c.id);
  }
  return out;
}

CandidateMap singletonMap() {
  CandidateMap m;
  m[{Kind::Entity, "Oscar for Merit"}] = {"Oscar for Merit", Kind::Entity, {{"Q8624", 0.77, "", std::nullopt}}};
  m[{Kind::Entity, "Turing Award"}] = {"Turing Award", Kind::Entity, {{"Q185667", 0.89, "", std::nullopt}}};
  m[{Kind::Property, "received_award"}] = {
      "received_award", Kind::Property, {{"P166", 1.0, "", qirk::kg::ValueType::EntityId}}};
  return m;
}

CompileError::Kind compileErrorKind(const std::string& ir, const CandidateMap& m) {
  try {
    compile(parseIr(ir), m);
  } catch (const CompileError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no compile error for " << ir;
  return CompileError::Kind::Unsupported;
}

}  // namespace

TEST(Golden, AwardListing) {
  auto compiled = compile(parseIr(kAwards), qirk::test::awardCandidates());
  std::string golden = qirk::test::readFile(qirk::test::sourceDir() / "tests/golden/awards.sparql");
  EXPECT_EQ(stripWhitespace(compiled.sparql), stripWhitespace(golden)) << compiled.sparql;
}

TEST(Golden, MovieListing) {
  auto compiled = compile(parseIr(kMovies), qirk::test::movieCandidates());
  std::string golden = qirk::test::readFile(qirk::test::sourceDir() / "tests/golden/movies.sparql");
  EXPECT_EQ(stripWhitespace(compiled.sparql), stripWhitespace(golden)) << compiled.sparql;
  EXPECT_NE(compiled.sparql.find("?C5 IN (wdt:P26)"), std::string::npos);
}

TEST(BindCandidates, AwardNaming) {
  auto g = compile(parseIr(kAwards), qirk::test::awardCandidates()).graph;
  EXPECT_EQ(names(g), (std::vector<std::string>{"H0=X", "A1=Oscar for Merit", "A2=Turing Award",
                                                "C3=received_award"}));
  ASSERT_EQ(g.patterns.size(), 2u);
  EXPECT_EQ(g.patterns[0].subject, 0u);
  EXPECT_EQ(*g.patterns[0].property.var, 3u);
  EXPECT_EQ(g.patterns[0].object, 1u);
  EXPECT_EQ(g.patterns[1].object, 2u);
}

TEST(BindCandidates, MovieNamingAndClassTriple) {
  auto g = compile(parseIr(kMovies), qirk::test::movieCandidates()).graph;
  EXPECT_EQ(names(g), (std::vector<std::string>{"H0=X", "A1=movie", "V2=Y", "V3=Z", "C4=director",
                                                "C5=married", "C6=cast"}));
  ASSERT_EQ(g.patterns.size(), 4u);
  EXPECT_FALSE(g.patterns[0].property.var.has_value());
  EXPECT_EQ(g.patterns[0].property.constant, "P31");
}

TEST(BindCandidates, QualifierAndAggregateNaming) {
  CandidateMap m = qirk::test::resolveFixture(parseIr(kObama));
  auto obama = bindCandidates(parseIr(kObama), qirk::ir::buildQueryGraph(parseIr(kObama)), m);
  EXPECT_EQ(names(obama), (std::vector<std::string>{"H0=Y", "A1=Barack Obama", "A2=President", "V3=X",
                                                    "C4=holds_position", "C5=start_time"}));
  EXPECT_EQ(obama.vars[3].type, VarType::Statement);
  EXPECT_EQ(obama.vars[0].type, VarType::Date);
  EXPECT_EQ(obama.patterns[1].kind, TriplePattern::Kind::Qualifier);
  EXPECT_EQ(obama.patterns[0].statement, std::optional<std::size_t>(3));

  auto tallest = compile(parseIr(kTallest), qirk::test::resolveFixture(parseIr(kTallest))).graph;
  EXPECT_EQ(names(tallest), (std::vector<std::string>{"H0=Y", "A1=President of the United States", "V2=X",
                                                      "C3=position", "C4=height"}));
  EXPECT_EQ(tallest.aggregate, qirk::ir::AggregateKind::Max);
  EXPECT_EQ(tallest.vars[0].type, VarType::Numeric);
}

TEST(BindCandidates, ClassPropertyIsConfigurable) {
  auto c = compile(parseIr(kMovies), qirk::test::movieCandidates(), CompileOptions{"P279"});
  EXPECT_NE(c.sparql.find("?H0 wdt:P279 ?A1."), std::string::npos);
  EXPECT_NE(c.sql.find("c0.property = 'P279'"), std::string::npos);
}

TEST(BindCandidates, MissingOrEmptyCandidates) {
  CandidateMap m = qirk::test::awardCandidates();
  m.erase({Kind::Entity, "Turing Award"});
  EXPECT_EQ(compileErrorKind(kAwards, m), CompileError::Kind::MissingCandidates);
  m = qirk::test::awardCandidates();
  m[{Kind::Entity, "Turing Award"}].candidates.clear();
  try {
    compile(parseIr(kAwards), m);
    FAIL();
  } catch (const CompileError& e) {
    EXPECT_EQ(e.kind(), CompileError::Kind::MissingCandidates);
    EXPECT_EQ(e.keyword(), "Turing Award");
  }
}

TEST(BindCandidates, KindMismatch) {
  CandidateMap m = qirk::test::awardCandidates();
  auto set = m.at({Kind::Property, "received_award"});
  m.erase({Kind::Property, "received_award"});
  set.kind = Kind::Entity;
  m[{Kind::Entity, "received_award"}] = set;
  EXPECT_EQ(compileErrorKind(kAwards, m), CompileError::Kind::KindMismatch);

  CandidateMap n = qirk::test::resolveFixture(parseIr("X: height(X, Y / numeric); spouse(Y, X)"));
  EXPECT_EQ(compileErrorKind("X: height(X, Y / numeric); spouse(Y, X)", n), CompileError::Kind::KindMismatch);
}

TEST(BindCandidates, UnsupportedShapes) {
  auto check = [](const std::string& ir) {
    EXPECT_EQ(compileErrorKind(ir, qirk::test::resolveFixture(parseIr(ir))), CompileError::Kind::Unsupported) << ir;
  };
  check(R"(Y: S := holds_position("Barack Obama", Y); spouse("Barack Obama", S))");
  check(R"(Y: S := holds_position("Barack Obama", Y); start_time(S, Y); start_time("Barack Obama", Y))");
  check(R"(Y: S := holds_position("Barack Obama", Y); movie(S))");
  check(R"(D: S := holds_position("Barack Obama", Y); T := start_time(S, D); end_time(T, D))");
}

TEST(BindCandidates, TypesFromDatatypes) {
  auto g = compile(parseIr(R"(X: date_of_birth("Alan Turing", X))"),
                   qirk::test::resolveFixture(parseIr(R"(X: date_of_birth("Alan Turing", X))")))
               .graph;
  EXPECT_EQ(g.vars[0].type, VarType::Date);
  auto t = compile(parseIr("X, T: movie(X); title(X, T)"),
                   qirk::test::resolveFixture(parseIr("X, T: movie(X); title(X, T)")))
               .graph;
  EXPECT_EQ(t.vars[*t.findVar("H1")].type, VarType::String);
  EXPECT_EQ(t.vars[*t.findVar("H0")].type, VarType::Entity);
}

TEST(EmitSparql, SingletonListsStayLists) {
  auto c = compile(parseIr(kAwards), singletonMap());
  EXPECT_NE(c.sparql.find("?A1 IN (wd:Q8624)"), std::string::npos) << c.sparql;
  EXPECT_NE(c.sparql.find("?C3 IN (wdt:P166)"), std::string::npos);
  EXPECT_NE(c.sparql.find("?A2 IN (wd:Q185667)"), std::string::npos);
  EXPECT_NE(c.sql.find("IN ('Q8624')"), std::string::npos) << c.sql;
}

TEST(EmitSparql, QualifierUsesStatementPrefixes) {
  auto c = compile(parseIr(kObama), qirk::test::resolveFixture(parseIr(kObama)));
  EXPECT_NE(c.sparql.find("?A1 ?C4 ?V3."), std::string::npos) << c.sparql;
  EXPECT_NE(c.sparql.find("?V3 ?C4s ?A2."), std::string::npos);
  EXPECT_NE(c.sparql.find("?V3 ?C5 ?H0."), std::string::npos);
  EXPECT_NE(c.sparql.find("?C4 IN (p:P39"), std::string::npos);
  EXPECT_NE(c.sparql.find("?C5 IN (pq:P580"), std::string::npos);
}

TEST(EmitSparql, AggregateProjection) {
  auto c = compile(parseIr(kTallest), qirk::test::resolveFixture(parseIr(kTallest)));
  EXPECT_NE(c.sparql.find("(MAX(?H0) AS ?agg)"), std::string::npos) << c.sparql;
  EXPECT_NE(c.sparql.find("GROUP BY ?A1 ?C3 ?C4"), std::string::npos);
  EXPECT_NE(c.sql.find("MAX(c1.value_numeric) AS agg"), std::string::npos) << c.sql;
  EXPECT_NE(c.sql.find("GROUP BY"), std::string::npos);
}

TEST(EmitSql, AwardJoinsTwoClaimsOnSubject) {
  auto c = compile(parseIr(kAwards), qirk::test::awardCandidates());
  EXPECT_NE(c.sql.find("FROM claims AS c0"), std::string::npos) << c.sql;
  EXPECT_NE(c.sql.find("JOIN claims AS c1 ON c1.subject = c0.subject"), std::string::npos) << c.sql;
  EXPECT_NE(c.sql.find("c0.value_entity IN ('Q7408872', 'Q8624', 'Q1702885', 'Q1307005', 'Q3753203')"),
            std::string::npos);
  EXPECT_NE(c.sql.find("c1.value_entity IN ('Q163310', 'Q185667', 'Q490481', 'Q9241105', 'Q7251')"),
            std::string::npos);
}

TEST(EmitSql, SingleAtomHasNoJoin) {
  std::string ir = R"(X: received_award(X, "Turing Award"))";
  auto c = compile(parseIr(ir), qirk::test::resolveFixture(parseIr(ir)));
  EXPECT_EQ(c.sql.find("JOIN"), std::string::npos) << c.sql;
  EXPECT_NE(c.sql.find("FROM claims AS c0"), std::string::npos);
}

TEST(EmitSql, QualifierTableReferencedOnce) {
  auto c = compile(parseIr(kObama), qirk::test::resolveFixture(parseIr(kObama)));
  std::size_t count = 0;
  for (std::size_t pos = c.sql.find("qualifiers"); pos != std::string::npos; pos = c.sql.find("qualifiers", pos + 1)) {
    ++count;
  }
  EXPECT_EQ(count, 1u) << c.sql;
  EXPECT_NE(c.sql.find("JOIN qualifiers AS q0 ON q0.statement_id = c0.statement_id"), std::string::npos) << c.sql;
  EXPECT_NE(c.sql.find("q0.value_date AS H0"), std::string::npos);
}

TEST(Compile, ByteIdenticalAcrossRuns) {
  for (const auto& [name, ir] : qirk::test::fixtureQueries()) {
    auto q = parseIr(ir);
    auto m = qirk::test::resolveFixture(q);
    auto a = compile(q, m);
    auto b = compile(parseIr(ir), qirk::test::resolveFixture(parseIr(ir)));
    EXPECT_EQ(a.sparql, b.sparql) << name;
    EXPECT_EQ(a.sql, b.sql) << name;
  }
}

// Property: every candidate id appears exactly once across the IN-lists of
// both renderings; every pattern variable is declared.
TEST(CompileProperties, CoverageOverRandomQueries) {
  std::mt19937_64 rng(17);
  std::regex sparqlId(R"((?:wd|wdt|p|pq):([QP]\d+))");
  std::regex sqlId(R"('([QP]\d+)')");
  for (int i = 0; i < 300; ++i) {
    auto rc = qirk::test::randomCase(rng);
    auto c = compile(rc.query, rc.candidates);
    auto want = candidateIds(rc.candidates);
    std::sort(want.begin(), want.end());
    auto fromSparql = inListIds(filterPart(c.sparql), sparqlId);
    std::sort(fromSparql.begin(), fromSparql.end());
    EXPECT_EQ(fromSparql, want) << rc.irText << "\n" << c.sparql;
    auto fromSql = inListIds(c.sql, sqlId);
    std::sort(fromSql.begin(), fromSql.end());
    EXPECT_EQ(fromSql, want) << rc.irText << "\n" << c.sql;
    for (const auto& p : c.graph.patterns) {
      EXPECT_LT(p.subject, c.graph.vars.size());
      EXPECT_LT(p.object, c.graph.vars.size());
    }
    // One A/C variable per keyword, each with candidates.
    std::size_t keyed = 0;
    for (const auto& v : c.graph.vars) {
      if (v.role == VarRole::Anchor || v.role == VarRole::Property) {
        ++keyed;
        EXPECT_FALSE(v.candidates.empty());
      }
    }
    EXPECT_EQ(keyed, rc.candidates.size());
    EXPECT_EQ(c.graph.selection.size(), rc.candidates.size());
  }
}

TEST(RequiredKeywords, LiteralsClassesAndPredicates) {
  auto keys = requiredKeywords(parseIr(kMovies));
  ASSERT_EQ(keys.size(), 4u);
  EXPECT_EQ(keys[0], (KeywordKey{Kind::Entity, "movie"}));
  EXPECT_EQ(keys[1], (KeywordKey{Kind::Property, "director"}));
  auto award = requiredKeywords(parseIr(kAwards));
  EXPECT_EQ(award.size(), 3u);
}
