#include <gtest/gtest.h>

#include <random>

#include <nlohmann/json.hpp>

#include "TestSupport.h"
#include "qirk/Ir.h"

using namespace qirk::ir;
using qirk::test::listings;

namespace {

ParseError::Kind errorKind(std::string_view text) {
  try {
    parseIr(text);
  } catch (const ParseError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected a parse error for: " << text;
  return ParseError::Kind::Syntax;
}

ParseError parseFailure(std::string_view text) {
  try {
    parseIr(text);
  } catch (const ParseError& e) {
    return e;
  }
  throw std::runtime_error("no error for " + std::string(text));
}

}  // namespace

TEST(ParseIr, AwardQuerySharesHeadVariable) {
  Query q = parseIr(R"(X: received_award(X, "Oscar for Merit"); received_award(X, "Turing Award"))");
  ASSERT_EQ(q.headVariables(), std::vector<std::string>{"X"});
  ASSERT_EQ(q.body.size(), 2u);
  for (const Atom& a : q.body) {
    EXPECT_EQ(a.predicate, "received_award");
    ASSERT_EQ(a.terms.size(), 2u);
    EXPECT_TRUE(a.terms[0].isVariable());
    EXPECT_EQ(a.terms[0].text, "X");
    EXPECT_FALSE(a.terms[1].isVariable());
  }
  EXPECT_EQ(q.body[0].terms[1].text, "Oscar for Merit");
  EXPECT_EQ(q.body[1].terms[1].text, "Turing Award");
}

TEST(ParseIr, QualifierBindingAndDeclaredDate) {
  Query q = parseIr(R"(Y: X := holds_position("Barack Obama", "President"); start_time(X, Y / date))");
  ASSERT_EQ(q.body.size(), 2u);
  EXPECT_EQ(q.body[0].qualifierBinding, std::optional<std::string>("X"));
  EXPECT_FALSE(q.body[1].qualifierBinding.has_value());
  EXPECT_EQ(q.declaredType("Y"), DataType::Date);
  EXPECT_EQ(q.statementVariables(), std::vector<std::string>{"X"});
}

TEST(ParseIr, EmptyBodyIsSyntaxError) {
  ParseError e = parseFailure("X:");
  EXPECT_EQ(e.kind(), ParseError::Kind::Syntax);
  EXPECT_EQ(e.position().offset, 2u);
  EXPECT_FALSE(e.expected().empty());
}

TEST(ParseIr, ConflictingDeclarationsAreTypeConflict) {
  ParseError e = parseFailure("X: p(X, Y / date); q(X, Y / numeric)");
  EXPECT_EQ(e.kind(), ParseError::Kind::TypeConflict);
  EXPECT_EQ(e.position().line, 1u);
  EXPECT_GT(e.position().column, 20u);
}

TEST(ParseIr, TypeDeclaredOnceAppliesEverywhere) {
  Query q = parseIr("X, Y: p(X, Y / numeric); q(Y, X)");
  EXPECT_EQ(q.declaredType("Y"), DataType::Numeric);
  EXPECT_FALSE(q.declaredType("X").has_value());
  // Repeating the same declaration is fine.
  EXPECT_NO_THROW(parseIr("X: p(X, Y / date); q(X, Y / date)"));
}

TEST(ParseIr, ErrorClasses) {
  EXPECT_EQ(errorKind("X: p(Y, \"a\")"), ParseError::Kind::UnboundHeadVar);
  EXPECT_EQ(errorKind("Y: S := p(\"a\", Y)"), ParseError::Kind::DanglingQualifier);
  // A binding is only usable by later atoms.
  EXPECT_EQ(errorKind("Y: q(S, Y); S := p(\"a\", Y)"), ParseError::Kind::DanglingQualifier);
  EXPECT_EQ(errorKind("X: p(X / qualifier, \"a\")"), ParseError::Kind::TypeConflict);
  EXPECT_EQ(errorKind("Y: S := p(\"a\", Y); q(S / date, Y)"), ParseError::Kind::TypeConflict);
  EXPECT_EQ(errorKind("X: p(X, \"\")"), ParseError::Kind::Syntax);
  EXPECT_EQ(errorKind("X: p(X, Y, Z)"), ParseError::Kind::Syntax);
  EXPECT_EQ(errorKind("X: p()"), ParseError::Kind::Syntax);
  EXPECT_EQ(errorKind("X: p(X) q(X)"), ParseError::Kind::Syntax);
  EXPECT_EQ(errorKind("X: p(X, \"open"), ParseError::Kind::Syntax);
  EXPECT_EQ(errorKind("X: p(X / colour)"), ParseError::Kind::Syntax);
  EXPECT_EQ(errorKind("X, X: p(X)"), ParseError::Kind::Syntax);
  EXPECT_EQ(errorKind("MAX(X), Y: p(X, Y)"), ParseError::Kind::Syntax);
  EXPECT_EQ(errorKind("has space(X): p(X)"), ParseError::Kind::Syntax);
  EXPECT_EQ(errorKind(""), ParseError::Kind::Syntax);
}

TEST(ParseIr, ErrorPositionsPointIntoTheText) {
  ParseError e = parseFailure("X: p(X);\n   q(X,, Y)");
  EXPECT_EQ(e.position().line, 2u);
  EXPECT_EQ(e.position().column, 8u);
  EXPECT_EQ(e.position().offset, 16u);
}

TEST(ParseIr, WhitespaceIsInsignificant) {
  EXPECT_EQ(parseIr("X:p(X,\"a\");q(X)"), parseIr("  X :\n\tp ( X , \"a\" ) ;\n q ( X )  "));
}

TEST(ParseIr, LiteralEscapes) {
  Query q = parseIr(R"(X: p(X, "say \"hi\" \\ now"))");
  EXPECT_EQ(q.body[0].terms[1].text, "say \"hi\" \\ now");
  EXPECT_EQ(parseIr(renderIr(q)), q);
}

TEST(ParseIr, AllListingsParseAndRoundTrip) {
  for (const auto& l : listings()) {
    SCOPED_TRACE(l.name);
    Query q = parseIr(l.ir);
    std::string rendered = renderIr(q);
    EXPECT_EQ(parseIr(rendered), q);
    EXPECT_EQ(renderIr(parseIr(rendered)), rendered);
    QueryGraph g = buildQueryGraph(q);
    EXPECT_EQ(g.edges.size() + g.classConstraints.size(), q.body.size());
  }
}

TEST(RenderIr, AwardQueryMatchesSourceModuloWhitespace) {
  const std::string text = listings()[0].ir;
  EXPECT_EQ(qirk::test::stripWhitespace(renderIr(parseIr(text))), qirk::test::stripWhitespace(text));
}

TEST(RenderIr, AggregateHeadComesFirst) {
  std::string r = renderIr(parseIr(R"(MAX(Y): position(X,"President of the United States"); height(X,Y / numeric))"));
  EXPECT_TRUE(r.starts_with("MAX(Y):")) << r;
}

TEST(RenderIr, TypeSuffixEmittedExactlyOnce) {
  Query q = parseIr(R"(X, Y: position(X, "President of the United States"); height(X, Y / numeric); tallest(Y))");
  std::string r = renderIr(q);
  std::size_t first = r.find(" / numeric");
  ASSERT_NE(first, std::string::npos) << r;
  EXPECT_EQ(r.find(" / numeric", first + 1), std::string::npos) << r;
  EXPECT_EQ(parseIr(r).declaredType("Y"), DataType::Numeric);
}

TEST(QueryGraph, MovieQueryIsTriangleWithClass) {
  Query q = parseIr("X: movie(X); director(X,Y); married(Y,Z); cast(X,Z)");
  QueryGraph g = buildQueryGraph(q);
  ASSERT_EQ(g.nodes.size(), 3u);
  ASSERT_EQ(g.edges.size(), 3u);
  ASSERT_EQ(g.classConstraints.size(), 1u);
  auto x = *g.findVariable("X");
  auto y = *g.findVariable("Y");
  auto z = *g.findVariable("Z");
  EXPECT_EQ(g.classConstraints[0].node, x);
  EXPECT_EQ(g.classConstraints[0].className, "movie");
  EXPECT_EQ(std::make_pair(g.edges[0].from, g.edges[0].to), std::make_pair(x, y));
  EXPECT_EQ(std::make_pair(g.edges[1].from, g.edges[1].to), std::make_pair(y, z));
  EXPECT_EQ(std::make_pair(g.edges[2].from, g.edges[2].to), std::make_pair(x, z));
  EXPECT_EQ(g.edges[2].predicate, "cast");
}

TEST(QueryGraph, SingleClassAtom) {
  QueryGraph g = buildQueryGraph(parseIr("X: movie(X)"));
  EXPECT_EQ(g.nodes.size(), 1u);
  EXPECT_TRUE(g.edges.empty());
  EXPECT_EQ(g.classConstraints.size(), 1u);
}

TEST(QueryGraph, QualifierBindingCreatesStatementNode) {
  QueryGraph g = buildQueryGraph(
      parseIr(R"(Y: X := holds_position("Barack Obama", "President"); start_time(X, Y / date))"));
  auto obama = *g.findConstant("Barack Obama");
  auto president = *g.findConstant("President");
  auto x = *g.findVariable("X");
  auto y = *g.findVariable("Y");
  ASSERT_EQ(g.edges.size(), 2u);
  EXPECT_EQ(g.edges[0].from, obama);
  EXPECT_EQ(g.edges[0].to, president);
  EXPECT_EQ(g.edges[0].statementNode, x);
  EXPECT_TRUE(g.nodes[x].isStatement);
  EXPECT_EQ(g.edges[1].from, x);
  EXPECT_EQ(g.edges[1].to, y);
  EXPECT_EQ(g.edges[1].predicate, "start_time");
  ASSERT_EQ(g.qualifiers.size(), 1u);
  EXPECT_EQ(g.qualifiers[0].statementNode, x);
  EXPECT_EQ(g.qualifiers[0].atomIndex, 0u);
  EXPECT_EQ(g.nodes[y].type, DataType::Date);
}

TEST(QueryGraph, ConstantsAreSharedByText) {
  QueryGraph g = buildQueryGraph(parseIr(R"(X, Y: p(X, "a"); q(Y, "a"))"));
  EXPECT_EQ(g.nodes.size(), 3u);
  EXPECT_EQ(g.edges[0].to, g.edges[1].to);
}

TEST(QueryGraph, JsonCarriesEveryNodeAndEdge) {
  nlohmann::json j = buildQueryGraph(parseIr("X: movie(X); director(X,Y); married(Y,Z); cast(X,Z)"));
  EXPECT_EQ(j["nodes"].size(), 3u);
  EXPECT_EQ(j["edges"].size(), 3u);
  EXPECT_EQ(j["class_constraints"][0]["class"], "movie");
}

// Property: rendering is a right inverse of parsing, and every atom maps to
// exactly one edge or class constraint.
TEST(IrProperties, RandomQueriesRoundTripAndBijection) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    Query q = qirk::test::randomQuery(rng);
    std::string text = renderIr(q);
    Query back = parseIr(text);
    ASSERT_EQ(back, q) << text;
    EXPECT_EQ(renderIr(back), text);
    QueryGraph g = buildQueryGraph(q);
    EXPECT_EQ(g.edges.size() + g.classConstraints.size(), q.body.size()) << text;
    EXPECT_EQ(buildQueryGraph(back), g);
    std::set<std::size_t> atoms;
    for (const auto& e : g.edges) atoms.insert(e.atomIndex);
    for (const auto& c : g.classConstraints) atoms.insert(c.atomIndex);
    EXPECT_EQ(atoms.size(), q.body.size());
  }
}

TEST(IrProperties, EveryErrorCarriesAPosition) {
  std::mt19937_64 rng(11);
  const std::string alphabet = "XY:;(),\"/ pq_=1";
  int errors = 0;
  for (int i = 0; i < 3000; ++i) {
    std::string text;
    int len = std::uniform_int_distribution<int>(0, 24)(rng);
    for (int c = 0; c < len; ++c) {
      text.push_back(alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)]);
    }
    try {
      parseIr(text);
    } catch (const ParseError& e) {
      ++errors;
      EXPECT_LE(e.position().offset, text.size()) << text;
      EXPECT_GE(e.position().line, 1u);
      EXPECT_GE(e.position().column, 1u);
    }
  }
  EXPECT_GT(errors, 2000);
}
