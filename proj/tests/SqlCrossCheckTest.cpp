#include <gtest/gtest.h>

#include <random>

#include "TestSupport.h"
#include "qirk/Executor.h"

using qirk::compiler::compile;
using qirk::ir::parseIr;
using qirk::test::canonical;
using qirk::test::fixtureStore;

namespace {

const qirk::test::SqlDatabase& fixtureDb() {
  static const qirk::test::SqlDatabase db(fixtureStore());
  return db;
}

}  // namespace

class SqlCrossCheck : public ::testing::TestWithParam<std::pair<std::string, std::string>> {};

TEST_P(SqlCrossCheck, EmittedSqlAgreesWithExecutorAndOracle) {
  const auto& [name, ir] = GetParam();
  auto q = parseIr(ir);
  auto c = compile(q, qirk::test::resolveFixture(q));
  auto sql = canonical(fixtureDb().run(c.graph, c.sql));
  auto executed = canonical(qirk::exec::run(c.graph, fixtureStore()));
  auto oracle = c.graph.aggregate ? qirk::test::oracleAggregate(c.graph, fixtureStore())
                                  : qirk::test::oracleAnswers(c.graph, fixtureStore());
  EXPECT_FALSE(executed.empty());
  EXPECT_EQ(sql, executed) << c.sql;
  EXPECT_EQ(executed, oracle);
}

INSTANTIATE_TEST_SUITE_P(Fixture, SqlCrossCheck, ::testing::ValuesIn(qirk::test::fixtureQueries()),
                         [](const auto& info) { return info.param.first; });

TEST(SqlCrossCheckSuite, CoversQualifiersAndAggregates) {
  const auto& queries = qirk::test::fixtureQueries();
  EXPECT_GE(queries.size(), 8u);
  bool qualifier = false;
  bool max = false;
  for (const auto& [name, ir] : queries) {
    auto q = parseIr(ir);
    auto g = compile(q, qirk::test::resolveFixture(q)).graph;
    for (const auto& p : g.patterns) qualifier |= p.kind == qirk::compiler::TriplePattern::Kind::Qualifier;
    max |= g.aggregate == qirk::ir::AggregateKind::Max;
  }
  EXPECT_TRUE(qualifier);
  EXPECT_TRUE(max);
}

// Property: on random graphs the SQL rendering and the executor agree.
TEST(SqlCrossCheckProperties, RandomCases) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 150; ++trial) {
    auto rc = qirk::test::randomCase(rng);
    auto c = compile(rc.query, rc.candidates);
    qirk::test::SqlDatabase db(rc.store);
    ASSERT_EQ(canonical(db.run(c.graph, c.sql)), canonical(qirk::exec::run(c.graph, rc.store)))
        << rc.irText << "\n" << c.sql;
  }
}
