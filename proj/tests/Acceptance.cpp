// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "TestSupport.h"
#include "qirk/Executor.h"
#include "qirk/Pipeline.h"
#include "qirk/Translator.h"

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;
using nlohmann::json;
using qirk::test::canonical;
using qirk::test::fixtureIndex;
using qirk::test::fixtureStore;

// Pinned tolerances and limits.
constexpr double kPipelineSeconds = 1.0;
constexpr int kOracleTrials = 500;
constexpr double kOracleSeconds = 30.0;
constexpr std::size_t kMinSqlQueries = 8;
constexpr double kConfidenceTolerance = 1e-9;
constexpr std::size_t kRobustMinLabel = 8;
constexpr std::size_t kRobustTopK = 5;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double secondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::shared_ptr<const qirk::Engine> fixtureEngine() {
  auto store = std::shared_ptr<const qirk::kg::KgStore>(&fixtureStore(), [](const auto*) {});
  auto index = std::shared_ptr<const qirk::index::SemanticIndex>(&fixtureIndex(), [](const auto*) {});
  return std::make_shared<const qirk::Engine>(store, index, qirk::Config{});
}

Outcome awardPipeline() {
  fs::path dir = fs::temp_directory_path() / ("qirk_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::string bin = QIRK_BINARY;
  std::string store = qirk::test::shellQuote((dir / "fixture.store").string());
  auto ingest = qirk::test::runCommand(bin + " ingest " + qirk::test::shellQuote(qirk::test::fixturePath().string()) +
                                       " --out " + store + " >/dev/null 2>&1");
  auto index = qirk::test::runCommand(bin + " --store " + store + " index >/dev/null 2>&1");
  if (ingest.status != 0 || index.status != 0) {
    fs::remove_all(dir);
    return {false, "ingest/index failed"};
  }
  auto start = Clock::now();
  auto ask = qirk::test::runCommand(bin + " --store " + store + " ask --json --ir " +
                                    qirk::test::shellQuote(qirk::test::listings()[0].ir) + " 2>/dev/null");
  double elapsed = secondsSince(start);
  fs::remove_all(dir);
  if (ask.status != 0) return {false, "exit status " + std::to_string(ask.status)};
  json j = json::parse(ask.out);
  std::size_t answers = 0;
  json assignment;
  std::string value;
  for (const auto& g : j["groups"]) {
    for (const auto& a : g["answers"]) {
      ++answers;
      assignment = g["assignment"];
      value = a["values"][0]["value"].get<std::string>();
    }
  }
  json want{{"A1", "Q8624"}, {"C3", "P166"}, {"A2", "Q185667"}};
  std::ostringstream detail;
  detail << answers << " answer(s), " << value << ", assignment " << assignment.dump() << ", " << elapsed << " s";
  bool ok = answers == 1 && value == "Q92820" && fixtureStore().entity(value)->label == "Edwin Catmull" &&
            assignment == want && elapsed < kPipelineSeconds;
  return {ok, detail.str()};
}

Outcome sparqlGoldens() {
  using qirk::compiler::compile;
  auto awards = compile(qirk::ir::parseIr(qirk::test::listings()[0].ir), qirk::test::awardCandidates());
  auto movies = compile(qirk::ir::parseIr(qirk::test::listings()[1].ir), qirk::test::movieCandidates());
  auto golden = [](const char* name) {
    return qirk::test::stripWhitespace(qirk::test::readFile(qirk::test::sourceDir() / "tests/golden" / name));
  };
  bool a = qirk::test::stripWhitespace(awards.sparql) == golden("awards.sparql");
  bool m = qirk::test::stripWhitespace(movies.sparql) == golden("movies.sparql");
  return {a && m, std::string("awards ") + (a ? "match" : "differ") + ", movies " + (m ? "match" : "differ")};
}

Outcome executorOracle() {
  std::mt19937_64 rng(20240601);
  int agree = 0;
  bool bounded = true;
  auto start = Clock::now();
  for (int trial = 0; trial < kOracleTrials; ++trial) {
    auto rc = qirk::test::randomCase(rng);
    bounded &= rc.store.statements().size() <= 50 && rc.query.body.size() >= 2 && rc.query.body.size() <= 4;
    for (const auto& [key, set] : rc.candidates) bounded &= set.candidates.size() <= 5;
    auto g = qirk::compiler::compile(rc.query, rc.candidates).graph;
    if (canonical(qirk::exec::execute(g, rc.store)) == qirk::test::oracleAnswers(g, rc.store)) ++agree;
  }
  double elapsed = secondsSince(start);
  std::ostringstream detail;
  detail << agree << "/" << kOracleTrials << " trials agree, " << elapsed << " s";
  if (!bounded) detail << ", generator exceeded bounds";
  return {agree == kOracleTrials && bounded && elapsed < kOracleSeconds, detail.str()};
}

Outcome sqlCrossCheck() {
  const auto& queries = qirk::test::fixtureQueries();
  qirk::test::SqlDatabase db(fixtureStore());
  std::size_t agree = 0;
  bool qualifier = false;
  bool max = false;
  std::string mismatches;
  for (const auto& [name, ir] : queries) {
    auto q = qirk::ir::parseIr(ir);
    auto c = qirk::compiler::compile(q, qirk::test::resolveFixture(q));
    for (const auto& p : c.graph.patterns) qualifier |= p.kind == qirk::compiler::TriplePattern::Kind::Qualifier;
    max |= c.graph.aggregate == qirk::ir::AggregateKind::Max;
    auto executed = canonical(qirk::exec::run(c.graph, fixtureStore()));
    if (!executed.empty() && canonical(db.run(c.graph, c.sql)) == executed) {
      ++agree;
    } else {
      mismatches += " " + name;
    }
  }
  std::ostringstream detail;
  detail << agree << "/" << queries.size() << " queries agree (SQLite)" << (qualifier ? ", qualifier" : "")
         << (max ? ", MAX" : "") << mismatches;
  return {agree == queries.size() && queries.size() >= kMinSqlQueries && qualifier && max, detail.str()};
}

Outcome parserSuite() {
  using namespace qirk::ir;
  std::size_t ok = 0;
  for (const auto& l : qirk::test::listings()) {
    Query q = parseIr(l.ir);
    bool roundTrip = parseIr(renderIr(q)) == q;
    QueryGraph g = buildQueryGraph(q);
    std::set<std::size_t> atoms;
    for (const auto& e : g.edges) atoms.insert(e.atomIndex);
    for (const auto& c : g.classConstraints) atoms.insert(c.atomIndex);
    bool bijection = g.edges.size() + g.classConstraints.size() == q.body.size() && atoms.size() == q.body.size();
    ok += roundTrip && bijection;
  }
  auto kindOf = [](const char* text) -> std::optional<ParseError::Kind> {
    try {
      parseIr(text);
    } catch (const ParseError& e) {
      return e.kind();
    }
    return std::nullopt;
  };
  bool empty = kindOf("X:") == ParseError::Kind::Syntax;
  bool conflict = kindOf("X: p(X, Y / date); q(X, Y / numeric)") == ParseError::Kind::TypeConflict;
  std::ostringstream detail;
  detail << ok << "/" << qirk::test::listings().size() << " listings, empty body "
         << (empty ? "rejected" : "accepted") << ", type conflict " << (conflict ? "rejected" : "accepted");
  return {ok == qirk::test::listings().size() && empty && conflict, detail.str()};
}

Outcome rankingArithmetic() {
  auto engine = fixtureEngine();
  std::size_t groups = 0;
  double worst = 0;
  bool sorted = true;
  auto check = [&](const std::string& ir) {
    qirk::AskRequest req;
    req.ir = ir;
    json r = engine->ask(req);
    double previous = INFINITY;
    for (const auto& g : r["groups"]) {
      double sum = 0;
      for (const auto& m : g["mapping"]) sum += m["score"].get<double>();
      double mean = sum / static_cast<double>(g["mapping"].size());
      double confidence = g["confidence"].get<double>();
      worst = std::max(worst, std::abs(confidence - mean));
      sorted &= confidence <= previous;
      previous = confidence;
      ++groups;
    }
  };
  for (const auto& l : qirk::test::listings()) check(l.ir);
  for (const auto& [name, ir] : qirk::test::fixtureQueries()) check(ir);
  // The printed award scores.
  auto g = qirk::compiler::compile(qirk::ir::parseIr(qirk::test::listings()[0].ir), qirk::test::awardCandidates());
  auto ranked = qirk::exec::groupAndRank(qirk::exec::execute(g.graph, fixtureStore()));
  double printed = ranked.empty() ? 0 : ranked[0].confidence;
  worst = std::max(worst, std::abs(printed - (0.77 + 1.0 + 0.89) / 3));
  std::ostringstream detail;
  detail << groups << " groups, max |confidence - mean| " << worst << ", printed example " << printed
         << (sorted ? ", sorted" : ", NOT sorted");
  return {groups > 0 && worst <= kConfidenceTolerance && sorted, detail.str()};
}

Outcome robustness() {
  std::size_t tried = 0;
  std::size_t hit = 0;
  std::string firstMiss;
  for (const auto& entry : fixtureIndex().entries()) {
    if (entry.label.size() < kRobustMinLabel) continue;
    for (std::size_t i = 0; i < entry.label.size(); ++i) {
      std::string typo = entry.label;
      typo.erase(i, 1);
      auto got = fixtureIndex().resolve(typo, entry.kind, kRobustTopK);
      ++tried;
      bool found = false;
      for (const auto& c : got.candidates) found |= c.id == entry.id;
      if (found) {
        ++hit;
      } else if (firstMiss.empty()) {
        firstMiss = ", first miss " + entry.id + " '" + typo + "'";
      }
    }
  }
  std::ostringstream detail;
  detail << hit << "/" << tried << " deletions resolve in top-" << kRobustTopK << " (" << fixtureIndex().provider().name()
         << ")" << firstMiss;
  return {tried > 0 && hit == tried, detail.str()};
}

Outcome offlineNl() {
  auto engine = fixtureEngine();
  std::size_t ok = 0;
  std::string failures;
  for (const auto& l : qirk::test::listings()) {
    try {
      auto t = qirk::nl::translate(l.question, qirk::nl::TranslatorConfig{});
      qirk::ir::parseIr(t.ir);
      qirk::AskRequest req;
      req.nl = l.question;
      json r = engine->ask(req);
      if (!r["groups"].empty() && t.attempts == 0) {
        ++ok;
      } else {
        failures += " " + l.name;
      }
    } catch (const std::exception& e) {
      failures += " " + l.name + "(" + e.what() + ")";
    }
  }
  std::ostringstream detail;
  detail << ok << "/" << qirk::test::listings().size() << " questions answered offline" << failures;
  return {ok == qirk::test::listings().size(), detail.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"award_pipeline", awardPipeline},   {"sparql_goldens", sparqlGoldens},
      {"executor_oracle", executorOracle}, {"sql_cross_check", sqlCrossCheck},
      {"parser_suite", parserSuite},       {"ranking_arithmetic", rankingArithmetic},
      {"robustness", robustness},          {"offline_nl", offlineNl},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    failed += !o.pass;
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
