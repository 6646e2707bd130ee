// Shared fixtures, reference implementations and generators for the test
// binaries. Nothing here is used by the library itself.

#pragma once

#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "qirk/Compiler.h"
#include "qirk/Executor.h"
#include "qirk/Ir.h"
#include "qirk/KgStore.h"
#include "qirk/SemanticIndex.h"

namespace qirk::test {

std::filesystem::path sourceDir();
std::filesystem::path fixturePath();

// Loaded once per process.
const kg::KgStore& fixtureStore();
const index::SemanticIndex& fixtureIndex();

compiler::CandidateMap resolveFixture(const ir::Query& query, std::size_t k = 5);

// The IR listings printed for the walkthrough questions.
struct Listing {
  std::string name;
  std::string question;
  std::string ir;
};
const std::vector<Listing>& listings();

// Candidate lists as printed for the award and movie queries, in the
// order of the printed SPARQL IN-lists.
compiler::CandidateMap awardCandidates();
compiler::CandidateMap movieCandidates();

std::string stripWhitespace(std::string_view text);
std::string readFile(const std::filesystem::path& path);

// Answers in a canonical order for set comparison.
std::vector<exec::Answer> canonical(std::vector<exec::Answer> answers);

// Nested-loop evaluation: enumerates one store statement (or qualifier)
// per pattern and keeps the combinations whose shared variables agree.
std::vector<exec::Answer> oracleAnswers(const compiler::ExecutableQueryGraph& graph,
                                        const kg::KgStore& store);
// Oracle answers aggregated per assignment by a direct scan.
std::vector<exec::Answer> oracleAggregate(const compiler::ExecutableQueryGraph& graph,
                                          const kg::KgStore& store);

// Runs emitted SQL against an in-memory SQLite database loaded with the
// relational encoding of `store`, and reads the rows back as answers.
class SqlDatabase {
 public:
  explicit SqlDatabase(const kg::KgStore& store);
  ~SqlDatabase();
  SqlDatabase(const SqlDatabase&) = delete;
  SqlDatabase& operator=(const SqlDatabase&) = delete;

  std::vector<exec::Answer> run(const compiler::ExecutableQueryGraph& graph,
                                const std::string& sql) const;
  // First column of every row as text.
  std::vector<std::string> column(const std::string& sql) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Named IR queries over the fixture used for the SQL cross-check.
const std::vector<std::pair<std::string, std::string>>& fixtureQueries();

// A small random KG and a random query with random candidate lists over it.
struct RandomCase {
  kg::KgStore store;
  ir::Query query;
  compiler::CandidateMap candidates;
  std::string irText;
};
RandomCase randomCase(std::mt19937_64& rng);

// Runs a shell command; stdout is captured, stderr is left alone unless the
// command redirects it.
struct CommandResult {
  int status = -1;
  std::string out;
};
CommandResult runCommand(const std::string& command);
std::string shellQuote(std::string_view text);

// A random valid IR query over a small vocabulary (for round-trip tests).
ir::Query randomQuery(std::mt19937_64& rng);

}  // namespace qirk::test
