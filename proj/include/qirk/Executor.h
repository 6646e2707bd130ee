// In-process evaluation of executable query graphs over a KgStore, plus
// grouping of answers by their keyword-to-identifier assignment.

#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qirk/Compiler.h"
#include "qirk/KgStore.h"

namespace qirk::exec {

struct Answer {
  // One value per head variable, or the aggregate result.
  std::vector<kg::TypedValue> values;
  // Chosen id per A/C-variable, aligned with graph.selection.
  std::vector<std::string> assignment;
  std::vector<double> scores;
  bool operator==(const Answer&) const = default;
};

struct AnswerGroup {
  std::vector<std::string> assignment;
  std::vector<double> scores;
  double confidence = 0;
  std::vector<std::vector<kg::TypedValue>> answers;
};

class TypeUnsupported : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// All distinct (head values, assignment) pairs satisfying the conjunctive
// query, sorted by head values then assignment. Ignores any aggregate.
std::vector<Answer> execute(const compiler::ExecutableQueryGraph& graph, const kg::KgStore& store);

// MAX/MIN of values[0] within each assignment; one answer per assignment,
// ordered by assignment. Throws TypeUnsupported for non-numeric, non-date
// values.
std::vector<Answer> evaluateAggregate(std::span<const Answer> answers, ir::AggregateKind kind);

// execute() followed by evaluateAggregate() when the graph has an aggregate
// head. The aggregated variable must be typed numeric or date.
std::vector<Answer> run(const compiler::ExecutableQueryGraph& graph, const kg::KgStore& store);

// Groups by assignment; confidence is the mean of the assignment's scores.
// Sorted by confidence descending, then assignment ids ascending.
std::vector<AnswerGroup> groupAndRank(std::span<const Answer> answers);

}  // namespace qirk::exec
