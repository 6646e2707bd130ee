// The ask pipeline: translate (optional), parse, resolve keywords, compile,
// execute, rank. Every stage that was reached is reported in the response.

#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "qirk/Compiler.h"
#include "qirk/Config.h"
#include "qirk/Executor.h"
#include "qirk/KgStore.h"
#include "qirk/SemanticIndex.h"

namespace qirk {

struct AskRequest {
  std::optional<std::string> nl;
  std::optional<std::string> ir;
  std::optional<std::size_t> k;

  // Reads {"nl": ...} or {"ir": ...} with an optional "k"; throws
  // StageError("request") on anything else.
  static AskRequest fromJson(const nlohmann::json& body);
};

class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, int status, std::string message, nlohmann::json partial = {})
      : std::runtime_error(std::move(message)),
        stage_(std::move(stage)),
        status_(status),
        partial_(std::move(partial)) {}
  const std::string& stage() const { return stage_; }
  // HTTP status: 400 user error, 503 translator unavailable, 500 internal.
  int status() const { return status_; }
  // The response fields produced before the failure, plus "error".
  const nlohmann::json& partial() const { return partial_; }

 private:
  std::string stage_;
  int status_;
  nlohmann::json partial_;
};

class Engine {
 public:
  Engine(std::shared_ptr<const kg::KgStore> store, std::shared_ptr<const index::SemanticIndex> index,
         Config config);

  // Loads the store and index named in `config`.
  static Engine open(const Config& config);

  // Throws StageError.
  nlohmann::json ask(const AskRequest& request) const;

  // Resolution and compilation only.
  compiler::CompiledQuery compileIr(const std::string& irText, std::optional<std::size_t> k = {}) const;

  nlohmann::json entityJson(const std::string& id) const;

  const kg::KgStore& store() const { return *store_; }
  const index::SemanticIndex& index() const { return *index_; }
  const Config& config() const { return config_; }

 private:
  compiler::CandidateMap resolveAll(const ir::Query& query, std::size_t k) const;

  std::shared_ptr<const kg::KgStore> store_;
  std::shared_ptr<const index::SemanticIndex> index_;
  Config config_;
};

std::shared_ptr<const index::EmbeddingProvider> makeProvider(const Config& config);

nlohmann::json valueJson(const kg::TypedValue& value);

}  // namespace qirk
