// Service configuration: a key=value file (optionally with [section]
// headers that prefix the keys) plus QIRK_* environment overrides.
//
//   store = data/fixture.store
//   index = data/fixture.store.idx
//   k = 5
//   [translator]
//   mode = offline
//
// Environment variables override file values: QIRK_K=3,
// QIRK_TRANSLATOR_MODE=remote, and so on (upper case, '.' becomes '_').

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qirk/SemanticIndex.h"
#include "qirk/Translator.h"

namespace qirk {

class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::filesystem::path store;
  std::filesystem::path index;
  nl::TranslatorConfig translator;
  std::size_t k = 5;
  index::ResolveOptions resolve;
  std::string classProperty = "P31";
  std::string kgUrlTemplate = "https://www.wikidata.org/wiki/{id}";
  std::string host = "127.0.0.1";
  int port = 8080;
  // External embedding service; the built-in provider is used when empty.
  std::string embeddingUrl;
  std::size_t embeddingDimension = 0;

  static const std::vector<std::string>& keys();

  // Throws ConfigError for unknown keys or unparsable values.
  void set(const std::string& key, const std::string& value);
  void readFile(const std::filesystem::path& path);
  void applyEnvironment();

  // Defaults, then the file named by `path` or by QIRK_CONFIG (if any),
  // then the environment.
  static Config load(const std::optional<std::filesystem::path>& path = {});

  std::string entityUrl(const std::string& id) const;
};

}  // namespace qirk
