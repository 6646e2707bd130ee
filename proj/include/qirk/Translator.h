// Natural-language question to IR text. Two back ends: a chat-completion
// endpoint with a parse-and-repair loop, and an offline registry of
// regular-expression templates.

#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <regex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qirk::nl {

struct TranslatorConfig {
  enum class Mode { Remote, Offline };
  Mode mode = Mode::Offline;
  std::string endpoint;  // full URL of the chat-completions resource
  std::string model = "gpt-3.5-turbo";
  std::string promptTemplate = "qirk-ir-v1";
  int maxRepairAttempts = 2;
  std::chrono::milliseconds timeout = std::chrono::seconds(30);
  // Extra offline templates, loaded in addition to the built-in ones.
  std::optional<std::filesystem::path> templatesPath;

  // Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
};

struct Translation {
  std::string ir;
  // Remote requests made (0 offline).
  int attempts = 0;
  // Raw model replies, or the matched template pattern offline.
  std::vector<std::string> rawOutputs;
};

class TranslationFailed : public std::runtime_error {
 public:
  TranslationFailed(std::string message, Translation provenance)
      : std::runtime_error(std::move(message)), provenance_(std::move(provenance)) {}
  const Translation& provenance() const { return provenance_; }

 private:
  Translation provenance_;
};

class RemoteUnavailable : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class NoTemplateMatch : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Case-insensitive full-match pattern; `$1`, `$2`, ... in `ir` are replaced
// by the captured groups, with `"` and `\` escaped for IR string literals.
struct Template {
  std::string pattern;
  std::string ir;
};

class TemplateRegistry {
 public:
  static TemplateRegistry builtin();
  // JSON file {"templates":[{"pattern": ..., "ir": ...}, ...]}.
  void load(const std::filesystem::path& path);
  void add(Template t);

  // The IR of the first matching template, and that template's pattern.
  std::optional<std::pair<std::string, std::string>> match(std::string_view question) const;
  std::size_t size() const { return entries_.size(); }

 private:
  struct Entry {
    Template source;
    std::regex regex;
  };
  std::vector<Entry> entries_;
};

// Chat messages sent for `question`; repair turns are appended by translate().
std::string systemPrompt(const std::string& templateId);

Translation translate(std::string_view question, const TranslatorConfig& config);

}  // namespace qirk::nl
