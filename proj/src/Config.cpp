#include "qirk/Config.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>

namespace qirk {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parseNumber(const std::string& key, const std::string& value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("invalid value '" + value + "' for " + key);
  }
  return out;
}

}  // namespace

const std::vector<std::string>& Config::keys() {
  static const std::vector<std::string> names = {
      "store",
      "index",
      "k",
      "score_threshold",
      "popularity_boost",
      "class_property",
      "kg_url_template",
      "host",
      "port",
      "embedding.url",
      "embedding.dimension",
      "translator.mode",
      "translator.endpoint",
      "translator.model",
      "translator.prompt_template",
      "translator.max_repair_attempts",
      "translator.timeout_ms",
      "translator.templates",
  };
  return names;
}

void Config::set(const std::string& key, const std::string& value) {
  if (key == "store") {
    store = value;
  } else if (key == "index") {
    index = value;
  } else if (key == "k") {
    k = parseNumber<std::size_t>(key, value);
    if (k == 0) throw ConfigError("k must be at least 1");
  } else if (key == "score_threshold") {
    resolve.scoreThreshold = parseNumber<double>(key, value);
  } else if (key == "popularity_boost") {
    resolve.popularityBoost = parseNumber<double>(key, value);
  } else if (key == "class_property") {
    classProperty = value;
  } else if (key == "kg_url_template") {
    kgUrlTemplate = value;
  } else if (key == "host") {
    host = value;
  } else if (key == "port") {
    port = parseNumber<int>(key, value);
    if (port < 0 || port > 65535) throw ConfigError("port out of range");
  } else if (key == "embedding.url") {
    embeddingUrl = value;
  } else if (key == "embedding.dimension") {
    embeddingDimension = parseNumber<std::size_t>(key, value);
  } else if (key == "translator.mode") {
    if (value == "offline") {
      translator.mode = nl::TranslatorConfig::Mode::Offline;
    } else if (value == "remote") {
      translator.mode = nl::TranslatorConfig::Mode::Remote;
    } else {
      throw ConfigError("translator.mode must be 'offline' or 'remote'");
    }
  } else if (key == "translator.endpoint") {
    translator.endpoint = value;
  } else if (key == "translator.model") {
    translator.model = value;
  } else if (key == "translator.prompt_template") {
    translator.promptTemplate = value;
  } else if (key == "translator.max_repair_attempts") {
    translator.maxRepairAttempts = parseNumber<int>(key, value);
  } else if (key == "translator.timeout_ms") {
    translator.timeout = std::chrono::milliseconds(parseNumber<long>(key, value));
  } else if (key == "translator.templates") {
    if (value.empty()) {
      translator.templatesPath.reset();
    } else {
      translator.templatesPath = value;
    }
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

void Config::readFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::string line;
  std::string section;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    std::string text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    if (text.front() == '[') {
      if (text.back() != ']') {
        throw ConfigError(path.string() + ":" + std::to_string(number) + ": bad section header");
      }
      section = trim(std::string_view(text).substr(1, text.size() - 2));
      continue;
    }
    auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(number) + ": expected key = value");
    }
    std::string key = trim(std::string_view(text).substr(0, eq));
    std::string value = trim(std::string_view(text).substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (!section.empty()) key = section + "." + key;
    try {
      set(key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(path.string() + ":" + std::to_string(number) + ": " + e.what());
    }
  }
}

void Config::applyEnvironment() {
  for (const std::string& key : keys()) {
    std::string name = "QIRK_";
    for (char c : key) {
      name.push_back(c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
    if (const char* value = std::getenv(name.c_str())) {
      try {
        set(key, value);
      } catch (const ConfigError& e) {
        throw ConfigError(name + ": " + e.what());
      }
    }
  }
}

Config Config::load(const std::optional<std::filesystem::path>& path) {
  Config config;
  if (path) {
    config.readFile(*path);
  } else if (const char* env = std::getenv("QIRK_CONFIG"); env && *env) {
    config.readFile(env);
  }
  config.applyEnvironment();
  return config;
}

std::string Config::entityUrl(const std::string& id) const {
  std::string out = kgUrlTemplate;
  for (auto pos = out.find("{id}"); pos != std::string::npos; pos = out.find("{id}", pos + id.size())) {
    out.replace(pos, 4, id);
  }
  return out;
}

}  // namespace qirk
