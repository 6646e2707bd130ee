#include "qirk/Translator.h"

#include <cstdlib>
#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

#include "qirk/Http.h"
#include "qirk/Ir.h"

namespace qirk::nl {

namespace {

struct Example {
  const char* question;
  const char* ir;
};

constexpr Example kExamples[] = {
    {"Name people who have won both an Oscar for Merit and a Turing Award.",
     R"(X: received_award(X, "Oscar for Merit"); received_award(X, "Turing Award"))"},
    {"List movies where the director is married to a member of the cast.",
     "X: movie(X); director(X,Y); married(Y,Z); cast(X,Z)"},
    {"When was Alan Turing born?", R"(X: date_of_birth("Alan Turing", X / date))"},
    {"List the US presidents and their heights.",
     R"(X, Y: position(X, "President of the United States"); height(X, Y / numeric))"},
    {"When did Barack Obama become president?",
     R"(Y: X := holds_position("Barack Obama", "President"); start_time(X, Y / date))"},
    {"What is the height of the tallest US president?",
     R"(MAX(Y): position(X, "President of the United States"); height(X, Y / numeric))"},
};

const Template kBuiltin[] = {
    {R"(\s*name (?:people|persons|those|everyone) who (?:have )?won both (?:an? |the )?(.+?) and (?:an? |the )?(.+?)\s*[.?!]?\s*)",
     R"(X: received_award(X, "$1"); received_award(X, "$2"))"},
    {R"(\s*(?:list|name|show|which) (?:all )?(?:movies|films) (?:where|in which|whose) (?:the )?director is married to (?:a |one )?(?:member of the cast|cast member)\s*[.?!]?\s*)",
     "X: movie(X); director(X,Y); married(Y,Z); cast(X,Z)"},
    {R"(\s*when was (.+?) born\s*\??\s*)", R"(X: date_of_birth("$1", X / date))"},
    {R"(\s*(?:list |show |name )?(?:all )?(?:the )?(?:us|u\.s\.|american) presidents and their heights\s*[.?!]?\s*)",
     R"(X, Y: position(X, "President of the United States"); height(X, Y / numeric))"},
    {R"(\s*what (?:are|were) the heights of (?:all )?(?:the )?(?:us|u\.s\.|american) presidents\s*\??\s*)",
     R"(X, Y: position(X, "President of the United States"); height(X, Y / numeric))"},
    {R"(\s*when did (.+?) become (?:the )?president\s*\??\s*)",
     R"(Y: X := holds_position("$1", "President"); start_time(X, Y / date))"},
    {R"(\s*when did (.+?) become (?:the |an? )?(.+?)\s*\??\s*)",
     R"(Y: X := holds_position("$1", "$2"); start_time(X, Y / date))"},
    {R"(\s*(?:what is|what was|how tall is|how tall was) (?:the height of )?the tallest (?:us|u\.s\.|american) president\s*\??\s*)",
     R"(MAX(Y): position(X, "President of the United States"); height(X, Y / numeric))"},
    {R"(\s*(?:what is|what was) the height of the shortest (?:us|u\.s\.|american) president\s*\??\s*)",
     R"(MIN(Y): position(X, "President of the United States"); height(X, Y / numeric))"},
};

std::string escapeLiteral(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string substitute(const std::string& skeleton, const std::smatch& m) {
  std::string out;
  for (std::size_t i = 0; i < skeleton.size(); ++i) {
    char c = skeleton[i];
    if (c == '$' && i + 1 < skeleton.size()) {
      char d = skeleton[i + 1];
      if (d == '$') {
        out.push_back('$');
        ++i;
        continue;
      }
      if (d >= '1' && d <= '9') {
        std::size_t group = static_cast<std::size_t>(d - '0');
        if (group < m.size()) out += escapeLiteral(m[group].str());
        ++i;
        continue;
      }
    }
    out.push_back(c);
  }
  return out;
}

// Models like to wrap answers in fences or quotes; keep the IR only.
std::string cleanReply(std::string reply) {
  auto trim = [](std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    auto e = s.find_last_not_of(" \t\r\n");
    s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
  };
  trim(reply);
  if (reply.starts_with("```")) {
    auto nl = reply.find('\n');
    reply = nl == std::string::npos ? "" : reply.substr(nl + 1);
    if (auto fence = reply.rfind("```"); fence != std::string::npos) reply.resize(fence);
    trim(reply);
  }
  if (reply.size() >= 2 && reply.front() == '`' && reply.back() == '`') {
    reply = reply.substr(1, reply.size() - 2);
    trim(reply);
  }
  return reply;
}

Translation translateOffline(std::string_view question, const TranslatorConfig& config) {
  TemplateRegistry registry = TemplateRegistry::builtin();
  if (config.templatesPath) registry.load(*config.templatesPath);
  auto hit = registry.match(question);
  if (!hit) throw NoTemplateMatch("no template matches \"" + std::string(question) + "\"");
  Translation t;
  t.ir = hit->first;
  t.rawOutputs.push_back(hit->second);
  try {
    ir::parseIr(t.ir);
  } catch (const ir::ParseError& e) {
    throw TranslationFailed("template produced invalid IR: " + std::string(e.what()), t);
  }
  return t;
}

Translation translateRemote(std::string_view question, const TranslatorConfig& config) {
  std::map<std::string, std::string> headers;
  if (const char* token = std::getenv("QIRK_LLM_TOKEN"); token && *token) {
    headers["Authorization"] = std::string("Bearer ") + token;
  }
  nlohmann::json messages = nlohmann::json::array();
  messages.push_back({{"role", "system"}, {"content", systemPrompt(config.promptTemplate)}});
  messages.push_back({{"role", "user"}, {"content", std::string(question)}});

  Translation t;
  std::string lastError;
  for (int attempt = 0; attempt <= config.maxRepairAttempts; ++attempt) {
    nlohmann::json body{{"model", config.model}, {"temperature", 0}, {"messages", messages}};
    nlohmann::json reply;
    try {
      reply = http::postJson(config.endpoint, body, headers, config.timeout);
    } catch (const http::Unavailable& e) {
      throw RemoteUnavailable(e.what());
    } catch (const http::BadResponse& e) {
      throw RemoteUnavailable(e.what());
    }
    ++t.attempts;
    std::string content;
    try {
      content = reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception&) {
      throw RemoteUnavailable("translator reply has no choices[0].message.content");
    }
    t.rawOutputs.push_back(content);
    std::string candidate = cleanReply(content);
    try {
      ir::parseIr(candidate);
      t.ir = std::move(candidate);
      return t;
    } catch (const ir::ParseError& e) {
      lastError = e.what();
    }
    messages.push_back({{"role", "assistant"}, {"content", content}});
    messages.push_back({{"role", "user"},
                        {"content", "That IR does not parse: " + lastError +
                                        "\nReply with the corrected IR query only."}});
  }
  throw TranslationFailed("no parsable IR after " + std::to_string(t.attempts) +
                              " attempt(s); last error: " + lastError,
                          t);
}

}  // namespace

// _____________________________________________________________________________
void TranslatorConfig::validate() const {
  if (mode == Mode::Remote && endpoint.empty()) {
    throw std::invalid_argument("remote translator needs an endpoint");
  }
  if (maxRepairAttempts < 0) throw std::invalid_argument("max_repair_attempts must be >= 0");
  if (timeout.count() <= 0) throw std::invalid_argument("translator timeout must be positive");
}

TemplateRegistry TemplateRegistry::builtin() {
  TemplateRegistry r;
  for (const Template& t : kBuiltin) r.add(t);
  return r;
}

void TemplateRegistry::add(Template t) {
  std::regex re;
  try {
    re = std::regex(t.pattern, std::regex::ECMAScript | std::regex::icase);
  } catch (const std::regex_error& e) {
    throw std::invalid_argument("bad template pattern '" + t.pattern + "': " + e.what());
  }
  entries_.push_back({std::move(t), std::move(re)});
}

void TemplateRegistry::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open template file '" + path.string() + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
    // Loaded templates take precedence over the built-in ones.
    std::vector<Entry> previous = std::move(entries_);
    entries_.clear();
    for (const auto& t : doc.at("templates")) {
      add({t.at("pattern").get<std::string>(), t.at("ir").get<std::string>()});
    }
    for (Entry& e : previous) entries_.push_back(std::move(e));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("malformed template file '" + path.string() + "': " + e.what());
  }
}

std::optional<std::pair<std::string, std::string>> TemplateRegistry::match(
    std::string_view question) const {
  std::string q(question);
  for (const Entry& e : entries_) {
    std::smatch m;
    if (std::regex_match(q, m, e.regex)) return std::make_pair(substitute(e.source.ir, m), e.source.pattern);
  }
  return std::nullopt;
}

std::string systemPrompt(const std::string& templateId) {
  if (templateId != "qirk-ir-v1") throw std::invalid_argument("unknown prompt template '" + templateId + "'");
  std::string out =
      "Translate the user's question into a query in the following language and reply with "
      "the query only.\n\n"
      "query := head \":\" atom (\";\" atom)*\n"
      "head  := var (\",\" var)* | (\"MAX\" | \"MIN\") \"(\" var \")\"\n"
      "atom  := [var \":=\"] keyword \"(\" term (\",\" term)? \")\"\n"
      "term  := (var | \"quoted text\") [\"/\" type]\n"
      "type  := entity_id | string | date | numeric | qualifier\n\n"
      "Keywords are snake_case phrases describing a relationship or a class. Quoted text "
      "names an entity in plain words. `X := atom` names the statement so later atoms can "
      "ask for its qualifiers. Declare a type once where it is not an entity.\n\nExamples:\n";
  for (const Example& e : kExamples) {
    out += "Q: ";
    out += e.question;
    out += "\nA: ";
    out += e.ir;
    out += "\n";
  }
  return out;
}

Translation translate(std::string_view question, const TranslatorConfig& config) {
  config.validate();
  bool blank = question.find_first_not_of(" \t\r\n") == std::string_view::npos;
  if (blank) throw std::invalid_argument("question is empty");
  return config.mode == TranslatorConfig::Mode::Offline ? translateOffline(question, config)
                                                        : translateRemote(question, config);
}

}  // namespace qirk::nl
