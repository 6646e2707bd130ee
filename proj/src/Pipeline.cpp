#include "qirk/Pipeline.h"

#include <chrono>

#include "qirk/Ir.h"
#include "qirk/Translator.h"

namespace qirk {

namespace {

using Clock = std::chrono::steady_clock;

double millisSince(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

nlohmann::json errorJson(const std::string& stage, const std::string& message) {
  return {{"stage", stage}, {"message", message}};
}

[[noreturn]] void fail(nlohmann::json& response, const std::string& stage, int status,
                       const std::string& message, nlohmann::json extra = nlohmann::json::object()) {
  nlohmann::json error = errorJson(stage, message);
  error.update(extra);
  response["error"] = std::move(error);
  throw StageError(stage, status, message, response);
}

}  // namespace

// _____________________________________________________________________________
AskRequest AskRequest::fromJson(const nlohmann::json& body) {
  auto bad = [](const std::string& message) -> StageError {
    nlohmann::json partial{{"error", errorJson("request", message)}};
    return StageError("request", 400, message, partial);
  };
  if (!body.is_object()) throw bad("request body must be a JSON object");
  AskRequest r;
  if (body.contains("nl")) {
    if (!body["nl"].is_string()) throw bad("\"nl\" must be a string");
    r.nl = body["nl"].get<std::string>();
  }
  if (body.contains("ir")) {
    if (!body["ir"].is_string()) throw bad("\"ir\" must be a string");
    r.ir = body["ir"].get<std::string>();
  }
  if (r.nl.has_value() == r.ir.has_value()) throw bad("exactly one of \"nl\" and \"ir\" is required");
  if (body.contains("k")) {
    const auto& k = body["k"];
    if (!k.is_number_integer() || k.get<long long>() < 1 || k.get<long long>() > 1000) {
      throw bad("\"k\" must be an integer between 1 and 1000");
    }
    r.k = k.get<std::size_t>();
  }
  return r;
}

std::shared_ptr<const index::EmbeddingProvider> makeProvider(const Config& config) {
  if (config.embeddingUrl.empty()) return std::make_shared<index::TrigramEmbedding>();
  if (config.embeddingDimension == 0) {
    throw ConfigError("embedding.dimension is required with embedding.url");
  }
  return std::make_shared<index::HttpEmbedding>(config.embeddingUrl, config.embeddingDimension);
}

nlohmann::json valueJson(const kg::TypedValue& value) {
  nlohmann::json j{{"type", std::string(kg::toString(value.type()))}};
  if (value.type() == kg::ValueType::Numeric) {
    j["value"] = value.number();
  } else {
    j["value"] = value.text();
  }
  return j;
}

Engine::Engine(std::shared_ptr<const kg::KgStore> store,
               std::shared_ptr<const index::SemanticIndex> index, Config config)
    : store_(std::move(store)), index_(std::move(index)), config_(std::move(config)) {}

Engine Engine::open(const Config& config) {
  if (config.store.empty()) throw ConfigError("no store configured");
  auto ingest = kg::KgStore::ingest(config.store);
  auto indexPath = config.index.empty() ? std::filesystem::path(config.store.string() + ".idx")
                                        : config.index;
  auto store = std::make_shared<kg::KgStore>(std::move(ingest.store));
  auto index = std::make_shared<index::SemanticIndex>(
      index::SemanticIndex::load(indexPath, makeProvider(config)));
  return Engine(std::move(store), std::move(index), config);
}

compiler::CandidateMap Engine::resolveAll(const ir::Query& query, std::size_t k) const {
  compiler::CandidateMap out;
  for (const auto& key : compiler::requiredKeywords(query)) {
    out.emplace(key, index_->resolve(key.second, key.first, k, config_.resolve));
  }
  return out;
}

compiler::CompiledQuery Engine::compileIr(const std::string& irText,
                                          std::optional<std::size_t> k) const {
  ir::Query query = ir::parseIr(irText);
  compiler::CompileOptions options{config_.classProperty};
  return compiler::compile(query, resolveAll(query, k.value_or(config_.k)), options);
}

nlohmann::json Engine::entityJson(const std::string& id) const {
  if (const kg::EntityRecord* e = store_->entity(id)) {
    return {{"id", e->id},
            {"label", e->label},
            {"description", e->description},
            {"popularity", e->popularity},
            {"url", config_.entityUrl(e->id)}};
  }
  if (const kg::PropertyRecord* p = store_->property(id)) {
    return {{"id", p->id},
            {"label", p->label},
            {"description", p->description},
            {"datatype", std::string(kg::toString(p->datatype))},
            {"url", config_.entityUrl(p->id)}};
  }
  return nullptr;
}

nlohmann::json Engine::ask(const AskRequest& request) const {
  auto total = Clock::now();
  nlohmann::json response = nlohmann::json::object();
  nlohmann::json timings = nlohmann::json::object();
  std::size_t k = request.k.value_or(config_.k);
  auto finish = [&](nlohmann::json& r) { timings["total_ms"] = millisSince(total); r["timings"] = timings; };

  try {
    std::string irText;
    if (request.nl) {
      response["question"] = *request.nl;
      auto start = Clock::now();
      try {
        nl::Translation t = nl::translate(*request.nl, config_.translator);
        irText = t.ir;
        response["translation"] = {{"attempts", t.attempts}, {"raw_outputs", t.rawOutputs}};
      } catch (const nl::RemoteUnavailable& e) {
        fail(response, "translate", 503, e.what());
      } catch (const nl::TranslationFailed& e) {
        response["translation"] = {{"attempts", e.provenance().attempts},
                                   {"raw_outputs", e.provenance().rawOutputs}};
        fail(response, "translate", 400, e.what());
      } catch (const nl::NoTemplateMatch& e) {
        fail(response, "translate", 400, e.what());
      } catch (const std::invalid_argument& e) {
        fail(response, "translate", 400, e.what());
      }
      timings["translate_ms"] = millisSince(start);
    } else if (request.ir) {
      irText = *request.ir;
    } else {
      fail(response, "request", 400, "no question given");
    }
    response["ir"] = irText;

    auto start = Clock::now();
    ir::Query query;
    try {
      query = ir::parseIr(irText);
    } catch (const ir::ParseError& e) {
      nlohmann::json extra{{"kind", std::string(ir::toString(e.kind()))},
                           {"position",
                            {{"offset", e.position().offset},
                             {"line", e.position().line},
                             {"column", e.position().column}}},
                           {"expected", e.expected()},
                           {"detail", e.detail()}};
      fail(response, "parse", 400, e.what(), extra);
    }
    ir::QueryGraph graph = ir::buildQueryGraph(query);
    response["ir_canonical"] = ir::renderIr(query);
    response["query_graph"] = graph;
    timings["parse_ms"] = millisSince(start);

    start = Clock::now();
    compiler::CandidateMap candidates = resolveAll(query, k);
    nlohmann::json cands = nlohmann::json::object();
    for (const auto& [key, set] : candidates) {
      std::string name = key.second;
      // A phrase used both as a literal and as a predicate gets two lists.
      if (key.first == index::Kind::Property &&
          candidates.contains({index::Kind::Entity, key.second})) {
        name += " (property)";
      }
      nlohmann::json list = nlohmann::json::array();
      for (const auto& c : set.candidates) {
        list.push_back({{"id", c.id}, {"label", c.label}, {"score", c.score}});
      }
      cands[name] = std::move(list);
    }
    response["candidates"] = std::move(cands);
    compiler::ExecutableQueryGraph exec;
    try {
      exec = compiler::bindCandidates(query, graph, candidates,
                                      compiler::CompileOptions{config_.classProperty});
    } catch (const compiler::CompileError& e) {
      std::string stage = e.kind() == compiler::CompileError::Kind::Unsupported ? "compile" : "resolve";
      fail(response, stage, 400, e.what(), {{"keyword", e.keyword()}});
    }
    timings["resolve_ms"] = millisSince(start);

    start = Clock::now();
    response["executable_graph"] = exec;
    response["sparql"] = compiler::emitSparql(exec);
    response["sql"] = compiler::emitSql(exec);
    timings["compile_ms"] = millisSince(start);

    start = Clock::now();
    std::vector<exec::Answer> answers;
    try {
      answers = exec::run(exec, *store_);
    } catch (const exec::TypeUnsupported& e) {
      fail(response, "execute", 400, e.what());
    }
    auto groups = exec::groupAndRank(answers);
    timings["execute_ms"] = millisSince(start);

    nlohmann::json columns = nlohmann::json::array();
    if (exec.aggregate) {
      columns.push_back(std::string(ir::toString(*exec.aggregate)) + "(" +
                        exec.vars[exec.head[0]].source + ")");
    } else {
      for (std::size_t h : exec.head) columns.push_back(exec.vars[h].source);
    }
    response["columns"] = std::move(columns);

    nlohmann::json jgroups = nlohmann::json::array();
    for (const exec::AnswerGroup& g : groups) {
      nlohmann::json assignment = nlohmann::json::object();
      nlohmann::json mapping = nlohmann::json::array();
      for (std::size_t i = 0; i < exec.selection.size(); ++i) {
        const auto& var = exec.vars[exec.selection[i]];
        const std::string& id = g.assignment[i];
        assignment[var.name] = id;
        std::string label;
        for (const auto& c : var.candidates) {
          if (c.id == id) label = c.label;
        }
        mapping.push_back({{"var", var.name},
                           {"keyword", var.source},
                           {"id", id},
                           {"label", label},
                           {"score", g.scores[i]},
                           {"url", config_.entityUrl(id)}});
      }
      nlohmann::json janswers = nlohmann::json::array();
      for (const auto& values : g.answers) {
        nlohmann::json jvalues = nlohmann::json::array();
        nlohmann::json links = nlohmann::json::array();
        for (const kg::TypedValue& v : values) {
          nlohmann::json jv = valueJson(v);
          if (v.type() == kg::ValueType::EntityId) {
            if (const auto* e = store_->entity(v.text())) jv["label"] = e->label;
            links.push_back(config_.entityUrl(v.text()));
          } else {
            links.push_back(nullptr);
          }
          jvalues.push_back(std::move(jv));
        }
        janswers.push_back({{"values", std::move(jvalues)}, {"entity_links", std::move(links)}});
      }
      jgroups.push_back({{"assignment", std::move(assignment)},
                         {"mapping", std::move(mapping)},
                         {"confidence", g.confidence},
                         {"answers", std::move(janswers)}});
    }
    response["groups"] = std::move(jgroups);
    finish(response);
    return response;
  } catch (const StageError& e) {
    nlohmann::json partial = e.partial();
    finish(partial);
    throw StageError(e.stage(), e.status(), e.what(), std::move(partial));
  } catch (const std::exception& e) {
    response["error"] = errorJson("internal", e.what());
    finish(response);
    throw StageError("internal", 500, e.what(), response);
  }
}

}  // namespace qirk
