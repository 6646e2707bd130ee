// Command-line front end: ingest, index, ask, compile, serve.
// Exit status: 0 success, 2 user error, 1 internal error.

#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qirk/Config.h"
#include "qirk/Ir.h"
#include "qirk/KgStore.h"
#include "qirk/Pipeline.h"
#include "qirk/SemanticIndex.h"
#include "qirk/Server.h"

namespace {

constexpr int kUserError = 2;
constexpr int kInternalError = 1;

struct UserError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string formatValue(const nlohmann::json& v) {
  std::string out;
  if (v["value"].is_number()) {
    std::ostringstream os;
    os << v["value"].get<double>();
    out = os.str();
  } else {
    out = v["value"].get<std::string>();
  }
  if (v.contains("label")) out += " (" + v["label"].get<std::string>() + ")";
  return out;
}

void printTable(const nlohmann::json& response) {
  const auto& groups = response["groups"];
  if (groups.empty()) {
    std::cout << "no answers\n";
    return;
  }
  std::size_t n = 1;
  for (const auto& g : groups) {
    std::printf("group %zu  confidence %.4f\n", n++, g["confidence"].get<double>());
    for (const auto& m : g["mapping"]) {
      std::printf("  %-4s %-20s -> %s (%s, %.3f)\n", m["var"].get<std::string>().c_str(),
                  ("\"" + m["keyword"].get<std::string>() + "\"").c_str(),
                  m["id"].get<std::string>().c_str(), m["label"].get<std::string>().c_str(),
                  m["score"].get<double>());
    }
    std::string header;
    for (const auto& c : response["columns"]) header += (header.empty() ? "" : "\t") + c.get<std::string>();
    std::cout << "  " << header << "\n";
    for (const auto& a : g["answers"]) {
      std::string row;
      for (const auto& v : a["values"]) row += (row.empty() ? "" : "\t") + formatValue(v);
      std::cout << "  " << row << "\n";
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Knowledge-graph question answering over an intermediate representation"};
  app.require_subcommand(1);
  std::string configPath;
  std::string storePath;
  std::string indexPath;
  app.add_option("--config", configPath, "key=value configuration file");
  app.add_option("--store", storePath, "store file written by 'ingest'");
  app.add_option("--index", indexPath, "index file written by 'index' (default <store>.idx)");

  std::string dumpPath;
  std::string outPath;
  auto* ingest = app.add_subcommand("ingest", "Load a JSON-Lines dump into a store file");
  ingest->add_option("dump", dumpPath, "JSON-Lines dump")->required();
  ingest->add_option("--out", outPath, "store file to write")->required();

  std::string indexOut;
  auto* indexCmd = app.add_subcommand("index", "Build the vector index of a store");
  indexCmd->add_option("--out", indexOut, "index file to write (default <store>.idx)");

  std::string irText;
  std::string nlText;
  std::size_t k = 0;
  bool json = false;
  auto* ask = app.add_subcommand("ask", "Answer a question given as IR or natural language");
  auto* irOpt = ask->add_option("--ir", irText, "IR query text");
  auto* nlOpt = ask->add_option("--nl", nlText, "natural-language question");
  irOpt->excludes(nlOpt);
  ask->add_option("--k", k, "candidates per keyword");
  ask->add_flag("--json", json, "print the full JSON response");

  std::string compileIr;
  std::size_t compileK = 0;
  auto* compile = app.add_subcommand("compile", "Print the SPARQL and SQL of an IR query");
  compile->add_option("--ir", compileIr, "IR query text")->required();
  compile->add_option("--k", compileK, "candidates per keyword");

  std::string host;
  int port = -1;
  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  serve->add_option("--host", host, "interface to bind");
  serve->add_option("--port", port, "port (0 picks a free one)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUserError;
  }

  try {
    qirk::Config config;
    try {
      config = qirk::Config::load(configPath.empty() ? std::nullopt
                                                     : std::optional<std::filesystem::path>(configPath));
    } catch (const qirk::ConfigError& e) {
      throw UserError(e.what());
    }
    if (!storePath.empty()) config.store = storePath;
    if (!indexPath.empty()) config.index = indexPath;
    auto needStore = [&] {
      if (config.store.empty()) throw UserError("--store is required");
    };

    if (*ingest) {
      qirk::kg::KgStore::IngestResult result;
      try {
        result = qirk::kg::KgStore::ingest(dumpPath);
      } catch (const qirk::kg::IoError& e) {
        throw UserError(e.what());
      } catch (const qirk::kg::IngestError& e) {
        throw UserError(e.what());
      }
      result.store.save(outPath);
      const auto& r = result.report;
      std::cout << "lines " << r.lines << ", entities " << r.entities << ", properties "
                << r.properties << ", statements " << r.statements << ", qualifiers "
                << r.qualifiers << ", rejected " << r.rejected.size() << "\n";
      for (const auto& rej : r.rejected) {
        std::cerr << dumpPath << ":" << rej.line << ": " << rej.reason << "\n";
      }
      return 0;
    }

    if (*indexCmd) {
      needStore();
      qirk::kg::KgStore::IngestResult loaded;
      try {
        loaded = qirk::kg::KgStore::ingest(config.store);
      } catch (const qirk::kg::IoError& e) {
        throw UserError(e.what());
      }
      auto built = qirk::index::SemanticIndex::build(loaded.store, qirk::makeProvider(config));
      std::filesystem::path out = !indexOut.empty()       ? std::filesystem::path(indexOut)
                                  : !config.index.empty() ? config.index
                                                          : std::filesystem::path(config.store.string() + ".idx");
      built.save(out);
      std::cout << "indexed " << built.count(qirk::index::Kind::Entity) << " entities and "
                << built.count(qirk::index::Kind::Property) << " properties into " << out.string()
                << "\n";
      return 0;
    }

    needStore();
    std::shared_ptr<qirk::Engine> engine;
    try {
      engine = std::make_shared<qirk::Engine>(qirk::Engine::open(config));
    } catch (const qirk::kg::IoError& e) {
      throw UserError(e.what());
    } catch (const qirk::index::IndexFormatError& e) {
      throw UserError(e.what());
    }

    if (*ask) {
      if (irText.empty() == nlText.empty()) throw UserError("exactly one of --ir and --nl is required");
      qirk::AskRequest request;
      if (!irText.empty()) request.ir = irText;
      if (!nlText.empty()) request.nl = nlText;
      if (k > 0) request.k = k;
      try {
        nlohmann::json response = engine->ask(request);
        if (json) {
          std::cout << response.dump(2) << "\n";
        } else {
          printTable(response);
        }
        return 0;
      } catch (const qirk::StageError& e) {
        if (json) std::cout << e.partial().dump(2) << "\n";
        std::cerr << e.stage() << " error: " << e.what() << "\n";
        return e.status() == 400 ? kUserError : kInternalError;
      }
    }

    if (*compile) {
      try {
        auto compiled = engine->compileIr(compileIr, compileK > 0 ? std::optional(compileK) : std::nullopt);
        std::cout << compiled.sparql << "\n\n" << compiled.sql << "\n";
        return 0;
      } catch (const qirk::ir::ParseError& e) {
        throw UserError(std::string("parse error: ") + e.what());
      } catch (const qirk::compiler::CompileError& e) {
        throw UserError(std::string("compile error: ") + e.what());
      }
    }

    if (*serve) {
      qirk::Server server(engine);
      int bound = server.bind(host.empty() ? config.host : host, port >= 0 ? port : config.port);
      std::cout << "listening on http://" << (host.empty() ? config.host : host) << ":" << bound
                << std::endl;
      server.listen();
      return 0;
    }
  } catch (const UserError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUserError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return 0;
}
