// HTTP/JSON front end of an Engine:
//   POST /api/ask         {"nl": ...} | {"ir": ...}, optional "k"
//   GET  /api/entity/{id}
//   GET  /api/health

#pragma once

#include <memory>
#include <string>
#include <thread>

#include "qirk/Pipeline.h"

namespace httplib {
class Server;
}

namespace qirk {

class Server {
 public:
  explicit Server(std::shared_ptr<const Engine> engine);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds; port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  // Serves until stop() is called.
  void listen();
  // bind() + listen() on a background thread.
  int start(const std::string& host, int port);
  void stop();

 private:
  std::shared_ptr<const Engine> engine_;
  std::unique_ptr<httplib::Server> http_;
  std::thread thread_;
};

}  // namespace qirk
