// Minimal JSON-over-HTTP client used by the remote translator and the
// external embedding provider.

#pragma once

#include <chrono>
#include <map>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace qirk::http {

// Transport failure: refused connection, timeout, unparsable URL.
class Unavailable : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The server answered with a non-2xx status or a body that is not JSON.
class BadResponse : public std::runtime_error {
 public:
  BadResponse(std::string message, int status)
      : std::runtime_error(std::move(message)), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

struct Url {
  std::string origin;  // scheme://host[:port]
  std::string path;    // starts with '/'
};

// Throws Unavailable for anything that is not http(s)://host[:port][/path].
Url splitUrl(const std::string& url);

nlohmann::json postJson(const std::string& url, const nlohmann::json& body,
                        const std::map<std::string, std::string>& headers,
                        std::chrono::milliseconds timeout);

}  // namespace qirk::http
