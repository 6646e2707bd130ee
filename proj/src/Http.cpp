#include "qirk/Http.h"

#include <httplib.h>

namespace qirk::http {

Url splitUrl(const std::string& url) {
  auto scheme = url.find("://");
  if (scheme == std::string::npos) throw Unavailable("malformed URL '" + url + "'");
  auto name = url.substr(0, scheme);
  if (name != "http" && name != "https") {
    throw Unavailable("unsupported URL scheme '" + name + "'");
  }
  auto slash = url.find('/', scheme + 3);
  Url out;
  out.origin = url.substr(0, slash);
  out.path = slash == std::string::npos ? "/" : url.substr(slash);
  if (out.origin.size() <= scheme + 3) throw Unavailable("URL without host '" + url + "'");
  return out;
}

nlohmann::json postJson(const std::string& url, const nlohmann::json& body,
                        const std::map<std::string, std::string>& headers,
                        std::chrono::milliseconds timeout) {
  Url parts = splitUrl(url);
  httplib::Client client(parts.origin);
  if (!client.is_valid()) throw Unavailable("cannot create client for '" + url + "'");
  auto seconds = std::chrono::duration_cast<std::chrono::seconds>(timeout);
  auto micros = std::chrono::duration_cast<std::chrono::microseconds>(timeout - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_write_timeout(seconds.count(), micros.count());
  httplib::Headers hs;
  for (const auto& [k, v] : headers) hs.emplace(k, v);
  auto res = client.Post(parts.path, hs, body.dump(), "application/json");
  if (!res) {
    throw Unavailable("request to '" + url + "' failed: " + httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw BadResponse("'" + url + "' answered HTTP " + std::to_string(res->status),
                      res->status);
  }
  try {
    return nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception& e) {
    throw BadResponse("'" + url + "' returned invalid JSON: " + e.what(), res->status);
  }
}

}  // namespace qirk::http
