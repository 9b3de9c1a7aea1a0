#pragma once

#include <map>
#include <string>

namespace crgeo {

struct ApiResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

// Stateless request handler behind the HTTP service; usable without sockets.
// Routes: /api/rep, /api/figure, /api/verify.
ApiResponse handle_api(const std::string& path, const std::map<std::string, std::string>& query,
                       const std::string& body = "");

// Blocks serving the API and, when assets_dir is non-empty, static files
// from it at "/". Returns non-zero if the port cannot be bound.
int serve(int port, const std::string& assets_dir, const std::string& host = "127.0.0.1");

}  // namespace crgeo
