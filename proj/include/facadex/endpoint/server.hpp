#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "facadex/rdf/graph.hpp"

namespace facadex::endpoint {

struct EndpointConfig {
  std::string bindAddress = "127.0.0.1";
  int port = 3000;  // 0 picks a free port
  std::optional<std::filesystem::path> load;
  std::size_t maxBodyBytes = 1 << 20;
  std::chrono::milliseconds timeout{30000};
  bool allowLocalFiles = true;
};

// Error(Usage) for an out-of-range port or a non-positive timeout.
void validateConfig(const EndpointConfig& config);

struct Response {
  int status = 200;
  std::string contentType;
  std::string body;
};

// Answers one query against the shared base dataset. Safe to call from
// several threads at once.
class QueryService {
 public:
  explicit QueryService(EndpointConfig config);

  Response answer(std::string_view queryText, std::string_view accept) const;
  const EndpointConfig& config() const { return config_; }

 private:
  EndpointConfig config_;
  rdf::Dataset base_;
};

// HTTP front end: GET/POST /sparql.
class Server {
 public:
  explicit Server(EndpointConfig config);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds the socket and returns the actual port.
  int bind();
  // Blocks until stop(). Calls bind() first when needed.
  bool serve();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace facadex::endpoint
