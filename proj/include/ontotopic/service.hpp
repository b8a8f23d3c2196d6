#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "ontotopic/snapshot.hpp"

namespace ontotopic {

enum class ApiErrorCode {
  kBadRequest,
  kNotFound,
  kUnknownTopic,
  kNotALeaf,
  kInvalidQuery,
  kNoEndpoint,
  kEndpointUnreachable,
  kEndpointError,
  kBadResults,
  kInternal,
};

std::string_view to_string(ApiErrorCode code);
int http_status(ApiErrorCode code);

struct ApiError {
  ApiErrorCode code = ApiErrorCode::kInternal;
  std::string message;
  int upstream_status = 0;  // set for kEndpointError

  int http_status() const { return ontotopic::http_status(code); }
  std::string to_json() const;
};

// Environment variable naming the endpoint used when a request or command
// does not give one.
inline constexpr const char* kEndpointEnv = "ONTOTOPIC_ENDPOINT";
std::optional<std::string> default_endpoint();

struct ServiceOptions {
  std::optional<std::string> default_endpoint;
  std::optional<std::filesystem::path> static_dir;  // served at "/"
  std::chrono::milliseconds execute_timeout{30000};
};

struct ApiResponse {
  int status = 200;
  std::string body;  // JSON
};

// Read-only JSON API over one snapshot.
class ApiService {
 public:
  ApiService(std::shared_ptr<const Snapshot> snapshot, ServiceOptions options);

  ApiResponse datasets() const;
  ApiResponse topics() const;
  ApiResponse topic(const std::string& id) const;
  ApiResponse topic_graph(const std::string& id) const;
  ApiResponse topic_queries(const std::string& id) const;
  ApiResponse execute(const std::string& request_body) const;

  const Snapshot& snapshot() const { return *snapshot_; }
  const ServiceOptions& options() const { return options_; }

 private:
  std::shared_ptr<const Snapshot> snapshot_;
  ServiceOptions options_;
};

// HTTP front end for ApiService.
class ApiServer {
 public:
  explicit ApiServer(ApiService service);
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  // Binds the listening socket; port 0 picks a free port. Returns the bound
  // port. Throws std::runtime_error when the port is taken.
  int bind(const std::string& host, int port);
  void run();    // blocks until stop()
  void start();  // run() on a background thread
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ontotopic
