#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ontotopic {

struct EndpointConfig {
  enum class Method { kAuto, kGet, kPost };

  std::string url;
  std::chrono::milliseconds timeout{30000};
  Method method = Method::kAuto;  // auto: GET up to kMaxGetQueryBytes, else POST
  std::optional<std::string> default_graph;
};

inline constexpr std::size_t kMaxGetQueryBytes = 2048;
inline constexpr const char* kSparqlResultsJson = "application/sparql-results+json";

struct Cell {
  enum class Kind { kUnbound, kIri, kLiteral, kBlank };
  Kind kind = Kind::kUnbound;
  std::string value;
  std::optional<std::string> datatype;
  std::optional<std::string> language;

  friend bool operator==(const Cell&, const Cell&) = default;
};

struct BindingTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  friend bool operator==(const BindingTable&, const BindingTable&) = default;
};

// Could not reach the endpoint or no response within the timeout.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The endpoint answered with a non-2xx status.
class EndpointError : public std::runtime_error {
 public:
  EndpointError(int status, std::string body_snippet)
      : std::runtime_error("endpoint returned HTTP " + std::to_string(status) +
                           (body_snippet.empty() ? "" : ": " + body_snippet)),
        status_(status),
        body_(std::move(body_snippet)) {}

  int status() const { return status_; }
  const std::string& body() const { return body_; }

 private:
  int status_;
  std::string body_;
};

// The response body is not a SPARQL JSON results document.
class ResultsFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Url {
  std::string scheme;  // "http" or "https"
  std::string host;
  int port = 0;
  std::string path;  // includes any query string, never empty
};

// Throws std::invalid_argument for anything but http(s)://host[:port][/path].
Url parse_url(const std::string& url);

void validate(const EndpointConfig& cfg);

// Runs a SELECT through the SPARQL protocol and returns its bindings in
// server row order.
BindingTable execute(const EndpointConfig& cfg, const std::string& sparql);

// Parses an application/sparql-results+json document.
BindingTable parse_results_json(const std::string& body);
std::string table_to_json(const BindingTable& t);

enum class TableStyle { kTsv, kAligned };

// TSV: IRIs as <iri>, unbound cells empty, literals bare unless they contain
// a tab, newline or quote or could be misread, in which case they are quoted
// with doubled inner quotes.
std::string render_table(const BindingTable& t, TableStyle style);
BindingTable parse_table_tsv(const std::string& text);

}  // namespace ontotopic
