#include <algorithm>
#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "ontotopic/service.hpp"
#include "ontotopic/sparql_client.hpp"

namespace ontotopic {

using ordered_json = nlohmann::ordered_json;

std::string_view to_string(ApiErrorCode code) {
  switch (code) {
    case ApiErrorCode::kBadRequest: return "bad_request";
    case ApiErrorCode::kNotFound: return "not_found";
    case ApiErrorCode::kUnknownTopic: return "unknown_topic";
    case ApiErrorCode::kNotALeaf: return "not_a_leaf";
    case ApiErrorCode::kInvalidQuery: return "invalid_query";
    case ApiErrorCode::kNoEndpoint: return "no_endpoint";
    case ApiErrorCode::kEndpointUnreachable: return "endpoint_unreachable";
    case ApiErrorCode::kEndpointError: return "endpoint_error";
    case ApiErrorCode::kBadResults: return "bad_results";
    case ApiErrorCode::kInternal: return "internal";
  }
  return "internal";
}

int http_status(ApiErrorCode code) {
  switch (code) {
    case ApiErrorCode::kBadRequest:
    case ApiErrorCode::kInvalidQuery:
    case ApiErrorCode::kNoEndpoint:
      return 400;
    case ApiErrorCode::kNotFound:
    case ApiErrorCode::kUnknownTopic:
      return 404;
    case ApiErrorCode::kNotALeaf: return 409;
    case ApiErrorCode::kEndpointUnreachable: return 504;
    case ApiErrorCode::kEndpointError:
    case ApiErrorCode::kBadResults:
      return 502;
    case ApiErrorCode::kInternal: return 500;
  }
  return 500;
}

std::string ApiError::to_json() const {
  ordered_json j;
  j["code"] = std::string(to_string(code));
  j["message"] = message;
  if (upstream_status != 0) j["upstreamStatus"] = upstream_status;
  return j.dump();
}

std::optional<std::string> default_endpoint() {
  const char* env = std::getenv(kEndpointEnv);
  if (env == nullptr || *env == '\0') return std::nullopt;
  return std::string(env);
}

namespace {

constexpr std::size_t kSummaryListLength = 5;

ApiResponse ok(const ordered_json& j) { return {200, j.dump()}; }

ApiResponse fail(ApiErrorCode code, std::string message, int upstream = 0) {
  ApiError e{code, std::move(message), upstream};
  return {e.http_status(), e.to_json()};
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ", ") + s;
  return out;
}

ordered_json params_json(const AnalysisParams& p) {
  return {{"alpha", p.alpha}, {"beta", p.beta}, {"seed", p.seed}};
}

// Distinct incident edges of each concept inside a subgraph.
std::map<std::string, std::size_t> concept_degrees(const SchemaGraph& sub) {
  std::map<std::string, std::size_t> deg;
  for (const auto& [edge, n] : sub.domain_edges()) ++deg[edge.first];
  for (const auto& [edge, n] : sub.range_edges()) ++deg[edge.second];
  return deg;
}

ordered_json topic_summary(const Snapshot& s, const TopicNode& node) {
  ordered_json j;
  j["topicId"] = node.id;
  j["depth"] = node.depth;
  j["isLeaf"] = node.is_leaf();
  if (const TopicRankRow* r = s.rank_of(node.id)) {
    j["overallRank"] = r->final_position;
    j["overall"] = r->overall;
    j["ranks"] = {{"topConcepts", r->ranks[kTopConcepts]},
                  {"topPredicates", r->ranks[kTopPredicates]},
                  {"similarity", r->ranks[kSimilarity]},
                  {"silhouetteWidth", r->ranks[kSilhouetteWidth]},
                  {"density", r->ranks[kDensity]}};
    j["measures"] = {{"meanSimilarity", r->measures.mean_similarity},
                     {"meanSW", r->measures.mean_sw},
                     {"density", r->measures.density}};
  } else {
    j["overallRank"] = nullptr;
  }
  j["meanSW"] = node.mean_sw;
  j["predicateCount"] = node.predicates.size();

  std::vector<std::pair<std::size_t, std::string>> preds;
  for (const auto& p : node.predicates) preds.emplace_back(s.degrees.pio(p), p);
  std::sort(preds.begin(), preds.end(),
            [](const auto& a, const auto& b) { return a.first != b.first ? a.first > b.first : a.second < b.second; });
  auto top_preds = ordered_json::array();
  for (std::size_t i = 0; i < preds.size() && i < kSummaryListLength; ++i) {
    top_preds.push_back({{"iri", preds[i].second},
                         {"label", s.schema.label(preds[i].second)},
                         {"pio", preds[i].first}});
  }
  j["topPredicates"] = std::move(top_preds);

  std::vector<std::pair<std::size_t, std::string>> concepts;
  for (const auto& [c, d] : concept_degrees(induced_subgraph(s.schema, node.predicates))) {
    concepts.emplace_back(d, c);
  }
  std::sort(concepts.begin(), concepts.end(),
            [](const auto& a, const auto& b) { return a.first != b.first ? a.first > b.first : a.second < b.second; });
  auto top_concepts = ordered_json::array();
  for (std::size_t i = 0; i < concepts.size() && i < kSummaryListLength; ++i) {
    top_concepts.push_back({{"iri", concepts[i].second},
                            {"label", s.schema.label(concepts[i].second)},
                            {"degree", concepts[i].first}});
  }
  j["topConcepts"] = std::move(top_concepts);
  return j;
}

}  // namespace

ApiService::ApiService(std::shared_ptr<const Snapshot> snapshot, ServiceOptions options)
    : snapshot_(std::move(snapshot)), options_(std::move(options)) {
  if (!snapshot_) throw std::invalid_argument("ApiService needs a snapshot");
}

ApiResponse ApiService::datasets() const {
  const Snapshot& s = *snapshot_;
  ordered_json d;
  d["id"] = s.dataset_id;
  d["createdAt"] = s.created_at;
  d["params"] = params_json(s.params);
  d["stats"] = ordered_json::parse(stats_to_json(s.stats));
  d["levelShape"] = s.hierarchy.level_shape();
  d["leafCount"] = s.hierarchy.leaves().size();
  d["levels"] = s.hierarchy.levels();
  return ok(ordered_json::array({d}));
}

ApiResponse ApiService::topics() const {
  const Snapshot& s = *snapshot_;
  auto arr = ordered_json::array();
  for (const auto& row : s.ranks) {
    if (const TopicNode* n = s.hierarchy.find(row.topic_id)) arr.push_back(topic_summary(s, *n));
  }
  return ok(arr);
}

ApiResponse ApiService::topic(const std::string& id) const {
  const Snapshot& s = *snapshot_;
  const TopicNode* n = s.hierarchy.find(id);
  if (n == nullptr) {
    return fail(ApiErrorCode::kUnknownTopic,
                "unknown topic '" + id + "'; leaf topics: " + join(s.leaf_ids()));
  }
  ordered_json j = topic_summary(s, *n);
  auto preds = ordered_json::array();
  for (const auto& p : n->predicates) {
    preds.push_back({{"iri", p}, {"label", s.schema.label(p)}, {"pio", s.degrees.pio(p)}});
  }
  j["predicates"] = std::move(preds);
  j["contribution"] = n->contribution;
  j["chosenK"] = n->chosen_k;
  j["nsw"] = n->nsw ? ordered_json(*n->nsw) : ordered_json(nullptr);
  auto children = ordered_json::array();
  for (const auto& c : n->children) children.push_back(c.id);
  j["children"] = std::move(children);
  return ok(j);
}

ApiResponse ApiService::topic_graph(const std::string& id) const {
  const Snapshot& s = *snapshot_;
  const TopicNode* n = s.hierarchy.find(id);
  if (n == nullptr) {
    return fail(ApiErrorCode::kUnknownTopic,
                "unknown topic '" + id + "'; leaf topics: " + join(s.leaf_ids()));
  }
  const SchemaGraph sub = induced_subgraph(s.schema, n->predicates);
  ordered_json j;
  j["topicId"] = n->id;
  auto nodes = ordered_json::array();
  for (const auto& c : sub.concepts()) {
    nodes.push_back({{"id", c}, {"kind", "concept"}, {"label", sub.label(c)}});
  }
  for (const auto& p : sub.predicates()) {
    nodes.push_back({{"id", p}, {"kind", "predicate"}, {"label", sub.label(p)}});
  }
  auto edges = ordered_json::array();
  for (const auto& [e, count] : sub.domain_edges()) {
    edges.push_back({{"source", e.first}, {"target", e.second}, {"role", "domain"}, {"count", count}});
  }
  for (const auto& [e, count] : sub.range_edges()) {
    edges.push_back({{"source", e.first}, {"target", e.second}, {"role", "range"}, {"count", count}});
  }
  j["nodes"] = std::move(nodes);
  j["edges"] = std::move(edges);
  return ok(j);
}

ApiResponse ApiService::topic_queries(const std::string& id) const {
  const Snapshot& s = *snapshot_;
  const TopicNode* n = s.hierarchy.find(id);
  if (n == nullptr) {
    return fail(ApiErrorCode::kUnknownTopic,
                "unknown topic '" + id + "'; leaf topics: " + join(s.leaf_ids()));
  }
  if (!n->is_leaf()) {
    return fail(ApiErrorCode::kNotALeaf,
                "topic '" + id + "' is not a leaf; leaf topics: " + join(s.leaf_ids()));
  }
  auto arr = ordered_json::array();
  auto it = s.queries.find(id);
  if (it != s.queries.end()) {
    for (const auto& q : it->second) {
      ordered_json j;
      j["nlQuestion"] = q.nl_question;
      j["sparql"] = q.sparql;
      j["beta"] = q.beta;
      j["shareTemplate"] = q.share_template;
      j["predicates"] = q.predicates;
      j["concepts"] = q.concepts;
      arr.push_back(std::move(j));
    }
  }
  return ok(arr);
}

ApiResponse ApiService::execute(const std::string& request_body) const {
  ordered_json req;
  try {
    req = ordered_json::parse(request_body);
  } catch (const nlohmann::json::exception&) {
    return fail(ApiErrorCode::kBadRequest, "request body is not JSON");
  }
  if (!req.is_object()) return fail(ApiErrorCode::kBadRequest, "request body must be an object");

  auto sparql = req.find("sparql");
  if (sparql == req.end() || !sparql->is_string() || sparql->get<std::string>().empty()) {
    return fail(ApiErrorCode::kInvalidQuery, "field 'sparql' must be a non-empty string");
  }
  EndpointConfig cfg;
  cfg.timeout = options_.execute_timeout;
  if (auto url = req.find("endpointUrl"); url != req.end() && url->is_string() &&
                                          !url->get<std::string>().empty()) {
    cfg.url = url->get<std::string>();
  } else if (options_.default_endpoint) {
    cfg.url = *options_.default_endpoint;
  } else {
    return fail(ApiErrorCode::kNoEndpoint, "no endpointUrl given and no default endpoint configured");
  }
  try {
    validate(cfg);
  } catch (const std::invalid_argument& e) {
    return fail(ApiErrorCode::kBadRequest, e.what());
  }
  try {
    return {200, table_to_json(ontotopic::execute(cfg, sparql->get<std::string>()))};
  } catch (const TransportError& e) {
    return fail(ApiErrorCode::kEndpointUnreachable, e.what());
  } catch (const EndpointError& e) {
    return fail(ApiErrorCode::kEndpointError, e.what(), e.status());
  } catch (const ResultsFormatError& e) {
    return fail(ApiErrorCode::kBadResults, e.what());
  } catch (const std::exception& e) {
    return fail(ApiErrorCode::kInternal, e.what());
  }
}

struct ApiServer::Impl {
  ApiService service;
  httplib::Server server;
  std::thread thread;

  explicit Impl(ApiService s) : service(std::move(s)) {}
};

ApiServer::ApiServer(ApiService service) : impl_(std::make_unique<Impl>(std::move(service))) {
  auto& srv = impl_->server;
  const ApiService& api = impl_->service;
  auto reply = [](httplib::Response& res, const ApiResponse& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  // SO_REUSEADDR without SO_REUSEPORT.
  srv.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });

  srv.Get("/api/datasets", [&api, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, api.datasets());
  });
  srv.Get("/api/topics", [&api, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, api.topics());
  });
  srv.Get(R"(/api/topics/([^/]+))", [&api, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, api.topic(req.matches[1].str()));
  });
  srv.Get(R"(/api/topics/([^/]+)/graph)",
          [&api, reply](const httplib::Request& req, httplib::Response& res) {
            reply(res, api.topic_graph(req.matches[1].str()));
          });
  srv.Get(R"(/api/topics/([^/]+)/queries)",
          [&api, reply](const httplib::Request& req, httplib::Response& res) {
            reply(res, api.topic_queries(req.matches[1].str()));
          });
  srv.Post("/api/execute", [&api, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, api.execute(req.body));
  });

  if (const auto& dir = api.options().static_dir) {
    if (!srv.set_mount_point("/", dir->string())) {
      throw std::runtime_error("static directory not found: " + dir->string());
    }
  }

  srv.set_error_handler([reply](const httplib::Request& req, httplib::Response& res) {
    if (res.status == 404 && res.body.empty() && req.path.starts_with("/api/")) {
      ApiError e{ApiErrorCode::kNotFound, "no route for " + req.method + " " + req.path};
      reply(res, {e.http_status(), e.to_json()});
    }
  });
  srv.set_exception_handler(
      [reply](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string what = "unexpected error";
        try {
          std::rethrow_exception(ep);
        } catch (const std::exception& e) {
          what = e.what();
        } catch (...) {
        }
        ApiError e{ApiErrorCode::kInternal, what};
        reply(res, {e.http_status(), e.to_json()});
      });
}

ApiServer::~ApiServer() { stop(); }

int ApiServer::bind(const std::string& host, int port) {
  if (port == 0) {
    int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw std::runtime_error("cannot bind " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port) +
                             " (port busy?)");
  }
  return port;
}

void ApiServer::run() { impl_->server.listen_after_bind(); }

void ApiServer::start() {
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void ApiServer::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace ontotopic
