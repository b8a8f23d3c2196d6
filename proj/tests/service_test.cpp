#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mock_endpoint.hpp"
#include "oracles.hpp"
#include "ontotopic/service.hpp"

using namespace ontotopic;
using nlohmann::json;

namespace {

std::shared_ptr<const Snapshot> medkg() {
  static const auto snap = std::make_shared<const Snapshot>(
      analyze(load_input(oracle::fixture("medkg.nt")), "medkg", {}, "2026-01-01T00:00:00Z"));
  return snap;
}

std::string fingerprint(const Snapshot& s) {
  std::ostringstream out;
  write_rank_tsv(out, s.ranks);
  write_schema_tsv(out, s.schema);
  out << hierarchy_to_json(s.hierarchy) << queries_to_json(s.queries);
  return out.str();
}

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    endpoint_ = std::make_unique<MockEndpoint>();
    ServiceOptions opts;
    opts.default_endpoint = endpoint_->url();
    opts.execute_timeout = std::chrono::milliseconds(3000);
    server_ = std::make_unique<ApiServer>(ApiService(medkg(), opts));
    port_ = server_->bind("127.0.0.1", 0);
    server_->start();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }
  void TearDown() override { server_->stop(); }

  json get(const std::string& path, int expect = 200) {
    auto res = client_->Get(path);
    EXPECT_TRUE(res) << path;
    if (!res) return {};
    EXPECT_EQ(res->status, expect) << path << ": " << res->body;
    EXPECT_EQ(res->get_header_value("Content-Type"), "application/json");
    return json::parse(res->body);
  }

  json post(const std::string& body, int expect) {
    auto res = client_->Post("/api/execute", body, "application/json");
    EXPECT_TRUE(res);
    if (!res) return {};
    EXPECT_EQ(res->status, expect) << res->body;
    return json::parse(res->body);
  }

  std::unique_ptr<MockEndpoint> endpoint_;
  std::unique_ptr<ApiServer> server_;
  std::unique_ptr<httplib::Client> client_;
  int port_ = 0;
};

}  // namespace

TEST(ApiErrors, StatusMapping) {
  EXPECT_EQ(http_status(ApiErrorCode::kUnknownTopic), 404);
  EXPECT_EQ(http_status(ApiErrorCode::kNotALeaf), 409);
  EXPECT_EQ(http_status(ApiErrorCode::kEndpointUnreachable), 504);
  EXPECT_EQ(http_status(ApiErrorCode::kEndpointError), 502);
  EXPECT_EQ(http_status(ApiErrorCode::kInvalidQuery), 400);
  EXPECT_EQ(to_string(ApiErrorCode::kNotALeaf), "not_a_leaf");
  const auto j = json::parse(ApiError{ApiErrorCode::kEndpointError, "boom", 503}.to_json());
  EXPECT_EQ(j["code"], "endpoint_error");
  EXPECT_EQ(j["upstreamStatus"], 503);
}

TEST_F(ServiceTest, DatasetsDescribeTheSnapshot) {
  const auto d = get("/api/datasets");
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0]["id"], "medkg");
  EXPECT_EQ(d[0]["levelShape"], medkg()->hierarchy.level_shape());
  EXPECT_EQ(d[0]["leafCount"], medkg()->hierarchy.leaves().size());
  EXPECT_EQ(d[0]["stats"]["predicates"], medkg()->stats.predicate_count);
}

TEST_F(ServiceTest, TopicsAreLeavesInRankOrder) {
  const auto topics = get("/api/topics");
  const auto& s = *medkg();
  ASSERT_EQ(topics.size(), s.hierarchy.leaves().size());
  for (std::size_t i = 0; i < topics.size(); ++i) {
    const auto& t = topics[i];
    EXPECT_EQ(t["topicId"], s.ranks[i].topic_id);
    EXPECT_EQ(t["overallRank"], i + 1);
    EXPECT_TRUE(t["isLeaf"].get<bool>());
    EXPECT_LE(t["topPredicates"].size(), 5u);
    const std::string id = t["topicId"];
    const auto detail = get("/api/topics/" + id);
    EXPECT_EQ(detail["predicates"].size(), t["predicateCount"]);
    get("/api/topics/" + id + "/graph");
    const auto qs = get("/api/topics/" + id + "/queries");
    EXPECT_EQ(qs.size(), s.queries.at(id).size());
    EXPECT_LE(qs.size(), kMaxQueriesPerTopic);
  }
}

TEST_F(ServiceTest, GraphIsTheInducedSubgraph) {
  const auto& s = *medkg();
  for (const TopicNode* leaf : s.hierarchy.leaves()) {
    const auto g = get("/api/topics/" + leaf->id + "/graph");
    const auto sub = induced_subgraph(s.schema, leaf->predicates);
    std::set<std::string> concepts, predicates;
    for (const auto& n : g["nodes"]) (n["kind"] == "concept" ? concepts : predicates).insert(n["id"]);
    EXPECT_EQ(concepts, sub.concepts());
    EXPECT_EQ(predicates, sub.predicates());
    std::size_t domain = 0, range = 0;
    for (const auto& e : g["edges"]) {
      if (e["role"] == "domain") {
        ++domain;
        EXPECT_TRUE(sub.domain_edges().contains({e["source"], e["target"]}));
      } else {
        ++range;
        EXPECT_TRUE(sub.range_edges().contains({e["source"], e["target"]}));
      }
    }
    EXPECT_EQ(domain, sub.domain_edges().size());
    EXPECT_EQ(range, sub.range_edges().size());
  }
}

TEST_F(ServiceTest, ErrorsUseCodes) {
  EXPECT_EQ(get("/api/topics/T9_9", 404)["code"], "unknown_topic");
  EXPECT_EQ(get("/api/topics/T9_9/graph", 404)["code"], "unknown_topic");
  const auto internal = get("/api/topics/T0_1/queries", 409);
  EXPECT_EQ(internal["code"], "not_a_leaf");
  EXPECT_NE(internal["message"].get<std::string>().find(medkg()->leaf_ids().front()), std::string::npos);
  EXPECT_EQ(get("/api/nothing", 404)["code"], "not_found");
  const auto root = get("/api/topics/T0_1");
  EXPECT_FALSE(root["isLeaf"].get<bool>());
  EXPECT_TRUE(root["overallRank"].is_null());
}

TEST_F(ServiceTest, ExecuteProxiesTheEndpoint) {
  const std::string sparql = medkg()->queries.begin()->second.front().sparql;
  const auto table = post(json{{"sparql", sparql}}.dump(), 200);
  EXPECT_EQ(table["head"]["vars"], (json{"drug", "label"}));
  EXPECT_EQ(table["results"]["bindings"].size(), 3u);
  EXPECT_EQ(endpoint_->seen().query, sparql);

  MockEndpoint failing(503, "down");
  const auto upstream = post(json{{"sparql", sparql}, {"endpointUrl", failing.url()}}.dump(), 502);
  EXPECT_EQ(upstream["code"], "endpoint_error");
  EXPECT_EQ(upstream["upstreamStatus"], 503);

  const std::string dead = "http://127.0.0.1:" + std::to_string(closed_port()) + "/sparql";
  EXPECT_EQ(post(json{{"sparql", sparql}, {"endpointUrl", dead}}.dump(), 504)["code"], "endpoint_unreachable");
  EXPECT_EQ(post("not json", 400)["code"], "bad_request");
  EXPECT_EQ(post(R"({"sparql": ""})", 400)["code"], "invalid_query");
  EXPECT_EQ(post(json{{"sparql", sparql}, {"endpointUrl", "ftp://x"}}.dump(), 400)["code"], "bad_request");
}

TEST(Service, NoEndpointConfigured) {
  ApiService api(medkg(), ServiceOptions{});
  const auto res = api.execute(R"({"sparql": "select ?a where { ?a ?b ?c }"})");
  EXPECT_EQ(res.status, 400);
  EXPECT_EQ(json::parse(res.body)["code"], "no_endpoint");
}

TEST(Service, RequestsDoNotMutateTheSnapshot) {
  const auto before = fingerprint(*medkg());
  ApiService api(medkg(), ServiceOptions{});
  api.datasets();
  api.topics();
  for (const auto& id : medkg()->leaf_ids()) {
    api.topic(id);
    api.topic_graph(id);
    api.topic_queries(id);
  }
  api.topic("T0_1");
  api.topic_queries("T0_1");
  api.execute("{}");
  EXPECT_EQ(fingerprint(*medkg()), before);
}

TEST(Service, BusyPortAndStaticFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "ontotopic_static_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "index.html") << "<html>explorer</html>";

  ServiceOptions opts;
  opts.static_dir = dir;
  ApiServer first(ApiService(medkg(), opts));
  const int port = first.bind("127.0.0.1", 0);
  first.start();
  ApiServer second(ApiService(medkg(), {}));
  EXPECT_THROW(second.bind("127.0.0.1", port), std::runtime_error);

  httplib::Client client("127.0.0.1", port);
  auto res = client.Get("/index.html");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->body, "<html>explorer</html>");
  first.stop();
  std::filesystem::remove_all(dir);

  ServiceOptions missing;
  missing.static_dir = dir / "absent";
  EXPECT_THROW(ApiServer(ApiService(medkg(), missing)), std::runtime_error);
}
