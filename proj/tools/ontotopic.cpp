#include <csignal>
#include <cstdio>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "ontotopic/error.hpp"
#include "ontotopic/service.hpp"
#include "ontotopic/snapshot.hpp"
#include "ontotopic/sparql_client.hpp"

namespace fs = std::filesystem;
using namespace ontotopic;

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : " ") + s;
  return out;
}

int cmd_analyze(const fs::path& input, const AnalysisParams& params, const fs::path& out) {
  ExtractDiagnostics diag;
  SchemaGraph schema = load_input(input, &diag);
  if (diag.builtin_filtered + diag.skipped_untyped() + diag.literal_objects > 0) {
    std::cerr << "ingest: " << diag.builtin_filtered << " built-in predicate triples filtered, "
              << diag.untyped_subject << " untyped subjects and " << diag.untyped_object
              << " untyped objects skipped, " << diag.literal_objects << " literal objects\n";
  }
  if (schema.predicates().empty()) {
    std::cerr << "error: " << input.string() << " yields no schema predicates\n";
    return 1;
  }
  Snapshot s = analyze(std::move(schema), input.stem().string(), params,
                       snapshot_timestamp(input));
  write_snapshot(s, out);

  std::size_t query_count = 0;
  for (const auto& [id, qs] : s.queries) query_count += qs.size();
  char density[32];
  std::snprintf(density, sizeof density, "%.4f", s.stats.density);
  std::cout << "dataset " << s.dataset_id << ": |C|=" << s.stats.concept_count
            << " |P|=" << s.stats.predicate_count << " |E|=" << s.stats.edge_sum
            << " |T|=" << s.stats.schema_triple_count << " D=" << density << "\n";
  std::cout << "hierarchy " << s.hierarchy.level_shape() << " ("
            << s.hierarchy.leaves().size() << " leaves), " << query_count << " queries\n";
  std::cout << "snapshot written to " << out.string() << "\n";
  return 0;
}

int cmd_query(const fs::path& dir, const std::string& topic, std::optional<std::string> endpoint) {
  Snapshot s = load_snapshot(dir);
  const TopicNode* node = s.hierarchy.find(topic);
  if (node == nullptr || !node->is_leaf()) {
    std::cerr << "error: " << (node == nullptr ? "unknown topic '" : "topic '") << topic
              << (node == nullptr ? "'" : "' is not a leaf") << "\n"
              << "leaf topics: " << join(s.leaf_ids()) << "\n";
    return 2;
  }
  const auto& queries = s.queries.at(topic);
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const auto& q = queries[i];
    std::cout << "[" << i + 1 << "] " << q.nl_question << "\n" << q.sparql << "\n";
  }
  if (queries.empty()) std::cout << "no queries for " << topic << "\n";
  if (!endpoint) endpoint = default_endpoint();
  if (!endpoint || queries.empty()) return 0;

  EndpointConfig cfg;
  cfg.url = *endpoint;
  BindingTable t = execute(cfg, queries.front().sparql);
  std::cout << render_table(t, TableStyle::kAligned);
  return 0;
}

ApiServer* g_server = nullptr;

int cmd_serve(const fs::path& dir, int port, const std::string& host,
              std::optional<fs::path> ui) {
  auto snapshot = std::make_shared<const Snapshot>(load_snapshot(dir));
  ServiceOptions options;
  options.default_endpoint = default_endpoint();
  options.static_dir = std::move(ui);
  ApiServer server(ApiService(snapshot, options));
  int bound = server.bind(host, port);
  std::cerr << "serving " << snapshot->dataset_id << " on http://" << host << ":" << bound
            << "\n";
  g_server = &server;
  std::signal(SIGINT, [](int) { if (g_server) g_server->stop(); });
  std::signal(SIGTERM, [](int) { if (g_server) g_server->stop(); });
  server.run();
  g_server = nullptr;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topic discovery and query generation for RDF schemas"};
  app.require_subcommand(1);

  fs::path input, out;
  AnalysisParams params;
  auto* analyze_cmd = app.add_subcommand("analyze", "Build a snapshot from an .nt or schema .tsv file");
  analyze_cmd->add_option("--input", input, "N-Triples (.nt) or schema TSV")->required()->check(CLI::ExistingFile);
  analyze_cmd->add_option("--alpha", params.alpha, "split threshold on neighbourhood silhouette")
      ->capture_default_str();
  analyze_cmd->add_option("--beta", params.beta, "query expansion threshold")
      ->check(CLI::Range(0.0, 0.999999))
      ->capture_default_str();
  analyze_cmd->add_option("--seed", params.seed, "k-means seed")->capture_default_str();
  analyze_cmd->add_option("--out", out, "snapshot directory")->required();

  fs::path snapshot_dir;
  std::string topic;
  std::optional<std::string> endpoint;
  auto* query_cmd = app.add_subcommand("query", "Print a leaf topic's queries, optionally run the first");
  query_cmd->add_option("--snapshot", snapshot_dir, "snapshot directory")->required();
  query_cmd->add_option("--topic", topic, "leaf topic id, e.g. T2_3")->required();
  query_cmd->add_option("--endpoint", endpoint,
                        std::string("SPARQL endpoint URL (default: $") + kEndpointEnv + ")");

  int port = 8080;
  std::string host = "127.0.0.1";
  std::optional<fs::path> ui;
  auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP API over a snapshot");
  serve_cmd->add_option("--snapshot", snapshot_dir, "snapshot directory")->required();
  serve_cmd->add_option("--port", port, "port, 0 for any free port")->capture_default_str();
  serve_cmd->add_option("--host", host, "listen address")->capture_default_str();
  serve_cmd->add_option("--ui", ui, "directory of static UI assets served at /");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze_cmd) return cmd_analyze(input, params, out);
    if (*query_cmd) return cmd_query(snapshot_dir, topic, endpoint);
    if (*serve_cmd) return cmd_serve(snapshot_dir, port, host, ui);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const EndpointError& e) {
    std::cerr << "endpoint error: " << e.what() << "\n";
    return 3;
  } catch (const TransportError& e) {
    std::cerr << "transport error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
