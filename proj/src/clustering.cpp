#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

#include "json.hpp"
#include "ontotopic/clustering.hpp"
#include "ontotopic/error.hpp"

namespace ontotopic {

std::vector<std::vector<std::size_t>> ClusterAssignment::groups() const {
  std::vector<std::vector<std::size_t>> out(k);
  for (std::size_t r = 0; r < members.size(); ++r) {
    out[assignment[r]].push_back(members[r]);
  }
  return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Portable across standard libraries, unlike std::uniform_*_distribution.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

using Rows = std::vector<std::vector<double>>;

double squared_distance(const std::vector<double>& a,
                        const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

struct Run {
  std::vector<std::size_t> assignment;
  double wcss = 0.0;
};

Rows seed_centroids(const Rows& x, std::size_t k, std::mt19937_64& rng) {
  const std::size_t m = x.size();
  std::vector<bool> chosen(m, false);
  Rows centroids;
  std::size_t first = std::min(m - 1, static_cast<std::size_t>(uniform01(rng) * m));
  chosen[first] = true;
  centroids.push_back(x[first]);

  std::vector<double> d2(m);
  while (centroids.size() < k) {
    double total = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : centroids) best = std::min(best, squared_distance(x[r], c));
      d2[r] = chosen[r] ? 0.0 : best;
      total += d2[r];
    }
    std::size_t pick = m;
    if (total > 0.0) {
      double target = uniform01(rng) * total;
      for (std::size_t r = 0; r < m; ++r) {
        if (d2[r] <= 0.0) continue;
        pick = r;
        target -= d2[r];
        if (target < 0.0) break;
      }
    } else {
      // All remaining points coincide with a centroid: pick uniformly among
      // the unchosen ones.
      std::size_t remaining = m - centroids.size();
      std::size_t nth = std::min(remaining - 1,
                                 static_cast<std::size_t>(uniform01(rng) * remaining));
      for (std::size_t r = 0; r < m; ++r) {
        if (chosen[r]) continue;
        if (nth-- == 0) {
          pick = r;
          break;
        }
      }
    }
    chosen[pick] = true;
    centroids.push_back(x[pick]);
  }
  return centroids;
}

Run lloyd(const Rows& x, std::size_t k, std::mt19937_64& rng) {
  const std::size_t m = x.size();
  const std::size_t dim = x.front().size();
  Rows centroids = seed_centroids(x, k, rng);
  std::vector<std::size_t> assignment(m, k);

  for (int iter = 0; iter < kKMeansMaxIterations; ++iter) {
    std::vector<std::size_t> next(m);
    std::vector<double> dist(m);
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t r = 0; r < m; ++r) {
      std::size_t best = 0;
      double best_d = squared_distance(x[r], centroids[0]);
      for (std::size_t c = 1; c < k; ++c) {
        const double d = squared_distance(x[r], centroids[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      next[r] = best;
      dist[r] = best_d;
      ++sizes[best];
    }

    // Reseed each empty cluster with the point farthest from its centroid,
    // taken from a cluster that can spare it.
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] > 0) continue;
      std::size_t far = m;
      for (std::size_t r = 0; r < m; ++r) {
        if (sizes[next[r]] < 2) continue;
        if (far == m || dist[r] > dist[far]) far = r;
      }
      --sizes[next[far]];
      next[far] = c;
      sizes[c] = 1;
      dist[far] = 0.0;
      centroids[c] = x[far];
    }

    const bool changed = next != assignment;
    assignment = std::move(next);

    for (std::size_t c = 0; c < k; ++c) centroids[c].assign(dim, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
      auto& c = centroids[assignment[r]];
      for (std::size_t j = 0; j < dim; ++j) c[j] += x[r][j];
    }
    for (std::size_t c = 0; c < k; ++c) {
      for (double& v : centroids[c]) v /= static_cast<double>(sizes[c]);
    }
    if (!changed) break;
  }

  Run run{std::move(assignment), 0.0};
  for (std::size_t r = 0; r < m; ++r) {
    run.wcss += squared_distance(x[r], centroids[run.assignment[r]]);
  }
  return run;
}

// Renumbers cluster ids by first appearance.
void canonicalize(std::vector<std::size_t>& assignment, std::size_t k) {
  std::vector<std::size_t> remap(k, k);
  std::size_t next = 0;
  for (auto& a : assignment) {
    if (remap[a] == k) remap[a] = next++;
    a = remap[a];
  }
}

}  // namespace

ClusterAssignment kmeans_assign(const SimilarityMatrix& sm,
                                const std::vector<std::size_t>& members,
                                std::size_t k, std::uint64_t seed) {
  const std::size_t m = members.size();
  if (k < 2 || k > m) {
    throw std::invalid_argument("k must be in [2, " + std::to_string(m) +
                                "], got " + std::to_string(k));
  }
  Rows x(m, std::vector<double>(m));
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < m; ++c) x[r][c] = sm(members[r], members[c]);
  }

  Run best;
  bool have_best = false;
  for (int restart = 0; restart < kKMeansRestarts; ++restart) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(restart))));
    Run run = lloyd(x, k, rng);
    if (!have_best || run.wcss < best.wcss) {
      best = std::move(run);
      have_best = true;
    }
  }
  canonicalize(best.assignment, k);
  return {members, std::move(best.assignment), k, seed, best.wcss};
}

SilhouetteReport silhouette(const SimilarityMatrix& sm,
                            const std::vector<std::vector<std::size_t>>& groups) {
  if (groups.size() < 2) {
    throw std::invalid_argument("silhouette needs at least two sibling clusters");
  }
  for (const auto& g : groups) {
    if (g.empty()) throw std::invalid_argument("silhouette got an empty cluster");
  }
  auto mean_dissimilarity = [&](std::size_t p, const std::vector<std::size_t>& g,
                                bool exclude_self) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t q : g) {
      if (exclude_self && q == p) continue;
      sum += 1.0 - sm(p, q);
      ++n;
    }
    return n == 0 ? 0.0 : sum / static_cast<double>(n);
  };

  SilhouetteReport report;
  for (std::size_t c = 0; c < groups.size(); ++c) {
    double total = 0.0;
    for (std::size_t p : groups[c]) {
      PredicateSilhouette s;
      s.predicate = p;
      s.cluster = c;
      s.a = mean_dissimilarity(p, groups[c], true);
      s.b = std::numeric_limits<double>::infinity();
      for (std::size_t o = 0; o < groups.size(); ++o) {
        if (o != c) s.b = std::min(s.b, mean_dissimilarity(p, groups[o], false));
      }
      if (groups[c].size() == 1) {
        s.width = 0.0;
      } else if (s.a < s.b) {
        s.width = 1.0 - s.a / s.b;
      } else if (s.a > s.b) {
        s.width = s.b / s.a - 1.0;
      } else {
        s.width = 0.0;
      }
      total += s.width;
      report.predicates.push_back(s);
    }
    report.cluster_mean.push_back(total / static_cast<double>(groups[c].size()));
    report.cluster_size.push_back(groups[c].size());
  }
  return report;
}

double neighborhood_sw(std::span<const ChildScore> children) {
  double weighted = 0.0;
  std::size_t total = 0;
  for (const auto& c : children) {
    weighted += c.mean_sw * static_cast<double>(c.predicate_count);
    total += c.predicate_count;
  }
  if (total == 0) {
    throw std::invalid_argument("neighbourhood silhouette needs predicates");
  }
  return weighted / static_cast<double>(total);
}

std::optional<Split> optimal_k(const SimilarityMatrix& sm,
                               const std::vector<std::size_t>& members,
                               std::size_t k_max, std::uint64_t seed) {
  const std::size_t m = members.size();
  if (m < kMinSplittable) return std::nullopt;
  if (k_max == 0) k_max = std::min<std::size_t>(10, m - 1);
  k_max = std::min(k_max, m);

  std::optional<Split> best;
  for (std::size_t k = 2; k <= k_max; ++k) {
    ClusterAssignment assignment = kmeans_assign(sm, members, k, seed);
    SilhouetteReport report = silhouette(sm, assignment.groups());
    std::vector<ChildScore> scores;
    for (std::size_t c = 0; c < k; ++c) {
      scores.push_back({report.cluster_mean[c], report.cluster_size[c]});
    }
    const double nsw = neighborhood_sw(scores);
    if (!best || nsw > best->nsw) {
      best = Split{k, nsw, std::move(assignment), std::move(report)};
    }
  }
  return best;
}

namespace {

TopicNode make_node(const SimilarityMatrix& sm, std::vector<std::size_t> members) {
  std::sort(members.begin(), members.end());
  TopicNode node;
  node.members = std::move(members);
  for (std::size_t i : node.members) node.predicates.push_back(sm.predicates()[i]);
  return node;
}

void split_recursively(const SimilarityMatrix& sm, TopicNode& node, double alpha,
                       std::uint64_t seed) {
  auto split = optimal_k(sm, node.members, 0, seed);
  if (!split) return;
  node.nsw = split->nsw;
  if (split->nsw < alpha) return;

  node.chosen_k = split->k;
  auto groups = split->assignment.groups();
  for (std::size_t c = 0; c < groups.size(); ++c) {
    TopicNode child = make_node(sm, groups[c]);
    child.depth = node.depth + 1;
    child.mean_sw = split->silhouette.cluster_mean[c];
    child.contribution = static_cast<double>(child.members.size()) /
                         static_cast<double>(node.members.size());
    node.children.push_back(std::move(child));
  }
  // Left to right by smallest member.
  std::sort(node.children.begin(), node.children.end(),
            [](const TopicNode& a, const TopicNode& b) {
              return a.members.front() < b.members.front();
            });
  for (auto& child : node.children) split_recursively(sm, child, alpha, seed);
}

// Frontier per depth. Node ids come from their position in the frontier of
// their own depth.
std::vector<std::vector<TopicNode*>> frontiers(TopicNode& root) {
  std::vector<std::vector<TopicNode*>> levels{{&root}};
  while (true) {
    std::vector<TopicNode*> next;
    bool grew = false;
    for (TopicNode* n : levels.back()) {
      if (n->is_leaf()) {
        next.push_back(n);
      } else {
        grew = true;
        for (auto& c : n->children) next.push_back(&c);
      }
    }
    if (!grew) break;
    levels.push_back(std::move(next));
  }
  return levels;
}

}  // namespace

TopicHierarchy::TopicHierarchy(TopicNode root, double alpha, std::uint64_t seed)
    : root_(std::move(root)), alpha_(alpha), seed_(seed) {
  auto levels = frontiers(root_);
  for (std::size_t d = 0; d < levels.size(); ++d) {
    std::vector<std::string> ids;
    for (std::size_t pos = 0; pos < levels[d].size(); ++pos) {
      TopicNode* n = levels[d][pos];
      if (n->depth == d) {
        n->id = "T" + std::to_string(d) + "_" + std::to_string(pos + 1);
      }
    }
    for (TopicNode* n : levels[d]) ids.push_back(n->id);
    levels_.push_back(std::move(ids));
  }
}

std::string TopicHierarchy::level_shape() const {
  if (levels_.size() <= 1) return "1";
  std::string out;
  for (std::size_t d = 1; d < levels_.size(); ++d) {
    if (d > 1) out += ':';
    out += std::to_string(levels_[d].size());
  }
  return out;
}

std::vector<const TopicNode*> TopicHierarchy::leaves() const {
  std::vector<const TopicNode*> out;
  for (const auto& id : levels_.back()) out.push_back(find(id));
  return out;
}

const TopicNode* TopicHierarchy::find(const std::string& id) const {
  std::deque<const TopicNode*> queue{&root_};
  while (!queue.empty()) {
    const TopicNode* n = queue.front();
    queue.pop_front();
    if (n->id == id) return n;
    for (const auto& c : n->children) queue.push_back(&c);
  }
  return nullptr;
}

TopicHierarchy build_hierarchy(const SimilarityMatrix& sm, double alpha,
                               std::uint64_t seed) {
  std::vector<std::size_t> all(sm.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  TopicNode root = make_node(sm, std::move(all));
  split_recursively(sm, root, alpha, seed);
  return TopicHierarchy(std::move(root), alpha, seed);
}

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json node_to_json(const TopicNode& n) {
  ordered_json j;
  j["id"] = n.id;
  j["predicates"] = n.predicates;
  j["meanSW"] = n.mean_sw;
  j["nsw"] = n.nsw ? ordered_json(*n.nsw) : ordered_json(nullptr);
  j["chosenK"] = n.chosen_k;
  j["contribution"] = n.contribution;
  ordered_json children = ordered_json::array();
  for (const auto& c : n.children) children.push_back(node_to_json(c));
  j["children"] = std::move(children);
  return j;
}

TopicNode node_from_json(const ordered_json& j, const SimilarityMatrix& sm,
                         std::size_t depth) {
  std::vector<std::size_t> members;
  for (const auto& p : j.at("predicates")) {
    members.push_back(sm.index_of(p.get<std::string>()));
  }
  TopicNode n = make_node(sm, std::move(members));
  n.id = j.at("id").get<std::string>();
  n.depth = depth;
  n.mean_sw = j.at("meanSW").get<double>();
  if (!j.at("nsw").is_null()) n.nsw = j.at("nsw").get<double>();
  n.chosen_k = j.at("chosenK").get<std::size_t>();
  n.contribution = j.at("contribution").get<double>();
  for (const auto& c : j.at("children")) {
    n.children.push_back(node_from_json(c, sm, depth + 1));
  }
  return n;
}

bool same_tree(const TopicNode& a, const TopicNode& b) {
  if (a.id != b.id || a.members != b.members || a.mean_sw != b.mean_sw ||
      a.nsw != b.nsw || a.chosen_k != b.chosen_k ||
      a.contribution != b.contribution || a.children.size() != b.children.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!same_tree(a.children[i], b.children[i])) return false;
  }
  return true;
}

}  // namespace

bool operator==(const TopicHierarchy& a, const TopicHierarchy& b) {
  return a.alpha_ == b.alpha_ && a.seed_ == b.seed_ && same_tree(a.root_, b.root_);
}

std::string hierarchy_to_json(const TopicHierarchy& h) {
  ordered_json j;
  j["alpha"] = h.alpha();
  j["seed"] = h.seed();
  j["levelShape"] = h.level_shape();
  j["root"] = node_to_json(h.root());
  return j.dump(2) + "\n";
}

TopicHierarchy hierarchy_from_json(const std::string& text,
                                   const SimilarityMatrix& sm) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
    TopicNode root = node_from_json(j.at("root"), sm, 0);
    TopicHierarchy h(std::move(root), j.at("alpha").get<double>(),
                     j.at("seed").get<std::uint64_t>());
    return h;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("hierarchy document: ") + e.what(), 1);
  }
}

}  // namespace ontotopic
