#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dmuss/errors.hpp"
#include "dmuss/topology.hpp"

namespace dmuss {

struct ImperfectMatchingError : Error {
  int user;
  explicit ImperfectMatchingError(int k)
      : Error("no perfect matching for user " + std::to_string(k)), user(k) {}
};

struct PerfectMatchingError : Error {
  explicit PerfectMatchingError(const std::string& what) : Error(what) {}
};

// Demand side of one user's privacy constraint: the set A_i \ A_k duplicated
// R_i times. Copies of the same message share one neighborhood and no edge
// reaches a node the excluded user can read.
struct DemandGraph {
  int excluded_user = 0;
  int node_count = 0;
  std::vector<std::pair<int, int>> left;       // (message index i, copy j), ascending
  std::vector<std::vector<int>> neighborhood;  // per left vertex, sorted node indices
};

inline DemandGraph build_demand_graph(const AccessStructure& a, const RateTuple& r, int k) {
  require_rates_match(a, r);
  if (k < 1 || k > a.user_count()) {
    throw IndexOutOfRangeError("build_demand_graph: user " + std::to_string(k));
  }
  DemandGraph g;
  g.excluded_user = k;
  g.node_count = a.node_count;
  const auto& excluded = a.sets[static_cast<std::size_t>(k - 1)];
  for (int i = 1; i <= a.user_count(); ++i) {
    if (i == k) continue;
    std::vector<int> diff;
    std::set_difference(a.sets[static_cast<std::size_t>(i - 1)].begin(),
                        a.sets[static_cast<std::size_t>(i - 1)].end(), excluded.begin(),
                        excluded.end(), std::back_inserter(diff));
    for (std::int64_t j = 1; j <= r.rates[static_cast<std::size_t>(i - 1)]; ++j) {
      g.left.push_back({i, static_cast<int>(j)});
      g.neighborhood.push_back(diff);
    }
  }
  return g;
}

// A maximum matching; node_to_left uses -1 for unmatched nodes, left_to_node
// uses 0 for unmatched copies.
struct BipartiteMatching {
  std::vector<int> left_to_node;
  std::vector<int> node_to_left;
  std::size_t size = 0;

  bool left_perfect() const { return size == left_to_node.size(); }
};

namespace detail {

inline bool hk_dfs(const DemandGraph& g, std::vector<int>& match_l, std::vector<int>& match_r,
                   std::vector<int>& dist, int u) {
  for (int node : g.neighborhood[static_cast<std::size_t>(u)]) {
    const int w = match_r[static_cast<std::size_t>(node)];
    if (w < 0) {
      match_l[static_cast<std::size_t>(u)] = node;
      match_r[static_cast<std::size_t>(node)] = u;
      return true;
    }
    if (dist[static_cast<std::size_t>(w)] == dist[static_cast<std::size_t>(u)] + 1 &&
        hk_dfs(g, match_l, match_r, dist, w)) {
      match_l[static_cast<std::size_t>(u)] = node;
      match_r[static_cast<std::size_t>(node)] = u;
      return true;
    }
  }
  dist[static_cast<std::size_t>(u)] = -2;  // dead end for this phase
  return false;
}

}  // namespace detail

// Hopcroft-Karp. Left vertices are processed in ascending (i, j) order and
// neighbor scans ascend by node index, so the result is deterministic.
inline BipartiteMatching max_matching(const DemandGraph& g) {
  const int left_n = static_cast<int>(g.left.size());
  std::vector<int> match_l(static_cast<std::size_t>(left_n), 0);
  std::vector<int> match_r(static_cast<std::size_t>(g.node_count) + 1, -1);
  std::size_t matched = 0;

  std::vector<int> dist(static_cast<std::size_t>(left_n));
  while (true) {
    // BFS phase: layer left vertices by alternating distance from free ones.
    std::deque<int> queue;
    bool reachable_free_node = false;
    for (int u = 0; u < left_n; ++u) {
      if (match_l[static_cast<std::size_t>(u)] == 0) {
        dist[static_cast<std::size_t>(u)] = 0;
        queue.push_back(u);
      } else {
        dist[static_cast<std::size_t>(u)] = -1;
      }
    }
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int node : g.neighborhood[static_cast<std::size_t>(u)]) {
        const int w = match_r[static_cast<std::size_t>(node)];
        if (w < 0) {
          reachable_free_node = true;
        } else if (dist[static_cast<std::size_t>(w)] == -1) {
          dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
          queue.push_back(w);
        }
      }
    }
    if (!reachable_free_node) break;
    for (int u = 0; u < left_n; ++u) {
      if (match_l[static_cast<std::size_t>(u)] == 0 &&
          detail::hk_dfs(g, match_l, match_r, dist, u)) {
        ++matched;
      }
    }
  }

  BipartiteMatching m;
  m.left_to_node = std::move(match_l);
  m.node_to_left = std::move(match_r);
  m.size = matched;
  return m;
}

// Per user k, the family C_i^k of node sets the privacy blocks are cut on.
struct MatchPlan {
  // per_user[k-1] holds (message index i, C_i^k sorted ascending) for each i != k.
  std::vector<std::vector<std::pair<int, std::vector<int>>>> per_user;

  const std::vector<int>& row_set(int k, int i) const {
    for (const auto& [msg, nodes] : per_user[static_cast<std::size_t>(k - 1)]) {
      if (msg == i) return nodes;
    }
    throw IndexOutOfRangeError("match plan has no entry for message " + std::to_string(i) +
                               " excluding user " + std::to_string(k));
  }
};

// Returns a description of the first violated plan condition, or nullopt.
inline std::optional<std::string> match_plan_violation(const AccessStructure& a, const RateTuple& r,
                                                       const MatchPlan& plan) {
  if (plan.per_user.size() != a.sets.size()) return "plan covers the wrong number of users";
  for (int k = 1; k <= a.user_count(); ++k) {
    const auto& family = plan.per_user[static_cast<std::size_t>(k - 1)];
    std::vector<char> used(static_cast<std::size_t>(a.node_count) + 1, 0);
    for (const auto& [i, nodes] : family) {
      if (i == k) return "plan assigns a row set to the excluded user";
      for (int node : nodes) {
        if (!a.member(i, node) || a.member(k, node)) {
          return "subset condition violated: node " + std::to_string(node) + " of C[" +
                 std::to_string(i) + "," + std::to_string(k) + "] is not in A_" +
                 std::to_string(i) + " minus A_" + std::to_string(k);
        }
      }
      if (static_cast<std::int64_t>(nodes.size()) != r.rates[static_cast<std::size_t>(i - 1)]) {
        return "size condition violated: C[" + std::to_string(i) + "," + std::to_string(k) +
               "] has " + std::to_string(nodes.size()) + " nodes, rate is " +
               std::to_string(r.rates[static_cast<std::size_t>(i - 1)]);
      }
      for (int node : nodes) {
        if (used[static_cast<std::size_t>(node)]) {
          return "disjointness condition violated: node " + std::to_string(node) +
                 " reused while excluding user " + std::to_string(k);
        }
        used[static_cast<std::size_t>(node)] = 1;
      }
    }
  }
  return std::nullopt;
}

// Assemble C_i^k from the matched endpoints of every copy. Requires each
// per-user matching to be left-perfect.
inline MatchPlan extract_match_plan(const AccessStructure& a, const RateTuple& r,
                                    const std::vector<BipartiteMatching>& matchings) {
  require_rates_match(a, r);
  if (matchings.size() != a.sets.size()) {
    throw DimensionMismatchError("need one matching per user");
  }
  MatchPlan plan;
  plan.per_user.resize(a.sets.size());
  for (int k = 1; k <= a.user_count(); ++k) {
    const DemandGraph g = build_demand_graph(a, r, k);
    const BipartiteMatching& m = matchings[static_cast<std::size_t>(k - 1)];
    if (m.left_to_node.size() != g.left.size() || !m.left_perfect()) {
      throw ImperfectMatchingError(k);
    }
    auto& family = plan.per_user[static_cast<std::size_t>(k - 1)];
    for (int i = 1; i <= a.user_count(); ++i) {
      if (i == k) continue;
      family.push_back({i, {}});
    }
    for (std::size_t u = 0; u < g.left.size(); ++u) {
      const int i = g.left[u].first;
      for (auto& [msg, nodes] : family) {
        if (msg == i) {
          nodes.push_back(m.left_to_node[u]);
          break;
        }
      }
    }
    for (auto& [msg, nodes] : family) std::sort(nodes.begin(), nodes.end());
  }
  if (auto reason = match_plan_violation(a, r, plan)) {
    throw Error("extracted match plan failed validation: " + *reason);
  }
  return plan;
}

// Turn a deficient maximum matching into a violated region inequality. The
// deficient family is read off the left vertices reachable from unmatched
// ones by alternating paths.
inline Violation hall_violator(const DemandGraph& g, const BipartiteMatching& m) {
  if (m.left_perfect()) {
    throw PerfectMatchingError("hall_violator: matching is left-perfect for user " +
                               std::to_string(g.excluded_user));
  }
  const int left_n = static_cast<int>(g.left.size());
  std::vector<char> left_reached(static_cast<std::size_t>(left_n), 0);
  std::vector<char> node_reached(static_cast<std::size_t>(g.node_count) + 1, 0);
  std::deque<int> queue;
  for (int u = 0; u < left_n; ++u) {
    if (m.left_to_node[static_cast<std::size_t>(u)] == 0) {
      left_reached[static_cast<std::size_t>(u)] = 1;
      queue.push_back(u);
    }
  }
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int node : g.neighborhood[static_cast<std::size_t>(u)]) {
      if (node_reached[static_cast<std::size_t>(node)]) continue;
      node_reached[static_cast<std::size_t>(node)] = 1;
      const int w = m.node_to_left[static_cast<std::size_t>(node)];
      // Maximum matchings leave no augmenting path, so every reached node is matched.
      if (w >= 0 && !left_reached[static_cast<std::size_t>(w)]) {
        left_reached[static_cast<std::size_t>(w)] = 1;
        queue.push_back(w);
      }
    }
  }

  Violation v;
  v.excluded_user = g.excluded_user;
  std::vector<char> in_subset(16, 0);
  for (int u = 0; u < left_n; ++u) {
    if (!left_reached[static_cast<std::size_t>(u)]) continue;
    ++v.lhs;
    const int i = g.left[static_cast<std::size_t>(u)].first;
    if (static_cast<std::size_t>(i) >= in_subset.size()) in_subset.resize(static_cast<std::size_t>(i) + 1, 0);
    if (!in_subset[static_cast<std::size_t>(i)]) {
      in_subset[static_cast<std::size_t>(i)] = 1;
      v.subset.push_back(i);
    }
  }
  std::sort(v.subset.begin(), v.subset.end());
  for (int node = 1; node <= g.node_count; ++node) {
    if (node_reached[static_cast<std::size_t>(node)]) ++v.rhs;
  }
  return v;
}

enum class CapacityMethod { Matching, Enumerate };

// Perfect-privacy capacity membership. Both methods agree on the verdict;
// certificates are canonical: the violation minimal by (subset size, subset,
// excluded user) is reported.
inline std::optional<Violation> check_perfect_capacity(const AccessStructure& a, const RateTuple& r,
                                                       CapacityMethod method = CapacityMethod::Matching) {
  require_rates_match(a, r);
  if (auto v = detail::single_user_resource_rule(a, r.rates, 1)) return v;
  if (method == CapacityMethod::Enumerate) {
    return detail::perfect_violation_enumerate(a, r.rates, 1);
  }
  std::optional<Violation> best;
  for (int k = 1; k <= a.user_count(); ++k) {
    const DemandGraph g = build_demand_graph(a, r, k);
    const BipartiteMatching m = max_matching(g);
    if (m.left_perfect()) continue;
    Violation v = hall_violator(g, m);
    if (!best || std::make_tuple(v.subset.size(), v.subset, v.excluded_user) <
                     std::make_tuple(best->subset.size(), best->subset, best->excluded_user)) {
      best = std::move(v);
    }
  }
  return best;
}

}  // namespace dmuss
