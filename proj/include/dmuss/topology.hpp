#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dmuss/errors.hpp"

namespace dmuss {

// The collection of K access sets over N storage nodes. Node labels are
// canonicalized to 1..N preserving ascending label order; `source_labels[n-1]`
// remembers the original label of canonical node n. Duplicate and empty sets
// are legal; every node in [N] is covered by construction.
struct AccessStructure {
  std::vector<std::vector<int>> sets;  // 1-based canonical node indices, sorted ascending
  int node_count = 0;
  std::vector<std::int64_t> source_labels;

  int user_count() const { return static_cast<int>(sets.size()); }

  bool member(int user, int node) const {
    const auto& s = sets[static_cast<std::size_t>(user - 1)];
    return std::binary_search(s.begin(), s.end(), node);
  }
};

inline AccessStructure validate_access_structure(const std::vector<std::vector<std::int64_t>>& raw_sets) {
  if (raw_sets.empty()) throw NoUsersError("access structure needs at least one access set");
  std::vector<std::int64_t> labels;
  for (const auto& s : raw_sets) {
    for (std::int64_t v : s) {
      if (v <= 0) throw Error("node labels must be positive, got " + std::to_string(v));
      labels.push_back(v);
    }
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  std::map<std::int64_t, int> remap;
  for (std::size_t i = 0; i < labels.size(); ++i) remap[labels[i]] = static_cast<int>(i) + 1;

  AccessStructure a;
  a.node_count = static_cast<int>(labels.size());
  a.source_labels = labels;
  a.sets.reserve(raw_sets.size());
  for (const auto& s : raw_sets) {
    std::vector<int> canon;
    canon.reserve(s.size());
    for (std::int64_t v : s) canon.push_back(remap.at(v));
    std::sort(canon.begin(), canon.end());
    canon.erase(std::unique(canon.begin(), canon.end()), canon.end());
    a.sets.push_back(std::move(canon));
  }
  return a;
}

// Integral per-user message sizes R_1..R_K, in units of one share.
struct RateTuple {
  std::vector<std::int64_t> rates;

  std::int64_t total() const {
    std::int64_t t = 0;
    for (std::int64_t r : rates) t += r;
    return t;
  }
};

inline void require_rates_match(const AccessStructure& a, const RateTuple& r) {
  if (r.rates.size() != a.sets.size()) {
    throw DimensionMismatchError("rate tuple has " + std::to_string(r.rates.size()) +
                                 " entries for " + std::to_string(a.sets.size()) + " users");
  }
  for (std::int64_t v : r.rates) {
    if (v < 0) throw Error("rates must be nonnegative");
  }
}

// A violated region inequality: sum of rates over `subset` exceeds the number
// of nodes the subset's users reach outside the colluding access set.
// excluded_user = 0, or excluded_user inside `subset` (the single-user
// resource rule), means the bound has no colluding set and rhs counts the
// whole union.
struct Violation {
  int excluded_user = 0;
  std::vector<int> subset;  // ascending user indices, 1-based
  std::int64_t lhs = 0;
  std::int64_t rhs = 0;

  friend bool operator==(const Violation&, const Violation&) = default;
};

// |A \ F|: the unit-share ceiling on a secret decodable from A when the nodes
// in F must learn nothing about it.
inline int set_difference_bound(const std::vector<int>& decoding_set,
                                const std::vector<int>& colluding_set) {
  std::vector<int> a = decoding_set;
  std::vector<int> f = colluding_set;
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  std::sort(f.begin(), f.end());
  int count = 0;
  for (int v : a) {
    if (!std::binary_search(f.begin(), f.end(), v)) ++count;
  }
  return count;
}

// Recompute a violation's two sides from the structure and rates. The
// colluding set is A_k unless the violation is a resource bound (k = 0 or
// k inside the subset), in which case it is empty.
inline std::pair<std::int64_t, std::int64_t> recompute_violation(const AccessStructure& a,
                                                                 const RateTuple& r,
                                                                 const Violation& v) {
  std::int64_t lhs = 0;
  std::vector<int> union_nodes;
  for (int i : v.subset) {
    lhs += r.rates[static_cast<std::size_t>(i - 1)];
    const auto& s = a.sets[static_cast<std::size_t>(i - 1)];
    union_nodes.insert(union_nodes.end(), s.begin(), s.end());
  }
  const bool resource_bound =
      v.excluded_user == 0 ||
      std::find(v.subset.begin(), v.subset.end(), v.excluded_user) != v.subset.end();
  const std::vector<int> colluding =
      resource_bound ? std::vector<int>{} : a.sets[static_cast<std::size_t>(v.excluded_user - 1)];
  return {lhs, set_difference_bound(union_nodes, colluding)};
}

namespace detail {

// Shared enumerate core over scaled-integer rates (rate_i = num_i / den).
// Subsets are visited smallest first, lexicographically within a size, then
// excluded users ascending, so the reported certificate is minimal in that
// order. Excludes the single-user resource rule; callers add it.
inline std::optional<Violation> perfect_violation_enumerate(const AccessStructure& a,
                                                            const std::vector<std::int64_t>& num,
                                                            std::int64_t den) {
  const int k_users = a.user_count();
  if (k_users > 20) {
    throw Error("enumerate method supports at most 20 users; use the matching method");
  }
  const int n = a.node_count;
  std::vector<std::vector<char>> in_set(static_cast<std::size_t>(k_users),
                                        std::vector<char>(static_cast<std::size_t>(n) + 1, 0));
  for (int k = 0; k < k_users; ++k) {
    for (int node : a.sets[static_cast<std::size_t>(k)]) in_set[static_cast<std::size_t>(k)][static_cast<std::size_t>(node)] = 1;
  }

  std::vector<int> subset;
  std::vector<char> mark(static_cast<std::size_t>(n) + 1, 0);
  // Iterative lexicographic combinations of each size.
  for (int size = 1; size < k_users; ++size) {
    std::vector<int> idx(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) idx[static_cast<std::size_t>(i)] = i;
    while (true) {
      std::int64_t lhs = 0;
      std::fill(mark.begin(), mark.end(), 0);
      for (int i : idx) {
        lhs += num[static_cast<std::size_t>(i)];
        for (int node : a.sets[static_cast<std::size_t>(i)]) mark[static_cast<std::size_t>(node)] = 1;
      }
      for (int k = 0; k < k_users; ++k) {
        if (std::find(idx.begin(), idx.end(), k) != idx.end()) continue;
        std::int64_t rhs = 0;
        for (int node = 1; node <= n; ++node) {
          if (mark[static_cast<std::size_t>(node)] && !in_set[static_cast<std::size_t>(k)][static_cast<std::size_t>(node)]) ++rhs;
        }
        if (lhs > den * rhs) {
          Violation v;
          v.excluded_user = k + 1;
          for (int i : idx) v.subset.push_back(i + 1);
          v.lhs = lhs;
          v.rhs = den * rhs;
          return v;
        }
      }
      // advance combination
      int pos = size - 1;
      while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == k_users - size + pos) --pos;
      if (pos < 0) break;
      ++idx[static_cast<std::size_t>(pos)];
      for (int i = pos + 1; i < size; ++i) idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
    }
  }
  return std::nullopt;
}

// Single-user rule: with no other user to hide from, the message still has to
// fit in the accessed shares.
inline std::optional<Violation> single_user_resource_rule(const AccessStructure& a,
                                                          const std::vector<std::int64_t>& num,
                                                          std::int64_t den) {
  if (a.user_count() != 1) return std::nullopt;
  const auto bound = static_cast<std::int64_t>(a.sets[0].size());
  if (num[0] > den * bound) {
    return Violation{1, {1}, num[0], den * bound};
  }
  return std::nullopt;
}

}  // namespace detail

// Perfect-privacy membership for rational rates (rate_i = num_i / den),
// decided by exhaustive inequality enumeration. Violations carry both sides
// scaled by den so they stay integral.
inline std::optional<Violation> check_perfect_capacity_rational(const AccessStructure& a,
                                                                const std::vector<std::int64_t>& num,
                                                                std::int64_t den) {
  if (num.size() != a.sets.size()) {
    throw DimensionMismatchError("rate entries do not match user count");
  }
  if (den <= 0) throw Error("denominator must be positive");
  for (std::int64_t v : num) {
    if (v < 0) throw Error("rates must be nonnegative");
  }
  if (auto v = detail::single_user_resource_rule(a, num, den)) return v;
  return detail::perfect_violation_enumerate(a, num, den);
}

// Weak-privacy membership: every rate fits outside each other user's view,
// and every subset of messages fits in the shares it reaches.
inline std::optional<Violation> check_weak_capacity(const AccessStructure& a, const RateTuple& r) {
  require_rates_match(a, r);
  const int k_users = a.user_count();
  // Pairwise bound (vacuous for a single user).
  for (int m = 1; m <= k_users; ++m) {
    for (int c = 1; c <= k_users; ++c) {
      if (c == m) continue;
      const std::int64_t bound = set_difference_bound(a.sets[static_cast<std::size_t>(m - 1)],
                                                      a.sets[static_cast<std::size_t>(c - 1)]);
      if (r.rates[static_cast<std::size_t>(m - 1)] > bound) {
        return Violation{c, {m}, r.rates[static_cast<std::size_t>(m - 1)], bound};
      }
    }
  }
  // Resource bound over every nonempty subset, smallest certificates first.
  const int n = a.node_count;
  std::vector<char> mark(static_cast<std::size_t>(n) + 1, 0);
  for (int size = 1; size <= k_users; ++size) {
    std::vector<int> idx(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) idx[static_cast<std::size_t>(i)] = i;
    while (true) {
      std::int64_t lhs = 0;
      std::fill(mark.begin(), mark.end(), 0);
      for (int i : idx) {
        lhs += r.rates[static_cast<std::size_t>(i)];
        for (int node : a.sets[static_cast<std::size_t>(i)]) mark[static_cast<std::size_t>(node)] = 1;
      }
      std::int64_t rhs = 0;
      for (int node = 1; node <= n; ++node) rhs += mark[static_cast<std::size_t>(node)];
      if (lhs > rhs) {
        Violation v;
        v.excluded_user = 0;
        for (int i : idx) v.subset.push_back(i + 1);
        v.lhs = lhs;
        v.rhs = rhs;
        return v;
      }
      int pos = size - 1;
      while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == k_users - size + pos) --pos;
      if (pos < 0) break;
      ++idx[static_cast<std::size_t>(pos)];
      for (int i = pos + 1; i < size; ++i) idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
    }
  }
  return std::nullopt;
}

}  // namespace dmuss
