#pragma once

// Exhaustive enumeration of small access structures up to node relabeling,
// plus seeded random generators for property tests.

#include <cstdint>
#include <random>
#include <vector>

#include "dmuss/topology.hpp"

namespace testsupport {

// Ordered K-tuples of subsets of [n] whose union is exactly [n], keeping only
// the lexicographically least representative under node permutations.
inline std::vector<std::vector<unsigned>> canonical_mask_tuples(int k_users, int n_nodes) {
  std::vector<std::vector<int>> perms;
  {
    std::vector<int> p(static_cast<std::size_t>(n_nodes));
    for (int i = 0; i < n_nodes; ++i) p[static_cast<std::size_t>(i)] = i;
    do {
      perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
  }
  const auto remap = [&](unsigned mask, const std::vector<int>& p) {
    unsigned out = 0;
    for (int b = 0; b < n_nodes; ++b) {
      if (mask & (1u << b)) out |= 1u << p[static_cast<std::size_t>(b)];
    }
    return out;
  };

  const unsigned full = (n_nodes >= 32) ? 0xffffffffu : ((1u << n_nodes) - 1u);
  std::vector<std::vector<unsigned>> out;
  std::vector<unsigned> tuple(static_cast<std::size_t>(k_users), 0);
  const std::uint64_t total = [&] {
    std::uint64_t t = 1;
    for (int i = 0; i < k_users; ++i) t *= (1u << n_nodes);
    return t;
  }();
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t v = code;
    unsigned union_mask = 0;
    for (int i = 0; i < k_users; ++i) {
      tuple[static_cast<std::size_t>(i)] = static_cast<unsigned>(v % (1u << n_nodes));
      union_mask |= tuple[static_cast<std::size_t>(i)];
      v /= (1u << n_nodes);
    }
    if (union_mask != full) continue;
    bool canonical = true;
    for (const auto& p : perms) {
      std::vector<unsigned> mapped(static_cast<std::size_t>(k_users));
      for (int i = 0; i < k_users; ++i) mapped[static_cast<std::size_t>(i)] = remap(tuple[static_cast<std::size_t>(i)], p);
      if (mapped < tuple) {
        canonical = false;
        break;
      }
    }
    if (canonical) out.push_back(tuple);
  }
  return out;
}

inline dmuss::AccessStructure structure_from_masks(const std::vector<unsigned>& masks, int n_nodes) {
  std::vector<std::vector<std::int64_t>> raw;
  for (unsigned mask : masks) {
    std::vector<std::int64_t> nodes;
    for (int b = 0; b < n_nodes; ++b) {
      if (mask & (1u << b)) nodes.push_back(b + 1);
    }
    raw.push_back(std::move(nodes));
  }
  return dmuss::validate_access_structure(raw);
}

// All structures with user count in [1, max_k] and exactly-covered node count
// in [1, max_n], one representative per node-relabeling orbit.
inline std::vector<dmuss::AccessStructure> all_structures(int max_k, int max_n) {
  std::vector<dmuss::AccessStructure> out;
  for (int k = 1; k <= max_k; ++k) {
    for (int n = 1; n <= max_n; ++n) {
      for (const auto& masks : canonical_mask_tuples(k, n)) {
        out.push_back(structure_from_masks(masks, n));
      }
    }
  }
  return out;
}

// Visit every integral rate tuple with entries in [0, max_entry].
template <typename Fn>
inline void for_each_rate_tuple(int k_users, std::int64_t max_entry, Fn&& fn) {
  std::vector<std::int64_t> rates(static_cast<std::size_t>(k_users), 0);
  while (true) {
    fn(dmuss::RateTuple{rates});
    int pos = k_users - 1;
    while (pos >= 0 && rates[static_cast<std::size_t>(pos)] == max_entry) {
      rates[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++rates[static_cast<std::size_t>(pos)];
  }
}

inline dmuss::AccessStructure random_structure(std::mt19937_64& rng, int max_k, int max_n) {
  const int k_users = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_k));
  while (true) {
    std::vector<std::vector<std::int64_t>> raw(static_cast<std::size_t>(k_users));
    bool any = false;
    for (auto& s : raw) {
      for (int node = 1; node <= max_n; ++node) {
        if (rng() % 2 == 0) {
          s.push_back(node);
          any = true;
        }
      }
    }
    if (!any) continue;  // want at least one node overall
    return dmuss::validate_access_structure(raw);
  }
}

inline dmuss::RateTuple random_rates(std::mt19937_64& rng, const dmuss::AccessStructure& a,
                                     std::int64_t max_entry) {
  dmuss::RateTuple r;
  for (int k = 0; k < a.user_count(); ++k) {
    r.rates.push_back(static_cast<std::int64_t>(rng() % static_cast<unsigned>(max_entry + 1)));
  }
  return r;
}

}  // namespace testsupport
