#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dmuss/errors.hpp"
#include "dmuss/field.hpp"
#include "dmuss/matching.hpp"
#include "dmuss/matrix.hpp"
#include "dmuss/scheme.hpp"
#include "dmuss/topology.hpp"
#include "dmuss/verification.hpp"

namespace dmuss {

struct CapacityViolationError : Error {
  Violation violation;
  explicit CapacityViolationError(Violation v)
      : Error("rate tuple lies outside the capacity region"), violation(std::move(v)) {}
};

struct AssignmentExhaustedError : Error {
  std::uint64_t q;
  int budget;
  int failing_block;  // excluded user of the last block whose determinant vanished
  AssignmentExhaustedError(std::uint64_t q_, int budget_, int failing_block_)
      : Error("no nonzero assignment found over GF(" + std::to_string(q_) + ") within " +
              std::to_string(budget_) + " retries; last failing block excludes user " +
              std::to_string(failing_block_)),
        q(q_),
        budget(budget_),
        failing_block(failing_block_) {}
};

struct VarInfo {
  int user = 0;  // message the column belongs to
  int node = 0;  // row (1-based storage node)
  int copy = 0;  // 1-based column index within the user's block
};

// The generator in symbolic form: the share block is implicitly the N x N
// identity, the message block holds structural zeros and distinct
// indeterminates on access-set rows only.
struct SymbolicGenerator {
  int node_count = 0;
  std::vector<std::int64_t> rates;
  std::vector<int> col_user;               // per message column, 1-based user
  std::vector<std::int32_t> message_block; // N x M row-major; -1 zero, else var id
  std::vector<VarInfo> vars;

  std::size_t message_cols() const { return col_user.size(); }
  std::int32_t entry(std::size_t row, std::size_t col) const {
    return message_block[row * message_cols() + col];
  }
  std::string var_name(std::int32_t id) const {
    const VarInfo& v = vars[static_cast<std::size_t>(id)];
    std::string name = "d[" + std::to_string(v.user) + "," + std::to_string(v.node);
    if (rates[static_cast<std::size_t>(v.user - 1)] > 1) name += "," + std::to_string(v.copy);
    return name + "]";
  }
};

inline SymbolicGenerator init_symbolic_generator(const AccessStructure& a, const RateTuple& r) {
  require_rates_match(a, r);
  SymbolicGenerator g;
  g.node_count = a.node_count;
  g.rates = r.rates;
  for (int k = 1; k <= a.user_count(); ++k) {
    for (std::int64_t j = 1; j <= r.rates[static_cast<std::size_t>(k - 1)]; ++j) {
      g.col_user.push_back(k);
    }
  }
  const std::size_t m_total = g.col_user.size();
  g.message_block.assign(static_cast<std::size_t>(a.node_count) * m_total, -1);
  std::size_t col = 0;
  for (int k = 1; k <= a.user_count(); ++k) {
    for (std::int64_t j = 1; j <= r.rates[static_cast<std::size_t>(k - 1)]; ++j, ++col) {
      for (int node : a.sets[static_cast<std::size_t>(k - 1)]) {
        g.message_block[static_cast<std::size_t>(node - 1) * m_total + col] =
            static_cast<std::int32_t>(g.vars.size());
        g.vars.push_back({k, node, static_cast<int>(j)});
      }
    }
  }
  return g;
}

// Square symbolic submatrix whose nonsingularity carries one user's privacy
// condition. The transversal records the matched (row, column) positions that
// guarantee a nonzero determinant coefficient.
struct PrivacyBlock {
  int excluded_user = 0;
  std::vector<int> rows;                        // node indices, ascending
  std::vector<std::size_t> cols;                // global message columns, ascending
  std::vector<std::int32_t> entries;            // side x side, -1 zero, else var id
  std::vector<std::pair<std::size_t, std::size_t>> transversal;

  std::size_t side() const { return rows.size(); }
  std::int32_t entry(std::size_t r, std::size_t c) const { return entries[r * side() + c]; }
};

inline std::vector<PrivacyBlock> extract_privacy_blocks(const SymbolicGenerator& g,
                                                        const MatchPlan& plan) {
  const int k_users = static_cast<int>(plan.per_user.size());
  std::vector<PrivacyBlock> blocks;
  if (k_users == 1) return blocks;  // nobody to hide from
  blocks.reserve(static_cast<std::size_t>(k_users));
  for (int k = 1; k <= k_users; ++k) {
    PrivacyBlock b;
    b.excluded_user = k;
    for (const auto& [i, nodes] : plan.per_user[static_cast<std::size_t>(k - 1)]) {
      b.rows.insert(b.rows.end(), nodes.begin(), nodes.end());
    }
    std::sort(b.rows.begin(), b.rows.end());
    for (std::size_t c = 0; c < g.message_cols(); ++c) {
      if (g.col_user[c] != k) b.cols.push_back(c);
    }
    if (b.rows.size() != b.cols.size()) {
      throw Error("privacy block for user " + std::to_string(k) + " is not square");
    }
    b.entries.resize(b.rows.size() * b.cols.size());
    for (std::size_t r = 0; r < b.rows.size(); ++r) {
      for (std::size_t c = 0; c < b.cols.size(); ++c) {
        b.entries[r * b.cols.size() + c] =
            g.entry(static_cast<std::size_t>(b.rows[r] - 1), b.cols[c]);
      }
    }
    // Matched positions: the j-th smallest node of C_i^k pairs with the j-th
    // column of W_i. They must all be indeterminates in distinct rows.
    std::vector<char> row_used(b.rows.size(), 0);
    for (const auto& [i, nodes] : plan.per_user[static_cast<std::size_t>(k - 1)]) {
      std::size_t col_in_block = 0;
      for (std::size_t c = 0; c < b.cols.size(); ++c) {
        if (g.col_user[b.cols[c]] == i) {
          col_in_block = c;
          break;
        }
      }
      for (std::size_t j = 0; j < nodes.size(); ++j) {
        const auto row_it = std::lower_bound(b.rows.begin(), b.rows.end(), nodes[j]);
        const auto local_row = static_cast<std::size_t>(row_it - b.rows.begin());
        const std::size_t local_col = col_in_block + j;
        if (b.entry(local_row, local_col) < 0 || row_used[local_row]) {
          throw Error("privacy block for user " + std::to_string(k) + " lost its transversal");
        }
        row_used[local_row] = 1;
        b.transversal.push_back({local_row, local_col});
      }
    }
    blocks.push_back(std::move(b));
  }
  return blocks;
}

struct Assignment {
  std::vector<Elem> values;  // per var id; uninvolved indeterminates stay zero
  int retries = 0;
  bool exhaustive = false;
};

inline FieldMatrix instantiate_block(const PrivacyBlock& b, const std::vector<Elem>& values,
                                     const Field& f) {
  FieldMatrix m(f, b.side(), b.side());
  for (std::size_t i = 0; i < b.entries.size(); ++i) {
    m.data[i] = b.entries[i] < 0 ? 0 : values[static_cast<std::size_t>(b.entries[i])];
  }
  return m;
}

namespace detail {

// Unbiased draw in [0, q) by rejection; avoids distribution objects so the
// stream is identical on every platform.
inline Elem draw_elem(std::mt19937_64& rng, std::uint64_t q) {
  const std::uint64_t limit = (UINT64_MAX / q) * q;
  std::uint64_t v = rng();
  while (v >= limit) v = rng();
  return v % q;
}

}  // namespace detail

// Algorithm: draw all block variables uniformly, verify every determinant,
// retry up to retry_budget; when the assignment space q^v is small enough,
// fall back to exhaustive search before giving up.
inline Assignment assign_indeterminates(const SymbolicGenerator& g,
                                        const std::vector<PrivacyBlock>& blocks, const Field& f,
                                        std::uint64_t seed, int retry_budget = 64,
                                        std::uint64_t exhaustive_threshold = 1u << 20) {
  std::vector<std::int32_t> block_vars;
  for (const PrivacyBlock& b : blocks) {
    for (std::int32_t id : b.entries) {
      if (id >= 0) block_vars.push_back(id);
    }
  }
  std::sort(block_vars.begin(), block_vars.end());
  block_vars.erase(std::unique(block_vars.begin(), block_vars.end()), block_vars.end());

  Assignment out;
  out.values.assign(g.vars.size(), 0);

  const auto all_nonsingular = [&](int* failing_user) {
    for (const PrivacyBlock& b : blocks) {
      if (determinant(instantiate_block(b, out.values, f)) == 0) {
        if (failing_user) *failing_user = b.excluded_user;
        return false;
      }
    }
    return true;
  };

  int failing_user = blocks.empty() ? 0 : blocks.front().excluded_user;
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < retry_budget; ++attempt) {
    for (std::int32_t id : block_vars) {
      out.values[static_cast<std::size_t>(id)] = detail::draw_elem(rng, f.q);
    }
    if (all_nonsingular(&failing_user)) {
      out.retries = attempt;
      return out;
    }
  }

  unsigned __int128 space = 1;
  bool small_enough = true;
  for (std::size_t i = 0; i < block_vars.size(); ++i) {
    space *= f.q;
    if (space > exhaustive_threshold) {
      small_enough = false;
      break;
    }
  }
  if (small_enough) {
    for (std::int32_t id : block_vars) out.values[static_cast<std::size_t>(id)] = 0;
    const auto total = static_cast<std::uint64_t>(space);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      std::uint64_t v = idx;
      for (std::size_t i = block_vars.size(); i-- > 0;) {
        out.values[static_cast<std::size_t>(block_vars[i])] = v % f.q;
        v /= f.q;
      }
      if (all_nonsingular(&failing_user)) {
        out.retries = retry_budget;
        out.exhaustive = true;
        return out;
      }
    }
  }
  throw AssignmentExhaustedError(f.q, retry_budget, failing_user);
}

// Gauss-Jordan on [decoding | I] over the message columns; the right block is
// the encoding matrix, whose coordinate rows are the M message symbols
// followed by N - M uniform keys.
inline std::pair<FieldMatrix, int> derive_encoding(const FieldMatrix& decoding_block,
                                                   const Field& f) {
  const std::size_t n = decoding_block.rows;
  const std::size_t m_total = decoding_block.cols;
  FieldMatrix work = hstack(decoding_block, FieldMatrix::identity(f, n));
  std::vector<std::size_t> targets(m_total);
  for (std::size_t i = 0; i < m_total; ++i) targets[i] = i;
  const FieldMatrix reduced = pivot_reduce(work, targets);
  std::vector<std::size_t> right(n);
  for (std::size_t i = 0; i < n; ++i) right[i] = m_total + i;
  std::vector<std::size_t> all_rows(n);
  for (std::size_t i = 0; i < n; ++i) all_rows[i] = i;
  return {submatrix(reduced, all_rows, right), static_cast<int>(n - m_total)};
}

inline std::vector<FieldMatrix> decoding_from_assignment(const SymbolicGenerator& g,
                                                         const Assignment& asg, const Field& f) {
  std::vector<FieldMatrix> decoding;
  const std::size_t m_total = g.message_cols();
  std::size_t col = 0;
  const int k_users = static_cast<int>(g.rates.size());
  for (int k = 1; k <= k_users; ++k) {
    const auto rate = static_cast<std::size_t>(g.rates[static_cast<std::size_t>(k - 1)]);
    FieldMatrix v(f, static_cast<std::size_t>(g.node_count), rate);
    for (std::size_t j = 0; j < rate; ++j) {
      for (std::size_t row = 0; row < static_cast<std::size_t>(g.node_count); ++row) {
        const std::int32_t id = g.message_block[row * m_total + col + j];
        v.data[row * rate + j] = id < 0 ? 0 : asg.values[static_cast<std::size_t>(id)];
      }
    }
    col += rate;
    decoding.push_back(std::move(v));
  }
  return decoding;
}

struct SynthesisOptions {
  std::optional<std::uint64_t> field_override;
  std::uint64_t seed = 0;
  int retry_budget = 64;
  std::uint64_t exhaustive_threshold = 1u << 20;
};

// Algorithm 1 end to end: capacity check, match plan, symbolic generator,
// privacy blocks, assignment, encoding derivation, then self-certification.
inline DmussScheme synthesize(const AccessStructure& a, const RateTuple& r,
                              const SynthesisOptions& opts = {}) {
  require_rates_match(a, r);
  if (auto violation = check_perfect_capacity(a, r, CapacityMethod::Matching)) {
    throw CapacityViolationError(*violation);
  }
  const Field f = make_field(
      opts.field_override.value_or(smallest_prime_greater_than(static_cast<std::uint64_t>(a.user_count()))));

  std::vector<BipartiteMatching> matchings;
  matchings.reserve(a.sets.size());
  for (int k = 1; k <= a.user_count(); ++k) {
    matchings.push_back(max_matching(build_demand_graph(a, r, k)));
  }
  MatchPlan plan = extract_match_plan(a, r, matchings);
  const SymbolicGenerator g = init_symbolic_generator(a, r);
  const std::vector<PrivacyBlock> blocks = extract_privacy_blocks(g, plan);

  Assignment asg;
  if (a.user_count() == 1) {
    // No privacy blocks exist; pin the message to the first R_1 accessed
    // nodes so the decoder has full column rank.
    asg.values.assign(g.vars.size(), 0);
    const auto& nodes = a.sets[0];
    for (std::size_t j = 0; j < static_cast<std::size_t>(r.rates[0]); ++j) {
      for (std::size_t id = 0; id < g.vars.size(); ++id) {
        if (g.vars[id].node == nodes[j] && g.vars[id].copy == static_cast<int>(j) + 1) {
          asg.values[id] = 1;
        }
      }
    }
  } else {
    asg = assign_indeterminates(g, blocks, f, opts.seed, opts.retry_budget,
                                opts.exhaustive_threshold);
  }

  DmussScheme s;
  s.field = f;
  s.access = a;
  s.rates = r;
  s.decoding = decoding_from_assignment(g, asg, f);
  s.seed = opts.seed;
  s.plan = std::move(plan);
  s.retry_count = asg.retries;

  FieldMatrix stacked(f, static_cast<std::size_t>(a.node_count), 0);
  for (const FieldMatrix& block : s.decoding) stacked = hstack(stacked, block);
  auto [encoding, key_count] = derive_encoding(stacked, f);
  s.encoding = std::move(encoding);
  s.key_count = key_count;

  const VerificationReport cert = certify_ranks(s);
  if (!cert.pass) {
    throw Error("synthesized scheme failed self-certification");
  }
  return s;
}

}  // namespace dmuss
