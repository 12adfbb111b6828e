#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "dmuss/errors.hpp"
#include "dmuss/matrix.hpp"
#include "dmuss/scheme.hpp"
#include "dmuss/synthesis.hpp"

namespace dmuss {

// Per-user message blocks, R_k rows by L columns each. Column c across all
// blocks is one application of the single-symbol scheme.
struct Payload {
  std::size_t columns = 0;
  std::vector<FieldMatrix> blocks;
};

inline Payload make_payload(std::vector<FieldMatrix> blocks, std::size_t columns) {
  for (const FieldMatrix& b : blocks) {
    if (b.cols != columns) {
      throw DimensionMismatchError("payload blocks disagree on the symbol count");
    }
  }
  return Payload{columns, std::move(blocks)};
}

// N rows by L columns; row n is storage node n's share stream.
struct ShareSet {
  FieldMatrix data;
};

namespace detail {

inline void require_payload_shape(const DmussScheme& s, const Payload& p) {
  if (p.blocks.size() != s.decoding.size()) {
    throw DimensionMismatchError("payload has " + std::to_string(p.blocks.size()) +
                                 " blocks for " + std::to_string(s.decoding.size()) + " users");
  }
  for (std::size_t k = 0; k < p.blocks.size(); ++k) {
    const auto rate = static_cast<std::size_t>(s.rates.rates[k]);
    if (p.blocks[k].rows != rate || p.blocks[k].cols != p.columns) {
      throw DimensionMismatchError("payload block for user " + std::to_string(k + 1) +
                                   " is not " + std::to_string(rate) + "x" +
                                   std::to_string(p.columns));
    }
    if (p.blocks[k].field.q != s.field.q) {
      throw DimensionMismatchError("payload field does not match the scheme");
    }
  }
}

}  // namespace detail

// Placement with an explicit key block (key_count rows by L columns).
inline ShareSet place(const DmussScheme& s, const Payload& p, const FieldMatrix& keys) {
  detail::require_payload_shape(s, p);
  if (keys.rows != static_cast<std::size_t>(s.key_count) || keys.cols != p.columns ||
      keys.field.q != s.field.q) {
    throw DimensionMismatchError("key block must be " + std::to_string(s.key_count) + "x" +
                                 std::to_string(p.columns) + " over GF(" +
                                 std::to_string(s.field.q) + ")");
  }
  FieldMatrix coords(s.field, static_cast<std::size_t>(s.access.node_count), p.columns);
  std::size_t row = 0;
  for (const FieldMatrix& block : p.blocks) {
    for (std::size_t r = 0; r < block.rows; ++r, ++row) {
      for (std::size_t c = 0; c < block.cols; ++c) coords.data[row * coords.cols + c] = block.data[r * block.cols + c];
    }
  }
  for (std::size_t r = 0; r < keys.rows; ++r, ++row) {
    for (std::size_t c = 0; c < keys.cols; ++c) coords.data[row * coords.cols + c] = keys.data[r * keys.cols + c];
  }
  return ShareSet{mat_mul(transpose(s.encoding), coords)};
}

// Placement with keys drawn uniformly, consumed in column order.
inline ShareSet place(const DmussScheme& s, const Payload& p, std::uint64_t key_seed) {
  FieldMatrix keys(s.field, static_cast<std::size_t>(s.key_count), p.columns);
  std::mt19937_64 rng(key_seed);
  for (std::size_t c = 0; c < p.columns; ++c) {
    for (std::size_t r = 0; r < keys.rows; ++r) {
      keys.data[r * keys.cols + c] = detail::draw_elem(rng, s.field.q);
    }
  }
  return place(s, p, keys);
}

// Retrieval for user k from exactly the shares of its access set, given in
// ascending node order. Nothing outside A_k is ever read.
inline FieldMatrix retrieve(const DmussScheme& s, int k, const FieldMatrix& shares_on_access_set) {
  if (k < 1 || k > s.access.user_count()) {
    throw IndexOutOfRangeError("retrieve: user " + std::to_string(k));
  }
  const auto& access_set = s.access.sets[static_cast<std::size_t>(k - 1)];
  if (shares_on_access_set.rows != access_set.size()) {
    throw DimensionMismatchError("retrieve: got " + std::to_string(shares_on_access_set.rows) +
                                 " share rows, access set has " +
                                 std::to_string(access_set.size()) + " nodes");
  }
  if (shares_on_access_set.field.q != s.field.q) {
    throw DimensionMismatchError("retrieve: share field does not match the scheme");
  }
  std::vector<std::size_t> rows;
  rows.reserve(access_set.size());
  for (int node : access_set) rows.push_back(static_cast<std::size_t>(node - 1));
  const FieldMatrix& v = s.decoding[static_cast<std::size_t>(k - 1)];
  std::vector<std::size_t> cols(v.cols);
  for (std::size_t i = 0; i < v.cols; ++i) cols[i] = i;
  const FieldMatrix restricted = submatrix(v, rows, cols);
  return mat_mul(transpose(restricted), shares_on_access_set);
}

}  // namespace dmuss
