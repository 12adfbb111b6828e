#pragma once

#include <cstdint>
#include <vector>

#include "dmuss/field.hpp"
#include "dmuss/matching.hpp"
#include "dmuss/matrix.hpp"
#include "dmuss/topology.hpp"

namespace dmuss {

// A finished scheme. `decoding[k-1]` is the N x R_k matrix taking the share
// row vector to user k's message; rows outside A_k are zero. `encoding` is
// N x N and maps the coordinate row vector (M message symbols first, then
// N - M uniform keys) to the N shares.
struct DmussScheme {
  Field field;
  AccessStructure access;
  RateTuple rates;
  std::vector<FieldMatrix> decoding;
  FieldMatrix encoding;
  int key_count = 0;

  // provenance
  std::uint64_t seed = 0;
  MatchPlan plan;
  int retry_count = 0;

  std::int64_t message_total() const { return rates.total(); }

  FieldMatrix stacked_decoding() const {
    FieldMatrix out(field, static_cast<std::size_t>(access.node_count), 0);
    for (const FieldMatrix& block : decoding) out = hstack(out, block);
    return out;
  }
};

}  // namespace dmuss
