#pragma once

// A small worked example used by the demo command and the test suites: four
// users, six storage nodes, unit rates, and a hand-checked GF(2) scheme where
// share 1 is message 1 masked by key 1 and share 4 is message 3 masked by
// key 2.

#include <string>

#include "dmuss/io.hpp"
#include "dmuss/matching.hpp"

namespace dmuss::reference {

inline const char* topology_json_text() {
  return R"({"access_sets": [[1, 2, 4], [2, 3, 6], [1, 4, 5], [3, 5, 6]], "rates": [1, 1, 1, 1]})";
}

inline const char* scheme_json_text() {
  return R"({
  "q": 2,
  "N": 6,
  "K": 4,
  "rates": [1, 1, 1, 1],
  "access_sets": [[1, 2, 4], [2, 3, 6], [1, 4, 5], [3, 5, 6]],
  "decoding": [
    [1, 1, 0, 0, 0, 0],
    [0, 1, 1, 0, 0, 0],
    [0, 0, 0, 1, 1, 0],
    [0, 0, 0, 0, 1, 1]
  ],
  "encoding": [
    1, 0, 0, 0, 0, 0,
    0, 0, 1, 0, 0, 0,
    0, 0, 0, 1, 0, 0,
    0, 0, 0, 0, 0, 1,
    1, 1, 1, 0, 0, 0,
    0, 0, 0, 1, 1, 1
  ],
  "key_count": 2,
  "seed": 0
})";
}

inline TopologyInput topology() {
  return topology_from_json(json::parse(topology_json_text()));
}

inline DmussScheme scheme() {
  return scheme_from_json(json::parse(scheme_json_text()));
}

// One valid family of row index sets for the example structure.
inline MatchPlan match_plan() {
  MatchPlan plan;
  plan.per_user = {
      {{2, {3}}, {3, {5}}, {4, {6}}},
      {{1, {1}}, {3, {4}}, {4, {5}}},
      {{1, {2}}, {2, {3}}, {4, {6}}},
      {{1, {1}}, {2, {2}}, {3, {4}}},
  };
  return plan;
}

struct WorkedVector {
  std::vector<Elem> messages{1, 0, 1, 1};
  std::vector<Elem> keys{0, 1};
  std::vector<Elem> shares{1, 0, 0, 0, 1, 0};
};

inline WorkedVector worked_vector() { return {}; }

}  // namespace dmuss::reference
