#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dmuss/codec.hpp"
#include "dmuss/errors.hpp"
#include "dmuss/scheme.hpp"
#include "dmuss/topology.hpp"
#include "dmuss/verification.hpp"

namespace dmuss {

using json = nlohmann::json;

struct TopologyInput {
  AccessStructure access;
  RateTuple rates;
};

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError("invalid JSON in " + path + ": " + e.what());
  }
}

inline void save_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("write failed for " + path);
}

namespace detail {

inline std::int64_t require_int(const json& j, const std::string& what) {
  if (j.is_number_integer() || j.is_number_unsigned()) return j.get<std::int64_t>();
  if (j.is_number_float()) throw NonIntegralRateError(what + " must be an integer");
  throw ParseError(what + " must be an integer");
}

inline std::vector<Elem> require_matrix_entries(const json& j, std::size_t count, std::uint64_t q,
                                                const std::string& what) {
  if (!j.is_array() || j.size() != count) {
    throw ParseError(what + " must be a flat row-major array of " + std::to_string(count) +
                     " entries");
  }
  std::vector<Elem> out;
  out.reserve(count);
  for (const json& e : j) {
    const std::int64_t v = require_int(e, what + " entry");
    if (v < 0 || static_cast<std::uint64_t>(v) >= q) {
      throw ParseError(what + " entry " + std::to_string(v) + " is outside [0, " +
                       std::to_string(q) + ")");
    }
    out.push_back(static_cast<Elem>(v));
  }
  return out;
}

}  // namespace detail

inline TopologyInput topology_from_json(const json& j) {
  if (!j.is_object() || !j.contains("access_sets") || !j["access_sets"].is_array()) {
    throw ParseError("topology file needs an access_sets array");
  }
  std::vector<std::vector<std::int64_t>> raw;
  for (const json& s : j["access_sets"]) {
    if (!s.is_array()) throw ParseError("each access set must be an array of node indices");
    std::vector<std::int64_t> nodes;
    for (const json& v : s) nodes.push_back(detail::require_int(v, "node index"));
    raw.push_back(std::move(nodes));
  }
  TopologyInput t;
  t.access = validate_access_structure(raw);
  if (!j.contains("rates") || !j["rates"].is_array()) {
    throw ParseError("topology file needs a rates array");
  }
  for (const json& v : j["rates"]) t.rates.rates.push_back(detail::require_int(v, "rate"));
  require_rates_match(t.access, t.rates);
  return t;
}

inline json topology_to_json(const AccessStructure& a, const RateTuple& r) {
  json sets = json::array();
  for (const auto& s : a.sets) {
    json one = json::array();
    for (int node : s) one.push_back(a.source_labels[static_cast<std::size_t>(node - 1)]);
    sets.push_back(one);
  }
  return json{{"access_sets", sets}, {"rates", r.rates}};
}

inline json violation_to_json(const Violation& v) {
  return json{{"k", v.excluded_user}, {"s", v.subset}, {"lhs", v.lhs}, {"rhs", v.rhs}};
}

inline json report_to_json(const VerificationReport& r) {
  json checks = json::array();
  for (const CheckResult& c : r.checks) {
    checks.push_back(json{{"name", c.name}, {"expected", c.expected}, {"observed", c.observed}, {"pass", c.pass}});
  }
  return json{{"mode", r.mode}, {"checks", checks}, {"pass", r.pass}};
}

inline json scheme_to_json(const DmussScheme& s) {
  json decoding = json::array();
  for (const FieldMatrix& v : s.decoding) decoding.push_back(v.data);
  json sets = json::array();
  for (const auto& a : s.access.sets) sets.push_back(a);
  return json{{"q", s.field.q},
              {"N", s.access.node_count},
              {"K", s.access.user_count()},
              {"rates", s.rates.rates},
              {"access_sets", sets},
              {"decoding", decoding},
              {"encoding", s.encoding.data},
              {"key_count", s.key_count},
              {"seed", s.seed}};
}

inline DmussScheme scheme_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("scheme file must be a JSON object");
  for (const char* key : {"q", "N", "K", "rates", "access_sets", "decoding", "encoding", "key_count"}) {
    if (!j.contains(key)) throw ParseError(std::string("scheme file is missing ") + key);
  }
  DmussScheme s;
  const std::int64_t q = detail::require_int(j["q"], "q");
  if (q < 2) throw ParseError("q must be at least 2");
  try {
    s.field = make_field(static_cast<std::uint64_t>(q));
  } catch (const NotPrimeError& e) {
    throw ParseError(e.what());
  }
  const std::int64_t n = detail::require_int(j["N"], "N");
  const std::int64_t k = detail::require_int(j["K"], "K");
  if (n < 0 || k < 1) throw ParseError("N must be nonnegative and K positive");

  if (!j["access_sets"].is_array() || j["access_sets"].size() != static_cast<std::size_t>(k)) {
    throw ParseError("access_sets must list one set per user");
  }
  std::vector<std::vector<std::int64_t>> raw;
  for (const json& one : j["access_sets"]) {
    if (!one.is_array()) throw ParseError("each access set must be an array");
    std::vector<std::int64_t> nodes;
    for (const json& v : one) nodes.push_back(detail::require_int(v, "node index"));
    raw.push_back(std::move(nodes));
  }
  s.access = validate_access_structure(raw);
  if (s.access.node_count != n) {
    throw ParseError("N does not match the union of the access sets");
  }
  for (std::size_t i = 0; i < s.access.source_labels.size(); ++i) {
    if (s.access.source_labels[i] != static_cast<std::int64_t>(i) + 1) {
      throw ParseError("scheme access sets must use canonical node labels 1..N");
    }
  }

  if (!j["rates"].is_array() || j["rates"].size() != static_cast<std::size_t>(k)) {
    throw ParseError("rates must list one entry per user");
  }
  for (const json& v : j["rates"]) {
    const std::int64_t r = detail::require_int(v, "rate");
    if (r < 0) throw ParseError("rates must be nonnegative");
    s.rates.rates.push_back(r);
  }

  const std::int64_t m_total = s.rates.total();
  if (!j["decoding"].is_array() || j["decoding"].size() != static_cast<std::size_t>(k)) {
    throw ParseError("decoding must list one matrix per user");
  }
  for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
    const auto rate = static_cast<std::size_t>(s.rates.rates[i]);
    s.decoding.emplace_back(s.field, static_cast<std::size_t>(n), rate,
                            detail::require_matrix_entries(j["decoding"][i],
                                                           static_cast<std::size_t>(n) * rate,
                                                           s.field.q, "decoding matrix"));
  }
  s.encoding = FieldMatrix(s.field, static_cast<std::size_t>(n), static_cast<std::size_t>(n),
                           detail::require_matrix_entries(j["encoding"],
                                                          static_cast<std::size_t>(n * n),
                                                          s.field.q, "encoding matrix"));
  const std::int64_t key_count = detail::require_int(j["key_count"], "key_count");
  if (key_count != n - m_total) {
    throw ParseError("key_count must equal N minus the total message size");
  }
  s.key_count = static_cast<int>(key_count);
  if (j.contains("seed")) {
    s.seed = static_cast<std::uint64_t>(detail::require_int(j["seed"], "seed"));
  }
  return s;
}

inline json payload_to_json(const Payload& p, std::uint64_t q) {
  json blocks = json::array();
  for (const FieldMatrix& b : p.blocks) {
    json col_major = json::array();
    for (std::size_t c = 0; c < b.cols; ++c) {
      for (std::size_t r = 0; r < b.rows; ++r) col_major.push_back(b.data[r * b.cols + c]);
    }
    blocks.push_back(col_major);
  }
  json rates = json::array();
  for (const FieldMatrix& b : p.blocks) rates.push_back(b.rows);
  return json{{"q", q}, {"rates", rates}, {"L", p.columns}, {"messages", blocks}};
}

inline Payload payload_from_json(const json& j, const Field& f) {
  for (const char* key : {"q", "rates", "L", "messages"}) {
    if (!j.is_object() || !j.contains(key)) {
      throw ParseError(std::string("payload file is missing ") + key);
    }
  }
  if (detail::require_int(j["q"], "q") != static_cast<std::int64_t>(f.q)) {
    throw DimensionMismatchError("payload field does not match the scheme");
  }
  const auto columns = static_cast<std::size_t>(detail::require_int(j["L"], "L"));
  if (!j["rates"].is_array() || !j["messages"].is_array() ||
      j["rates"].size() != j["messages"].size()) {
    throw ParseError("payload rates and messages must be arrays of equal length");
  }
  Payload p;
  p.columns = columns;
  for (std::size_t k = 0; k < j["rates"].size(); ++k) {
    const auto rate = static_cast<std::size_t>(detail::require_int(j["rates"][k], "rate"));
    const std::vector<Elem> col_major =
        detail::require_matrix_entries(j["messages"][k], rate * columns, f.q, "message block");
    FieldMatrix b(f, rate, columns);
    for (std::size_t c = 0; c < columns; ++c) {
      for (std::size_t r = 0; r < rate; ++r) b.data[r * columns + c] = col_major[c * rate + r];
    }
    p.blocks.push_back(std::move(b));
  }
  return p;
}

inline json shares_to_json(const ShareSet& s, std::uint64_t q) {
  json col_major = json::array();
  const FieldMatrix& m = s.data;
  for (std::size_t c = 0; c < m.cols; ++c) {
    for (std::size_t r = 0; r < m.rows; ++r) col_major.push_back(m.data[r * m.cols + c]);
  }
  return json{{"q", q}, {"N", m.rows}, {"L", m.cols}, {"shares", col_major}};
}

inline ShareSet shares_from_json(const json& j, const Field& f) {
  for (const char* key : {"q", "N", "L", "shares"}) {
    if (!j.is_object() || !j.contains(key)) {
      throw ParseError(std::string("share file is missing ") + key);
    }
  }
  if (detail::require_int(j["q"], "q") != static_cast<std::int64_t>(f.q)) {
    throw DimensionMismatchError("share field does not match the scheme");
  }
  const auto n = static_cast<std::size_t>(detail::require_int(j["N"], "N"));
  const auto columns = static_cast<std::size_t>(detail::require_int(j["L"], "L"));
  const std::vector<Elem> col_major =
      detail::require_matrix_entries(j["shares"], n * columns, f.q, "share block");
  FieldMatrix m(f, n, columns);
  for (std::size_t c = 0; c < columns; ++c) {
    for (std::size_t r = 0; r < n; ++r) m.data[r * columns + c] = col_major[c * n + r];
  }
  return ShareSet{std::move(m)};
}

inline json keys_to_json(const FieldMatrix& keys, std::uint64_t q) {
  json col_major = json::array();
  for (std::size_t c = 0; c < keys.cols; ++c) {
    for (std::size_t r = 0; r < keys.rows; ++r) col_major.push_back(keys.data[r * keys.cols + c]);
  }
  return json{{"q", q}, {"key_count", keys.rows}, {"L", keys.cols}, {"keys", col_major}};
}

inline FieldMatrix keys_from_json(const json& j, const Field& f) {
  for (const char* key : {"q", "key_count", "L", "keys"}) {
    if (!j.is_object() || !j.contains(key)) {
      throw ParseError(std::string("key file is missing ") + key);
    }
  }
  if (detail::require_int(j["q"], "q") != static_cast<std::int64_t>(f.q)) {
    throw DimensionMismatchError("key field does not match the scheme");
  }
  const auto rows = static_cast<std::size_t>(detail::require_int(j["key_count"], "key_count"));
  const auto columns = static_cast<std::size_t>(detail::require_int(j["L"], "L"));
  const std::vector<Elem> col_major =
      detail::require_matrix_entries(j["keys"], rows * columns, f.q, "key block");
  FieldMatrix m(f, rows, columns);
  for (std::size_t c = 0; c < columns; ++c) {
    for (std::size_t r = 0; r < rows; ++r) m.data[r * columns + c] = col_major[c * rows + r];
  }
  return m;
}

}  // namespace dmuss
