#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "dmuss/errors.hpp"
#include "dmuss/scheme.hpp"

namespace dmuss {

struct CheckResult {
  std::string name;
  std::int64_t expected = 0;
  std::int64_t observed = 0;
  bool pass = false;
};

struct VerificationReport {
  std::string mode;  // "ranks" or "entropy"
  std::vector<CheckResult> checks;
  bool pass = false;

  void add(std::string name, std::int64_t expected, std::int64_t observed) {
    checks.push_back({std::move(name), expected, observed, expected == observed});
  }
  void finish() {
    pass = std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
  }
  const CheckResult* find(const std::string& name) const {
    for (const CheckResult& c : checks) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
};

namespace detail {

inline std::vector<std::size_t> complement_rows(const AccessStructure& a, int k) {
  std::vector<std::size_t> rows;
  for (int n = 1; n <= a.node_count; ++n) {
    if (!a.member(k, n)) rows.push_back(static_cast<std::size_t>(n - 1));
  }
  return rows;
}

inline std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  return idx;
}

// Decode every user's message from a share row vector.
inline std::vector<Elem> decode_all(const DmussScheme& s, const std::vector<Elem>& y) {
  const Field f = s.field;
  std::vector<Elem> w(static_cast<std::size_t>(s.message_total()), 0);
  std::size_t offset = 0;
  for (const FieldMatrix& v : s.decoding) {
    for (std::size_t c = 0; c < v.cols; ++c) {
      Elem acc = 0;
      for (std::size_t n = 0; n < v.rows; ++n) acc = f.add(acc, f.mul(y[n], v.data[n * v.cols + c]));
      w[offset + c] = acc;
    }
    offset += v.cols;
  }
  return w;
}

}  // namespace detail

// Exact structural certification over GF(q): decoding support, per-user and
// stacked decoding ranks, the complement-row restriction used by the privacy
// condition, and consistency of the stored encoding with the decoders.
inline VerificationReport certify_ranks(const DmussScheme& s) {
  VerificationReport report;
  report.mode = "ranks";
  const int k_users = s.access.user_count();
  const auto n = static_cast<std::size_t>(s.access.node_count);
  const auto m_total = static_cast<std::size_t>(s.message_total());

  for (int k = 1; k <= k_users; ++k) {
    const FieldMatrix& v = s.decoding[static_cast<std::size_t>(k - 1)];
    std::int64_t stray = 0;
    for (std::size_t row = 0; row < v.rows; ++row) {
      if (s.access.member(k, static_cast<int>(row) + 1)) continue;
      for (std::size_t c = 0; c < v.cols; ++c) {
        if (v.data[row * v.cols + c] != 0) ++stray;
      }
    }
    report.add("support_zero[" + std::to_string(k) + "]", 0, stray);
  }

  for (int k = 1; k <= k_users; ++k) {
    const FieldMatrix& v = s.decoding[static_cast<std::size_t>(k - 1)];
    report.add("message_rank[" + std::to_string(k) + "]",
               s.rates.rates[static_cast<std::size_t>(k - 1)],
               static_cast<std::int64_t>(rank(v)));
  }

  for (int k = 1; k <= k_users; ++k) {
    FieldMatrix others(s.field, n, 0);
    std::int64_t expected = 0;
    for (int i = 1; i <= k_users; ++i) {
      if (i == k) continue;
      others = hstack(others, s.decoding[static_cast<std::size_t>(i - 1)]);
      expected += s.rates.rates[static_cast<std::size_t>(i - 1)];
    }
    const FieldMatrix restricted =
        submatrix(others, detail::complement_rows(s.access, k), detail::all_indices(others.cols));
    report.add("privacy_rank[" + std::to_string(k) + "]", expected,
               static_cast<std::int64_t>(rank(restricted)));
  }

  report.add("joint_rank", static_cast<std::int64_t>(m_total),
             static_cast<std::int64_t>(rank(s.stacked_decoding())));

  // Unit coordinate vectors through encode-then-decode: message unit i must
  // come back as message unit i, key units must decode to nothing.
  std::int64_t mismatches = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<Elem> y(s.encoding.data.begin() + static_cast<std::ptrdiff_t>(i * s.encoding.cols),
                              s.encoding.data.begin() + static_cast<std::ptrdiff_t>((i + 1) * s.encoding.cols));
    const std::vector<Elem> w = detail::decode_all(s, y);
    for (std::size_t c = 0; c < m_total; ++c) {
      const Elem want = (i == c) ? 1 : 0;
      if (w[c] != want) ++mismatches;
    }
  }
  report.add("encode_decode", 0, mismatches);

  report.finish();
  return report;
}

namespace detail {

// Distinct keys and run uniformity of a packed tabulation.
struct TabDigest {
  std::uint64_t distinct = 0;
  bool uniform = true;
};

inline TabDigest digest(std::vector<std::uint64_t>& keys) {
  TabDigest d;
  if (keys.empty()) {
    return d;
  }
  std::sort(keys.begin(), keys.end());
  std::uint64_t run = 1, first_run = 0;
  d.distinct = 1;
  for (std::size_t i = 1; i < keys.size(); ++i) {
    if (keys[i] == keys[i - 1]) {
      ++run;
    } else {
      if (first_run == 0) {
        first_run = run;
      } else if (run != first_run) {
        d.uniform = false;
      }
      run = 1;
      ++d.distinct;
    }
  }
  if (first_run != 0 && run != first_run) d.uniform = false;
  return d;
}

// log_q of a count, or -1 when the count is not an exact power of q.
inline std::int64_t exact_log(std::uint64_t q, std::uint64_t count) {
  std::int64_t e = 0;
  std::uint64_t acc = 1;
  while (acc < count) {
    acc *= q;
    ++e;
  }
  return acc == count ? e : -1;
}

}  // namespace detail

// Brute-force distribution check. Enumerates every share vector (the share
// distribution is uniform by construction), tabulates exact joint counts and
// compares them as integers; no tolerances exist. Also replays the encoder
// over the whole message and key spaces against the decoders.
inline VerificationReport entropy_oracle(const DmussScheme& s, std::uint64_t max_states = 1000000) {
  const std::uint64_t q = s.field.q;
  const auto n = static_cast<std::size_t>(s.access.node_count);
  const auto m_total = static_cast<std::size_t>(s.message_total());
  const int k_users = s.access.user_count();

  unsigned __int128 state_count = 1;
  for (std::size_t i = 0; i < n; ++i) {
    state_count *= q;
    if (state_count > max_states) {
      throw TooLargeError("entropy_oracle: q^N exceeds max_states=" + std::to_string(max_states));
    }
  }
  const auto states = static_cast<std::uint64_t>(state_count);

  VerificationReport report;
  report.mode = "entropy";

  // One pass computes every decoded message tuple, packed base q.
  std::vector<std::uint64_t> packed_w(states, 0);
  {
    std::vector<Elem> y(n, 0);
    for (std::uint64_t state = 0; state < states; ++state) {
      std::uint64_t v = state;
      for (std::size_t i = 0; i < n; ++i) {
        y[i] = v % q;
        v /= q;
      }
      const std::vector<Elem> w = detail::decode_all(s, y);
      std::uint64_t packed = 0;
      for (std::size_t c = m_total; c-- > 0;) packed = packed * q + w[c];
      packed_w[state] = packed;
    }
  }

  const auto digit = [q](std::uint64_t packed, std::size_t index) {
    for (std::size_t i = 0; i < index; ++i) packed /= q;
    return packed % q;
  };

  std::vector<std::uint64_t> buffer(states);
  const auto tabulate = [&](auto&& key_fn) {
    for (std::uint64_t state = 0; state < states; ++state) buffer[state] = key_fn(state);
    return detail::digest(buffer);
  };
  const auto pack_share_subset = [&](std::uint64_t state, const std::vector<int>& nodes) {
    std::uint64_t packed = 0;
    for (std::size_t i = nodes.size(); i-- > 0;) {
      packed = packed * q + digit(state, static_cast<std::size_t>(nodes[i] - 1));
    }
    return packed;
  };

  std::vector<std::size_t> col_offset(static_cast<std::size_t>(k_users) + 1, 0);
  for (int k = 1; k <= k_users; ++k) {
    col_offset[static_cast<std::size_t>(k)] =
        col_offset[static_cast<std::size_t>(k - 1)] +
        static_cast<std::size_t>(s.rates.rates[static_cast<std::size_t>(k - 1)]);
  }

  for (int k = 1; k <= k_users; ++k) {
    const auto& access_set = s.access.sets[static_cast<std::size_t>(k - 1)];
    const std::size_t rate = static_cast<std::size_t>(s.rates.rates[static_cast<std::size_t>(k - 1)]);
    const std::size_t base = col_offset[static_cast<std::size_t>(k - 1)];

    const detail::TabDigest shares_seen = tabulate([&](std::uint64_t state) {
      return pack_share_subset(state, access_set);
    });
    const detail::TabDigest joint_own = tabulate([&](std::uint64_t state) {
      std::uint64_t packed = pack_share_subset(state, access_set);
      for (std::size_t c = rate; c-- > 0;) packed = packed * q + digit(packed_w[state], base + c);
      return packed;
    });
    const detail::TabDigest joint_others = tabulate([&](std::uint64_t state) {
      std::uint64_t packed = pack_share_subset(state, access_set);
      for (int i = k_users; i >= 1; --i) {
        if (i == k) continue;
        const std::size_t b = col_offset[static_cast<std::size_t>(i - 1)];
        const std::size_t r = static_cast<std::size_t>(s.rates.rates[static_cast<std::size_t>(i - 1)]);
        for (std::size_t c = r; c-- > 0;) packed = packed * q + digit(packed_w[state], b + c);
      }
      return packed;
    });
    const detail::TabDigest own_only = tabulate([&](std::uint64_t state) {
      std::uint64_t packed = 0;
      for (std::size_t c = rate; c-- > 0;) packed = packed * q + digit(packed_w[state], base + c);
      return packed;
    });

    const std::int64_t h_shares = detail::exact_log(q, shares_seen.distinct);
    const bool clean = shares_seen.uniform && joint_own.uniform && joint_others.uniform &&
                       own_only.uniform && h_shares >= 0;

    std::int64_t h_own_given = -1, h_others_given = -1, h_own = -1;
    if (clean) {
      const std::int64_t jo = detail::exact_log(q, joint_own.distinct);
      const std::int64_t jt = detail::exact_log(q, joint_others.distinct);
      if (jo >= 0) h_own_given = jo - h_shares;
      if (jt >= 0) h_others_given = jt - h_shares;
      h_own = detail::exact_log(q, own_only.distinct);
    }
    std::int64_t expected_others = 0;
    for (int i = 1; i <= k_users; ++i) {
      if (i != k) expected_others += s.rates.rates[static_cast<std::size_t>(i - 1)];
    }
    report.add("correctness_entropy[" + std::to_string(k) + "]", 0, h_own_given);
    report.add("privacy_entropy[" + std::to_string(k) + "]", expected_others, h_others_given);
    report.add("message_entropy[" + std::to_string(k) + "]",
               s.rates.rates[static_cast<std::size_t>(k - 1)], h_own);
  }

  {
    const detail::TabDigest all = tabulate([&](std::uint64_t state) { return packed_w[state]; });
    report.add("joint_entropy", static_cast<std::int64_t>(m_total),
               all.uniform ? detail::exact_log(q, all.distinct) : -1);
  }

  for (std::size_t node = 1; node <= n; ++node) {
    const detail::TabDigest one = tabulate([&](std::uint64_t state) {
      return digit(state, node - 1);
    });
    report.add("share_entropy[" + std::to_string(node) + "]", 1,
               one.uniform ? detail::exact_log(q, one.distinct) : -1);
  }

  // Operational replay: every message tuple with zero keys must decode to
  // itself for every user; every pure key tuple must decode to zero messages.
  {
    std::int64_t mismatches = 0;
    const auto key_total = static_cast<std::size_t>(s.key_count);
    std::vector<Elem> coords(n, 0);
    std::vector<Elem> y(n, 0);
    const auto replay = [&](std::size_t active_offset, std::size_t active_len, bool expect_identity) {
      unsigned __int128 space = 1;
      for (std::size_t i = 0; i < active_len; ++i) space *= q;
      for (std::uint64_t idx = 0; idx < static_cast<std::uint64_t>(space); ++idx) {
        std::fill(coords.begin(), coords.end(), 0);
        std::uint64_t v = idx;
        for (std::size_t i = 0; i < active_len; ++i) {
          coords[active_offset + i] = v % q;
          v /= q;
        }
        for (std::size_t col = 0; col < n; ++col) {
          Elem acc = 0;
          for (std::size_t row = 0; row < n; ++row) {
            acc = s.field.add(acc, s.field.mul(coords[row], s.encoding.data[row * n + col]));
          }
          y[col] = acc;
        }
        const std::vector<Elem> w = detail::decode_all(s, y);
        for (std::size_t c = 0; c < m_total; ++c) {
          const Elem want = expect_identity ? coords[c] : 0;
          if (w[c] != want) ++mismatches;
        }
      }
    };
    replay(0, m_total, true);
    replay(m_total, key_total, false);
    report.add("encode_decode", 0, mismatches);
  }

  report.finish();
  return report;
}

}  // namespace dmuss
