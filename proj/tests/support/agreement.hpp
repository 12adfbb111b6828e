#pragma once

// The rank certifier and the entropy oracle measure the same five quantities
// through different routes. This maps each rank check to its entropy
// counterpart and reports the first disagreement.

#include <optional>
#include <string>
#include <vector>

#include "dmuss/scheme.hpp"
#include "dmuss/verification.hpp"

namespace testsupport {

inline std::string oracle_name_for(const std::string& cert_name) {
  const auto bracket = cert_name.find('[');
  const std::string head = cert_name.substr(0, bracket);
  const std::string tail = bracket == std::string::npos ? "" : cert_name.substr(bracket);
  if (head == "support_zero") return "correctness_entropy" + tail;
  if (head == "message_rank") return "message_entropy" + tail;
  if (head == "privacy_rank") return "privacy_entropy" + tail;
  if (head == "joint_rank") return "joint_entropy";
  if (head == "encode_decode") return "encode_decode";
  return "";
}

inline std::optional<std::string> find_disagreement(const dmuss::VerificationReport& cert,
                                                    const dmuss::VerificationReport& oracle) {
  if (cert.pass != oracle.pass) {
    return std::string("overall verdicts differ: ranks=") + (cert.pass ? "pass" : "fail") +
           " entropy=" + (oracle.pass ? "pass" : "fail");
  }
  for (const dmuss::CheckResult& c : cert.checks) {
    const std::string partner = oracle_name_for(c.name);
    const dmuss::CheckResult* o = oracle.find(partner);
    if (o == nullptr) return "oracle is missing check " + partner;
    if (c.pass != o->pass) {
      return c.name + " (" + (c.pass ? "pass" : "fail") + ") vs " + partner + " (" +
             (o->pass ? "pass" : "fail") + ")";
    }
  }
  // entropy-only checks have no rank counterpart and must hold on any
  // linear scheme
  for (const dmuss::CheckResult& o : oracle.checks) {
    if (o.name.rfind("share_entropy", 0) == 0 && !o.pass) {
      return o.name + " failed";
    }
  }
  return std::nullopt;
}

// Visit every single-entry zeroing of a nonzero decoding entry.
template <typename Fn>
inline void for_each_decoding_tamper(const dmuss::DmussScheme& s, Fn&& fn) {
  for (std::size_t k = 0; k < s.decoding.size(); ++k) {
    const dmuss::FieldMatrix& v = s.decoding[k];
    for (std::size_t r = 0; r < v.rows; ++r) {
      for (std::size_t c = 0; c < v.cols; ++c) {
        if (v.at(r, c) == 0) continue;
        dmuss::DmussScheme tampered = s;
        tampered.decoding[k].at(r, c) = 0;
        fn(tampered, static_cast<int>(k) + 1, r, c);
      }
    }
  }
}

}  // namespace testsupport
