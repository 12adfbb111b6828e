#pragma once

#include <cstdint>
#include <string>

#include "dmuss/errors.hpp"

namespace dmuss {

// A field element is a canonical residue in [0, q). All operations reduce
// eagerly so serialized values are bit-exact.
using Elem = std::uint64_t;

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

inline std::uint64_t smallest_prime_greater_than(std::uint64_t k) {
  std::uint64_t n = k + 1;
  while (!is_prime(n)) ++n;
  return n;
}

// Prime field GF(q). Moduli are kept below 2^32 so products fit in 64 bits.
struct Field {
  std::uint64_t q = 2;

  Elem reduce(std::uint64_t v) const { return v % q; }
  Elem add(Elem a, Elem b) const { return (a + b) % q; }
  Elem sub(Elem a, Elem b) const { return (a + q - b) % q; }
  Elem neg(Elem a) const { return a == 0 ? 0 : q - a; }
  Elem mul(Elem a, Elem b) const { return (a * b) % q; }

  Elem inv(Elem a) const {
    a %= q;
    if (a == 0) throw DivideByZeroError("field_invert: 0 has no inverse mod " + std::to_string(q));
    // Extended Euclid on (q, a); q prime guarantees gcd 1.
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = static_cast<std::int64_t>(q), new_r = static_cast<std::int64_t>(a);
    while (new_r != 0) {
      std::int64_t quot = r / new_r;
      std::int64_t tmp = t - quot * new_t;
      t = new_t;
      new_t = tmp;
      tmp = r - quot * new_r;
      r = new_r;
      new_r = tmp;
    }
    if (t < 0) t += static_cast<std::int64_t>(q);
    return static_cast<Elem>(t);
  }

  Elem div(Elem a, Elem b) const { return mul(a % q, inv(b)); }

  friend bool operator==(const Field&, const Field&) = default;
};

inline Field make_field(std::uint64_t q) {
  if (!is_prime(q)) {
    throw NotPrimeError("make_field: " + std::to_string(q) + " is not prime");
  }
  if (q >= (std::uint64_t{1} << 32)) {
    throw Error("make_field: modulus too large, must be < 2^32");
  }
  return Field{q};
}

inline Elem field_invert(const Field& f, Elem a) { return f.inv(a); }

}  // namespace dmuss
