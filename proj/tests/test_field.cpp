#include <catch2/catch_amalgamated.hpp>

#include "dmuss/field.hpp"

using namespace dmuss;

TEST_CASE("make_field accepts primes and rejects composites") {
  CHECK(make_field(5).q == 5);
  CHECK(make_field(2).q == 2);
  CHECK_THROWS_AS(make_field(4), NotPrimeError);
  CHECK_THROWS_AS(make_field(1), NotPrimeError);
  CHECK_THROWS_AS(make_field(0), NotPrimeError);
  CHECK_THROWS_AS(make_field(91), NotPrimeError);  // 7 * 13
}

TEST_CASE("smallest prime strictly above a bound") {
  CHECK(smallest_prime_greater_than(4) == 5);
  CHECK(smallest_prime_greater_than(1) == 2);
  CHECK(smallest_prime_greater_than(0) == 2);
  CHECK(smallest_prime_greater_than(7) == 11);
  CHECK(smallest_prime_greater_than(13) == 17);
}

TEST_CASE("field inversion") {
  const Field f = make_field(5);
  CHECK(field_invert(f, 3) == 2);
  CHECK(field_invert(f, 1) == 1);
  CHECK_THROWS_AS(field_invert(f, 0), DivideByZeroError);

  for (std::uint64_t q : {2, 3, 5, 7, 11, 13}) {
    const Field g = make_field(q);
    for (Elem a = 1; a < q; ++a) {
      CHECK(g.mul(a, g.inv(a)) == 1);
    }
  }
}

TEST_CASE("arithmetic reduces eagerly") {
  const Field f = make_field(7);
  CHECK(f.add(5, 6) == 4);
  CHECK(f.sub(2, 6) == 3);
  CHECK(f.mul(4, 5) == 6);
  CHECK(f.neg(0) == 0);
  CHECK(f.neg(3) == 4);
  CHECK(f.div(6, 4) == f.mul(6, f.inv(4)));
}
