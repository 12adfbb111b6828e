#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "dmuss/matching.hpp"
#include "dmuss/topology.hpp"
#include "support/oracles.hpp"
#include "support/sweep.hpp"

using namespace dmuss;

namespace {

AccessStructure reference_structure() {
  return validate_access_structure({{1, 2, 4}, {2, 3, 6}, {1, 4, 5}, {3, 5, 6}});
}

}  // namespace

TEST_CASE("access structure validation and canonicalization") {
  const AccessStructure a = reference_structure();
  CHECK(a.user_count() == 4);
  CHECK(a.node_count == 6);
  CHECK(a.source_labels == std::vector<std::int64_t>{1, 2, 3, 4, 5, 6});

  const AccessStructure b = validate_access_structure({{7}, {9}});
  CHECK(b.user_count() == 2);
  CHECK(b.node_count == 2);
  CHECK(b.source_labels == std::vector<std::int64_t>{7, 9});
  CHECK(b.sets[0] == std::vector<int>{1});
  CHECK(b.sets[1] == std::vector<int>{2});

  const AccessStructure c = validate_access_structure({{1}, {}});
  CHECK(c.user_count() == 2);
  CHECK(c.node_count == 1);
  CHECK(c.sets[1].empty());

  CHECK_THROWS_AS(validate_access_structure({}), NoUsersError);
  CHECK_THROWS_AS(validate_access_structure({{0}}), Error);
  CHECK_THROWS_AS(validate_access_structure({{-3}}), Error);
}

TEST_CASE("perfect capacity on the reference structure") {
  const AccessStructure a = reference_structure();
  for (CapacityMethod method : {CapacityMethod::Matching, CapacityMethod::Enumerate}) {
    CHECK_FALSE(check_perfect_capacity(a, RateTuple{{1, 1, 1, 1}}, method).has_value());
    const auto v = check_perfect_capacity(a, RateTuple{{2, 1, 1, 1}}, method);
    REQUIRE(v.has_value());
    CHECK(v->excluded_user == 3);
    CHECK(v->subset == std::vector<int>{1});
    CHECK(v->lhs == 2);
    CHECK(v->rhs == 1);
  }
}

TEST_CASE("single user keeps the resource rule") {
  const AccessStructure a = validate_access_structure({{1, 2}});
  for (CapacityMethod method : {CapacityMethod::Matching, CapacityMethod::Enumerate}) {
    CHECK_FALSE(check_perfect_capacity(a, RateTuple{{2}}, method).has_value());
    const auto v = check_perfect_capacity(a, RateTuple{{3}}, method);
    REQUIRE(v.has_value());
    CHECK(v->excluded_user == 1);
    CHECK(v->subset == std::vector<int>{1});
    CHECK(v->lhs == 3);
    CHECK(v->rhs == 2);
    const auto [lhs, rhs] = recompute_violation(a, RateTuple{{3}}, *v);
    CHECK(lhs == 3);
    CHECK(rhs == 2);
  }
}

TEST_CASE("weak capacity on the two-user example") {
  const AccessStructure a = validate_access_structure({{1, 2, 3}, {3, 4}});
  CHECK_FALSE(check_weak_capacity(a, RateTuple{{2, 1}}).has_value());

  const auto v1 = check_weak_capacity(a, RateTuple{{3, 1}});
  REQUIRE(v1.has_value());
  CHECK(v1->excluded_user == 2);
  CHECK(v1->subset == std::vector<int>{1});
  CHECK(v1->lhs == 3);
  CHECK(v1->rhs == 2);

  const auto v2 = check_weak_capacity(a, RateTuple{{2, 2}});
  REQUIRE(v2.has_value());
  CHECK(v2->excluded_user == 1);
  CHECK(v2->subset == std::vector<int>{2});
  CHECK(v2->lhs == 2);
  CHECK(v2->rhs == 1);
}

TEST_CASE("weak capacity resource bound carries no colluder") {
  const AccessStructure a = validate_access_structure({{1, 2}});
  CHECK_FALSE(check_weak_capacity(a, RateTuple{{2}}).has_value());
  const auto v = check_weak_capacity(a, RateTuple{{3}});
  REQUIRE(v.has_value());
  CHECK(v->excluded_user == 0);
  CHECK(v->subset == std::vector<int>{1});
  CHECK(v->lhs == 3);
  CHECK(v->rhs == 2);
  const auto [lhs, rhs] = recompute_violation(a, RateTuple{{3}}, *v);
  CHECK(lhs > rhs);
}

TEST_CASE("set difference bound") {
  CHECK(set_difference_bound({1, 2, 4}, {1, 4, 5}) == 1);
  CHECK(set_difference_bound({3, 1, 7}, {}) == 3);
  CHECK(set_difference_bound({2, 3}, {1, 2, 3, 4}) == 0);
  CHECK(set_difference_bound({}, {1}) == 0);
}

TEST_CASE("rational rates through the enumerate core") {
  const AccessStructure a = validate_access_structure({{1, 2, 4}, {2, 3}});
  // (3/2, 1/2) fits: 3/2 <= |A_1 \ A_2| = 2 and 1/2 <= |A_2 \ A_1| = 1.
  CHECK_FALSE(check_perfect_capacity_rational(a, {3, 1}, 2).has_value());
  // (5/2, 1/2) does not: 5/2 > 2. Sides are reported scaled by the denominator.
  const auto v = check_perfect_capacity_rational(a, {5, 1}, 2);
  REQUIRE(v.has_value());
  CHECK(v->excluded_user == 2);
  CHECK(v->subset == std::vector<int>{1});
  CHECK(v->lhs == 5);
  CHECK(v->rhs == 4);
  // Integral inputs behave exactly like the integral checker.
  CHECK(check_perfect_capacity_rational(a, {3, 1}, 1).has_value());
  CHECK_THROWS_AS(check_perfect_capacity_rational(a, {1, 1}, 0), Error);
}

TEST_CASE("enumerate method caps the user count") {
  std::vector<std::vector<std::int64_t>> raw(21, {1});
  const AccessStructure a = validate_access_structure(raw);
  RateTuple r;
  r.rates.assign(21, 0);
  CHECK_THROWS_AS(check_perfect_capacity(a, r, CapacityMethod::Enumerate), Error);
  CHECK_FALSE(check_perfect_capacity(a, r, CapacityMethod::Matching).has_value());
}

TEST_CASE("methods agree on random structures") {
  std::mt19937_64 rng(555);
  for (int trial = 0; trial < 400; ++trial) {
    const AccessStructure a = testsupport::random_structure(rng, 4, 6);
    const RateTuple r = testsupport::random_rates(rng, a, a.node_count);
    const bool via_enum = !check_perfect_capacity(a, r, CapacityMethod::Enumerate).has_value();
    const bool via_match = !check_perfect_capacity(a, r, CapacityMethod::Matching).has_value();
    const bool via_oracle = testsupport::region_oracle_feasible(a, r);
    INFO("structure with " << a.user_count() << " users, " << a.node_count << " nodes");
    CHECK(via_enum == via_match);
    CHECK(via_enum == via_oracle);
  }
}

TEST_CASE("feasibility is monotone and violations recompute") {
  std::mt19937_64 rng(556);
  for (int trial = 0; trial < 300; ++trial) {
    const AccessStructure a = testsupport::random_structure(rng, 4, 6);
    const RateTuple r = testsupport::random_rates(rng, a, a.node_count);
    const auto v = check_perfect_capacity(a, r, CapacityMethod::Enumerate);
    if (!v) {
      RateTuple smaller = r;
      for (auto& e : smaller.rates) {
        if (e > 0 && rng() % 2 == 0) --e;
      }
      CHECK_FALSE(check_perfect_capacity(a, smaller, CapacityMethod::Enumerate).has_value());
    } else {
      const auto [lhs, rhs] = recompute_violation(a, r, *v);
      CHECK(lhs == v->lhs);
      CHECK(rhs == v->rhs);
      CHECK(lhs > rhs);
    }
    const auto w = check_weak_capacity(a, r);
    if (w) {
      const auto [lhs, rhs] = recompute_violation(a, r, *w);
      CHECK(lhs > rhs);
    }
  }
}

TEST_CASE("perfect feasibility implies weak feasibility") {
  std::mt19937_64 rng(557);
  int covered = 0;
  for (int trial = 0; trial < 800; ++trial) {
    const AccessStructure a = testsupport::random_structure(rng, 4, 6);
    if (a.user_count() < 2) continue;
    const RateTuple r = testsupport::random_rates(rng, a, 2);
    if (check_perfect_capacity(a, r, CapacityMethod::Enumerate)) continue;
    ++covered;
    CHECK_FALSE(check_weak_capacity(a, r).has_value());
  }
  CHECK(covered > 50);
}
