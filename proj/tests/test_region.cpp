#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "addercap/capacity_region.hpp"
#include "addercap/sampling.hpp"

using addercap::build_region;
using addercap::CapacityRegion;
using addercap::conditional_mutual_info;
using addercap::ExportFormat;
using addercap::is_member;
using addercap::is_member_naive;
using addercap::ProbVector;
using addercap::RateTuple;
using addercap::sum_rate_bound;

namespace {

RateTuple random_rates(std::size_t s, addercap::Rng& rng, double hi = 1.2) {
  std::vector<double> r(s);
  for (double& x : r) x = addercap::uniform_in(rng, 0.0, hi);
  return RateTuple(std::move(r));
}

}  // namespace

TEST_CASE("region bounds for one, two and three users") {
  // The pairwise bound is H_2(1/2); confirm the constant against the
  // enumeration-oracle entropy before trusting it anywhere else.
  const double h2 =
      addercap::entropy_bits(addercap::pmf_bruteforce(ProbVector({0.5, 0.5})));
  CHECK(h2 == 1.5);

  const CapacityRegion one = build_region(1);
  REQUIRE(one.constraints().size() == 1);
  CHECK(one.bound_for_size(1) == 1.0);

  const CapacityRegion two = build_region(2);
  CHECK(two.bound_for_size(1) == 1.0);
  CHECK_THAT(two.bound_for_size(2), Catch::Matchers::WithinAbs(1.5, 1e-14));

  const CapacityRegion three = build_region(3);
  CHECK(three.bound_for_size(1) == 1.0);
  CHECK_THAT(three.bound_for_size(2), Catch::Matchers::WithinAbs(1.5, 1e-14));
  CHECK_THAT(three.bound_for_size(3),
             Catch::Matchers::WithinAbs(1.8112781244591329, 1e-12));

  CHECK_THROWS_AS(build_region(0), std::domain_error);
  CHECK_THROWS_AS(build_region(65), std::domain_error);
}

TEST_CASE("sum rate bound") {
  CHECK(sum_rate_bound(1) == 1.0);
  CHECK_THAT(sum_rate_bound(2), Catch::Matchers::WithinAbs(1.5, 1e-14));
  CHECK_THAT(sum_rate_bound(3),
             Catch::Matchers::WithinAbs(3.0 - 0.75 * std::log2(3.0), 1e-13));
  CHECK_THROWS_AS(sum_rate_bound(0), std::domain_error);
}

TEST_CASE("membership by sorted prefix sums") {
  const CapacityRegion two = build_region(2);
  CHECK(is_member(two, RateTuple({1.0, 0.4})).member);

  const auto reject = is_member(two, RateTuple({0.8, 0.8}));
  CHECK_FALSE(reject.member);
  CHECK(reject.violated_size == 2);
  CHECK_THAT(reject.violation, Catch::Matchers::WithinAbs(0.1, 1e-12));

  CHECK(is_member(build_region(3), RateTuple({0.0, 0.0, 0.0})).member);

  CHECK_THROWS_AS(is_member(two, RateTuple({0.5})), std::invalid_argument);
  CHECK_THROWS_AS(RateTuple({-0.1, 0.5}), std::domain_error);
}

TEST_CASE("naive membership oracle on the examples") {
  const CapacityRegion three = build_region(3);
  CHECK(is_member_naive(three, RateTuple({0.5, 0.5, 0.5})));
  CHECK(is_member(three, RateTuple({0.5, 0.5, 0.5})).member);
  CHECK_FALSE(is_member_naive(three, RateTuple({0.7, 0.7, 0.7})));
  CHECK_FALSE(is_member(three, RateTuple({0.7, 0.7, 0.7})).member);

  addercap::Rng rng = addercap::seeded_rng(1);
  CHECK_THROWS_AS(is_member_naive(build_region(21), random_rates(21, rng)), std::domain_error);
}

TEST_CASE("prefix-sum membership agrees with subset enumeration") {
  addercap::Rng rng = addercap::seeded_rng(3001);
  for (std::size_t s = 2; s <= 8; ++s) {
    const CapacityRegion region = build_region(s);
    for (int trial = 0; trial < 10000; ++trial) {
      const RateTuple r = random_rates(s, rng);
      REQUIRE(is_member(region, r).member == is_member_naive(region, r));
    }
  }
}

TEST_CASE("bounds are strictly increasing, capped by j, with shrinking increments") {
  const CapacityRegion region = build_region(64);
  double prev = 0.0;
  for (std::size_t j = 1; j <= 64; ++j) {
    const double bound = region.bound_for_size(j);
    REQUIRE(bound > prev);
    REQUIRE(bound <= static_cast<double>(j));
    if (j > 1) REQUIRE(bound - prev < 1.0);
    prev = bound;
  }
}

TEST_CASE("membership is downward closed and permutation symmetric") {
  addercap::Rng rng = addercap::seeded_rng(3002);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t s = 2 + static_cast<std::size_t>(rng() % 5);
    const CapacityRegion region = build_region(s);
    const RateTuple r = random_rates(s, rng);

    std::vector<double> shrunk(r.values().begin(), r.values().end());
    for (double& x : shrunk) x *= addercap::uniform_unit(rng);
    if (is_member(region, r).member) {
      CHECK(is_member(region, RateTuple(shrunk)).member);
    }

    std::vector<double> shuffled(r.values().begin(), r.values().end());
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(is_member(region, RateTuple(shuffled)).member == is_member(region, r).member);
  }
}

TEST_CASE("conditional mutual information on fair inputs") {
  const ProbVector fair({0.5, 0.5});
  const auto single = conditional_mutual_info(fair, {0});
  CHECK(single.value() == 1.0);
  CHECK_THAT(single.conditional_expansion, Catch::Matchers::WithinAbs(1.0, 1e-12));

  const auto both = conditional_mutual_info(fair, {0, 1});
  CHECK_THAT(both.value(), Catch::Matchers::WithinAbs(1.5, 1e-14));

  const auto mixed = conditional_mutual_info(ProbVector({0.5, 0.3, 0.5}), {0, 1});
  CHECK_THAT(mixed.closed_form,
             Catch::Matchers::WithinAbs(mixed.conditional_expansion, 1e-10));

  CHECK_THROWS_AS(conditional_mutual_info(fair, {}), std::invalid_argument);
  CHECK_THROWS_AS(conditional_mutual_info(fair, {2}), std::invalid_argument);
  CHECK_THROWS_AS(conditional_mutual_info(fair, {0, 0}), std::invalid_argument);
}

TEST_CASE("the two mutual information routes agree on random instances") {
  addercap::Rng rng = addercap::seeded_rng(3003);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t s = 2 + static_cast<std::size_t>(rng() % 9);
    const ProbVector p = addercap::sample_interior(s, rng, 0.0, 1.0);
    std::vector<std::size_t> subset;
    for (std::size_t i = 0; i < s; ++i) {
      if (rng() % 2 == 0) subset.push_back(i);
    }
    if (subset.empty()) subset.push_back(rng() % s);
    const auto mi = conditional_mutual_info(p, subset);
    REQUIRE_THAT(mi.closed_form,
                 Catch::Matchers::WithinAbs(mi.conditional_expansion, 1e-10));
  }
}

TEST_CASE("mutual information is maximized by the all-half vector") {
  addercap::Rng rng = addercap::seeded_rng(3004);
  const std::size_t s = 6;
  const std::vector<std::size_t> subset{0, 2, 3};
  const double bound = addercap::binomial_entropy(subset.size(), 0.5);
  for (int trial = 0; trial < 200; ++trial) {
    const ProbVector p = addercap::sample_interior(s, rng, 0.0, 1.0);
    REQUIRE(conditional_mutual_info(p, subset).value() <= bound + 1e-12);
  }
  const double at_half = conditional_mutual_info(ProbVector(s, 0.5), subset).value();
  CHECK_THAT(at_half, Catch::Matchers::WithinAbs(bound, 1e-12));
}

TEST_CASE("region export renders csv and json byte-stably") {
  const std::string csv1 = export_region(build_region(1), ExportFormat::csv);
  CHECK(csv1 == "subset_size,bound_bits\n1,1\n");

  const std::string csv2 = export_region(build_region(2), ExportFormat::csv);
  CHECK(csv2 == "subset_size,bound_bits\n1,1\n2,1.5\n");

  const std::string json3 = export_region(build_region(3), ExportFormat::json);
  CHECK(json3.find("\"s\": 3") != std::string::npos);
  CHECK(json3.find("1.8112781244591329") != std::string::npos);
}

TEST_CASE("export round-trips through both parsers") {
  for (const std::size_t s : {1, 2, 3, 7, 20, 64}) {
    const CapacityRegion region = build_region(s);
    CHECK(addercap::parse_region_json(export_region(region, ExportFormat::json)) == region);
    CHECK(addercap::parse_region_csv(export_region(region, ExportFormat::csv)) == region);
  }
}
