#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "addercap/certify.hpp"
#include "oracles.hpp"

using addercap::AscentTrace;
using addercap::binomial_entropy;
using addercap::binomial_entropy_scan;
using addercap::certify_lindstrom;
using addercap::curvature_scan;
using addercap::log_concavity_margin;
using addercap::pairwise_equalization_ascent;
using addercap::Pmf;
using addercap::pmf_dp;
using addercap::ProbVector;

TEST_CASE("log-concavity margin at the fair pair") {
  const auto report = log_concavity_margin(ProbVector({0.5, 0.5}));
  // PMF (0.25, 0.5, 0.25): only k = 1 is checkable, margin 0.5^2 - 0.25^2.
  CHECK(report.checked_count == 1);
  CHECK(report.skipped_count == 0);
  CHECK(report.witness_k == 1);
  CHECK_THAT(report.min_margin, Catch::Matchers::WithinAbs(0.1875, 1e-15));
  CHECK(report.strict());
}

TEST_CASE("degenerate points skip undefined triples instead of failing") {
  const auto report = log_concavity_margin(ProbVector({1.0, 1.0}));
  CHECK(report.checked_count == 0);
  CHECK(report.skipped_count == 1);
  CHECK_FALSE(report.strict());
}

TEST_CASE("log-concavity margin is strictly positive on the interior") {
  addercap::Rng rng = addercap::seeded_rng(2001);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng() % 11);
    const auto report = log_concavity_margin(addercap::sample_interior(n, rng));
    REQUIRE(report.checked_count + 1 == n);  // all interior ks checkable
    REQUIRE(report.min_margin > 0.0);
  }
}

TEST_CASE("curvature scan certifies strict concavity") {
  const auto fair = curvature_scan(ProbVector({0.5, 0.5}));
  CHECK(fair.max_curvature < 0.0);
  CHECK(fair.witness.l == 0);
  CHECK(fair.witness.m == 1);

  const auto mixed = curvature_scan(ProbVector({0.1, 0.9, 0.5}));
  CHECK(mixed.max_curvature < 0.0);
  // Cross-check the reported worst pair against the 1-D oracle.
  const std::vector<double> raw{0.1, 0.9, 0.5};
  const double fd =
      oracles::fd_line_curvature(raw, mixed.witness.l, mixed.witness.m);
  const double analytic =
      directional_second_derivative(ProbVector(raw),
                                    addercap::Direction(mixed.witness.l, mixed.witness.m))
          .value();
  CHECK_THAT(analytic, Catch::Matchers::WithinAbs(fd, 1e-5));

  CHECK_THROWS_AS(curvature_scan(ProbVector({0.0, 0.5})), std::domain_error);
  CHECK_THROWS_AS(curvature_scan(ProbVector({0.5})), std::invalid_argument);
}

TEST_CASE("pairwise equalization ascent reaches the constant mean vector") {
  const AscentTrace trace = pairwise_equalization_ascent(ProbVector({0.2, 0.8}), 1e-10);
  CHECK(trace.converged);
  REQUIRE(trace.final_p.size() == 2);
  CHECK_THAT(trace.final_p[0], Catch::Matchers::WithinAbs(0.5, 1e-10));
  CHECK_THAT(trace.final_p[1], Catch::Matchers::WithinAbs(0.5, 1e-10));
  // Start entropy of PMF (0.16, 0.68, 0.16), frozen from the enumeration
  // oracle; end entropy is the fair two-trial value.
  CHECK_THAT(trace.iterates.front().entropy_bits,
             Catch::Matchers::WithinAbs(1.2243814577244939, 1e-13));
  CHECK_THAT(trace.iterates.front().entropy_bits,
             Catch::Matchers::WithinAbs(
                 addercap::entropy_bits(addercap::pmf_bruteforce(ProbVector({0.2, 0.8}))),
                 1e-15));
  CHECK_THAT(trace.iterates.back().entropy_bits, Catch::Matchers::WithinAbs(1.5, 1e-12));

  const AscentTrace still = pairwise_equalization_ascent(ProbVector({0.5, 0.5, 0.5}), 1e-10);
  CHECK(still.converged);
  CHECK(still.steps() == 0);
  CHECK(still.final_p == ProbVector({0.5, 0.5, 0.5}));

  const AscentTrace spread = pairwise_equalization_ascent(ProbVector({0.1, 0.5, 0.9}), 1e-10);
  CHECK(spread.converged);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK_THAT(spread.final_p[i], Catch::Matchers::WithinAbs(0.5, 1e-9));
  }

  CHECK_THROWS_AS(pairwise_equalization_ascent(ProbVector({0.0, 0.5}), 1e-10),
                  std::domain_error);
  CHECK_THROWS_AS(pairwise_equalization_ascent(ProbVector({0.2, 0.8}), 0.0), std::domain_error);
}

TEST_CASE("ascent entropy is non-decreasing and the mean is conserved") {
  addercap::Rng rng = addercap::seeded_rng(2002);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng() % 9);
    const ProbVector p0 = addercap::sample_interior(n, rng);
    const AscentTrace trace = pairwise_equalization_ascent(p0, 1e-10);
    REQUIRE(trace.converged);
    for (std::size_t i = 1; i < trace.iterates.size(); ++i) {
      CHECK(trace.iterates[i].entropy_bits >= trace.iterates[i - 1].entropy_bits - 1e-12);
      const auto& prev = trace.iterates[i - 1].p;
      const auto& next = trace.iterates[i].p;
      const double sum_prev = std::accumulate(prev.begin(), prev.end(), 0.0);
      const double sum_next = std::accumulate(next.begin(), next.end(), 0.0);
      CHECK_THAT(sum_next, Catch::Matchers::WithinAbs(sum_prev, 1e-14));
    }
    const double mean =
        std::accumulate(p0.begin(), p0.end(), 0.0) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK_THAT(trace.final_p[i], Catch::Matchers::WithinAbs(mean, 1e-9));
    }
  }
}

TEST_CASE("binomial entropy grid scan peaks at one half") {
  const auto one = binomial_entropy_scan(1, 1001);
  CHECK(one.argmax_p == 0.5);
  CHECK(one.max_value == 1.0);

  const auto three = binomial_entropy_scan(3, 1001);
  CHECK(three.argmax_p == 0.5);
  CHECK_THAT(three.max_value, Catch::Matchers::WithinAbs(1.8112781244591329, 1e-12));

  const auto two = binomial_entropy_scan(2, 1001);
  CHECK(two.argmax_p == 0.5);
  CHECK_THAT(two.max_value, Catch::Matchers::WithinAbs(1.5, 1e-12));

  CHECK_THROWS_AS(binomial_entropy_scan(3, 1000), std::domain_error);
  CHECK_THROWS_AS(binomial_entropy_scan(3, 1), std::domain_error);
}

TEST_CASE("grid scan finds the exact argmax for every n up to 30") {
  for (std::size_t n = 1; n <= 30; ++n) {
    const auto scan = binomial_entropy_scan(n, 1001);
    REQUIRE(scan.argmax_p == 0.5);
    REQUIRE_THAT(scan.max_value,
                 Catch::Matchers::WithinAbs(binomial_entropy(n, 0.5), 1e-12));
  }
}

TEST_CASE("lindstrom certificate converges from random starts") {
  const auto cert = certify_lindstrom(4, 100, 7);
  CHECK(cert.all_converged);
  CHECK(cert.worst_gap_bits >= 0.0);
  CHECK(cert.worst_gap_bits <= binomial_entropy(4, 0.5));
  CHECK(cert.max_start_excess <= 1e-12);
  CHECK(cert.worst_final_dist <= 1e-6);
  CHECK(cert.worst_final_entropy_err <= 1e-9);
  REQUIRE(cert.worst_final_p.size() == 4);

  const auto tiny = certify_lindstrom(1, 10, 3);
  CHECK(tiny.all_converged);
  CHECK_THAT(tiny.worst_final_p[0], Catch::Matchers::WithinAbs(0.5, 1e-6));
  CHECK_THAT(binomial_entropy(1, tiny.worst_final_p[0]),
             Catch::Matchers::WithinAbs(1.0, 1e-9));

  CHECK_THROWS_AS(certify_lindstrom(0, 10, 1), std::domain_error);
  CHECK_THROWS_AS(certify_lindstrom(3, 0, 1), std::domain_error);
}

TEST_CASE("the conjectured maximizer itself has zero entropy gap") {
  for (std::size_t n = 1; n <= 10; ++n) {
    const double via_dp = addercap::entropy_bits(pmf_dp(ProbVector(n, 0.5)));
    CHECK(via_dp == binomial_entropy(n, 0.5));
  }
}

TEST_CASE("random entropies never exceed the all-half value") {
  addercap::Rng rng = addercap::seeded_rng(2003);
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng() % 10);
    const ProbVector p = addercap::sample_interior(n, rng);
    REQUIRE(addercap::entropy_bits(pmf_dp(p)) <= binomial_entropy(n, 0.5) + 1e-12);
  }
}

TEST_CASE("certificate agrees with the grid scan") {
  for (const std::size_t n : {2, 5, 8}) {
    const auto cert = certify_lindstrom(n, 20, 17);
    const auto scan = binomial_entropy_scan(n, 1001);
    REQUIRE(cert.all_converged);
    CHECK_THAT(scan.max_value,
               Catch::Matchers::WithinAbs(binomial_entropy(n, 0.5), 1e-12));
    // Final ascent entropies sit within 1e-9 of the scan maximum.
    CHECK(cert.worst_final_entropy_err <= 1e-9);
  }
}

TEST_CASE("parallel certification is bit-identical to sequential") {
  const auto seq = certify_lindstrom(5, 64, 123, false);
  const auto par = certify_lindstrom(5, 64, 123, true);
  CHECK(addercap::to_json(seq) == addercap::to_json(par));
  CHECK(seq.worst_final_dist == par.worst_final_dist);
  CHECK(seq.max_start_excess == par.max_start_excess);
}

TEST_CASE("certificate JSON carries the contract fields") {
  const auto cert = certify_lindstrom(2, 3, 11);
  const std::string json = addercap::to_json(cert);
  CHECK(json.find("\"n\": 2") != std::string::npos);
  CHECK(json.find("\"trials\": 3") != std::string::npos);
  CHECK(json.find("\"seed\": 11") != std::string::npos);
  CHECK(json.find("\"worst_gap_bits\": ") != std::string::npos);
  CHECK(json.find("\"all_converged\": true") != std::string::npos);
  CHECK(json.find("\"worst_final_p\": [") != std::string::npos);
}
