#include <doctest.h>

#include <cmath>

#include "logdos/analysis.hpp"
#include "logdos/bloom.hpp"
#include "logdos/rng.hpp"

using namespace logdos;

namespace {

// Enumerates every combination of per-AS false-positive outcomes along an
// n-AS path; the AS at position i checks a prefix of length i.
double survival_by_enumeration(StrategyKind kind, double p, std::size_t n) {
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
    double prob = 1.0;
    bool survives = true;
    for (std::size_t i = 0; i < n; ++i) {
      const bool fp = (mask >> i) & 1;
      prob *= fp ? p : 1.0 - p;
      if (should_log(kind, i) && !fp) survives = false;
    }
    if (survives) total += prob;
  }
  return total;
}

// Periods of length T; learning events arrive as a Poisson process and a
// path is usable from the first event in a period until the period ends.
double dpid_share_by_simulation(double lambda_per_min, double t_s, std::uint64_t periods) {
  Rng rng(2718);
  const double rate = lambda_per_min / 60.0;
  double usable = 0.0;
  for (std::uint64_t i = 0; i < periods; ++i) {
    const double first = exponential(rng, rate);
    if (first < t_s) usable += t_s - first;
  }
  return usable / (t_s * static_cast<double>(periods));
}

}  // namespace

TEST_CASE("pass probabilities") {
  CHECK(pr_attack({StrategyKind::Comprehensive, 0.01, 3}) == doctest::Approx(1e-6));
  CHECK(pr_attack({StrategyKind::Odd, 0.01, 3}) == doctest::Approx(1e-2));
  CHECK(pr_attack({StrategyKind::Even, 0.01, 3}) == doctest::Approx(1e-4));
  CHECK(pr_attack({StrategyKind::NoDefense, 0.01, 3}) == 1.0);
  CHECK(pr_attack({StrategyKind::Odd, 0.1, 1}) == 1.0);
  CHECK(pr_attack({StrategyKind::Even, 0.1, 1}) == doctest::Approx(0.1));
  CHECK_THROWS_AS(pr_attack({StrategyKind::Dynamic, 0.1, 3}), std::invalid_argument);
  CHECK_THROWS_AS(pr_attack({StrategyKind::DPid, 0.1, 3}), std::invalid_argument);
  CHECK_THROWS_AS(pr_attack({StrategyKind::Comprehensive, 1.0, 3}), std::invalid_argument);
  CHECK_THROWS_AS(pr_attack({StrategyKind::Comprehensive, 0.1, 0}), std::invalid_argument);
}

TEST_CASE("verifying counts partition the path") {
  for (std::size_t n = 1; n < 40; ++n) {
    CHECK(verifying_count(StrategyKind::Odd, n) + verifying_count(StrategyKind::Even, n) ==
          verifying_count(StrategyKind::Comprehensive, n));
  }
}

TEST_CASE("closed form matches exhaustive enumeration") {
  for (auto kind : {StrategyKind::Comprehensive, StrategyKind::Odd, StrategyKind::Even}) {
    for (double p : {0.05, 0.3, 0.7}) {
      for (std::size_t n = 1; n <= 12; ++n) {
        CAPTURE(n);
        CHECK(pr_attack({kind, p, n}) ==
              doctest::Approx(survival_by_enumeration(kind, p, n)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("reach fraction averages over paths") {
  const std::vector<std::size_t> lengths{3, 5};
  CHECK(expected_reach_fraction(lengths, StrategyKind::Comprehensive, 0.1) ==
        doctest::Approx(5.05e-4));
  CHECK_THROWS_AS(expected_reach_fraction(std::span<const std::size_t>{},
                                          StrategyKind::Comprehensive, 0.1),
                  std::invalid_argument);

  auto t = Topology::from_edges({{AsId{0}, AsId{1}}, {AsId{1}, AsId{2}}, {AsId{2}, AsId{3}}});
  const std::vector<AsId> attackers{AsId{0}, AsId{2}};
  // paths of 4 and 2 ASes
  CHECK(expected_reach_fraction(t, attackers, AsId{3}, StrategyKind::Comprehensive, 0.5) ==
        doctest::Approx((1.0 / 16 + 1.0 / 4) / 2));
}

TEST_CASE("stronger defenses let less through") {
  for (double p : {0.01, 0.1, 0.5}) {
    for (std::size_t n = 2; n < 12; ++n) {
      const double comp = pr_attack({StrategyKind::Comprehensive, p, n});
      const double odd = pr_attack({StrategyKind::Odd, p, n});
      const double even = pr_attack({StrategyKind::Even, p, n});
      CHECK(comp <= even);
      CHECK(even <= odd);
      CHECK(odd <= 1.0);
    }
  }
}

TEST_CASE("storage curve") {
  const std::vector<std::uint64_t> ns{500'000, 1'000'000, 2'000'000};
  const std::vector<double> ps{1e-4, 1e-2};
  auto rows = storage_curve(ns, ps, 3);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].n == 500'000);
  CHECK(rows[1].p == 1e-2);
  CHECK(rows[4].m_bits == 126'242'319);
  for (const auto& r : rows) CHECK(r.m_bits == size_for(r.n, r.p, 3));
  // more entries cost more, a looser target costs less
  CHECK(rows[2].m_bits > rows[0].m_bits);
  CHECK(rows[0].m_bits > rows[1].m_bits);
  CHECK(std::abs(static_cast<double>(rows[4].m_bits) - 4.0 * rows[0].m_bits) <= 4.0);
}

TEST_CASE("D-PID closed form") {
  CHECK(dpid_closed_form(8, 60, 2000) == doctest::Approx(1750.08).epsilon(1e-5));
  CHECK(dpid_closed_form(1, 60, 2000) == doctest::Approx(735.76).epsilon(1e-5));
  CHECK(dpid_valid_share(0.0) == 0.0);
  CHECK(dpid_valid_share(1e-10) == doctest::Approx(5e-11));
  CHECK(dpid_valid_share(1e-6) == doctest::Approx(1e-6 / 2).epsilon(1e-5));
  CHECK_THROWS_AS(dpid_valid_share(-1), std::invalid_argument);
  CHECK_THROWS_AS(dpid_closed_form(1, 0, 10), std::invalid_argument);

  double prev = 0.0;
  for (double t : {30.0, 60.0, 120.0, 240.0}) {
    const double v = dpid_closed_form(2, t, 1000);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("D-PID closed form agrees with simulated periods") {
  for (double lambda : {0.5, 2.0, 8.0}) {
    for (double t : {60.0, 240.0}) {
      CAPTURE(lambda);
      CAPTURE(t);
      const double sim = dpid_share_by_simulation(lambda, t, 200'000);
      CHECK(dpid_valid_share(lambda * t / 60.0) == doctest::Approx(sim).epsilon(0.01));
    }
  }
}
