#include <cmath>

#include "aoi/analytic.hpp"
#include "aoi/errors.hpp"
#include "aoi/periodic_fcfs.hpp"
#include "doctest.h"

using namespace aoi;

namespace {

const double kSqrt5 = std::sqrt(5.0);

// Total probability carried by the geometric-tail queue PMF.
double total_mass(const PeriodicFcfsSolution& s) {
  return s.p0_good + (s.p0_bad + s.p1_good) / (1.0 - s.beta);
}

// Residual of the n >= 1 queue balance equation with the geometric PMF
// plugged into both sides.
double residual(const ChannelParams& params, const PeriodicFcfsSolution& s,
                int n, ChannelState state) {
  CountDistTable table = good_count_distribution(params, s.period);
  double rhs = 0.0;
  for (ChannelState entry : {ChannelState::Good, ChannelState::Bad}) {
    for (int i = n - 1; i <= s.period + n - 1; ++i) {
      if (i < 0) continue;
      rhs += queue_pmf(s, i, entry) * table.at(i + 1 - n, entry, state);
    }
  }
  return queue_pmf(s, n, state) - rhs;
}

double residual_n0(const ChannelParams& params, const PeriodicFcfsSolution& s,
                   ChannelState state) {
  CountDistTable table = good_count_distribution(params, s.period);
  double rhs = 0.0;
  for (ChannelState entry : {ChannelState::Good, ChannelState::Bad}) {
    for (int i = 0; i <= s.period - 1; ++i) {
      double tail = 0.0;
      for (int j = i + 1; j <= s.period; ++j) tail += table.at(j, entry, state);
      rhs += queue_pmf(s, i, entry) * tail;
    }
  }
  return queue_pmf(s, 0, state) - rhs;
}

}  // namespace

TEST_CASE("beta for the memoryless K=3 case") {
  CHECK(std::abs(solve_beta(ChannelParams{0.5, 0.5}, 3) - (kSqrt5 - 2.0)) <=
        1e-9);
  CHECK_THROWS_AS(solve_beta(ChannelParams{0.5, 0.5}, 2), InstabilityError);
  double beta = solve_beta(ChannelParams{0.3, 0.6}, 3);
  CHECK(beta > 0.0);
  CHECK(beta < 1.0);
}

TEST_CASE("boundary probabilities for the memoryless K=3 case") {
  double beta = kSqrt5 - 2.0;
  BoundaryProbs b = solve_boundary(ChannelParams{0.5, 0.5}, 3, beta);
  CHECK(std::abs(b.p0_good - (3.0 - kSqrt5) / 2.0) <= 1e-9);
  CHECK(std::abs(b.p0_bad - (3.0 - kSqrt5) / 2.0) <= 1e-9);
  CHECK(std::abs(b.p1_good - (5.0 * kSqrt5 - 11.0) / 2.0) <= 1e-9);
}

TEST_CASE("full solve for the memoryless K=3 case") {
  PeriodicFcfsSolution s = aoi_periodic_fcfs(ChannelParams{0.5, 0.5}, 3);
  CHECK(std::abs(s.expected_latency - (3.0 + kSqrt5) / 2.0) <= 1e-9);
  CHECK(std::abs(s.aoi - ((3.0 + kSqrt5) / 2.0 + 1.0)) <= 1e-9);
  CHECK(s.aoi == s.expected_latency + (s.period - 1) / 2.0);
  CHECK(std::abs(total_mass(s) - 1.0) <= 1e-9);

  // the assembled closed-form AoI expression agrees with the E[T] route
  double p = 0.5, r = 0.5;
  double direct =
      s.p0_good +
      1.0 / (r * (1.0 - s.beta)) * (1.0 + (r + s.beta * p) / (1.0 - s.beta)) *
          s.p0_bad +
      1.0 / (1.0 - s.beta) * (1.0 + (p + r) / (r * (1.0 - s.beta))) *
          s.p1_good +
      (s.period - 1) / 2.0;
  CHECK(std::abs(direct - s.aoi) <= 1e-9);
}

TEST_CASE("memoryless oracle") {
  MemorylessSolution m3 = memoryless_oracle(3);
  CHECK(std::abs(m3.alpha - (kSqrt5 - 2.0)) <= 1e-9);
  CHECK(std::abs(m3.p0 - (3.0 - kSqrt5)) <= 1e-9);
  CHECK(std::abs(m3.p1 - (5.0 * kSqrt5 - 11.0)) <= 1e-9);

  MemorylessSolution m4 = memoryless_oracle(4);
  double a = m4.alpha;
  CHECK(std::abs(a * a * a + 5.0 * a * a + 11.0 * a - 1.0) <= 1e-9);
  CHECK(a == doctest::Approx(0.087).epsilon(0.05));

  for (int k = 3; k <= 10; ++k) {
    MemorylessSolution m = memoryless_oracle(k);
    CHECK(std::abs(m.p0 + m.p1 / (1.0 - m.alpha) - 1.0) <= 1e-9);
  }
  CHECK_THROWS_AS(memoryless_oracle(2), InstabilityError);
}

TEST_CASE("general solver reduces to the memoryless oracle") {
  ChannelParams params{0.5, 0.5};
  for (int k = 3; k <= 10; ++k) {
    MemorylessSolution m = memoryless_oracle(k);
    PeriodicFcfsSolution s = aoi_periodic_fcfs(params, k);
    CHECK(std::abs(s.beta - m.alpha) <= 1e-9);
    CHECK(std::abs(2.0 * s.p0_good - m.p0) <= 1e-9);
    CHECK(std::abs(2.0 * s.p1_good - m.p1) <= 1e-9);
    CHECK(std::abs(s.p0_good - s.p0_bad) <= 1e-9);  // symmetry
  }
}

TEST_CASE("queue PMF relations") {
  PeriodicFcfsSolution s = aoi_periodic_fcfs(ChannelParams{0.5, 0.5}, 3);
  CHECK(queue_pmf(s, 2, ChannelState::Bad) ==
        doctest::Approx(s.beta * s.beta * (3.0 - kSqrt5) / 2.0)
            .epsilon(1e-9));
  CHECK(queue_pmf(s, 1, ChannelState::Bad) /
            queue_pmf(s, 0, ChannelState::Bad) ==
        doctest::Approx(s.beta).epsilon(1e-12));
  double mass = queue_pmf(s, 0, ChannelState::Good);
  for (int n = 0; n <= 2000; ++n) {
    mass += queue_pmf(s, n, ChannelState::Bad);
    if (n >= 1) mass += queue_pmf(s, n, ChannelState::Good);
  }
  CHECK(std::abs(mass - 1.0) <= 1e-9);
  CHECK_THROWS_AS(queue_pmf(s, -1, ChannelState::Good), DomainError);
}

TEST_CASE("expected latency limits") {
  // always-good channel: every packet leaves in one slot
  CHECK(expected_latency(ChannelParams{0.0, 1.0}, 2) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(expected_latency(ChannelParams{0.0, 1.0}, 7) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // large K: the queue empties and E[T] -> 1 + p/(r(p+r))
  CHECK(std::abs(expected_latency(ChannelParams{0.5, 0.5}, 50) - 2.0) <=
        1e-3);
}

TEST_CASE("AoI converges to the pLGFS value as K grows") {
  ChannelParams params{0.5, 0.5};
  PeriodicFcfsSolution s = aoi_periodic_fcfs(params, 50);
  CHECK(std::abs((s.aoi - (50 - 1) / 2.0) - 2.0) <= 1e-3);
  for (int k : {3, 5, 10, 25}) {
    CHECK(aoi_periodic_fcfs(params, k).aoi >=
          aoi_plgfs(params, Periodic{k}));
  }
}

TEST_CASE("geometric ansatz satisfies the balance recursion") {
  for (ChannelParams params :
       {ChannelParams{0.3, 0.6}, ChannelParams{0.2, 0.5},
        ChannelParams{0.6, 0.7}}) {
    for (int k : {3, 4, 5}) {
      PeriodicFcfsSolution s = aoi_periodic_fcfs(params, k);
      CHECK(std::abs(total_mass(s) - 1.0) <= 1e-9);
      CHECK(std::abs(residual_n0(params, s, ChannelState::Good)) <= 1e-9);
      CHECK(std::abs(residual_n0(params, s, ChannelState::Bad)) <= 1e-9);
      CHECK(std::abs(residual(params, s, 2, ChannelState::Good)) <= 1e-9);
      CHECK(std::abs(residual(params, s, 2, ChannelState::Bad)) <= 1e-9);
      // p_{1,B} = beta p_{0,B} by construction of the PMF
      CHECK(queue_pmf(s, 1, ChannelState::Bad) ==
            doctest::Approx(s.beta * s.p0_bad).epsilon(1e-12));
    }
  }
}

TEST_CASE("AoI is increasing in eta for fixed K") {
  double prev = -1.0;
  for (double eta = 0.0; eta <= 0.8; eta += 0.1) {
    double value = aoi_periodic_fcfs(make_symmetric(eta), 3).aoi;
    CHECK(value > prev);
    prev = value;
  }
}

TEST_CASE("instability and erasure guards") {
  CHECK_THROWS_AS(aoi_periodic_fcfs(ChannelParams{0.5, 0.5}, 2),
                  InstabilityError);
  CHECK_THROWS_AS(aoi_periodic_fcfs(ChannelParams{0.3, 0.1}, 4),
                  InstabilityError);  // (p+r)/r = 4
  CHECK_THROWS_AS(
      aoi_periodic_fcfs(ChannelParams{0.5, 0.5, 0.2, 0.8}, 3),
      UnsupportedRegimeError);
  CHECK_THROWS_AS(aoi_periodic_fcfs(ChannelParams{0.5, 0.0}, 3),
                  DivergenceError);
}
