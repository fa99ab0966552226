#pragma once

#include "aoi/channel.hpp"

namespace aoi {

/// Solved queue/AoI quantities for periodic arrivals under FCFS.
/// Queue-occupancy probabilities follow geometric tails:
///   p_{n,B} = beta^n p0_bad (n >= 0),
///   p_{n,G} = beta^{n-1} p1_good (n >= 1), with p_{0,G} = p0_good.
struct PeriodicFcfsSolution {
  int period;
  double beta;
  double p0_good;
  double p0_bad;
  double p1_good;
  double expected_latency;
  double aoi;
};

struct MemorylessSolution {
  double alpha;
  double p0;
  double p1;
};

struct BoundaryProbs {
  double p0_good;
  double p0_bad;
  double p1_good;
};

/// Utilization (p+r)/(rK); stable iff < 1 (mean service time 1 + p/r < K).
double periodic_utilization(const ChannelParams& params, int period);

/// Geometric tail ratio of the queue-length probabilities: the unique root
/// in (0,1) of the cross-multiplied ratio equation in the count-distribution
/// polynomials. Returns 0 for p = 0 (the queue never builds up).
double solve_beta(const ChannelParams& params, int period);

/// Boundary probabilities (p0_good, p0_bad, p1_good) from the 3x3 linear
/// system: the two n = 0 balance equations plus normalization.
BoundaryProbs solve_boundary(const ChannelParams& params, int period,
                             double beta);

/// p_{n,s} extended from the boundary values by the geometric tails.
double queue_pmf(const PeriodicFcfsSolution& solution, int n, ChannelState s);

/// E[T] = sum_n (t_{n,G} p_{n,G} + t_{n,B} p_{n,B}) with
/// t_{n,G} = 1 + n(1 + p/r) and t_{n,B} = 1 + 1/r + n(1 + p/r), evaluated
/// with the closed-form geometric sums.
double expected_latency(const ChannelParams& params, int period);

/// Full numerical pipeline: count table -> beta -> boundary -> latency ->
/// AoI = E[T] + (K-1)/2.
PeriodicFcfsSolution aoi_periodic_fcfs(const ChannelParams& params,
                                       int period);

/// Closed-form p = r = 0.5 solution: alpha is the root in (0,1) of the
/// binomial polynomial, p0 and p1 follow from the two boundary equations.
/// Under symmetry the general solver satisfies beta = alpha,
/// 2 p0_good = p0 and 2 p1_good = p1. Throws InstabilityError for K <= 2.
MemorylessSolution memoryless_oracle(int period);

}  // namespace aoi
