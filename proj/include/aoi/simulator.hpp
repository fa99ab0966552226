#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "aoi/analytic.hpp"
#include "aoi/channel.hpp"

namespace aoi {

struct SimConfig {
  ChannelParams params;
  ArrivalModel arrival;
  Policy policy = Policy::Fcfs;
  long slots_per_run = 10000;
  int iterations = 1000;
  std::uint64_t base_seed = 0;
  long warmup_slots = 0;
  bool collect_histograms = false;
  // Aborts with a diagnostic when an FCFS queue grows past this; catches
  // accidentally-unstable configurations.
  long queue_cap = 1'000'000;
};

struct SimResult {
  double mean_aoi = 0.0;
  double stderr_aoi = 0.0;
  double mean_system_time = 0.0;
  double throughput = 0.0;
  std::vector<std::uint64_t> system_time_hist;      // index = T in slots
  std::vector<std::uint64_t> preemption_time_hist;  // index = Y in slots
};

struct Delivery {
  long gen_slot;
  long delivery_slot;  // received at the end of this slot
};

/// One slot-level sample path. aoi[t-1] holds the receiver age at the
/// beginning of slot t; channel/queue_len are sampled after the slot's
/// arrival and before its delivery.
struct AoITrace {
  std::vector<long> aoi;
  std::vector<ChannelState> channel;
  std::vector<long> queue_len;
  std::vector<Delivery> deliveries;
  std::vector<long> arrivals;  // generation slots, ascending
};

/// Deterministic in (params, arrival, policy, slots, seed). The per-slot
/// random draw count is policy-independent, so two policies run from the
/// same seed share the arrival and channel sample paths.
AoITrace simulate_trajectory(const ChannelParams& params,
                             const ArrivalModel& arrival, Policy policy,
                             long slots, std::uint64_t seed);

/// Seed for iteration i, a splitmix-style mix of (base_seed, i). Fixed so
/// results are reproducible regardless of execution order or thread count.
std::uint64_t iteration_seed(std::uint64_t base_seed, int iteration);

/// Runs config.iterations independent trajectories (in parallel) and
/// averages the post-warmup time-average AoI; stderr is the across-iteration
/// sample deviation divided by sqrt(iterations).
SimResult run_experiment(const SimConfig& config);

/// Runs FCFS and pLGFS on the same Bernoulli arrival and channel sample
/// path and returns lambda * mean(D_i * Y_i) over the FCFS deliveries,
/// the empirical FCFS-vs-pLGFS AoI gap.
double measure_gap_decomposition(const ChannelParams& params, double lambda,
                                 long slots, std::uint64_t seed);

}  // namespace aoi
