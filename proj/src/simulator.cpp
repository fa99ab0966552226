#include "aoi/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <mutex>
#include <thread>

#include "aoi/errors.hpp"

namespace aoi {

namespace {

struct SlotView {
  long t;
  long delta;          // receiver AoI at the beginning of the slot
  ChannelState state;  // channel state during the slot
  long queue_len;      // after the slot's arrival, before its delivery
  long delivered_gen;  // generation slot of the delivered packet, or -1
  bool arrived;
};

// Slot order: sample AoI, process the arrival, draw erasure for the current
// state, deliver the in-service packet if not erased, advance the channel.
// Exactly three uniform draws per slot regardless of arrival model and
// policy, so equal seeds couple the sample paths across policies.
template <class Sink>
void run_core(const ChannelParams& params, const ArrivalModel& arrival,
              Policy policy, long slots, std::uint64_t seed, long queue_cap,
              Sink&& sink) {
  std::mt19937_64 rng(seed);
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  auto [pi_good, pi_bad] = params.stationary();
  ChannelState state =
      unit() < pi_good ? ChannelState::Good : ChannelState::Bad;

  const Bernoulli* bernoulli = std::get_if<Bernoulli>(&arrival);
  const Periodic* periodic = std::get_if<Periodic>(&arrival);
  const bool at_will = std::holds_alternative<GenerateAtWill>(arrival);
  const bool fcfs = policy == Policy::Fcfs;

  std::deque<long> queue;  // FCFS generation slots, oldest first
  long in_service = -1;    // pLGFS single-packet buffer
  long last_delivered_gen = 0;  // virtual packet at slot 0, so aoi(1) = 1
  bool want_fresh = true;       // generate-at-will FCFS pacing

  for (long t = 1; t <= slots; ++t) {
    double u_arrival = unit();
    long delta = t - last_delivered_gen;

    bool arrive;
    if (bernoulli) {
      arrive = u_arrival < bernoulli->lambda;
    } else if (periodic) {
      arrive = (t - 1) % periodic->period == 0;
    } else {
      arrive = fcfs ? want_fresh : true;
    }
    if (arrive) {
      want_fresh = false;
      if (fcfs) {
        queue.push_back(t);
        if (static_cast<long>(queue.size()) > queue_cap) {
          throw InstabilityError(
              "FCFS queue exceeded the configured cap of " +
              std::to_string(queue_cap) +
              " packets; the configuration is likely unstable");
        }
      } else {
        in_service = t;  // preempts whatever was in service
      }
    }
    long queue_len =
        fcfs ? static_cast<long>(queue.size()) : (in_service >= 0 ? 1 : 0);

    SlotSample step = sample_step(state, params, rng);
    long delivered_gen = -1;
    if (!step.erased) {
      if (fcfs && !queue.empty()) {
        delivered_gen = queue.front();
        queue.pop_front();
      } else if (!fcfs && in_service >= 0) {
        delivered_gen = in_service;
        in_service = -1;
      }
      if (delivered_gen >= 0) {
        last_delivered_gen = delivered_gen;
        if (at_will) want_fresh = true;
      }
    }

    sink(SlotView{t, delta, state, queue_len, delivered_gen, arrive});
    state = step.next;
  }
}

struct IterationStats {
  double mean_aoi = 0.0;
  long counted_slots = 0;
  long deliveries = 0;
  double system_time_sum = 0.0;
  std::vector<std::uint64_t> system_time_hist;
  std::vector<std::uint64_t> preemption_time_hist;
};

void bump(std::vector<std::uint64_t>& hist, long index) {
  if (index >= static_cast<long>(hist.size())) hist.resize(index + 1, 0);
  ++hist[static_cast<std::size_t>(index)];
}

IterationStats run_iteration(const SimConfig& config, std::uint64_t seed) {
  IterationStats stats;
  double aoi_sum = 0.0;
  std::vector<Delivery> deliveries;
  std::vector<long> arrivals;
  const bool track_preemption =
      config.collect_histograms && config.policy == Policy::Fcfs;
  run_core(config.params, config.arrival, config.policy,
           config.slots_per_run, seed, config.queue_cap,
           [&](const SlotView& slot) {
             if (slot.t <= config.warmup_slots) return;
             aoi_sum += static_cast<double>(slot.delta);
             ++stats.counted_slots;
             if (slot.delivered_gen >= 0) {
               ++stats.deliveries;
               long system_time = slot.t - slot.delivered_gen + 1;
               stats.system_time_sum += static_cast<double>(system_time);
               if (config.collect_histograms) {
                 bump(stats.system_time_hist, system_time);
                 deliveries.push_back({slot.delivered_gen, slot.t});
               }
             }
             if (track_preemption && slot.arrived) {
               arrivals.push_back(slot.t);
             }
           });
  stats.mean_aoi = aoi_sum / static_cast<double>(stats.counted_slots);
  if (track_preemption) {
    // Preemption time Y: offset of the last arrival inside the packet's
    // system-time window (gen, delivery], zero when there is none.
    for (const Delivery& d : deliveries) {
      auto it = std::upper_bound(arrivals.begin(), arrivals.end(),
                                 d.delivery_slot);
      long y = 0;
      if (it != arrivals.begin() && *(it - 1) > d.gen_slot) {
        y = *(it - 1) - d.gen_slot;
      }
      bump(stats.preemption_time_hist, y);
    }
  }
  return stats;
}

void merge_hist(std::vector<std::uint64_t>& into,
                const std::vector<std::uint64_t>& from) {
  if (from.size() > into.size()) into.resize(from.size(), 0);
  for (std::size_t i = 0; i < from.size(); ++i) into[i] += from[i];
}

}  // namespace

std::uint64_t iteration_seed(std::uint64_t base_seed, int iteration) {
  // splitmix64 finalizer over base_seed advanced by the golden-ratio
  // increment per iteration.
  std::uint64_t z =
      base_seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(iteration) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

AoITrace simulate_trajectory(const ChannelParams& params,
                             const ArrivalModel& arrival, Policy policy,
                             long slots, std::uint64_t seed) {
  AoITrace trace;
  trace.aoi.reserve(slots);
  trace.channel.reserve(slots);
  trace.queue_len.reserve(slots);
  run_core(params, arrival, policy, slots, seed, 1'000'000,
           [&](const SlotView& slot) {
             trace.aoi.push_back(slot.delta);
             trace.channel.push_back(slot.state);
             trace.queue_len.push_back(slot.queue_len);
             if (slot.arrived) trace.arrivals.push_back(slot.t);
             if (slot.delivered_gen >= 0) {
               trace.deliveries.push_back({slot.delivered_gen, slot.t});
             }
           });
  return trace;
}

SimResult run_experiment(const SimConfig& config) {
  if (config.iterations < 1) {
    throw DomainError("iterations must be >= 1");
  }
  if (config.slots_per_run <= config.warmup_slots) {
    throw DomainError("slots_per_run must exceed warmup_slots");
  }
  config.params.validate();

  std::vector<IterationStats> partials(config.iterations);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= config.iterations) return;
      try {
        partials[i] =
            run_iteration(config, iteration_seed(config.base_seed, i));
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  unsigned n_threads = std::max(1u, std::min<unsigned>(
      std::thread::hardware_concurrency(),
      static_cast<unsigned>(config.iterations)));
  std::vector<std::thread> pool;
  for (unsigned i = 0; i + 1 < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  // Deterministic reduction in iteration order.
  SimResult result;
  double sum = 0.0;
  long total_slots = 0, total_deliveries = 0;
  double system_time_sum = 0.0;
  for (const IterationStats& s : partials) {
    sum += s.mean_aoi;
    total_slots += s.counted_slots;
    total_deliveries += s.deliveries;
    system_time_sum += s.system_time_sum;
    if (config.collect_histograms) {
      merge_hist(result.system_time_hist, s.system_time_hist);
      merge_hist(result.preemption_time_hist, s.preemption_time_hist);
    }
  }
  result.mean_aoi = sum / config.iterations;
  if (config.iterations > 1) {
    double ss = 0.0;
    for (const IterationStats& s : partials) {
      double d = s.mean_aoi - result.mean_aoi;
      ss += d * d;
    }
    result.stderr_aoi = std::sqrt(ss / (config.iterations - 1)) /
                        std::sqrt(static_cast<double>(config.iterations));
  }
  result.throughput =
      static_cast<double>(total_deliveries) / static_cast<double>(total_slots);
  result.mean_system_time =
      total_deliveries > 0 ? system_time_sum / total_deliveries : 0.0;
  return result;
}

double measure_gap_decomposition(const ChannelParams& params, double lambda,
                                 long slots, std::uint64_t seed) {
  ArrivalModel arrival = Bernoulli{lambda};
  AoITrace fcfs =
      simulate_trajectory(params, arrival, Policy::Fcfs, slots, seed);

  double dy_sum = 0.0;
  long pairs = 0;
  for (std::size_t i = 0; i + 1 < fcfs.deliveries.size(); ++i) {
    const Delivery& d = fcfs.deliveries[i];
    long inter_delivery =
        fcfs.deliveries[i + 1].delivery_slot - d.delivery_slot;
    auto it = std::upper_bound(fcfs.arrivals.begin(), fcfs.arrivals.end(),
                               d.delivery_slot);
    long y = 0;
    if (it != fcfs.arrivals.begin() && *(it - 1) > d.gen_slot) {
      y = *(it - 1) - d.gen_slot;
    }
    dy_sum += static_cast<double>(inter_delivery) * static_cast<double>(y);
    ++pairs;
  }
  if (pairs == 0) return 0.0;
  return lambda * dy_sum / static_cast<double>(pairs);
}

}  // namespace aoi
