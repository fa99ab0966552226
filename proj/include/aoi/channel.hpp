#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace aoi {

enum class ChannelState : int { Good = 0, Bad = 1 };

constexpr ChannelState flipped(ChannelState s) {
  return s == ChannelState::Good ? ChannelState::Bad : ChannelState::Good;
}

/// Two-state Gilbert-Elliott channel. p is the per-slot G->B transition
/// probability, r the B->G one; pe_good/pe_bad are the per-state erasure
/// probabilities. Defaults are the 0/1 erasure model the closed forms assume.
struct ChannelParams {
  double p;
  double r;
  double pe_good = 0.0;
  double pe_bad = 1.0;

  /// Channel memory eta = 1 - p - r. May be negative for anti-persistent
  /// chains; callers that need eta in [0,1) must check themselves.
  double memory() const { return 1.0 - p - r; }

  /// (pi_good, pi_bad) = (r/(p+r), p/(p+r)). Throws DegenerateChainError
  /// when p + r = 0.
  std::pair<double, double> stationary() const;

  /// pi_good * pe_good + pi_bad * pe_bad.
  double average_erasure() const;

  double erasure_prob(ChannelState s) const {
    return s == ChannelState::Good ? pe_good : pe_bad;
  }

  /// Probability of leaving the given state in one slot.
  double leave_prob(ChannelState s) const {
    return s == ChannelState::Good ? p : r;
  }

  /// One-slot transition probability s -> s2.
  double transition(ChannelState s, ChannelState s2) const {
    double leave = leave_prob(s);
    return s2 == s ? 1.0 - leave : leave;
  }

  bool zero_one_erasure() const { return pe_good == 0.0 && pe_bad == 1.0; }

  /// Throws DomainError unless all probabilities are in [0,1] and p + r > 0.
  void validate() const;
};

/// Symmetric channel with memory eta: p = r = (1-eta)/2, erasures 0/1.
/// Throws DomainError unless 0 <= eta < 1.
ChannelParams make_symmetric(double eta);

struct SlotSample {
  ChannelState next;
  bool erased;
};

/// One channel slot: the erasure is drawn with the current state's erasure
/// probability, then the state advances. Consumes exactly two draws.
SlotSample sample_step(ChannelState state, const ChannelParams& params,
                       std::mt19937_64& rng);

/// Dense table of P(K, n, s'|s): probability of n good states among K
/// consecutive slots, with the entry slot (state s) counted toward n and the
/// exit slot (slot K+1, state s') not counted.
class CountDistTable {
 public:
  explicit CountDistTable(int horizon);

  int horizon() const { return horizon_; }

  double at(int n, ChannelState entry, ChannelState exit) const {
    return data_[index(n, entry, exit)];
  }
  double& at(int n, ChannelState entry, ChannelState exit) {
    return data_[index(n, entry, exit)];
  }

  /// Sum over n and s' for a fixed entry state; 1 for a valid table.
  double row_sum(ChannelState entry) const;

 private:
  std::size_t index(int n, ChannelState entry, ChannelState exit) const {
    return static_cast<std::size_t>(n) * 4 +
           static_cast<std::size_t>(entry) * 2 + static_cast<std::size_t>(exit);
  }

  int horizon_;
  std::vector<double> data_;
};

/// Forward recursion over the horizon. Throws DomainError for K < 1.
CountDistTable good_count_distribution(const ChannelParams& params, int horizon);

}  // namespace aoi
