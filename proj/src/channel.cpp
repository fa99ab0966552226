#include "aoi/channel.hpp"

#include <cmath>
#include <string>

#include "aoi/errors.hpp"

namespace aoi {

namespace {

bool is_prob(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

void ChannelParams::validate() const {
  if (!is_prob(p) || !is_prob(r) || !is_prob(pe_good) || !is_prob(pe_bad)) {
    throw DomainError("channel probabilities must lie in [0, 1]");
  }
  if (p + r <= 0.0) {
    throw DegenerateChainError("p + r must be positive");
  }
}

std::pair<double, double> ChannelParams::stationary() const {
  if (p + r <= 0.0) {
    throw DegenerateChainError("p + r = 0: no stationary distribution");
  }
  return {r / (p + r), p / (p + r)};
}

double ChannelParams::average_erasure() const {
  auto [pi_good, pi_bad] = stationary();
  return pi_good * pe_good + pi_bad * pe_bad;
}

ChannelParams make_symmetric(double eta) {
  if (!(eta >= 0.0 && eta < 1.0)) {
    throw DomainError("channel memory eta must lie in [0, 1)");
  }
  double q = (1.0 - eta) / 2.0;
  return ChannelParams{q, q, 0.0, 1.0};
}

SlotSample sample_step(ChannelState state, const ChannelParams& params,
                       std::mt19937_64& rng) {
  auto unit = [&rng] {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  bool erased = unit() < params.erasure_prob(state);
  ChannelState next =
      unit() < params.leave_prob(state) ? flipped(state) : state;
  return {next, erased};
}

CountDistTable::CountDistTable(int horizon)
    : horizon_(horizon),
      data_(static_cast<std::size_t>(horizon + 1) * 4, 0.0) {}

double CountDistTable::row_sum(ChannelState entry) const {
  double sum = 0.0;
  for (int n = 0; n <= horizon_; ++n) {
    sum += at(n, entry, ChannelState::Good) + at(n, entry, ChannelState::Bad);
  }
  return sum;
}

CountDistTable good_count_distribution(const ChannelParams& params,
                                       int horizon) {
  if (horizon < 1) {
    throw DomainError("count distribution horizon must be >= 1");
  }
  params.validate();

  const ChannelState states[] = {ChannelState::Good, ChannelState::Bad};

  // Base case K = 1: the single slot is the entry state.
  CountDistTable table(1);
  for (ChannelState s : states) {
    int n = s == ChannelState::Good ? 1 : 0;
    for (ChannelState s2 : states) {
      table.at(n, s, s2) = params.transition(s, s2);
    }
  }

  for (int k = 2; k <= horizon; ++k) {
    CountDistTable next(k);
    for (ChannelState s : states) {
      for (int n = 0; n <= k; ++n) {
        for (ChannelState s2 : states) {
          // The exit slot of the (k-1)-table becomes slot k and is now
          // counted toward n if it is good.
          double acc = 0.0;
          for (ChannelState mid : states) {
            int prev_n = n - (mid == ChannelState::Good ? 1 : 0);
            if (prev_n < 0 || prev_n > k - 1) continue;
            acc += table.at(prev_n, s, mid) * params.transition(mid, s2);
          }
          next.at(n, s, s2) = acc;
        }
      }
    }
    table = std::move(next);
  }
  return table;
}

}  // namespace aoi
