#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aoi/analytic.hpp"
#include "aoi/channel.hpp"

namespace aoi {

enum class ArrivalKind { Bernoulli, Periodic, GenerateAtWill };

std::string arrival_name(ArrivalKind kind);
std::string policy_name(Policy policy);

/// A channel-memory sweep over symmetric GE channels: one row per
/// (eta, arrival, policy) with the analytic value where a formula exists and
/// a Monte Carlo estimate everywhere.
struct SweepSpec {
  double eta_min = 0.0;
  double eta_max = 0.9;
  double eta_step = 0.1;
  double lambda = 1.0 / 3.0;
  int period = 3;
  double pe_good = 0.0;
  double pe_bad = 1.0;
  std::vector<std::pair<ArrivalKind, Policy>> curves = default_curves();
  long slots_per_run = 10000;
  int iterations = 1000;
  std::uint64_t base_seed = 0;

  static std::vector<std::pair<ArrivalKind, Policy>> default_curves();
};

struct SweepRow {
  double eta;
  double p;
  double r;
  double pe_good;
  double pe_bad;
  ArrivalKind arrival;
  double arrival_param;  // lambda or K; 0 for generate-at-will
  Policy policy;
  std::optional<double> analytic;
  std::optional<double> sim_mean;
  std::optional<double> sim_stderr;
  std::string status;  // "ok", "sim-only" or "unstable"
};

/// Analytic/numerical average AoI for one grid point, or nothing when no
/// formula applies (general erasure probabilities, unstable FCFS points).
std::optional<double> analytic_value(const ChannelParams& params,
                                     ArrivalKind arrival, double lambda,
                                     int period, Policy policy);

/// Rows ordered by (arrival, policy, eta). Throws DomainError for an empty
/// grid. Unstable points are kept as rows with status "unstable" and no
/// simulation result.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

/// Fixed, documented schema:
/// eta,p,r,pe_good,pe_bad,arrival,arrival_param,policy,analytic,sim_mean,
/// sim_stderr,status
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace aoi
