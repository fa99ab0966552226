#include "aoi/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "aoi/errors.hpp"
#include "aoi/periodic_fcfs.hpp"
#include "aoi/simulator.hpp"

namespace aoi {

std::string arrival_name(ArrivalKind kind) {
  switch (kind) {
    case ArrivalKind::Bernoulli:
      return "bernoulli";
    case ArrivalKind::Periodic:
      return "periodic";
    case ArrivalKind::GenerateAtWill:
      return "gaw";
  }
  return "?";
}

std::string policy_name(Policy policy) {
  return policy == Policy::Fcfs ? "fcfs" : "plgfs";
}

std::vector<std::pair<ArrivalKind, Policy>> SweepSpec::default_curves() {
  return {
      {ArrivalKind::Bernoulli, Policy::Fcfs},
      {ArrivalKind::Bernoulli, Policy::Plgfs},
      {ArrivalKind::Periodic, Policy::Fcfs},
      {ArrivalKind::Periodic, Policy::Plgfs},
      {ArrivalKind::GenerateAtWill, Policy::Fcfs},
      {ArrivalKind::GenerateAtWill, Policy::Plgfs},
  };
}

std::optional<double> analytic_value(const ChannelParams& params,
                                     ArrivalKind arrival, double lambda,
                                     int period, Policy policy) {
  if (!params.zero_one_erasure()) return std::nullopt;
  switch (arrival) {
    case ArrivalKind::Bernoulli:
      return policy == Policy::Plgfs
                 ? aoi_plgfs(params, Bernoulli{lambda})
                 : aoi_fcfs_bernoulli(params, lambda);
    case ArrivalKind::Periodic:
      return policy == Policy::Plgfs
                 ? aoi_plgfs(params, Periodic{period})
                 : aoi_periodic_fcfs(params, period).aoi;
    case ArrivalKind::GenerateAtWill:
      return policy == Policy::Plgfs ? aoi_plgfs(params, GenerateAtWill{})
                                     : aoi_fcfs_gaw(params);
  }
  return std::nullopt;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  if (!(spec.eta_min >= 0.0 && spec.eta_min <= spec.eta_max &&
        spec.eta_max < 1.0 && spec.eta_step > 0.0)) {
    throw DomainError("empty or invalid eta grid");
  }
  std::vector<double> grid;
  for (double eta = spec.eta_min; eta <= spec.eta_max + 1e-12;
       eta += spec.eta_step) {
    grid.push_back(std::min(eta, spec.eta_max));
  }

  std::vector<SweepRow> rows;
  for (const auto& [arrival, policy] : spec.curves) {
    for (double eta : grid) {
      ChannelParams params = make_symmetric(eta);
      params.pe_good = spec.pe_good;
      params.pe_bad = spec.pe_bad;

      SweepRow row{};
      row.eta = eta;
      row.p = params.p;
      row.r = params.r;
      row.pe_good = params.pe_good;
      row.pe_bad = params.pe_bad;
      row.arrival = arrival;
      row.arrival_param = arrival == ArrivalKind::Bernoulli ? spec.lambda
                          : arrival == ArrivalKind::Periodic
                              ? static_cast<double>(spec.period)
                              : 0.0;
      row.policy = policy;
      row.status = params.zero_one_erasure() ? "ok" : "sim-only";

      bool unstable = false;
      try {
        row.analytic =
            analytic_value(params, arrival, spec.lambda, spec.period, policy);
      } catch (const InstabilityError&) {
        unstable = true;
        row.status = "unstable";
      }
      // An unstable FCFS point has no stationary AoI; skip the simulation
      // rather than run it into the queue cap.
      if (!unstable) {
        SimConfig config;
        config.params = params;
        config.arrival = arrival == ArrivalKind::Bernoulli
                             ? ArrivalModel{Bernoulli{spec.lambda}}
                         : arrival == ArrivalKind::Periodic
                             ? ArrivalModel{Periodic{spec.period}}
                             : ArrivalModel{GenerateAtWill{}};
        config.policy = policy;
        config.slots_per_run = spec.slots_per_run;
        config.iterations = spec.iterations;
        config.base_seed = spec.base_seed;
        SimResult sim = run_experiment(config);
        row.sim_mean = sim.mean_aoi;
        row.sim_stderr = sim.stderr_aoi;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

namespace {

void put(std::ostream& out, const std::optional<double>& value) {
  char buf[64];
  if (value) {
    std::snprintf(buf, sizeof(buf), "%.12g", *value);
    out << buf;
  }
}

}  // namespace

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "eta,p,r,pe_good,pe_bad,arrival,arrival_param,policy,analytic,"
         "sim_mean,sim_stderr,status\n";
  for (const SweepRow& row : rows) {
    put(out, row.eta);
    out << ',';
    put(out, row.p);
    out << ',';
    put(out, row.r);
    out << ',';
    put(out, row.pe_good);
    out << ',';
    put(out, row.pe_bad);
    out << ',' << arrival_name(row.arrival) << ',';
    put(out, row.arrival_param);
    out << ',' << policy_name(row.policy) << ',';
    put(out, row.analytic);
    out << ',';
    put(out, row.sim_mean);
    out << ',';
    put(out, row.sim_stderr);
    out << ',' << row.status << '\n';
  }
}

}  // namespace aoi
