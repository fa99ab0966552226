#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "aoi/analytic.hpp"
#include "aoi/channel.hpp"
#include "aoi/errors.hpp"
#include "aoi/periodic_fcfs.hpp"
#include "aoi/simulator.hpp"
#include "aoi/sweep.hpp"
#include "json.hpp"

namespace {

using nlohmann::json;

// Accepts "1/3" style fractions so irrational-in-binary rates are parsed
// exactly, as well as plain decimals.
double parse_rate(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) {
    return std::stod(text);
  }
  double num = std::stod(text.substr(0, slash));
  double den = std::stod(text.substr(slash + 1));
  if (den == 0.0) throw aoi::DomainError("rate denominator is zero");
  return num / den;
}

struct ChannelFlags {
  double p = -1.0, r = -1.0, eta = -1.0;
  double pe_good = 0.0, pe_bad = 1.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--p", p, "G->B transition probability");
    cmd->add_option("--r", r, "B->G transition probability");
    cmd->add_option("--eta", eta,
                    "channel memory of a symmetric channel (p = r = (1-eta)/2)");
    cmd->add_option("--pe-good", pe_good, "erasure probability in state G");
    cmd->add_option("--pe-bad", pe_bad, "erasure probability in state B");
  }

  aoi::ChannelParams resolve() const {
    aoi::ChannelParams params{};
    if (eta >= 0.0) {
      params = aoi::make_symmetric(eta);
    } else if (p >= 0.0 && r >= 0.0) {
      params = aoi::ChannelParams{p, r};
    } else {
      throw aoi::DomainError("specify either --eta or both --p and --r");
    }
    params.pe_good = pe_good;
    params.pe_bad = pe_bad;
    params.validate();
    return params;
  }
};

struct ArrivalFlags {
  std::string arrival = "bernoulli";
  std::string lambda_text = "1/3";
  int period = 3;

  void attach(CLI::App* cmd) {
    cmd->add_option("--arrival", arrival, "bernoulli, periodic or gaw")
        ->check(CLI::IsMember({"bernoulli", "periodic", "gaw"}));
    cmd->add_option("--lambda", lambda_text,
                    "Bernoulli arrival rate (decimal or fraction like 1/3)");
    cmd->add_option("--K", period, "periodic arrival period");
  }

  aoi::ArrivalKind kind() const {
    if (arrival == "bernoulli") return aoi::ArrivalKind::Bernoulli;
    if (arrival == "periodic") return aoi::ArrivalKind::Periodic;
    return aoi::ArrivalKind::GenerateAtWill;
  }

  aoi::ArrivalModel model() const {
    switch (kind()) {
      case aoi::ArrivalKind::Bernoulli:
        return aoi::Bernoulli{parse_rate(lambda_text)};
      case aoi::ArrivalKind::Periodic:
        return aoi::Periodic{period};
      default:
        return aoi::GenerateAtWill{};
    }
  }
};

aoi::Policy parse_policy(const std::string& name) {
  return name == "fcfs" ? aoi::Policy::Fcfs : aoi::Policy::Plgfs;
}

std::string fmt(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot open output file " + path);
  return file;
}

int run_analytic(const ChannelFlags& channel, const ArrivalFlags& arrival,
                 const std::string& policy) {
  aoi::ChannelParams params = channel.resolve();
  std::optional<double> value = aoi::analytic_value(
      params, arrival.kind(), parse_rate(arrival.lambda_text), arrival.period,
      parse_policy(policy));
  if (!value) {
    throw aoi::UnsupportedRegimeError(
        "no closed form for general erasure probabilities; use `simulate`");
  }
  std::cout << fmt(*value) << "\n";
  return 0;
}

int run_simulate(const ChannelFlags& channel, const ArrivalFlags& arrival,
                 const std::string& policy, long slots, int iters,
                 std::uint64_t seed, const std::string& format,
                 const std::string& out_path, const std::string& trace_path) {
  aoi::SimConfig config;
  config.params = channel.resolve();
  config.arrival = arrival.model();
  config.policy = parse_policy(policy);
  config.slots_per_run = slots;
  config.iterations = iters;
  config.base_seed = seed;
  aoi::SimResult result = aoi::run_experiment(config);

  if (!trace_path.empty()) {
    aoi::AoITrace trace = aoi::simulate_trajectory(
        config.params, config.arrival, config.policy, slots,
        aoi::iteration_seed(seed, 0));
    std::ofstream tf(trace_path);
    tf << "slot,channel,queue_len,aoi\n";
    for (std::size_t i = 0; i < trace.aoi.size(); ++i) {
      tf << (i + 1) << ','
         << (trace.channel[i] == aoi::ChannelState::Good ? 'G' : 'B') << ','
         << trace.queue_len[i] << ',' << trace.aoi[i] << '\n';
    }
  }

  double lambda = parse_rate(arrival.lambda_text);
  double arrival_param = arrival.kind() == aoi::ArrivalKind::Bernoulli
                             ? lambda
                         : arrival.kind() == aoi::ArrivalKind::Periodic
                             ? static_cast<double>(arrival.period)
                             : 0.0;
  std::ofstream file;
  std::ostream& out = open_output(file, out_path);
  if (format == "json") {
    json record = {{"p", config.params.p},
                   {"r", config.params.r},
                   {"pe_good", config.params.pe_good},
                   {"pe_bad", config.params.pe_bad},
                   {"eta", config.params.memory()},
                   {"arrival", arrival.arrival},
                   {"arrival_param", arrival_param},
                   {"policy", policy},
                   {"sim_mean", result.mean_aoi},
                   {"sim_stderr", result.stderr_aoi},
                   {"iters", iters},
                   {"slots", slots},
                   {"seed", seed}};
    out << record.dump() << "\n";
  } else {
    out << "p,r,pe_good,pe_bad,eta,arrival,arrival_param,policy,sim_mean,"
           "sim_stderr,iters,slots,seed\n";
    out << fmt(config.params.p) << ',' << fmt(config.params.r) << ','
        << fmt(config.params.pe_good) << ',' << fmt(config.params.pe_bad)
        << ',' << fmt(config.params.memory()) << ',' << arrival.arrival << ','
        << fmt(arrival_param) << ',' << policy << ',' << fmt(result.mean_aoi)
        << ',' << fmt(result.stderr_aoi) << ',' << iters << ',' << slots
        << ',' << seed << "\n";
  }
  return 0;
}

int run_solver(const ChannelFlags& channel, int period,
               const std::string& format) {
  aoi::ChannelParams params = channel.resolve();
  aoi::PeriodicFcfsSolution sol = aoi::aoi_periodic_fcfs(params, period);
  if (format == "json") {
    json record = {{"K", sol.period},
                   {"beta", sol.beta},
                   {"p0_good", sol.p0_good},
                   {"p0_bad", sol.p0_bad},
                   {"p1_good", sol.p1_good},
                   {"expected_latency", sol.expected_latency},
                   {"aoi", sol.aoi}};
    std::cout << record.dump() << "\n";
  } else {
    std::cout << "beta " << fmt(sol.beta) << "\n"
              << "p0_good " << fmt(sol.p0_good) << "\n"
              << "p0_bad " << fmt(sol.p0_bad) << "\n"
              << "p1_good " << fmt(sol.p1_good) << "\n"
              << "expected_latency " << fmt(sol.expected_latency) << "\n"
              << "aoi " << fmt(sol.aoi) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Average age of information over Gilbert-Elliott channels"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key-value config file mirroring the flags");

  ChannelFlags channel;
  ArrivalFlags arrival;
  std::string policy = "fcfs";
  long slots = 10000;
  int iters = 1000;
  std::uint64_t seed = 0;
  std::string format = "csv";
  std::string out_path;
  std::string trace_path;
  int period = 3;

  CLI::App* analytic = app.add_subcommand(
      "analytic", "evaluate the closed-form / numerical average AoI");
  channel.attach(analytic);
  arrival.attach(analytic);
  analytic->add_option("--policy", policy, "fcfs or plgfs")
      ->check(CLI::IsMember({"fcfs", "plgfs"}));

  CLI::App* simulate =
      app.add_subcommand("simulate", "slot-level Monte Carlo estimate");
  channel.attach(simulate);
  arrival.attach(simulate);
  simulate->add_option("--policy", policy, "fcfs or plgfs")
      ->check(CLI::IsMember({"fcfs", "plgfs"}));
  simulate->add_option("--slots", slots, "slots per iteration");
  simulate->add_option("--iters", iters, "independent iterations");
  simulate->add_option("--seed", seed, "base seed");
  simulate->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  simulate->add_option("--out", out_path, "output file (default stdout)");
  simulate->add_option("--trace", trace_path,
                       "dump one slot,channel,queue_len,aoi record per slot");

  CLI::App* solver = app.add_subcommand(
      "solve-periodic-fcfs", "periodic-arrival FCFS queue solver");
  channel.attach(solver);
  solver->add_option("--K", period, "arrival period");
  solver->add_option("--format", format, "text or json");

  aoi::SweepSpec spec;
  std::string lambda_text = "1/3";
  CLI::App* sweep = app.add_subcommand(
      "sweep", "channel-memory sweep, one CSV row per (eta, arrival, policy)");
  sweep->add_option("--eta-min", spec.eta_min, "grid start");
  sweep->add_option("--eta-max", spec.eta_max, "grid end (inclusive)");
  sweep->add_option("--eta-step", spec.eta_step, "grid step");
  sweep->add_option("--lambda", lambda_text, "Bernoulli rate");
  sweep->add_option("--K", spec.period, "periodic arrival period");
  sweep->add_option("--pe-good", spec.pe_good, "erasure probability in G");
  sweep->add_option("--pe-bad", spec.pe_bad, "erasure probability in B");
  sweep->add_option("--slots", spec.slots_per_run, "slots per iteration");
  sweep->add_option("--iters", spec.iterations, "iterations per point");
  sweep->add_option("--seed", spec.base_seed, "base seed");
  sweep->add_option("--out", out_path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (analytic->parsed()) {
      return run_analytic(channel, arrival, policy);
    }
    if (simulate->parsed()) {
      return run_simulate(channel, arrival, policy, slots, iters, seed,
                          format, out_path, trace_path);
    }
    if (solver->parsed()) {
      return run_solver(channel, period, format);
    }
    spec.lambda = parse_rate(lambda_text);
    std::vector<aoi::SweepRow> rows = aoi::run_sweep(spec);
    std::ofstream file;
    std::ostream& out = open_output(file, out_path);
    aoi::write_sweep_csv(out, rows);
    return 0;
  } catch (const aoi::InstabilityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
