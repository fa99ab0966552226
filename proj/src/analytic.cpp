#include "aoi/analytic.hpp"

#include <cmath>
#include <string>

#include "aoi/errors.hpp"

namespace aoi {

namespace {

void require_zero_one_erasure(const ChannelParams& params) {
  if (!params.zero_one_erasure()) {
    throw UnsupportedRegimeError(
        "closed forms assume pe_good = 0 and pe_bad = 1; "
        "use the simulator for general erasure probabilities");
  }
}

void require_service(const ChannelParams& params) {
  params.validate();
  if (params.r <= 0.0) {
    throw DivergenceError("r = 0: bad state is absorbing, AoI diverges");
  }
}

void require_stable(const ChannelParams& params, double lambda) {
  if (!(lambda > 0.0)) {
    throw DomainError("arrival rate lambda must be positive");
  }
  double capacity = params.r / (params.p + params.r);
  if (lambda >= capacity) {
    throw InstabilityError(
        "unstable: lambda must satisfy lambda < r/(p+r) = " +
        std::to_string(capacity));
  }
}

double base_term(const ChannelParams& params) {
  return params.p / (params.r * (params.p + params.r));
}

}  // namespace

double aoi_plgfs(const ChannelParams& params, const ArrivalModel& arrival) {
  require_service(params);
  require_zero_one_erasure(params);
  return std::visit(
      [&](const auto& model) -> double {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, Bernoulli>) {
          if (!(model.lambda > 0.0 && model.lambda <= 1.0)) {
            throw DomainError("Bernoulli lambda must lie in (0, 1]");
          }
          return 1.0 / model.lambda + base_term(params);
        } else if constexpr (std::is_same_v<T, Periodic>) {
          if (model.period < 1) {
            throw DomainError("periodic arrival needs K >= 1");
          }
          return (model.period + 1) / 2.0 + base_term(params);
        } else {
          return 1.0 + base_term(params);
        }
      },
      arrival);
}

double aoi_fcfs_bernoulli(const ChannelParams& params, double lambda) {
  require_service(params);
  require_zero_one_erasure(params);
  require_stable(params, lambda);
  double p = params.p, r = params.r;
  double margin = r - (p + r) * lambda;
  return 1.0 / lambda +
         (p / r) * (1.0 / (p + r) +
                    lambda * lambda / (margin * (margin + lambda)));
}

double aoi_fcfs_gaw(const ChannelParams& params) {
  require_service(params);
  require_zero_one_erasure(params);
  return 1.0 + params.p / params.r + base_term(params);
}

double delivery_gap_pmf(const ChannelParams& params, int m) {
  require_service(params);
  if (m < 1) {
    throw DomainError("gap length m must be >= 1");
  }
  if (m == 1) return 1.0 - params.p;
  return params.p * std::pow(1.0 - params.r, m - 2) * params.r;
}

double delivery_gap_mean(const ChannelParams& params) {
  require_service(params);
  return 1.0 + params.p / params.r;
}

double age_at_delivery_pmf(const ArrivalModel& arrival, int n) {
  if (n < 1) {
    throw DomainError("age n must be >= 1");
  }
  return std::visit(
      [&](const auto& model) -> double {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, Bernoulli>) {
          return model.lambda * std::pow(1.0 - model.lambda, n - 1);
        } else if constexpr (std::is_same_v<T, Periodic>) {
          return n <= model.period ? 1.0 / model.period : 0.0;
        } else {
          throw DomainError(
              "generate-at-will age PMF needs channel parameters; "
              "use age_at_delivery_pmf_gaw");
        }
      },
      arrival);
}

double age_at_delivery_pmf_gaw(const ChannelParams& params, int n) {
  return delivery_gap_pmf(params, n);
}

double system_time_ratio(const ChannelParams& params, double lambda) {
  return (params.p + (1.0 - params.p - params.r) * (1.0 - lambda)) /
         (1.0 - lambda);
}

double system_time_pmf(const ChannelParams& params, double lambda, int t) {
  require_service(params);
  require_zero_one_erasure(params);
  require_stable(params, lambda);
  if (t < 1) {
    throw DomainError("system time t must be >= 1");
  }
  double p = params.p, r = params.r;
  double margin = r - (p + r) * lambda;
  if (t == 1) {
    return margin / ((p + r) * (1.0 - lambda));
  }
  double head = (p / (p + r)) * margin / ((1.0 - lambda) * (1.0 - lambda));
  return head * std::pow(system_time_ratio(params, lambda), t - 2);
}

double preemption_pmf_given_t(double lambda, int t, int y) {
  if (t < 1 || y < 0 || y > t - 1) {
    throw DomainError("preemption time y must lie in [0, t-1]");
  }
  if (y == 0) return std::pow(1.0 - lambda, t - 1);
  return lambda * std::pow(1.0 - lambda, t - 1 - y);
}

double expected_preemption_time(const ChannelParams& params, double lambda) {
  require_service(params);
  require_zero_one_erasure(params);
  require_stable(params, lambda);
  double q = 1.0 - lambda;
  double rho = system_time_ratio(params, lambda);
  double head = (params.p / (params.p + params.r)) *
                (params.r - (params.p + params.r) * lambda) / (q * q);
  if (head == 0.0) return 0.0;  // p = 0: every system time is one slot

  // E[Y | T = t], closed form of lambda * sum_{y=1}^{t-1} y q^{t-1-y}.
  auto conditional_mean = [&](int t) {
    int m = t - 1;
    double qm = std::pow(q, m);
    double partial = q * (1.0 - m * std::pow(q, m - 1) + (m - 1) * qm) /
                     (lambda * lambda);
    return m * (1.0 - qm) - lambda * partial;
  };

  double sum = 0.0;
  double pt = head;  // P_T(t) for t = 2
  for (int t = 2;; ++t) {
    sum += conditional_mean(t) * pt;
    if (rho <= 0.0) break;
    // E[Y|T=t] < t, so the remaining mass is below
    // head * sum_{u > t} u rho^{u-2}.
    double tail = head * std::pow(rho, t - 1) *
                  ((t + 1) * (1.0 - rho) + rho) / ((1.0 - rho) * (1.0 - rho));
    if (tail < 1e-13) break;
    pt *= rho;
  }
  return sum;
}

double aoi_gap_bernoulli(const ChannelParams& params, double lambda) {
  return lambda * delivery_gap_mean(params) *
         expected_preemption_time(params, lambda);
}

QueueConstants queue_constants(const ChannelParams& params, double lambda) {
  require_service(params);
  require_zero_one_erasure(params);
  require_stable(params, lambda);
  double p = params.p, r = params.r;
  double eta = 1.0 - p - r;
  double q = 1.0 - lambda;
  QueueConstants k{};
  k.g0 = r / (p + r) * (1.0 - p * lambda / (r * q));
  k.b0 = p / (p + r) * (r - (p + r) * lambda) / (q * (r + eta * lambda));
  k.c = p * k.g0 / (p + eta * q);
  k.ratio = (p * lambda + eta * lambda * q) / (q * (r + eta * lambda));
  return k;
}

}  // namespace aoi
