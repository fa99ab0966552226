#pragma once

#include <variant>

#include "aoi/channel.hpp"

namespace aoi {

struct Bernoulli {
  double lambda;  // per-slot arrival probability, 0 < lambda <= 1
};

struct Periodic {
  int period;  // K >= 1, one arrival every K slots
};

struct GenerateAtWill {};

using ArrivalModel = std::variant<Bernoulli, Periodic, GenerateAtWill>;

enum class Policy { Fcfs, Plgfs };

/// Average AoI under the preemptive LGFS policy.
///   Bernoulli(lambda):  1/lambda + p/(r(p+r))
///   Periodic(K):        (K+1)/2 + p/(r(p+r))
///   GenerateAtWill:     1 + p/(r(p+r))   (Bernoulli with lambda = 1)
/// Requires the 0/1 erasure model and r > 0.
double aoi_plgfs(const ChannelParams& params, const ArrivalModel& arrival);

/// Average AoI under FCFS with Bernoulli arrivals. Requires the 0/1 erasure
/// model and stability lambda < r/(p+r).
double aoi_fcfs_bernoulli(const ChannelParams& params, double lambda);

/// Average AoI under FCFS with generate-at-will arrivals:
/// 1 + p/r + p/(r(p+r)).
double aoi_fcfs_gaw(const ChannelParams& params);

/// PMF of the gap M between consecutive good channel states:
/// P_M(1) = 1-p, P_M(m) = p (1-r)^{m-2} r for m >= 2.
double delivery_gap_pmf(const ChannelParams& params, int m);

/// E[M] = 1 + p/r.
double delivery_gap_mean(const ChannelParams& params);

/// PMF of the receiver age N at a delivery instant for Bernoulli
/// (lambda (1-lambda)^{n-1}) and periodic (uniform on 1..K) arrivals.
double age_at_delivery_pmf(const ArrivalModel& arrival, int n);

/// Generate-at-will FCFS variant: N has the same PMF as M.
double age_at_delivery_pmf_gaw(const ChannelParams& params, int n);

/// PMF of the system time T under Bernoulli FCFS:
///   P_T(1) = (r - (p+r)lambda) / ((p+r)(1-lambda))
///   P_T(t>=2) geometric with ratio (p + (1-p-r)(1-lambda)) / (1-lambda).
double system_time_pmf(const ChannelParams& params, double lambda, int t);

/// Geometric ratio of the t >= 2 branch of system_time_pmf.
double system_time_ratio(const ChannelParams& params, double lambda);

/// Conditional PMF of the preemption time Y given system time T = t:
/// P(Y=0|t) = (1-lambda)^{t-1}, P(Y=y|t) = lambda (1-lambda)^{t-1-y} for
/// 1 <= y <= t-1.
double preemption_pmf_given_t(double lambda, int t, int y);

/// AoI gap between FCFS and pLGFS under Bernoulli arrivals:
/// lambda * E[D|Y>=1] * E[Y] = lambda (1 + p/r) E[Y].
double aoi_gap_bernoulli(const ChannelParams& params, double lambda);

/// E[Y] summed over the system-time distribution (geometric tail truncated
/// at provable mass < 1e-12).
double expected_preemption_time(const ChannelParams& params, double lambda);

/// Constants of the queue-length PGF g(z) = G0 - C + (B0 + C)/(1 - ratio z).
struct QueueConstants {
  double g0;
  double b0;
  double c;
  double ratio;

  double pgf(double z) const { return g0 - c + (b0 + c) / (1.0 - ratio * z); }
};

QueueConstants queue_constants(const ChannelParams& params, double lambda);

}  // namespace aoi
