#include "aoi/periodic_fcfs.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "aoi/errors.hpp"

namespace aoi {

namespace {

constexpr ChannelState kGood = ChannelState::Good;
constexpr ChannelState kBad = ChannelState::Bad;

void require_periodic_stable(const ChannelParams& params, int period) {
  params.validate();
  if (!params.zero_one_erasure()) {
    throw UnsupportedRegimeError(
        "the periodic-arrival solver assumes pe_good = 0 and pe_bad = 1; "
        "use the simulator for general erasure probabilities");
  }
  if (params.r <= 0.0) {
    throw DivergenceError("r = 0: bad state is absorbing, AoI diverges");
  }
  if (period < 1) {
    throw DomainError("arrival period K must be >= 1");
  }
  if (periodic_utilization(params, period) >= 1.0) {
    throw InstabilityError(
        "unstable: K must satisfy K > (p+r)/r = " +
        std::to_string((params.p + params.r) / params.r));
  }
}

/// sum_{i=0}^{K} beta^i P(K, i, exit|entry), Horner form.
double count_poly(const CountDistTable& table, ChannelState entry,
                  ChannelState exit, double beta) {
  double acc = 0.0;
  for (int i = table.horizon(); i >= 0; --i) {
    acc = acc * beta + table.at(i, entry, exit);
  }
  return acc;
}

/// Cross-multiplied form of the beta ratio equation.
double beta_equation(const CountDistTable& table, double beta) {
  return (beta - count_poly(table, kBad, kBad, beta)) *
             (beta - count_poly(table, kGood, kGood, beta)) -
         count_poly(table, kBad, kGood, beta) *
             count_poly(table, kGood, kBad, beta);
}

/// Upper-tail sums U(entry, exit, t) = sum_{j=t}^{K} P(K, j, exit|entry).
double upper_tail(const CountDistTable& table, ChannelState entry,
                  ChannelState exit, int from) {
  double acc = 0.0;
  for (int j = std::max(from, 0); j <= table.horizon(); ++j) {
    acc += table.at(j, entry, exit);
  }
  return acc;
}

struct Mat3 {
  std::array<std::array<double, 3>, 3> a;
};

double inf_norm(const Mat3& m) {
  double best = 0.0;
  for (const auto& row : m.a) {
    double s = std::abs(row[0]) + std::abs(row[1]) + std::abs(row[2]);
    best = std::max(best, s);
  }
  return best;
}

/// Solves A x = b by elimination with partial pivoting; also estimates the
/// infinity-norm condition number via the explicit adjugate inverse.
std::array<double, 3> solve3(const Mat3& m, std::array<double, 3> b) {
  double det = 0.0;
  Mat3 inv{};
  const auto& a = m.a;
  for (int i = 0; i < 3; ++i) {
    int i1 = (i + 1) % 3, i2 = (i + 2) % 3;
    for (int j = 0; j < 3; ++j) {
      int j1 = (j + 1) % 3, j2 = (j + 2) % 3;
      inv.a[j][i] = a[i1][j1] * a[i2][j2] - a[i1][j2] * a[i2][j1];
    }
    det += a[0][i] * inv.a[i][0];
  }
  if (det == 0.0) {
    throw SolverFailureError("boundary system is singular");
  }
  for (auto& row : inv.a) {
    for (double& v : row) v /= det;
  }
  double cond = inf_norm(m) * inf_norm(inv);
  if (!(cond < 1e12)) {
    throw SolverFailureError("boundary system is ill-conditioned (cond ~ " +
                             std::to_string(cond) + ")");
  }

  Mat3 lu = m;
  std::array<int, 3> piv = {0, 1, 2};
  for (int col = 0; col < 2; ++col) {
    int best = col;
    for (int row = col + 1; row < 3; ++row) {
      if (std::abs(lu.a[row][col]) > std::abs(lu.a[best][col])) best = row;
    }
    std::swap(lu.a[col], lu.a[best]);
    std::swap(piv[col], piv[best]);
    std::swap(b[col], b[best]);
    for (int row = col + 1; row < 3; ++row) {
      double f = lu.a[row][col] / lu.a[col][col];
      lu.a[row][col] = 0.0;
      for (int k = col + 1; k < 3; ++k) lu.a[row][k] -= f * lu.a[col][k];
      b[row] -= f * b[col];
    }
  }
  std::array<double, 3> x{};
  for (int row = 2; row >= 0; --row) {
    double acc = b[row];
    for (int k = row + 1; k < 3; ++k) acc -= lu.a[row][k] * x[k];
    x[row] = acc / lu.a[row][row];
  }
  return x;
}

BoundaryProbs boundary_from_table(const CountDistTable& table,
                                  const ChannelParams& params, double beta) {
  const int period = table.horizon();
  (void)params;
  Mat3 m{};
  // Column coefficients of (p0_good, p0_bad, p1_good) in the two n = 0
  // balance equations, plus the normalization row.
  double pow_beta = 1.0;
  std::array<double, 2> from_bad{};   // exit G, exit B
  std::array<double, 2> from_good{};  // reindexed p1_good column
  for (int i = 0; i <= period - 1; ++i) {
    from_bad[0] += pow_beta * upper_tail(table, kBad, kGood, i + 1);
    from_bad[1] += pow_beta * upper_tail(table, kBad, kBad, i + 1);
    if (i <= period - 2) {
      from_good[0] += pow_beta * upper_tail(table, kGood, kGood, i + 2);
      from_good[1] += pow_beta * upper_tail(table, kGood, kBad, i + 2);
    }
    pow_beta *= beta;
  }
  m.a[0] = {1.0 - upper_tail(table, kGood, kGood, 1), -from_bad[0],
            -from_good[0]};
  m.a[1] = {upper_tail(table, kGood, kBad, 1), from_bad[1] - 1.0,
            from_good[1]};
  m.a[2] = {1.0, 1.0 / (1.0 - beta), 1.0 / (1.0 - beta)};
  auto x = solve3(m, {0.0, 0.0, 1.0});
  return {x[0], x[1], x[2]};
}

/// Residual of the queue balance recursion at level n >= 1 for state s,
/// with p_{n,s} taken from the geometric form.
double recursion_residual(const CountDistTable& table,
                          const PeriodicFcfsSolution& sol, int n,
                          ChannelState s) {
  double rhs = 0.0;
  for (ChannelState entry : {kGood, kBad}) {
    for (int i = n - 1; i <= table.horizon() + n - 1; ++i) {
      if (i < 0) continue;
      rhs += queue_pmf(sol, i, entry) * table.at(i + 1 - n, entry, s);
    }
  }
  return queue_pmf(sol, n, s) - rhs;
}

bool plausible_solution(const CountDistTable& table,
                        const ChannelParams& params, int period, double beta,
                        const BoundaryProbs& b) {
  auto in_unit = [](double x) { return x >= -1e-12 && x <= 1.0 + 1e-12; };
  if (!in_unit(b.p0_good) || !in_unit(b.p0_bad) || !in_unit(b.p1_good)) {
    return false;
  }
  PeriodicFcfsSolution sol{period,    beta, b.p0_good, b.p0_bad,
                           b.p1_good, 0.0,  0.0};
  (void)params;
  for (ChannelState s : {kGood, kBad}) {
    if (std::abs(recursion_residual(table, sol, 2, s)) > 1e-6) return false;
  }
  return std::abs(recursion_residual(table, sol, 1, kGood)) < 1e-6;
}

}  // namespace

double periodic_utilization(const ChannelParams& params, int period) {
  return (params.p + params.r) / (params.r * period);
}

double solve_beta(const ChannelParams& params, int period) {
  require_periodic_stable(params, period);
  if (params.p == 0.0) return 0.0;  // always-good channel, empty queue

  CountDistTable table = good_count_distribution(params, period);

  // The cross-multiplied polynomial has roots at 0 and 1; scan the open
  // interval, bisect every bracket and keep the root whose boundary solve
  // is a genuine probability vector. The root shrinks like 2^-K for large
  // K, so the scan is log-spaced below 1e-4 and linear above.
  constexpr int kLogGrid = 3000, kLinGrid = 10000;
  constexpr double kLo = 1e-18, kSplit = 1e-4, kHi = 1.0 - 1e-9;
  std::vector<double> grid;
  grid.reserve(kLogGrid + kLinGrid + 1);
  for (int i = 0; i < kLogGrid; ++i) {
    grid.push_back(kLo * std::pow(kSplit / kLo, double(i) / kLogGrid));
  }
  for (int i = 0; i <= kLinGrid; ++i) {
    grid.push_back(kSplit + (kHi - kSplit) * i / kLinGrid);
  }
  double prev_x = grid[0];
  double prev_f = beta_equation(table, prev_x);
  for (std::size_t g = 1; g < grid.size(); ++g) {
    double x = grid[g];
    double f = beta_equation(table, x);
    if ((prev_f < 0.0) != (f < 0.0) || f == 0.0) {
      double lo = prev_x, hi = x, flo = prev_f;
      while (hi - lo > 1e-12 * hi) {
        double mid = 0.5 * (lo + hi);
        double fm = beta_equation(table, mid);
        if ((flo < 0.0) == (fm < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      double root = 0.5 * (lo + hi);
      try {
        if (plausible_solution(table, params, period, root,
                               boundary_from_table(table, params, root))) {
          return root;
        }
      } catch (const SolverFailureError&) {
        // spurious root, keep scanning
      }
    }
    prev_x = x;
    prev_f = f;
  }
  throw SolverFailureError(
      "no admissible root for beta found in (0, 1); "
      "parameters may sit too close to the stability boundary");
}

BoundaryProbs solve_boundary(const ChannelParams& params, int period,
                             double beta) {
  require_periodic_stable(params, period);
  if (params.p == 0.0) return {1.0, 0.0, 0.0};
  CountDistTable table = good_count_distribution(params, period);
  return boundary_from_table(table, params, beta);
}

double queue_pmf(const PeriodicFcfsSolution& solution, int n, ChannelState s) {
  if (n < 0) throw DomainError("queue length n must be >= 0");
  if (s == kBad) {
    return std::pow(solution.beta, n) * solution.p0_bad;
  }
  if (n == 0) return solution.p0_good;
  return std::pow(solution.beta, n - 1) * solution.p1_good;
}

PeriodicFcfsSolution aoi_periodic_fcfs(const ChannelParams& params,
                                       int period) {
  require_periodic_stable(params, period);
  PeriodicFcfsSolution sol{};
  sol.period = period;
  sol.beta = solve_beta(params, period);
  BoundaryProbs b = solve_boundary(params, period, sol.beta);
  sol.p0_good = b.p0_good;
  sol.p0_bad = b.p0_bad;
  sol.p1_good = b.p1_good;

  // E[T] with the geometric tails summed in closed form.
  double tail = 1.0 / (1.0 - sol.beta);
  double mass_good = sol.p0_good + sol.p1_good * tail;
  double mass_bad = sol.p0_bad * tail;
  double moment_good = sol.p1_good * tail * tail;
  double moment_bad = sol.p0_bad * sol.beta * tail * tail;
  double service = 1.0 + params.p / params.r;
  sol.expected_latency = (mass_good + mass_bad) + mass_bad / params.r +
                         service * (moment_good + moment_bad);
  sol.aoi = sol.expected_latency + (period - 1) / 2.0;
  return sol;
}

double expected_latency(const ChannelParams& params, int period) {
  return aoi_periodic_fcfs(params, period).expected_latency;
}

MemorylessSolution memoryless_oracle(int period) {
  if (period < 1) throw DomainError("arrival period K must be >= 1");
  if (period <= 2) {
    throw InstabilityError(
        "unstable: p = r = 0.5 requires K >= 3 (utilization 2/K < 1)");
  }
  const int k = period;
  std::vector<double> binom(k + 1);
  binom[0] = 1.0;
  for (int i = 1; i <= k; ++i) {
    binom[i] = binom[i - 1] * (k - i + 1) / i;
  }
  std::vector<double> tail(k + 2, 0.0);  // tail[t] = sum_{j=t}^{k} C(k,j)
  for (int t = k; t >= 0; --t) tail[t] = tail[t + 1] + binom[t];

  auto poly = [&](double a) {
    double lhs = (k + 1) * a;
    double pw = a * a;
    for (int m = 2; m <= k - 1; ++m) {
      lhs -= pw * tail[m + 1];
      pw *= a;
    }
    return lhs - (std::pow(1.0 + a, k) - 1.0);
  };

  double lo = 1e-12, hi = 1.0 - 1e-12;
  double flo = poly(lo);
  if (!(flo > 0.0 && poly(hi) < 0.0)) {
    throw SolverFailureError("memoryless alpha polynomial not bracketed");
  }
  for (int iter = 0; iter < 200; ++iter) {
    double mid = 0.5 * (lo + hi);
    if ((poly(mid) > 0.0) == (flo > 0.0)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double alpha = 0.5 * (lo + hi);

  double coupling = 0.0;  // p0 = p1 * sum_{m=0}^{k-2} alpha^m tail[m+2]
  double pw = 1.0;
  for (int m = 0; m <= k - 2; ++m) {
    coupling += pw * tail[m + 2];
    pw *= alpha;
  }
  double p1 = 1.0 / (coupling + 1.0 / (1.0 - alpha));
  double p0 = p1 * coupling;
  return {alpha, p0, p1};
}

}  // namespace aoi
