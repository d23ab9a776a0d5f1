#include "ltq/sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "ltq/utility.hpp"

namespace ltq {

namespace {

// splitmix64: deterministic, splittable by construction.
struct Rng {
  std::uint64_t state;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // The stream seed must be hashed, not offset: states that differ by a
  // multiple of the increment would replay each other's output shifted.
  explicit Rng(std::uint64_t seed, std::uint64_t stream) {
    state = mix(mix(seed + 0x9E3779B97F4A7C15ULL * (stream + 1)) + 0x6A09E667F3BCC909ULL);
  }

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    return mix(z);
  }

  double uniform01() {  // in (0, 1]
    return (static_cast<double>(next() >> 11) + 1.0) * 0x1p-53;
  }

  double exponential(double rate) { return -std::log(uniform01()) / rate; }
};

double cara_utility(const Scenario& s, double wealth) {
  const double r = s.risk_aversion;
  return r > 0.0 ? -std::expm1(-r * wealth) / r : wealth;
}

struct Welford {
  std::int64_t n = 0;
  double mean = 0.0, m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }
  double variance() const { return n > 1 ? m2 / (n - 1) : 0.0; }
};

Estimate to_estimate(const Welford& w) {
  if (w.n < 2) return {w.mean, std::numeric_limits<double>::infinity()};
  const double se = std::sqrt(w.variance() / w.n);
  return {w.mean, t_quantile_975(static_cast<int>(w.n) - 1) * se};
}

struct Customer {
  double arrived;
  int state_seen;
  double quote;
};

// One replication's post-warmup batch statistics.
struct RepStats {
  std::vector<double> profit_rates;  // per batch
  std::vector<double> social_rates;
  std::vector<std::vector<double>> occupancy;  // per batch, per state
  std::vector<double> state_time;              // pooled time in state
  std::vector<std::int64_t> arrivals_seeing;   // post-warmup arrivals per state
  std::vector<std::int64_t> joins_at;
  std::vector<std::int64_t> completions_at;
  std::vector<double> lateness_sum;  // sum (X - d)^+ per join state
  std::vector<double> utility_sum;
  std::vector<double> utility_sq_sum;
  double time = 0.0;
  std::int64_t events = 0;
};

RepStats run_replication(const Scenario& s, const QuotationPolicy& policy, const SimConfig& cfg,
                         std::uint64_t stream) {
  Rng rng(cfg.seed, stream);
  const int n0 = policy.threshold;
  const double lambda = s.arrival_rate;
  const double mu = s.service_rate;

  const double horizon = cfg.horizon.value;
  const bool by_events = cfg.horizon.unit == SimHorizon::Unit::events;
  const double warmup_limit = cfg.warmup_fraction * horizon;

  RepStats st;
  st.occupancy.assign(cfg.batch_count, std::vector<double>(n0 + 1, 0.0));
  st.profit_rates.assign(cfg.batch_count, 0.0);
  st.social_rates.assign(cfg.batch_count, 0.0);
  st.state_time.assign(n0 + 1, 0.0);
  st.arrivals_seeing.assign(n0 + 1, 0);
  st.joins_at.assign(n0 + 1, 0);
  st.completions_at.assign(n0 + 1, 0);
  st.lateness_sum.assign(n0 + 1, 0.0);
  st.utility_sum.assign(n0 + 1, 0.0);
  st.utility_sq_sum.assign(n0 + 1, 0.0);

  std::vector<double> batch_profit(cfg.batch_count, 0.0);
  std::vector<double> batch_social(cfg.batch_count, 0.0);
  std::vector<double> batch_time(cfg.batch_count, 0.0);

  double now = 0.0;
  std::int64_t events = 0;
  int n = 0;
  std::deque<Customer> in_system;
  double next_arrival = rng.exponential(lambda);
  double next_departure = std::numeric_limits<double>::infinity();

  auto progress = [&]() { return by_events ? static_cast<double>(events) : now; };
  const double measured_span = horizon - warmup_limit;

  // Batch index for a given progress point past warmup.
  auto batch_of = [&](double at) {
    int b = static_cast<int>((at - warmup_limit) / measured_span * cfg.batch_count);
    if (b < 0) b = 0;
    if (b >= cfg.batch_count) b = cfg.batch_count - 1;
    return b;
  };

  while (progress() < horizon) {
    const double t_next = std::min(next_arrival, next_departure);
    const double prev_progress = progress();
    // Attribute occupancy time; split across the warmup edge by time only
    // when the horizon is clocked in time units.
    if (!by_events) {
      double seg_lo = now, seg_hi = std::min(t_next, horizon);
      if (seg_hi > seg_lo) {
        double lo = std::max(seg_lo, warmup_limit);
        if (seg_hi > lo) {
          st.state_time[n] += seg_hi - lo;
          st.occupancy[batch_of(lo)][n] += seg_hi - lo;
        }
      }
    } else if (prev_progress >= warmup_limit) {
      const double dt = t_next - now;
      st.state_time[n] += dt;
      st.occupancy[batch_of(prev_progress)][n] += dt;
    }

    now = t_next;
    if (!by_events && now >= horizon) break;

    const bool measuring = progress() >= warmup_limit;
    if (next_arrival <= next_departure) {
      ++events;
      if (measuring && n <= n0) ++st.arrivals_seeing[n];
      if (n < n0) {
        const double d = policy.quote_at(n);
        if (measuring) ++st.joins_at[n];
        if (n == 0) next_departure = now + rng.exponential(mu);
        in_system.push_back({now, n, d});
        ++n;
      }
      next_arrival = now + rng.exponential(lambda);
    } else {
      ++events;
      Customer done = in_system.front();
      in_system.pop_front();
      --n;
      next_departure = n > 0 ? now + rng.exponential(mu)
                             : std::numeric_limits<double>::infinity();
      if (measuring) {
        const double sojourn = now - done.arrived;
        const double lateness =
            done.quote == kInfiniteQuote ? 0.0 : std::max(0.0, sojourn - done.quote);
        const double profit = s.entrance_fee - s.compensation_rate * lateness;
        const double wealth = s.service_value - s.entrance_fee -
                              s.delay_cost_rate * sojourn + s.compensation_rate * lateness;
        const double utility = cara_utility(s, wealth);
        const int b = batch_of(progress());
        batch_profit[b] += profit;
        batch_social[b] += profit + utility;
        const int seen = done.state_seen;
        ++st.completions_at[seen];
        st.lateness_sum[seen] += lateness;
        st.utility_sum[seen] += utility;
        st.utility_sq_sum[seen] += utility * utility;
      }
    }
  }

  if (by_events) {
    st.time = 0.0;
    for (double t : st.state_time) st.time += t;
  } else {
    st.time = horizon - warmup_limit;
  }
  st.events = events;

  // Convert batch tallies to rates. Event-clocked batches have unequal
  // durations; use each batch's accumulated occupancy time.
  for (int b = 0; b < cfg.batch_count; ++b) {
    double dur = 0.0;
    for (double t : st.occupancy[b]) dur += t;
    batch_time[b] = dur;
    if (dur > 0.0) {
      st.profit_rates[b] = batch_profit[b] / dur;
      st.social_rates[b] = batch_social[b] / dur;
      for (double& t : st.occupancy[b]) t /= dur;
    }
  }
  return st;
}

}  // namespace

void SimConfig::validate() const {
  if (replications < 1) throw std::invalid_argument("sim: replications must be >= 1");
  if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0)) {
    throw std::invalid_argument("sim: warmup fraction must lie in [0, 1)");
  }
  if (batch_count < 2) throw std::invalid_argument("sim: batch_count must be >= 2");
  if (!(horizon.value > 0.0)) throw std::invalid_argument("sim: horizon must be > 0");
}

double t_quantile_975(int dof) {
  static constexpr double table[] = {
      12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
      2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
      2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
  if (dof < 1) throw std::invalid_argument("t_quantile_975: dof must be >= 1");
  if (dof <= 30) return table[dof - 1];
  const double z = 1.959963984540054;
  const double nu = dof;
  return z + (z * z * z + z) / (4.0 * nu) +
         (5 * std::pow(z, 5) + 16 * z * z * z + 3 * z) / (96.0 * nu * nu);
}

SimEstimate simulate(const Scenario& s, const QuotationPolicy& policy, const SimConfig& cfg) {
  s.validate();
  cfg.validate();
  validate_policy(s, policy);

  const int n0 = policy.threshold;
  SimEstimate out;
  Welford profit, social;
  std::vector<Welford> occ(n0 + 1);
  std::vector<double> state_time(n0 + 1, 0.0);
  std::vector<std::int64_t> arrivals(n0 + 1, 0), joins(n0 + 1, 0), completions(n0 + 1, 0);
  std::vector<double> lateness(n0 + 1, 0.0);
  std::vector<Welford> state_util(n0 + 1);

  double total_time = 0.0;
  std::int64_t total_events = 0;

  for (int rep = 0; rep < cfg.replications; ++rep) {
    RepStats st = run_replication(s, policy, cfg, static_cast<std::uint64_t>(rep));
    for (int b = 0; b < cfg.batch_count; ++b) {
      profit.add(st.profit_rates[b]);
      social.add(st.social_rates[b]);
      for (int k = 0; k <= n0; ++k) occ[k].add(st.occupancy[b][k]);
    }
    for (int k = 0; k <= n0; ++k) {
      state_time[k] += st.state_time[k];
      arrivals[k] += st.arrivals_seeing[k];
      joins[k] += st.joins_at[k];
      completions[k] += st.completions_at[k];
      lateness[k] += st.lateness_sum[k];
      if (st.completions_at[k] > 0) {
        // Reconstruct a replication-level mean for the state utility CI.
        state_util[k].add(st.utility_sum[k] / st.completions_at[k]);
      }
    }
    total_time += st.time;
    total_events += st.events;
  }

  out.profit_rate = to_estimate(profit);
  out.social_rate = to_estimate(social);
  out.measured_time = total_time;
  out.total_events = total_events;
  out.occupancy.resize(n0 + 1);
  out.occupancy_ci.resize(n0 + 1);
  out.join_fraction_by_state.resize(n0 + 1);
  out.mean_lateness_paid.resize(n0 + 1);
  out.state_utility.resize(n0 + 1);
  out.completions_by_state.assign(completions.begin(), completions.end());
  for (int k = 0; k <= n0; ++k) {
    out.occupancy[k] = total_time > 0.0 ? state_time[k] / total_time : 0.0;
    out.occupancy_ci[k] = to_estimate(occ[k]);
    out.join_fraction_by_state[k] =
        arrivals[k] > 0 ? static_cast<double>(joins[k]) / arrivals[k] : 0.0;
    out.mean_lateness_paid[k] = completions[k] > 0 ? lateness[k] / completions[k] : 0.0;
    out.state_utility[k] = to_estimate(state_util[k]);
  }
  return out;
}

Estimate estimate_state_utility(const Scenario& s, const QuotationPolicy& policy,
                                const SimConfig& cfg, int state) {
  s.validate();
  cfg.validate();
  if (state < 0) throw std::invalid_argument("estimate_state_utility: state must be >= 0");
  const double quote = policy.quote_at(std::min(state, policy.threshold));

  const std::int64_t per_batch =
      std::max<std::int64_t>(1, static_cast<std::int64_t>(cfg.horizon.value) / cfg.batch_count);
  Welford batches;
  for (int rep = 0; rep < cfg.replications; ++rep) {
    Rng rng(cfg.seed, 0x51D0ULL + static_cast<std::uint64_t>(rep));
    for (int b = 0; b < cfg.batch_count; ++b) {
      double sum = 0.0;
      for (std::int64_t i = 0; i < per_batch; ++i) {
        double x = 0.0;
        for (int k = 0; k <= state; ++k) x += rng.exponential(s.service_rate);
        const double lateness = quote == kInfiniteQuote ? 0.0 : std::max(0.0, x - quote);
        const double wealth = s.service_value - s.entrance_fee - s.delay_cost_rate * x +
                              s.compensation_rate * lateness;
        sum += cara_utility(s, wealth);
      }
      batches.add(sum / per_batch);
    }
  }
  return to_estimate(batches);
}

}  // namespace ltq
