#pragma once

// Reach-process simulation. A trial repeatedly samples one message per step;
// the receiver becomes reached iff the sender already was, and the trial ends
// when all N nodes are reached. T_N is the step count at that moment.
// Alongside the Monte Carlo path there are two exact oracles: the geometric-
// convolution pmf of T_N for a given alpha sequence, and an absorbing-chain
// expectation for chains, where the reached set is always an interval.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gossip/alphas.hpp"
#include "gossip/csv.hpp"
#include "gossip/graph.hpp"
#include "gossip/parallel.hpp"
#include "gossip/rng.hpp"
#include "gossip/sampling.hpp"

namespace gossip {

/// Which nodes have received information from the start node. Packed bits;
/// the count only ever grows, by at most one per step.
class ReachState {
 public:
  ReachState(int n, int start) : n_(n), bits_((n + 63) / 64, 0) {
    if (start < 0 || start >= n) throw std::invalid_argument("start node out of range");
    mark(start);
  }

  bool reached(int u) const { return (bits_[u >> 6] >> (u & 63)) & 1; }
  void mark(int u) {
    if (!reached(u)) {
      bits_[u >> 6] |= std::uint64_t{1} << (u & 63);
      ++count_;
    }
  }
  int count() const { return count_; }
  int node_count() const { return n_; }
  std::int64_t step() const { return t_; }
  void advance() { ++t_; }

 private:
  int n_;
  int count_ = 0;
  std::int64_t t_ = 0;
  std::vector<std::uint64_t> bits_;
};

struct TrialOptions {
  bool record_hitting_times = false;  // keep T_k for every k (O(N) extra memory)
  std::int64_t step_cap = 1'000'000'000;
};

struct TrialResult {
  std::int64_t t_final = 0;                  // T_N
  std::vector<std::int64_t> hitting_times;   // index k in [1, N]; empty unless recorded
};

/// Step cap hit before full reach; a diagnostic, never silent truncation.
struct StepCapExceeded : std::runtime_error {
  StepCapExceeded(std::int64_t cap, int reached, int n, std::int64_t trial)
      : std::runtime_error("step cap " + std::to_string(cap) + " exceeded with " +
                           std::to_string(reached) + "/" + std::to_string(n) +
                           " nodes reached" +
                           (trial >= 0 ? " (trial " + std::to_string(trial) + ")" : "")),
        cap(cap), reached(reached), trial(trial) {}
  std::int64_t cap;
  int reached;
  std::int64_t trial;
};

namespace detail {

template <class Observer>
TrialResult run_trial_impl(const Graph& g, int start, SamplingMode mode, Rng& rng,
                           const TrialOptions& opts, std::int64_t trial_index, Observer&& observe) {
  const int n = g.node_count();
  ReachState state(n, start);
  TrialResult result;
  if (opts.record_hitting_times) {
    result.hitting_times.assign(n + 1, -1);
    result.hitting_times[1] = 0;
  }
  while (state.count() < n) {
    if (state.step() >= opts.step_cap)
      throw StepCapExceeded(opts.step_cap, state.count(), n, trial_index);
    const MessageEvent event = sample_event(g, mode, rng);
    state.advance();
    if (state.reached(event.sender) && !state.reached(event.receiver)) {
      state.mark(event.receiver);
      if (opts.record_hitting_times) result.hitting_times[state.count()] = state.step();
    }
    observe(event, state);
  }
  result.t_final = state.step();
  return result;
}

}  // namespace detail

/// One trial with a per-step observer `observe(event, state)`, called after
/// the update. Used by structural tests; the plain overload is the fast path.
template <class Observer>
TrialResult run_trial_observed(const Graph& g, int start, SamplingMode mode, Rng& rng,
                               const TrialOptions& opts, Observer&& observe) {
  if (!g.is_connected()) throw std::invalid_argument("run_trial: graph must be connected");
  return detail::run_trial_impl(g, start, mode, rng, opts, -1, std::forward<Observer>(observe));
}

inline TrialResult run_trial(const Graph& g, int start, SamplingMode mode, Rng& rng,
                             const TrialOptions& opts = {}) {
  return run_trial_observed(g, start, mode, rng, opts, [](const MessageEvent&, const ReachState&) {});
}

struct StartPolicy {
  static StartPolicy uniform() { return {}; }
  static StartPolicy fixed(int node) {
    StartPolicy p;
    p.fixed_node = node;
    return p;
  }
  std::optional<int> fixed_node;  // empty = uniform per trial

  int pick(int n, Rng& rng) const {
    if (fixed_node) {
      if (*fixed_node < 0 || *fixed_node >= n)
        throw std::invalid_argument("start node out of range");
      return *fixed_node;
    }
    return static_cast<int>(rng.bounded(n));
  }
};

struct TrialsConfig {
  std::int64_t trials = 50;
  std::uint64_t base_seed = 42;
  SamplingMode mode = SamplingMode::NodeUniform;
  StartPolicy start = StartPolicy::uniform();
  std::int64_t step_cap = 1'000'000'000;
  int threads = 0;  // <= 0: hardware concurrency
  std::vector<double> quantile_probs = {0.05, 0.5, 0.95};
};

/// All T_N values, one per trial. Trial i runs on the stream derived from
/// (base_seed, i), so results are independent of thread count and order.
inline std::vector<std::int64_t> run_trials_raw(const Graph& g, const TrialsConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("run_trials: need at least one trial");
  if (!g.is_connected()) throw std::invalid_argument("run_trials: graph must be connected");
  const int n = g.node_count();
  if (cfg.start.fixed_node && (*cfg.start.fixed_node < 0 || *cfg.start.fixed_node >= n))
    throw std::invalid_argument("run_trials: start node out of range");
  std::vector<std::int64_t> t_finals(cfg.trials, 0);
  if (n == 1) return t_finals;

  TrialOptions opts;
  opts.step_cap = cfg.step_cap;
  parallel_for(
      cfg.trials,
      [&](std::int64_t begin, std::int64_t end) {
        for (std::int64_t i = begin; i < end; ++i) {
          Rng rng(derive_stream_seed(cfg.base_seed, static_cast<std::uint64_t>(i)));
          const int start = cfg.start.pick(n, rng);
          t_finals[i] = detail::run_trial_impl(g, start, cfg.mode, rng, opts, i,
                                               [](const MessageEvent&, const ReachState&) {})
                            .t_final;
        }
      },
      cfg.threads);
  return t_finals;
}

struct DiffusionStats {
  int n = 0;
  std::int64_t trials = 0;
  double mean = 0.0;
  double stddev = 0.0;  // population convention: zero for a single trial
  std::int64_t min = 0;
  std::int64_t max = 0;
  std::map<double, double> quantiles;
  double per_node_mean = 0.0;
};

/// Linear-interpolation quantile over sorted values (the same convention as
/// numpy's default).
inline double quantile_sorted(const std::vector<std::int64_t>& sorted, double p) {
  const std::size_t count = sorted.size();
  if (count == 1) return static_cast<double>(sorted[0]);
  const double h = p * static_cast<double>(count - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  const std::size_t hi = std::min(lo + 1, count - 1);
  const double frac = h - static_cast<double>(lo);
  return static_cast<double>(sorted[lo]) + (static_cast<double>(sorted[hi]) - sorted[lo]) * frac;
}

inline DiffusionStats compute_stats(int n, const std::vector<std::int64_t>& t_finals,
                                    const std::vector<double>& quantile_probs = {0.05, 0.5, 0.95}) {
  if (t_finals.empty()) throw std::invalid_argument("compute_stats: no trials");
  DiffusionStats stats;
  stats.n = n;
  stats.trials = static_cast<std::int64_t>(t_finals.size());
  long double sum = 0.0L, sum_sq = 0.0L;
  stats.min = t_finals[0];
  stats.max = t_finals[0];
  for (std::int64_t v : t_finals) {
    sum += v;
    sum_sq += static_cast<long double>(v) * v;
    stats.min = std::min(stats.min, v);
    stats.max = std::max(stats.max, v);
  }
  const long double mean = sum / stats.trials;
  stats.mean = static_cast<double>(mean);
  const long double var = std::max(0.0L, sum_sq / stats.trials - mean * mean);
  stats.stddev = static_cast<double>(std::sqrt(static_cast<double>(var)));
  stats.per_node_mean = stats.mean / n;

  std::vector<std::int64_t> sorted(t_finals);
  std::sort(sorted.begin(), sorted.end());
  for (double p : quantile_probs) stats.quantiles[p] = quantile_sorted(sorted, p);
  return stats;
}

inline DiffusionStats run_trials(const Graph& g, const TrialsConfig& cfg) {
  return compute_stats(g.node_count(), run_trials_raw(g, cfg), cfg.quantile_probs);
}

// CSV surfaces. Stats: "n,trials,mean,std,min,q05,q50,q95,max,mean_per_node".
// Trial dump: "trial,t_final".

inline void write_stats_csv(const DiffusionStats& stats, std::ostream& out) {
  auto quantile = [&](double p) {
    auto it = stats.quantiles.find(p);
    return it == stats.quantiles.end() ? std::string("inf") : csv::format_double(it->second);
  };
  out << "n,trials,mean,std,min,q05,q50,q95,max,mean_per_node\n";
  out << stats.n << ',' << stats.trials << ',' << csv::format_double(stats.mean) << ','
      << csv::format_double(stats.stddev) << ',' << stats.min << ',' << quantile(0.05) << ','
      << quantile(0.5) << ',' << quantile(0.95) << ',' << stats.max << ','
      << csv::format_double(stats.per_node_mean) << '\n';
}

inline void write_trials_csv(const std::vector<std::int64_t>& t_finals, std::ostream& out) {
  out << "trial,t_final\n";
  for (std::size_t i = 0; i < t_finals.size(); ++i) out << i << ',' << t_finals[i] << '\n';
}

/// Exact pmf of T_N on {0..horizon} for independent per-step success
/// probabilities, plus the mass beyond the horizon. T_N is a sum of N-1
/// geometric variables, so the distribution is their convolution, computed
/// stage by stage with the linear recurrence
///   next[t] = (1-a) * next[t-1] + a * cur[t-1].
struct PmfResult {
  std::vector<double> pmf;  // index t
  double tail = 0.0;
};

inline PmfResult oracle_pmf(const AlphaSequence& alphas, std::int64_t horizon) {
  alphas.validate();
  const int n = alphas.node_count();
  if (horizon < n - 1)
    throw std::invalid_argument("oracle_pmf: horizon below the N-1 step floor");

  std::vector<double> dist(static_cast<std::size_t>(horizon) + 1, 0.0);
  dist[0] = 1.0;  // zero geometrics: all mass at 0
  for (double a : alphas.alphas) {
    double prev_orig = dist[0];
    dist[0] = 0.0;
    for (std::int64_t t = 1; t <= horizon; ++t) {
      const double orig = dist[t];
      dist[t] = (1.0 - a) * dist[t - 1] + a * prev_orig;
      prev_orig = orig;
    }
  }

  PmfResult out;
  out.pmf = std::move(dist);
  long double total = 0.0L;
  for (double p : out.pmf) total += p;
  out.tail = static_cast<double>(std::max(0.0L, 1.0L - total));
  return out;
}

inline double pmf_mean(const PmfResult& r) {
  long double acc = 0.0L;
  for (std::size_t t = 0; t < r.pmf.size(); ++t) acc += static_cast<long double>(t) * r.pmf[t];
  return static_cast<double>(acc);
}

inline double pmf_variance(const PmfResult& r) {
  const long double mean = pmf_mean(r);
  long double acc = 0.0L;
  for (std::size_t t = 0; t < r.pmf.size(); ++t) {
    const long double d = static_cast<long double>(t) - mean;
    acc += d * d * r.pmf[t];
  }
  return static_cast<double>(acc);
}

/// Exact E[T_N] on a chain, for every start node at once. The reached set on
/// a chain is always an interval [a, b], so the process is an absorbing
/// Markov chain over O(n^2) interval states; per-step extension
/// probabilities follow from the sampling mode.
inline std::vector<double> oracle_chain_expectations(int n, SamplingMode mode) {
  if (n < 1) throw std::invalid_argument("oracle_chain_expectations: need n >= 1");
  if (n == 1) return {0.0};

  auto extend_prob = [&](int endpoint, bool leftward) -> double {
    // probability that the next message goes endpoint -> endpoint -/+ 1
    if (leftward && endpoint == 0) return 0.0;
    if (!leftward && endpoint == n - 1) return 0.0;
    if (mode == SamplingMode::EdgeUniform) return 1.0 / (2.0 * (n - 1));
    const int deg = (endpoint == 0 || endpoint == n - 1) ? 1 : 2;
    return 1.0 / (static_cast<double>(n) * deg);
  };

  std::vector<double> expect(static_cast<std::size_t>(n) * n, 0.0);
  auto at = [&](int a, int b) -> double& { return expect[static_cast<std::size_t>(a) * n + b]; };

  for (int len = n - 2; len >= 0; --len) {
    for (int a = 0; a + len < n; ++a) {
      const int b = a + len;
      const double p_left = extend_prob(a, true);
      const double p_right = extend_prob(b, false);
      const double left_target = p_left > 0.0 ? at(a - 1, b) : 0.0;
      const double right_target = p_right > 0.0 ? at(a, b + 1) : 0.0;
      at(a, b) = (1.0 + p_left * left_target + p_right * right_target) / (p_left + p_right);
    }
  }

  std::vector<double> out(n);
  for (int a = 0; a < n; ++a) out[a] = at(a, a);
  return out;
}

inline double oracle_chain_expectation(int n, int start, SamplingMode mode) {
  if (start < 0 || start >= n)
    throw std::invalid_argument("oracle_chain_expectation: start out of range");
  return oracle_chain_expectations(n, mode)[start];
}

}  // namespace gossip
