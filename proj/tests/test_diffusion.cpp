#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "gossip/diffusion.hpp"
#include "test_util.hpp"

using namespace gossip;

namespace {

// 2 (N-1) H_{N-1}, the exact complete-graph expectation.
double complete_expectation(int n) {
  double h = 0.0;
  for (int k = 1; k <= n - 1; ++k) h += 1.0 / k;
  return 2.0 * (n - 1) * h;
}

}  // namespace

TEST_CASE("single-node trial finishes immediately") {
  Rng rng(1);
  CHECK(run_trial(gen_complete(1), 0, SamplingMode::NodeUniform, rng).t_final == 0);
}

TEST_CASE("complete n=2 diffusion time is geometric with p=1/2") {
  TrialsConfig cfg;
  cfg.trials = 100'000;
  cfg.base_seed = 7;
  const auto stats = run_trials(gen_complete(2), cfg);
  const double se = stats.stddev / std::sqrt(static_cast<double>(cfg.trials));
  CHECK(std::abs(stats.mean - 2.0) <= 3.0 * se);
  CHECK(stats.min >= 1);
}

TEST_CASE("t_final floor and monotone reach on random graphs") {
  Rng meta(99);
  for (int round = 0; round < 12; ++round) {
    const int n = 2 + static_cast<int>(meta.bounded(12));
    const auto g = test_util::random_connected_graph(n, 0.4, meta);
    const auto mode = round % 2 ? SamplingMode::EdgeUniform : SamplingMode::NodeUniform;
    Rng rng(derive_stream_seed(4242, round));
    int prev_count = 1;
    const int start = static_cast<int>(meta.bounded(n));
    const auto result = run_trial_observed(
        g, start, mode, rng, {}, [&](const MessageEvent&, const ReachState& state) {
          CHECK(state.count() >= prev_count);
          CHECK(state.count() <= prev_count + 1);
          CHECK(state.reached(start));
          prev_count = state.count();
        });
    CHECK(result.t_final >= n - 1);
  }
}

TEST_CASE("hitting times are recorded and strictly increasing") {
  Rng rng(11);
  TrialOptions opts;
  opts.record_hitting_times = true;
  const int n = 12;
  const auto result = run_trial(gen_complete(n), 3, SamplingMode::NodeUniform, rng, opts);
  REQUIRE(result.hitting_times.size() == static_cast<std::size_t>(n + 1));
  CHECK(result.hitting_times[1] == 0);
  for (int k = 2; k <= n; ++k) CHECK(result.hitting_times[k] > result.hitting_times[k - 1]);
  CHECK(result.hitting_times[n] == result.t_final);
}

TEST_CASE("on chains every reached set is an interval") {
  const int n = 15;
  const auto g = gen_chain(n);
  for (auto mode : {SamplingMode::NodeUniform, SamplingMode::EdgeUniform}) {
    Rng rng(mode == SamplingMode::NodeUniform ? 5u : 6u);
    run_trial_observed(g, 7, mode, rng, {}, [&](const MessageEvent&, const ReachState& state) {
      int lo = n, hi = -1, count = 0;
      for (int u = 0; u < n; ++u)
        if (state.reached(u)) {
          lo = std::min(lo, u);
          hi = std::max(hi, u);
          ++count;
        }
      CHECK(count == hi - lo + 1);
    });
  }
}

TEST_CASE("step cap aborts with a diagnostic") {
  Rng rng(3);
  TrialOptions opts;
  opts.step_cap = 4;
  CHECK_THROWS_AS(run_trial(gen_chain(30), 0, SamplingMode::NodeUniform, rng, opts),
                  StepCapExceeded);

  TrialsConfig cfg;
  cfg.trials = 3;
  cfg.step_cap = 4;
  try {
    run_trials_raw(gen_chain(30), cfg);
    FAIL("expected StepCapExceeded");
  } catch (const StepCapExceeded& e) {
    CHECK(e.trial >= 0);
    CHECK(std::string(e.what()).find("trial") != std::string::npos);
  }
}

TEST_CASE("run_trials determinism and aggregation") {
  const auto g = gen_complete(10);
  TrialsConfig cfg;
  cfg.trials = 1;
  cfg.base_seed = 31;
  const auto single = run_trials(g, cfg);
  CHECK(single.stddev == 0.0);
  CHECK(single.min == single.max);

  cfg.trials = 500;
  const auto a = run_trials_raw(g, cfg);
  const auto b = run_trials_raw(g, cfg);
  CHECK(a == b);

  TrialsConfig serial = cfg;
  serial.threads = 1;
  TrialsConfig parallel = cfg;
  parallel.threads = 4;
  CHECK(run_trials_raw(g, serial) == run_trials_raw(g, parallel));

  const auto stats = compute_stats(g.node_count(), a);
  CHECK(stats.min <= stats.quantiles.at(0.05));
  CHECK(stats.quantiles.at(0.05) <= stats.quantiles.at(0.5));
  CHECK(stats.quantiles.at(0.5) <= stats.quantiles.at(0.95));
  CHECK(stats.quantiles.at(0.95) <= static_cast<double>(stats.max));
  CHECK(stats.per_node_mean == Catch::Approx(stats.mean / 10.0));
}

TEST_CASE("empirical mean matches the exact complete-graph expectation") {
  for (int n : {10, 50}) {
    TrialsConfig cfg;
    cfg.trials = 2000;
    cfg.base_seed = 17;
    const auto stats = run_trials(gen_complete(n), cfg);
    const double se = stats.stddev / std::sqrt(static_cast<double>(cfg.trials));
    CHECK(std::abs(stats.mean - complete_expectation(n)) <= 3.0 * se);
  }
}

TEST_CASE("stats and trial CSV writers") {
  const std::vector<std::int64_t> values = {4, 7, 5, 9};
  const auto stats = compute_stats(3, values);
  std::ostringstream stats_out;
  write_stats_csv(stats, stats_out);
  CHECK(stats_out.str() ==
        "n,trials,mean,std,min,q05,q50,q95,max,mean_per_node\n"
        "3,4,6.25,1.920286436967152,4,4.15,6,8.7,9,2.0833333333333335\n");

  std::ostringstream trials_out;
  write_trials_csv(values, trials_out);
  CHECK(trials_out.str() == "trial,t_final\n0,4\n1,7\n2,5\n3,9\n");
}

TEST_CASE("alpha_complete formula") {
  CHECK(alpha_complete(2, 1) == Catch::Approx(0.5));
  CHECK(alpha_complete(4, 2) == Catch::Approx(1.0 / 3.0));
  CHECK(alpha_complete(4, 1) == Catch::Approx(0.25));
  CHECK(alpha_complete(4, 3) == alpha_complete(4, 1));  // k <-> n-k symmetry
  CHECK_THROWS_AS(alpha_complete(4, 0), std::invalid_argument);
  CHECK_THROWS_AS(alpha_complete(4, 4), std::invalid_argument);
}

TEST_CASE("oracle_pmf reproduces a single geometric") {
  AlphaSequence seq;
  seq.alphas = {0.5};
  const auto result = oracle_pmf(seq, 40);
  CHECK(result.pmf[0] == 0.0);
  for (int t = 1; t <= 40; ++t)
    CHECK(result.pmf[t] == Catch::Approx(std::pow(0.5, t)).epsilon(1e-12));
  CHECK_THROWS_AS(oracle_pmf(seq, 0), std::invalid_argument);
}

TEST_CASE("oracle_pmf normalizes") {
  Rng rng(41);
  for (int round = 0; round < 10; ++round) {
    AlphaSequence seq;
    const int n = 2 + static_cast<int>(rng.bounded(8));
    for (int k = 1; k < n; ++k) seq.alphas.push_back(0.15 + 0.85 * rng.next_double());
    const auto result = oracle_pmf(seq, 2000);
    long double total = result.tail;
    for (double p : result.pmf) total += p;
    CHECK(std::abs(static_cast<double>(total) - 1.0) <= 1e-12);
  }
}

TEST_CASE("oracle_pmf moments match the closed-form sums") {
  const int n = 10;
  const auto alphas = complete_alphas(n);
  double expect = 0.0, var = 0.0;
  for (double a : alphas.alphas) {
    expect += 1.0 / a;
    var += 1.0 / (a * a);
  }
  var -= expect;
  const auto result = oracle_pmf(alphas, 2000);
  CHECK(result.tail < 1e-12);
  CHECK(pmf_mean(result) == Catch::Approx(expect).epsilon(1e-9));
  CHECK(pmf_variance(result) == Catch::Approx(var).epsilon(1e-9));
}

TEST_CASE("chain oracle basics") {
  CHECK(oracle_chain_expectation(1, 0, SamplingMode::NodeUniform) == 0.0);
  // two nodes: only the reached endpoint's send succeeds, probability 1/2
  CHECK(oracle_chain_expectation(2, 0, SamplingMode::NodeUniform) == Catch::Approx(2.0));
  CHECK(oracle_chain_expectation(2, 1, SamplingMode::EdgeUniform) == Catch::Approx(2.0));
  CHECK_THROWS_AS(oracle_chain_expectation(3, 3, SamplingMode::NodeUniform),
                  std::invalid_argument);
}

TEST_CASE("chain oracle agrees with Monte Carlo") {
  const int n = 8;
  for (auto mode : {SamplingMode::NodeUniform, SamplingMode::EdgeUniform}) {
    TrialsConfig cfg;
    cfg.trials = 4000;
    cfg.base_seed = 1234;
    cfg.mode = mode;
    cfg.start = StartPolicy::fixed(0);
    const auto stats = run_trials(gen_chain(n), cfg);
    const double se = stats.stddev / std::sqrt(static_cast<double>(cfg.trials));
    CHECK(std::abs(stats.mean - oracle_chain_expectation(n, 0, mode)) <= 3.0 * se);
  }
}
