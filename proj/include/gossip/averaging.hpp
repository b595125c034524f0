#pragma once

// Sum-weight push averaging. Each node holds a mass s_i and a weight w_i,
// both updated by the same row-stochastic communication matrix; the local
// estimate is s_i / w_i. A message applies K = I except for the sender row,
// which splits between sender and receiver (half/half by default). The
// accumulated product P(t) = K(1) ... K(t) drives the error bounds:
//   error(t)        = || s/w - xbar 1 ||_2
//   bound_b(t)      = |xbar| * sqrt( sum_i ((max_j P_ji - min_j P_ji)/min_j P_ji)^2 )
//   bound_theorem(t)= 4 mu_S(P) / min(P) * |xbar| sqrt(N)
// where mu_S is Dobrushin's coefficient. Both bounds are undefined until
// every entry of P is positive; they are reported as "inf" until then.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gossip/csv.hpp"
#include "gossip/graph.hpp"
#include "gossip/rng.hpp"
#include "gossip/sampling.hpp"

namespace gossip {

struct GossipState {
  Eigen::VectorXd s;  // estimate masses
  Eigen::VectorXd w;  // weights
  std::optional<Eigen::MatrixXd> P;  // accumulated product, when tracked
  std::int64_t t = 0;
  double xbar = 0.0;          // target weighted average, cached at init
  double send_fraction = 0.5; // K_ss = 1 - f, K_sr = f

  int node_count() const { return static_cast<int>(s.size()); }
  double mass_s() const { return s.sum(); }
  double mass_w() const { return w.sum(); }
};

inline GossipState gossip_init(const std::vector<double>& values,
                               const std::vector<double>& weights, bool track_matrix,
                               double send_fraction = 0.5) {
  if (values.empty() || values.size() != weights.size())
    throw std::invalid_argument("gossip_init: values and weights must match and be nonempty");
  if (!(send_fraction > 0.0) || !(send_fraction < 1.0))
    throw std::invalid_argument("gossip_init: send fraction must lie in (0, 1)");
  const int n = static_cast<int>(values.size());
  GossipState state;
  state.s.resize(n);
  state.w.resize(n);
  double mass = 0.0, weight = 0.0;
  for (int i = 0; i < n; ++i) {
    if (weights[i] < 0.0) throw std::invalid_argument("gossip_init: negative weight");
    state.s[i] = weights[i] * values[i];
    state.w[i] = weights[i];
    mass += state.s[i];
    weight += weights[i];
  }
  if (weight <= 0.0) throw std::invalid_argument("gossip_init: all weights are zero");
  state.xbar = mass / weight;
  state.send_fraction = send_fraction;
  if (track_matrix) state.P = Eigen::MatrixXd::Identity(n, n);
  return state;
}

/// Applies K(t+1) for the event: the sender keeps (1-f) of its mass and
/// weight and pushes f to the receiver. P is multiplied on the right, so the
/// update touches two columns of P.
inline void gossip_step(GossipState& state, const MessageEvent& event) {
  const int n = state.node_count();
  if (event.sender == event.receiver)
    throw std::invalid_argument("gossip_step: sender equals receiver");
  if (event.sender < 0 || event.sender >= n || event.receiver < 0 || event.receiver >= n)
    throw std::invalid_argument("gossip_step: node id out of range");
  const double f = state.send_fraction;
  state.s[event.receiver] += f * state.s[event.sender];
  state.s[event.sender] *= (1.0 - f);
  state.w[event.receiver] += f * state.w[event.sender];
  state.w[event.sender] *= (1.0 - f);
  if (state.P) {
    state.P->col(event.receiver) += f * state.P->col(event.sender);
    state.P->col(event.sender) *= (1.0 - f);
  }
  ++state.t;
}

/// Dobrushin's ergodicity coefficient: half the largest L1 distance between
/// two rows. 0 for a rank-one (consensus) matrix, 1 when two rows have
/// disjoint support.
inline double dobrushin(const Eigen::MatrixXd& a, double stochastic_tol = 1e-9) {
  const auto n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("dobrushin: matrix must be square");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (a.row(i).minCoeff() < -stochastic_tol)
      throw std::invalid_argument("dobrushin: negative entry in row " + std::to_string(i));
    if (std::abs(a.row(i).sum() - 1.0) > stochastic_tol)
      throw std::invalid_argument("dobrushin: row " + std::to_string(i) + " does not sum to 1");
  }
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = i + 1; k < n; ++k)
      worst = std::max(worst, (a.row(i) - a.row(k)).cwiseAbs().sum());
  return 0.5 * worst;
}

/// Columnwise spread bound; undefined while any column of P still has a zero.
inline std::optional<double> bound_b(const Eigen::MatrixXd& p, double xbar) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < p.cols(); ++i) {
    const double lo = p.col(i).minCoeff();
    if (lo <= 0.0) return std::nullopt;
    const double hi = p.col(i).maxCoeff();
    const double spread = (hi - lo) / lo;
    acc += spread * spread;
  }
  return std::abs(xbar) * std::sqrt(acc);
}

/// The theorem-level bound 4 mu_S(P)/min(P) * ||xbar 1||.
inline std::optional<double> bound_theorem(const Eigen::MatrixXd& p, double xbar) {
  const double lo = p.minCoeff();
  if (lo <= 0.0) return std::nullopt;
  return 4.0 * dobrushin(p) / lo * std::abs(xbar) * std::sqrt(static_cast<double>(p.rows()));
}

/// || s/w - xbar 1 ||_2; undefined while some weight is still zero.
inline std::optional<double> consensus_error(const GossipState& state) {
  double acc = 0.0;
  for (int i = 0; i < state.node_count(); ++i) {
    if (state.w[i] == 0.0) return std::nullopt;
    const double d = state.s[i] / state.w[i] - state.xbar;
    acc += d * d;
  }
  return std::sqrt(acc);
}

struct ErrorRecord {
  std::int64_t t = 0;
  std::optional<double> error;
  std::optional<double> bound_b;
  std::optional<double> bound_theorem;
  double min_p = 0.0;
};

struct ErrorSeries {
  std::vector<ErrorRecord> records;
};

// CSV: "t,error,bound_b,bound_theorem,min_p", one row per recorded step.
inline void write_error_series_csv(const ErrorSeries& series, std::ostream& out) {
  out << "t,error,bound_b,bound_theorem,min_p\n";
  for (const auto& r : series.records)
    out << r.t << ',' << csv::format_optional(r.error) << ',' << csv::format_optional(r.bound_b)
        << ',' << csv::format_optional(r.bound_theorem) << ',' << csv::format_double(r.min_p)
        << '\n';
}

struct TraceConfig {
  std::vector<double> values;
  std::vector<double> weights;
  SamplingMode mode = SamplingMode::NodeUniform;
  std::int64_t steps = 1;
  std::uint64_t seed = 42;
  std::int64_t record_every = 1;
  double send_fraction = 0.5;
  int matrix_limit = 4096;    // memory guard for the N x N product
  bool force_matrix = false;  // override the guard
};

/// Drives gossip_step with sampled events and records the error and both
/// bounds at t = 0, every record_every steps, and the final step.
inline ErrorSeries run_trace(const Graph& g, const TraceConfig& cfg) {
  const int n = g.node_count();
  if (cfg.steps < 1) throw std::invalid_argument("run_trace: need at least one step");
  if (cfg.record_every < 1) throw std::invalid_argument("run_trace: record_every must be >= 1");
  if (static_cast<int>(cfg.values.size()) != n)
    throw std::invalid_argument("run_trace: init vectors must match the graph size");
  if (n > cfg.matrix_limit && !cfg.force_matrix)
    throw std::invalid_argument("run_trace: matrix tracking for N > " +
                                std::to_string(cfg.matrix_limit) +
                                " needs the explicit override");

  GossipState state = gossip_init(cfg.values, cfg.weights, /*track_matrix=*/true,
                                  cfg.send_fraction);
  Rng rng(cfg.seed);

  ErrorSeries series;
  auto record = [&] {
    ErrorRecord rec;
    rec.t = state.t;
    rec.error = consensus_error(state);
    rec.bound_b = bound_b(*state.P, state.xbar);
    rec.bound_theorem = bound_theorem(*state.P, state.xbar);
    rec.min_p = state.P->minCoeff();
    series.records.push_back(rec);
  };

  record();
  for (std::int64_t step = 1; step <= cfg.steps; ++step) {
    gossip_step(state, sample_event(g, cfg.mode, rng));
    if (step % cfg.record_every == 0 || step == cfg.steps) record();
  }
  return series;
}

}  // namespace gossip
