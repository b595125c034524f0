#pragma once

// Cheeger constant (exact by subset enumeration, heuristic by Fiedler sweep)
// and the second-smallest eigenvalue of the symmetric normalized Laplacian
// I - D^{-1/2} A D^{-1/2}, the lambda_2 the spectral bound consumes. Its
// spectrum lives in [0, 2] and the kernel eigenvector is known in closed
// form, which the iterative path deflates against. Note Phi_C here is
// vertex-normalized (min cardinality, not volume), so Phi_C <= sqrt(2 l2)
// is a bottlenecked-regime relation, not a dense-graph identity.

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "gossip/graph.hpp"

namespace gossip {

struct SpectralResult {
  double lambda2 = 0.0;
  double residual = 0.0;  // ||L x - lambda x|| for the unit Ritz vector
};

struct SpectralOptions {
  int dense_threshold = 2048;  // dense eigensolver below, Lanczos above
  double tolerance = 1e-8;     // absolute residual requirement
  int max_iterations = 400;    // Lanczos steps before giving up
  std::uint64_t start_seed = 0x5eed;
};

struct CheegerResult {
  double value = 0.0;
  std::vector<int> witness_set;  // sorted node ids, 0 < size < N
  bool exact = false;
};

/// |boundary(S)| / min(|S|, N-|S|) recomputed from the graph; the boundary
/// counts undirected edges with exactly one endpoint in S.
inline double cut_ratio(const Graph& g, const std::vector<int>& subset) {
  const int n = g.node_count();
  std::vector<char> in_s(n, 0);
  int size = 0;
  for (int u : subset) {
    if (u < 0 || u >= n) throw std::invalid_argument("cut_ratio: node out of range");
    if (!in_s[u]) {
      in_s[u] = 1;
      ++size;
    }
  }
  if (size == 0 || size == n)
    throw std::invalid_argument("cut_ratio: subset must be proper and nonempty");
  std::int64_t cut = 0;
  for (int u = 0; u < n; ++u) {
    if (!in_s[u]) continue;
    for (int v : g.neighbors(u))
      if (!in_s[v]) ++cut;
  }
  return static_cast<double>(cut) / std::min(size, n - size);
}

namespace detail {

inline void apply_normalized_laplacian(const Graph& g, const std::vector<double>& inv_sqrt_deg,
                                       const Eigen::VectorXd& x, Eigen::VectorXd& y) {
  const int n = g.node_count();
  for (int u = 0; u < n; ++u) {
    double acc = 0.0;
    for (int v : g.neighbors(u)) acc += x[v] * inv_sqrt_deg[v];
    y[u] = x[u] - inv_sqrt_deg[u] * acc;
  }
}

struct Lambda2Solution {
  double lambda2;
  Eigen::VectorXd vector;  // unit eigenvector of the normalized Laplacian
  double residual;
};

inline Lambda2Solution lambda2_dense(const Graph& g, const std::vector<double>& inv_sqrt_deg) {
  const int n = g.node_count();
  Eigen::MatrixXd lap = Eigen::MatrixXd::Identity(n, n);
  for (int u = 0; u < n; ++u)
    for (int v : g.neighbors(u)) lap(u, v) = -inv_sqrt_deg[u] * inv_sqrt_deg[v];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("lambda2: dense eigensolver failed");
  Lambda2Solution out;
  out.lambda2 = solver.eigenvalues()(1);  // ascending order; index 0 is the kernel
  out.vector = solver.eigenvectors().col(1);
  Eigen::VectorXd lx(n);
  apply_normalized_laplacian(g, inv_sqrt_deg, out.vector, lx);
  out.residual = (lx - out.lambda2 * out.vector).norm();
  return out;
}

/// Lanczos with full reorthogonalization on the deflated operator. The
/// 0-eigenvector of the normalized Laplacian is known in closed form
/// (D^{1/2} * ones, normalized), so it is projected out of every iterate and
/// the smallest Ritz value approximates lambda_2 directly.
inline Lambda2Solution lambda2_lanczos(const Graph& g, const std::vector<double>& inv_sqrt_deg,
                                       const SpectralOptions& opts) {
  const int n = g.node_count();
  Eigen::VectorXd kernel(n);
  for (int u = 0; u < n; ++u) kernel[u] = 1.0 / inv_sqrt_deg[u];  // sqrt(deg)
  kernel.normalize();

  Eigen::VectorXd v(n);
  for (int u = 0; u < n; ++u)
    v[u] = static_cast<double>(splitmix64(opts.start_seed + u)) * 0x1.0p-64 - 0.5;
  v -= kernel.dot(v) * kernel;
  if (v.norm() < 1e-12) throw std::runtime_error("lambda2: degenerate start vector");
  v.normalize();

  std::vector<Eigen::VectorXd> basis;
  std::vector<double> diag, offdiag;  // tridiagonal T
  basis.push_back(v);

  Eigen::VectorXd w(n), prev = Eigen::VectorXd::Zero(n);
  double beta = 0.0;
  double last_residual = std::numeric_limits<double>::infinity();

  for (int j = 0; j < opts.max_iterations; ++j) {
    apply_normalized_laplacian(g, inv_sqrt_deg, basis[j], w);
    if (j > 0) w -= beta * prev;
    const double alpha = basis[j].dot(w);
    diag.push_back(alpha);
    w -= alpha * basis[j];
    // two-pass reorthogonalization against the kernel and the whole basis
    for (int pass = 0; pass < 2; ++pass) {
      w -= kernel.dot(w) * kernel;
      for (const auto& b : basis) w -= b.dot(w) * b;
    }
    beta = w.norm();

    const int k = j + 1;
    const bool exhausted = beta < 1e-13 || k == opts.max_iterations;
    if (k % 10 == 0 || exhausted) {
      Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(k, k);
      for (int i = 0; i < k; ++i) tri(i, i) = diag[i];
      for (int i = 0; i + 1 < k; ++i) tri(i, i + 1) = tri(i + 1, i) = offdiag[i];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(tri);
      const Eigen::VectorXd y = small.eigenvectors().col(0);
      const double theta = small.eigenvalues()(0);
      if (beta * std::abs(y[k - 1]) < opts.tolerance || exhausted) {
        Eigen::VectorXd ritz = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < k; ++i) ritz += y[i] * basis[i];
        ritz -= kernel.dot(ritz) * kernel;
        ritz.normalize();
        Eigen::VectorXd lx(n);
        apply_normalized_laplacian(g, inv_sqrt_deg, ritz, lx);
        const double residual = (lx - theta * ritz).norm();
        if (residual <= opts.tolerance) return {theta, ritz, residual};
        last_residual = residual;
        if (exhausted)
          throw std::runtime_error("lambda2: Lanczos did not converge, residual " +
                                   std::to_string(residual));
      }
    }
    if (beta < 1e-13) break;  // invariant subspace hit before tolerance
    offdiag.push_back(beta);
    prev = basis[j];
    w /= beta;
    basis.push_back(w);
  }
  throw std::runtime_error("lambda2: Lanczos did not converge, residual " +
                           std::to_string(last_residual));
}

inline Lambda2Solution lambda2_solve(const Graph& g, const SpectralOptions& opts) {
  const int n = g.node_count();
  if (n < 2) throw std::invalid_argument("lambda2: need at least two nodes");
  if (!g.is_connected())
    throw std::invalid_argument("lambda2: graph is disconnected (lambda2 would be 0)");
  std::vector<double> inv_sqrt_deg(n);
  for (int u = 0; u < n; ++u) inv_sqrt_deg[u] = 1.0 / std::sqrt(static_cast<double>(g.degree(u)));
  auto solution = n < opts.dense_threshold ? lambda2_dense(g, inv_sqrt_deg)
                                           : lambda2_lanczos(g, inv_sqrt_deg, opts);
  if (solution.residual > opts.tolerance)
    throw std::runtime_error("lambda2: residual " + std::to_string(solution.residual) +
                             " above tolerance");
  return solution;
}

}  // namespace detail

inline SpectralResult lambda2(const Graph& g, const SpectralOptions& opts = {}) {
  auto solution = detail::lambda2_solve(g, opts);
  return {solution.lambda2, solution.residual};
}

/// Global minimum of the cut ratio by enumerating all 2^(N-1) subsets with
/// node 0 pinned inside S (the ratio is symmetric under complement). Ties
/// resolve to the lexicographically smallest witness.
inline CheegerResult cheeger_exact(const Graph& g) {
  const int n = g.node_count();
  if (n < 2) throw std::invalid_argument("cheeger_exact: need at least two nodes");
  if (n > 24)
    throw std::invalid_argument(
        "cheeger_exact: graph too large for exhaustive scan (N <= 24); use cheeger_sweep");
  if (!g.is_connected()) throw std::invalid_argument("cheeger_exact: graph is disconnected");

  std::vector<std::uint32_t> adj_mask(n, 0);
  for (int u = 0; u < n; ++u)
    for (int v : g.neighbors(u)) adj_mask[u] |= (1u << v);

  // True iff mask a, read as a sorted node list, precedes mask b.
  auto lex_less = [](std::uint32_t a, std::uint32_t b) {
    const std::uint32_t diff = a ^ b;
    if (diff == 0) return false;
    const int i = std::countr_zero(diff);
    if ((a >> i) & 1u) return (b >> i) != 0;  // b exhausted means b is a prefix of a
    return (a >> i) == 0;
  };

  double best = std::numeric_limits<double>::infinity();
  std::uint32_t best_mask = 0;

  const std::uint32_t subsets = 1u << (n - 1);
  for (std::uint32_t rest = 0; rest + 1 < subsets; ++rest) {
    const std::uint32_t s_mask = (rest << 1) | 1u;  // node 0 always in S
    const int size = std::popcount(s_mask);
    std::int64_t cut = 0;
    std::uint32_t members = s_mask;
    while (members) {
      const int u = std::countr_zero(members);
      members &= members - 1;
      cut += std::popcount(adj_mask[u] & ~s_mask);
    }
    const double value = static_cast<double>(cut) / std::min(size, n - size);
    if (value < best || (value == best && lex_less(s_mask, best_mask))) {
      best = value;
      best_mask = s_mask;
    }
  }

  CheegerResult out;
  out.exact = true;
  out.value = best;
  for (int u = 0; u < n; ++u)
    if (best_mask & (1u << u)) out.witness_set.push_back(u);
  return out;
}

/// Sweep-cut upper bound: order nodes by the Fiedler coordinate of the
/// random-walk Laplacian (D^{-1/2} times the normalized-Laplacian
/// eigenvector) and take the best prefix cut.
inline CheegerResult cheeger_sweep(const Graph& g, const SpectralOptions& opts = {}) {
  const int n = g.node_count();
  if (n < 2) throw std::invalid_argument("cheeger_sweep: need at least two nodes");
  auto solution = detail::lambda2_solve(g, opts);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> key(n);
  for (int u = 0; u < n; ++u)
    key[u] = solution.vector[u] / std::sqrt(static_cast<double>(g.degree(u)));
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (key[a] != key[b]) return key[a] < key[b];
    return a < b;
  });

  std::vector<char> in_s(n, 0);
  std::int64_t cut = 0;
  double best = std::numeric_limits<double>::infinity();
  int best_prefix = 0;
  for (int k = 0; k + 1 < n; ++k) {
    const int u = order[k];
    std::int64_t internal = 0;
    for (int v : g.neighbors(u))
      if (in_s[v]) ++internal;
    cut += g.degree(u) - 2 * internal;
    in_s[u] = 1;
    const double value = static_cast<double>(cut) / std::min(k + 1, n - k - 1);
    if (value < best) {
      best = value;
      best_prefix = k + 1;
    }
  }

  CheegerResult out;
  out.exact = false;
  out.value = best;
  out.witness_set.assign(order.begin(), order.begin() + best_prefix);
  std::sort(out.witness_set.begin(), out.witness_set.end());
  return out;
}

}  // namespace gossip
