#pragma once

// Moment and concentration bounds for the diffusion time T_N.
//
// The exact moments from an alpha sequence are the primary path:
//   E[T_N]   = sum 1/alpha_k
//   Var(T_N) = sum 1/alpha_k^2 - E[T_N]
//   Chebyshev budget at failure probability delta: E + sqrt(Var/delta).
// The closed forms for complete and bottlenecked graphs are reporting
// conveniences, each in two variants: Principal re-derives the deviation
// term as sqrt(Var-bound/delta); PaperLiteral reproduces the printed
// constants verbatim (deviation term pi(N-1)/(3 sqrt(delta)) for complete
// graphs, undirected edge count in the Cheeger formulas).
//
// The Directed edge-count convention exists because alpha_k under
// edge-uniform sampling is |boundary(S_k)| / (2m) -- ordered cross pairs over
// directed edges. With the undirected count the "lower bound" can exceed the
// true alpha_k (K_4 at k=1: 2*1/6 = 1/3 > 1/4), so Directed is the default.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include "gossip/alphas.hpp"
#include "gossip/csv.hpp"
#include "gossip/sampling.hpp"

namespace gossip {

enum class Variant { Principal, PaperLiteral };

inline const char* to_string(Variant v) {
  return v == Variant::Principal ? "principal" : "paper-literal";
}

inline Variant parse_variant(const std::string& text) {
  if (text == "principal") return Variant::Principal;
  if (text == "paper-literal") return Variant::PaperLiteral;
  throw std::invalid_argument("unknown variant: " + text);
}

inline double expectation_from_alphas(const AlphaSequence& seq) {
  seq.validate();
  double acc = 0.0;
  for (double a : seq.alphas) acc += 1.0 / a;
  return acc;
}

inline double variance_from_alphas(const AlphaSequence& seq) {
  seq.validate();
  double acc = 0.0;
  for (double a : seq.alphas) {
    const double r = 1.0 / a;
    acc += r * r;
  }
  return acc - expectation_from_alphas(seq);
}

inline void check_delta(double delta) {
  if (!(delta > 0.0) || !(delta <= 1.0))
    throw std::invalid_argument("delta must lie in (0, 1]");
}

/// T_N <= E + sqrt(Var/delta) except with probability at most delta.
inline double chebyshev_bound(const AlphaSequence& seq, double delta) {
  check_delta(delta);
  const double e = expectation_from_alphas(seq);
  const double var = variance_from_alphas(seq);
  return e + std::sqrt(var / delta);
}

/// Closed-form budget for complete graphs:
///   2(n-1)ln(n+1) + pi(n-1)/sqrt(3 delta)   (Principal)
///   2(n-1)ln(n+1) + pi(n-1)/(3 sqrt(delta)) (PaperLiteral)
inline double complete_graph_bound(int n, double delta, Variant variant) {
  if (n < 2) throw std::invalid_argument("complete_graph_bound: need n >= 2");
  check_delta(delta);
  const double expectation_term = 2.0 * (n - 1) * std::log(static_cast<double>(n) + 1.0);
  const double deviation =
      variant == Variant::Principal
          ? std::numbers::pi * (n - 1) / std::sqrt(3.0 * delta)
          : std::numbers::pi * (n - 1) / (3.0 * std::sqrt(delta));
  return expectation_term + deviation;
}

/// alpha_k >= phi * min(k, n-k) / m, clamped into (0, 1]. `m` is whatever
/// edge count the caller's sampling model divides by; pass the directed
/// count 2m for a sound bound under edge-uniform sampling.
inline double cheeger_alpha_lower(double phi, std::int64_t m, int n, int k) {
  if (!(phi > 0.0)) throw std::invalid_argument("cheeger_alpha_lower: phi must be positive");
  if (m < 1) throw std::invalid_argument("cheeger_alpha_lower: need at least one edge");
  if (n < 2) throw std::invalid_argument("cheeger_alpha_lower: need n >= 2");
  if (k < 1 || k > n - 1) throw std::invalid_argument("cheeger_alpha_lower: k out of [1, n-1]");
  const double value = phi * std::min(k, n - k) / static_cast<double>(m);
  return std::min(value, 1.0);
}

inline AlphaSequence cheeger_lower_alphas(double phi, std::int64_t m, int n) {
  AlphaSequence seq;
  seq.kind = AlphaKind::CheegerLower;
  seq.alphas.reserve(n - 1);
  for (int k = 1; k <= n - 1; ++k) seq.alphas.push_back(cheeger_alpha_lower(phi, m, n, k));
  return seq;
}

inline std::int64_t effective_edge_count(std::int64_t m_undirected, Variant variant) {
  return variant == Variant::Principal ? 2 * m_undirected : m_undirected;
}

/// Cheeger budget (2m^/phi) ln(n/2 + 1) + pi m^ / (phi sqrt(3 delta)), where
/// m^ is the directed count 2m under Principal and the undirected m under
/// PaperLiteral.
inline double cheeger_bound(double phi, std::int64_t m_undirected, int n, double delta,
                            Variant variant) {
  if (!(phi > 0.0)) throw std::invalid_argument("cheeger_bound: phi must be positive");
  if (m_undirected < 1) throw std::invalid_argument("cheeger_bound: need at least one edge");
  if (n < 2) throw std::invalid_argument("cheeger_bound: need n >= 2");
  check_delta(delta);
  const double m_hat = static_cast<double>(effective_edge_count(m_undirected, variant));
  return (2.0 * m_hat / phi) * std::log(n / 2.0 + 1.0) +
         std::numbers::pi * m_hat / (phi * std::sqrt(3.0 * delta));
}

/// cheeger_bound with phi replaced by sqrt(2 lambda2) via Cheeger's
/// inequality.
inline double spectral_bound(double lambda2, std::int64_t m_undirected, int n, double delta,
                             Variant variant) {
  if (!(lambda2 > 0.0)) throw std::invalid_argument("spectral_bound: lambda2 must be positive");
  return cheeger_bound(std::sqrt(2.0 * lambda2), m_undirected, n, delta, variant);
}

struct BoundReport {
  int n = 0;
  double delta = 0.0;
  SamplingMode mode = SamplingMode::NodeUniform;
  AlphaKind alpha_kind = AlphaKind::UserSupplied;
  double expectation = 0.0;
  double variance = 0.0;
  double chebyshev = 0.0;
  std::optional<double> closed_form;  // empty when no closed form applies
  Variant variant = Variant::Principal;
};

inline BoundReport make_report(int n, const AlphaSequence& seq, double delta, SamplingMode mode,
                               Variant variant, std::optional<double> closed_form = {}) {
  BoundReport report;
  report.n = n;
  report.delta = delta;
  report.mode = mode;
  report.alpha_kind = seq.kind;
  report.expectation = expectation_from_alphas(seq);
  report.variance = variance_from_alphas(seq);
  report.chebyshev = chebyshev_bound(seq, delta);
  report.closed_form = closed_form;
  report.variant = variant;
  return report;
}

inline const char* bound_report_header() {
  return "n,delta,mode,alpha_kind,expectation,variance,chebyshev,closed_form,variant";
}

inline void write_bound_report_row(const BoundReport& r, std::ostream& out) {
  out << r.n << ',' << csv::format_double(r.delta) << ',' << to_string(r.mode) << ','
      << to_string(r.alpha_kind) << ',' << csv::format_double(r.expectation) << ','
      << csv::format_double(r.variance) << ',' << csv::format_double(r.chebyshev) << ','
      << (r.closed_form ? csv::format_double(*r.closed_form) : std::string()) << ','
      << to_string(r.variant) << '\n';
}

}  // namespace gossip
