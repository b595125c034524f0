#pragma once

// Per-step reach probabilities. alphas[k-1] is the probability that a message
// grows the reached set from k to k+1 nodes. Exact sequences exist for
// complete graphs; for general graphs only lower bounds are available, which
// still give valid upper bounds on the diffusion-time moments.

#include <stdexcept>
#include <string>
#include <vector>

namespace gossip {

enum class AlphaKind { ExactComplete, CheegerLower, UserSupplied };

inline const char* to_string(AlphaKind kind) {
  switch (kind) {
    case AlphaKind::ExactComplete: return "exact-complete";
    case AlphaKind::CheegerLower: return "cheeger-lower";
    default: return "user-supplied";
  }
}

struct AlphaSequence {
  std::vector<double> alphas;  // alpha_1 .. alpha_{N-1}
  AlphaKind kind = AlphaKind::UserSupplied;

  int node_count() const { return static_cast<int>(alphas.size()) + 1; }

  void validate() const {
    for (std::size_t i = 0; i < alphas.size(); ++i)
      if (!(alphas[i] > 0.0) || alphas[i] > 1.0)
        throw std::invalid_argument("alpha_" + std::to_string(i + 1) +
                                    " outside (0, 1]: " + std::to_string(alphas[i]));
  }
};

/// Complete graph on n nodes: alpha_k = k(n-k) / (n(n-1)) -- the sender must
/// be one of the k reached nodes and the receiver one of the n-k others.
inline double alpha_complete(int n, int k) {
  if (n < 2) throw std::invalid_argument("alpha_complete: need n >= 2");
  if (k < 1 || k > n - 1) throw std::invalid_argument("alpha_complete: k out of [1, n-1]");
  return (static_cast<double>(k) * (n - k)) / (static_cast<double>(n) * (n - 1));
}

inline AlphaSequence complete_alphas(int n) {
  if (n < 1) throw std::invalid_argument("complete_alphas: need n >= 1");
  AlphaSequence seq;
  seq.kind = AlphaKind::ExactComplete;
  seq.alphas.reserve(n > 0 ? n - 1 : 0);
  for (int k = 1; k <= n - 1; ++k) seq.alphas.push_back(alpha_complete(n, k));
  return seq;
}

}  // namespace gossip
