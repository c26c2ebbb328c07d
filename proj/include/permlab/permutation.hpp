#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "permlab/rng.hpp"

namespace permlab {

// Visiting order over components, 0-based internally. All user-facing output
// (CLI, JSON, logs) reports 1-based indices.
using Permutation = std::vector<int>;

inline Permutation identity_permutation(int n) {
  Permutation p(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<size_t>(i)] = i;
  return p;
}

inline Permutation reversed(const Permutation& p) {
  return Permutation(p.rbegin(), p.rend());
}

inline bool is_valid_permutation(const Permutation& p) {
  const size_t n = p.size();
  std::vector<bool> seen(n, false);
  for (int v : p) {
    if (v < 0 || static_cast<size_t>(v) >= n || seen[static_cast<size_t>(v)]) return false;
    seen[static_cast<size_t>(v)] = true;
  }
  return true;
}

// Fisher-Yates from the last index downward; uniform given an ideal generator.
inline Permutation shuffle(Rng& rng, int n) {
  Permutation p = identity_permutation(n);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.next_below(static_cast<uint64_t>(i) + 1));
    std::swap(p[static_cast<size_t>(i)], p[static_cast<size_t>(j)]);
  }
  return p;
}

inline std::vector<int> one_based(const Permutation& p) {
  std::vector<int> out(p.size());
  for (size_t i = 0; i < p.size(); ++i) out[i] = p[i] + 1;
  return out;
}

}  // namespace permlab
