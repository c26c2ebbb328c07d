#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "permlab/permutation.hpp"
#include "permlab/rng.hpp"

namespace permlab {

enum class BaseOrder { igd, ss, rr };

// Anything that can feed a visiting order to the engine, one epoch at a time.
// Epochs must be queried as k = 1, 2, 3, ... without gaps.
class PermutationSource {
 public:
  virtual ~PermutationSource() = default;
  virtual const Permutation& next(int k) = 0;
  virtual bool flipflop() const { return false; }
};

// The three base schedules plus the flip wrapper: on every even epoch the
// previous epoch's order is replayed reversed. The base rule still fires on
// even epochs (rr consumes its draw) before being overwritten; this keeps the
// stream layout identical between plain and flipped runs of the same base.
class PermutationStrategy final : public PermutationSource {
 public:
  PermutationStrategy(BaseOrder base, bool flipflop, uint64_t seed, int n);

  const Permutation& next(int k) override;
  bool flipflop() const override { return flipflop_; }
  BaseOrder base() const { return base_; }
  int n() const { return n_; }

 private:
  BaseOrder base_;
  bool flipflop_;
  int n_;
  Rng rng_;
  int next_k_ = 1;
  bool have_ss_ = false;
  Permutation ss_sigma_;
  Permutation current_;
  Permutation previous_;
};

// Replays a fixed list of permutations (e.g. a search result); epoch k uses
// sequence[k-1].
class SequencePlayback final : public PermutationSource {
 public:
  explicit SequencePlayback(std::vector<Permutation> sequence);
  const Permutation& next(int k) override;

 private:
  std::vector<Permutation> sequence_;
  int next_k_ = 1;
};

}  // namespace permlab
