#include "permlab/schedulers.hpp"

namespace permlab {

PermutationStrategy::PermutationStrategy(BaseOrder base, bool flipflop, uint64_t seed, int n)
    : base_(base), flipflop_(flipflop), n_(n), rng_(seed) {
  if (n < 1) throw std::invalid_argument("strategy: n must be >= 1");
}

const Permutation& PermutationStrategy::next(int k) {
  if (k != next_k_) throw std::invalid_argument("strategy: epochs must be queried in order without gaps");
  ++next_k_;

  switch (base_) {
    case BaseOrder::igd:
      current_ = identity_permutation(n_);
      break;
    case BaseOrder::ss:
      if (!have_ss_) {
        ss_sigma_ = shuffle(rng_, n_);
        have_ss_ = true;
      }
      current_ = ss_sigma_;
      break;
    case BaseOrder::rr:
      current_ = shuffle(rng_, n_);
      break;
  }

  if (flipflop_ && k % 2 == 0) current_ = reversed(previous_);
  previous_ = current_;
  return current_;
}

SequencePlayback::SequencePlayback(std::vector<Permutation> sequence)
    : sequence_(std::move(sequence)) {}

const Permutation& SequencePlayback::next(int k) {
  if (k != next_k_) throw std::invalid_argument("playback: epochs must be queried in order without gaps");
  if (k < 1 || static_cast<size_t>(k) > sequence_.size())
    throw std::invalid_argument("playback: epoch beyond recorded sequence");
  ++next_k_;
  return sequence_[static_cast<size_t>(k - 1)];
}

}  // namespace permlab
