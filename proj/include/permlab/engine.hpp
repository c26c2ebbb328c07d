#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "permlab/errors.hpp"
#include "permlab/problems.hpp"
#include "permlab/schedulers.hpp"

namespace permlab {

struct RunConfig {
  double alpha = 0;
  int K = 1;
  Eigen::VectorXd x0;
  bool record_iterates = false;  // store every step (x0 included), not just epoch endpoints
};

struct Trajectory {
  std::vector<double> sq_errors;  // ||x_end_of_epoch - x*||^2, one per completed epoch
  Eigen::VectorXd final_x;        // last finite state
  bool diverged = false;
  int last_finite_epoch = 0;  // == K when the run completed
  std::vector<Eigen::VectorXd> iterates;  // filled when record_iterates
};

// Iterate magnitude beyond which a run is flagged divergent (the adversarial
// step ranges deliberately include divergent regimes).
inline constexpr double kDivergenceNorm = 1e100;

// One pass over all components in perm order: x -= alpha * grad f_{perm[t]}(x).
Eigen::VectorXd sgd_epoch(const FiniteSum& fs, Eigen::VectorXd x, const Permutation& perm, double alpha);

// K epochs driven by the permutation source. Requires even K when the source
// flips. Squared distances are measured against x_star.
Trajectory run(const FiniteSum& fs, PermutationSource& source, const RunConfig& cfg,
               const Eigen::VectorXd& x_star);

// Exact epoch action x -> M x + v for a quadratic sum.
struct AffineEpochMap {
  Eigen::MatrixXd M;
  Eigen::VectorXd v;

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return M * x + v; }
  // Composition: this map first, then `second`.
  AffineEpochMap then(const AffineEpochMap& second) const {
    return AffineEpochMap{second.M * M, second.M * v + second.v};
  }
};

// Maps are a verification device; materialization is refused above this
// dimension (simulate directly instead).
inline constexpr int kMaxAffineDim = 64;

AffineEpochMap epoch_affine_map(const QuadraticSum& q, const Permutation& perm, double alpha);

// Offset accumulated by a forward epoch followed by its reversed epoch on a
// centered quadratic: x_after_pair = M_rev M_fwd x + z. Requires sum_i b_i = 0.
Eigen::VectorXd flipflop_bias_z(const QuadraticSum& q, const Permutation& perm, double alpha);

// Leading alpha^2 coefficients for scalar components with gradients
// a_i x + b_i (sum b_i = 0):
//   first  = sum_i b_i sum_{j>i} a_j   (single forward epoch from 0)
//   second = -sum_i b_i a_i            (forward + reversed epoch pair from 0)
struct ScalarBiasCoefficients {
  double single_epoch = 0;
  double flip_pair = 0;
};
ScalarBiasCoefficients scalar_first_order_bias(const std::vector<double>& a,
                                               const std::vector<double>& b);

}  // namespace permlab
