#include "permlab/engine.hpp"

#include <cmath>

namespace permlab {

namespace {

bool is_finite_state(const Eigen::VectorXd& x) {
  return x.allFinite() && x.squaredNorm() <= kDivergenceNorm * kDivergenceNorm;
}

void step(const FiniteSum& fs, const QuadraticSum* quad, int i, double alpha,
          Eigen::VectorXd& x, Eigen::VectorXd& g) {
  if (quad) {
    quad->sgd_step(i, alpha, x);
  } else {
    fs.gradient(i, x, g);
    x -= alpha * g;
  }
}

}  // namespace

Eigen::VectorXd sgd_epoch(const FiniteSum& fs, Eigen::VectorXd x, const Permutation& perm,
                          double alpha) {
  if (static_cast<int>(perm.size()) != fs.n() || !is_valid_permutation(perm))
    throw std::invalid_argument("sgd_epoch: perm must be a permutation of the component indices");
  const auto* quad = dynamic_cast<const QuadraticSum*>(&fs);
  Eigen::VectorXd g;
  for (int i : perm) step(fs, quad, i, alpha, x, g);
  return x;
}

Trajectory run(const FiniteSum& fs, PermutationSource& source, const RunConfig& cfg,
               const Eigen::VectorXd& x_star) {
  if (cfg.alpha <= 0) throw std::invalid_argument("run: alpha must be positive");
  if (cfg.K < 1) throw std::invalid_argument("run: K must be at least 1");
  if (cfg.x0.size() != fs.dim()) throw std::invalid_argument("run: x0 dimension mismatch");
  if (source.flipflop() && cfg.K % 2 != 0)
    throw std::invalid_argument("run: flip schedules require an even epoch count");

  const auto* quad = dynamic_cast<const QuadraticSum*>(&fs);
  Trajectory traj;
  traj.sq_errors.reserve(static_cast<size_t>(cfg.K));
  Eigen::VectorXd x = cfg.x0;
  Eigen::VectorXd g;
  if (cfg.record_iterates) traj.iterates.push_back(x);
  traj.final_x = x;

  for (int k = 1; k <= cfg.K; ++k) {
    const Permutation& perm = source.next(k);
    if (static_cast<int>(perm.size()) != fs.n() || !is_valid_permutation(perm))
      throw std::invalid_argument("run: scheduler emitted an invalid permutation");
    for (int i : perm) {
      step(fs, quad, i, cfg.alpha, x, g);
      if (!is_finite_state(x)) {
        traj.diverged = true;
        return traj;
      }
      if (cfg.record_iterates) traj.iterates.push_back(x);
    }
    traj.sq_errors.push_back((x - x_star).squaredNorm());
    traj.final_x = x;
    traj.last_finite_epoch = k;
  }
  return traj;
}

AffineEpochMap epoch_affine_map(const QuadraticSum& q, const Permutation& perm, double alpha) {
  if (q.dim() > kMaxAffineDim)
    throw BudgetError("epoch_affine_map: dimension exceeds the materialization budget");
  if (static_cast<int>(perm.size()) != q.n() || !is_valid_permutation(perm))
    throw std::invalid_argument("epoch_affine_map: invalid permutation");
  const int d = q.dim();
  AffineEpochMap map{Eigen::MatrixXd::Identity(d, d), Eigen::VectorXd::Zero(d)};
  for (int i : perm) {
    // x -> (I - alpha A_i) x + alpha b_i, composed in visiting order
    const Eigen::MatrixXd Si = alpha * q.A_dense(i);
    map.M = map.M - Si * map.M;
    map.v = map.v - Si * map.v + alpha * q.b(i);
  }
  return map;
}

Eigen::VectorXd flipflop_bias_z(const QuadraticSum& q, const Permutation& perm, double alpha) {
  if (!q.is_centered())
    throw std::invalid_argument("flipflop_bias_z: instance must be centered (sum b_i = 0)");
  const AffineEpochMap fwd = epoch_affine_map(q, perm, alpha);
  const AffineEpochMap rev = epoch_affine_map(q, reversed(perm), alpha);
  return rev.M * fwd.v + rev.v;
}

ScalarBiasCoefficients scalar_first_order_bias(const std::vector<double>& a,
                                               const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty())
    throw std::invalid_argument("scalar_first_order_bias: need matching non-empty lists");
  double bsum = 0, bscale = 0;
  for (double bi : b) {
    bsum += bi;
    bscale = std::max(bscale, std::abs(bi));
  }
  if (std::abs(bsum) > 1e-12 * std::max(bscale, 1.0))
    throw std::invalid_argument("scalar_first_order_bias: requires sum b_i = 0");

  ScalarBiasCoefficients out;
  double suffix = 0;  // sum_{j>i} a_j
  for (size_t i = a.size(); i-- > 0;) {
    out.single_epoch += b[i] * suffix;
    suffix += a[i];
  }
  for (size_t i = 0; i < a.size(); ++i) out.flip_pair -= b[i] * a[i];
  return out;
}

}  // namespace permlab
