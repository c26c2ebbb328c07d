#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace permlab {

// Finite sum F(x) = (1/n) sum_i f_i(x). Component indices are 0-based
// internally; anything user-facing reports them 1-based.
class FiniteSum {
 public:
  virtual ~FiniteSum() = default;

  virtual int n() const = 0;
  virtual int dim() const = 0;

  // Writes grad f_i(x) into g (g is resized as needed).
  virtual void gradient(int i, const Eigen::VectorXd& x, Eigen::VectorXd& g) const = 0;

  // Component value up to the component's additive constant; enough for
  // finite-difference checks and monitoring.
  virtual double value(int i, const Eigen::VectorXd& x) const = 0;

  Eigen::VectorXd gradient(int i, const Eigen::VectorXd& x) const {
    Eigen::VectorXd g;
    gradient(i, x, g);
    return g;
  }

  Eigen::VectorXd full_gradient(const Eigen::VectorXd& x) const;
  double full_value(const Eigen::VectorXd& x) const;

 protected:
  void check_index(int i) const {
    if (i < 0 || i >= n()) throw std::out_of_range("component index out of range");
  }
};

// F(x) = (1/n) sum_i (x' A_i x / 2 - b_i' x). A_i symmetric; stored dense or,
// for the constructed families (all of which have diagonal Hessians), as
// per-component diagonals so large instances stay cheap.
class QuadraticSum final : public FiniteSum {
 public:
  static QuadraticSum dense(std::vector<Eigen::MatrixXd> A, std::vector<Eigen::VectorXd> b);
  static QuadraticSum diagonal(std::vector<Eigen::VectorXd> a_diag, std::vector<Eigen::VectorXd> b);

  int n() const override { return n_; }
  int dim() const override { return d_; }
  bool is_diagonal() const { return diagonal_; }

  void gradient(int i, const Eigen::VectorXd& x, Eigen::VectorXd& g) const override;
  double value(int i, const Eigen::VectorXd& x) const override;
  using FiniteSum::gradient;

  // In-place SGD step x -= alpha * grad f_i(x); the engine's hot path.
  void sgd_step(int i, double alpha, Eigen::VectorXd& x) const;

  const Eigen::VectorXd& b(int i) const { return b_[static_cast<size_t>(i)]; }
  // Materializes A_i as a dense matrix (cheap at the small dimensions where
  // dense matrices are wanted).
  Eigen::MatrixXd A_dense(int i) const;
  const Eigen::VectorXd& A_diag(int i) const;

  Eigen::MatrixXd mean_A() const;
  Eigen::VectorXd mean_b() const;

  // Largest |sum_i b_i| relative test scale (max_i ||b_i||, or 1 if all zero).
  double b_scale() const;
  bool is_centered(double tol = 1e-12) const;

 private:
  QuadraticSum() = default;

  int n_ = 0;
  int d_ = 0;
  bool diagonal_ = false;
  std::vector<Eigen::MatrixXd> A_;       // dense storage
  std::vector<Eigen::VectorXd> a_diag_;  // diagonal storage
  std::vector<Eigen::VectorXd> b_;
};

struct InstanceStats {
  double mu = 0;      // lambda_min of the mean Hessian
  double L = 0;       // max_i lambda_max(A_i)
  double kappa = 0;   // L / mu
  Eigen::VectorXd minimizer;
  double g_star = 0;  // max_i ||grad f_i(x*)||
  double D = 0;       // max(||x0 - x*||, g_star / (2 L))
  double G = 0;       // g_star + 2 D L
};

// Throws std::invalid_argument when the mean Hessian is not positive definite.
InstanceStats instance_stats(const QuadraticSum& q, const Eigen::VectorXd& x0);

// Shifts coordinates so the minimizer is the origin: A_i unchanged,
// b_i -> b_i - A_i x*. Gradients at corresponding points are equal and
// sum_i b_i becomes 0.
QuadraticSum translate_to_origin(const QuadraticSum& q);

// Constant step size resolution. The non-fixed rules return
//   ss_log / rr_log : 10 log(nK) / (mu n K)
//   igd_log         :  6 log(nK) / (mu n K)
//   smooth_1d       : mu / (8 n (L^2 + L_H G))
// clamped to at most 1/L.
struct StepSizeRule {
  enum class Kind { fixed, ss_log, rr_log, igd_log, smooth_1d };
  Kind kind = Kind::fixed;
  double alpha = 0.0;  // used by Kind::fixed

  double resolve(int n, int K, double mu, double L, double L_H = 0.0, double G = 0.0) const;

  static StepSizeRule fixed_alpha(double a) { return StepSizeRule{Kind::fixed, a}; }
};

}  // namespace permlab
