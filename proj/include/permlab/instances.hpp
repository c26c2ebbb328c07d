#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "permlab/problems.hpp"

namespace permlab {

// Named instance families reachable from JSON and the CLI. `kind` tokens are
// part of the file-format contract and must not change.
struct GeneratorSpec {
  std::string kind;
  int n = 0;
  int d = 0;
  double L = 1.0;
  uint64_t seed = 0;
  // Perturbation controls for the hessian_smooth_1d family.
  double eps = 0.05;
  double w = 2.0;

  static GeneratorSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// f_i(x) = ||x - p_i||^2 with the points p_i uniform on the unit sphere.
// Every A_i = 2I, so mu = L = 2 and x* is the sample mean.
QuadraticSum gen_mean_computation(int n, int d, uint64_t seed);

// n components (n/2 "f"s then n/2 "g"s) over n coordinates interleaved as
// (x_1, y_1, ..., x_{n/2}, y_{n/2}). Each f_i has curvature L on every
// coordinate except y_i (where it is 0) and pulls the pair apart with linear
// terms -x_i + y_i; g_i mirrors it with x and y swapped. The linear terms
// cancel in the mean, F(z) = ((n-1)/n)(L/2)||z||^2, minimizer 0. Requires
// even n >= 4.
QuadraticSum gen_lower_bound_f1(int n, double L);

// n components over n coordinates: component i has curvature L everywhere
// except coordinate i, linear terms +coordinate_i - sum_{j != i} y_j/(n-1).
// F(y) = ((n-1)/n)(L/2)||y||^2, minimizer 0. Requires n >= 2.
QuadraticSum gen_lower_bound_f2(int n, double L);

// 1-D, all n components identical: f_i(z) = L z^2 (curvature 2L, no linear
// term), so every schedule contracts by (1 - 2 alpha L) per step.
QuadraticSum gen_lower_bound_f3(int n, double L);

// Block-diagonal direct sum of the three families above over dimension 2n+1;
// component i is the direct sum of the i-th component of each block.
// (n-1)L/n <= mu, component smoothness 2L.
QuadraticSum gen_lower_bound_combined(int n, double L);

// 1-D pair with one concave component: f_1 = (L/2)x^2 - x, f_2 = -(L/4)x^2 + x.
// F(x) = (L/8)x^2, minimizer 0.
QuadraticSum gen_thm3_pair(double L);

// Adversarial-for-identity-order instance. Defaults to the combined
// lower-bound family, which is provably slow for at least one fixed order;
// swap here if a different construction is ever wanted.
QuadraticSum gen_igd_hard(int n, double L);

// 1-D logistic regression on data z_i = +-1 with noisy labels, built so the
// population loss has its minimizer at -log 3 (label matches the sign
// indicator with probability 1/4). The empirical minimizer has the closed
// form logit(u) with u = (#negatives + sum_i y_i z_i)/n.
class LogisticSum final : public FiniteSum {
 public:
  LogisticSum(std::vector<int> z, std::vector<int> y);

  int n() const override { return static_cast<int>(z_.size()); }
  int dim() const override { return 1; }
  void gradient(int i, const Eigen::VectorXd& x, Eigen::VectorXd& g) const override;
  double value(int i, const Eigen::VectorXd& x) const override;
  using FiniteSum::gradient;

  double minimizer() const { return minimizer_; }            // empirical
  double population_minimizer() const;                       // -log 3
  double mu() const { return u_bar_ * (1.0 - u_bar_); }      // curvature at the empirical minimizer
  double L() const { return 0.25; }                          // sup of the sigmoid's derivative
  double match_fraction() const { return u_bar_; }

  const std::vector<int>& points() const { return z_; }
  const std::vector<int>& labels() const { return y_; }

 private:
  std::vector<int> z_;  // +-1
  std::vector<int> y_;  // 0/1
  double u_bar_ = 0;
  double minimizer_ = 0;
};

LogisticSum gen_logistic_1d(int n, uint64_t seed);

// 1-D components (a_i/2) x^2 + c_i x + eps_i log cosh(w_i (x - s_i)):
// quadratics plus a bounded perturbation with Lipschitz second derivative.
//   f_i''(x) = a_i + eps_i w_i^2 sech^2(...)  in [a_i, a_i + eps_i w_i^2]
//   |f_i'''| <= eps_i w_i^3 * 4/(3 sqrt 3)
class HessianSmoothSum final : public FiniteSum {
 public:
  HessianSmoothSum(std::vector<double> a, std::vector<double> c, std::vector<double> eps,
                   std::vector<double> w, std::vector<double> s);

  int n() const override { return static_cast<int>(a_.size()); }
  int dim() const override { return 1; }
  void gradient(int i, const Eigen::VectorXd& x, Eigen::VectorXd& g) const override;
  double value(int i, const Eigen::VectorXd& x) const override;
  using FiniteSum::gradient;

  double second_derivative(int i, double x) const;

  double mu() const;    // mean_i a_i, a global lower bound on F''
  double L() const;     // max_i (a_i + eps_i w_i^2)
  double L_H() const;   // max_i eps_i w_i^3 * 4/(3 sqrt 3)
  double minimizer() const { return minimizer_; }

  const std::vector<double>& a() const { return a_; }
  const std::vector<double>& c() const { return c_; }

 private:
  std::vector<double> a_, c_, eps_, w_, s_;
  double minimizer_ = 0;
};

// Draws a_i in [0.75 L, 1.25 L], c_i in [-1, 1], shifts s_i in [-0.5, 0.5];
// eps and w come from the spec (eps = 0 gives a pure quadratic family with
// L_H = 0).
HessianSmoothSum gen_hessian_smooth_1d(const GeneratorSpec& spec);

// Instance statistics plus what the step-size rules need beyond them.
struct InstanceProfile {
  InstanceStats stats;
  double L_H = 0.0;
  std::optional<double> population_minimizer;  // logistic family only
};

// Dispatches on the concrete instance type: exact closed forms for the
// constructed families, analytic bounds for the smooth 1-D ones.
InstanceProfile profile_instance(const FiniteSum& fs, const Eigen::VectorXd& x0);

// Builds from {"kind": ...}: either the inline dense format
// {"kind":"quadratic","n","d","A":[row-major matrices],"b":[vectors]} or a
// named generator shorthand such as {"kind":"mean_computation","n":800,...}.
std::unique_ptr<FiniteSum> build_instance(const nlohmann::json& j);
std::unique_ptr<FiniteSum> make_instance(const GeneratorSpec& spec);

// Inline JSON form of a quadratic (round-trips through build_instance).
nlohmann::json quadratic_to_json(const QuadraticSum& q);

}  // namespace permlab
