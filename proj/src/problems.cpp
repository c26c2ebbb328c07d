#include "permlab/problems.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace permlab {

Eigen::VectorXd FiniteSum::full_gradient(const Eigen::VectorXd& x) const {
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(dim());
  Eigen::VectorXd g;
  for (int i = 0; i < n(); ++i) {
    gradient(i, x, g);
    acc += g;
  }
  return acc / static_cast<double>(n());
}

double FiniteSum::full_value(const Eigen::VectorXd& x) const {
  double acc = 0;
  for (int i = 0; i < n(); ++i) acc += value(i, x);
  return acc / static_cast<double>(n());
}

QuadraticSum QuadraticSum::dense(std::vector<Eigen::MatrixXd> A, std::vector<Eigen::VectorXd> b) {
  if (A.empty() || A.size() != b.size())
    throw std::invalid_argument("quadratic: need matching non-empty A and b lists");
  const int d = static_cast<int>(A[0].rows());
  double scale = 0;
  for (const auto& m : A) scale = std::max(scale, m.cwiseAbs().maxCoeff());
  if (scale == 0) scale = 1;
  for (size_t i = 0; i < A.size(); ++i) {
    if (A[i].rows() != d || A[i].cols() != d || b[i].size() != d)
      throw std::invalid_argument("quadratic: inconsistent dimensions");
    const double asym = (A[i] - A[i].transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * scale) throw std::invalid_argument("quadratic: A matrices must be symmetric");
  }
  QuadraticSum q;
  q.n_ = static_cast<int>(A.size());
  q.d_ = d;
  q.diagonal_ = false;
  q.A_ = std::move(A);
  q.b_ = std::move(b);
  return q;
}

QuadraticSum QuadraticSum::diagonal(std::vector<Eigen::VectorXd> a_diag, std::vector<Eigen::VectorXd> b) {
  if (a_diag.empty() || a_diag.size() != b.size())
    throw std::invalid_argument("quadratic: need matching non-empty diagonal and b lists");
  const int d = static_cast<int>(a_diag[0].size());
  for (size_t i = 0; i < a_diag.size(); ++i)
    if (a_diag[i].size() != d || b[i].size() != d)
      throw std::invalid_argument("quadratic: inconsistent dimensions");
  QuadraticSum q;
  q.n_ = static_cast<int>(a_diag.size());
  q.d_ = d;
  q.diagonal_ = true;
  q.a_diag_ = std::move(a_diag);
  q.b_ = std::move(b);
  return q;
}

void QuadraticSum::gradient(int i, const Eigen::VectorXd& x, Eigen::VectorXd& g) const {
  check_index(i);
  const auto idx = static_cast<size_t>(i);
  if (diagonal_)
    g = a_diag_[idx].cwiseProduct(x) - b_[idx];
  else
    g.noalias() = A_[idx] * x, g -= b_[idx];
}

double QuadraticSum::value(int i, const Eigen::VectorXd& x) const {
  check_index(i);
  const auto idx = static_cast<size_t>(i);
  if (diagonal_) return 0.5 * x.dot(a_diag_[idx].cwiseProduct(x)) - b_[idx].dot(x);
  return 0.5 * x.dot(A_[idx] * x) - b_[idx].dot(x);
}

void QuadraticSum::sgd_step(int i, double alpha, Eigen::VectorXd& x) const {
  const auto idx = static_cast<size_t>(i);
  if (diagonal_) {
    x.array() -= alpha * (a_diag_[idx].array() * x.array() - b_[idx].array());
  } else {
    static thread_local Eigen::VectorXd g;
    g.noalias() = A_[idx] * x;
    g -= b_[idx];
    x -= alpha * g;
  }
}

Eigen::MatrixXd QuadraticSum::A_dense(int i) const {
  check_index(i);
  const auto idx = static_cast<size_t>(i);
  if (diagonal_) return a_diag_[idx].asDiagonal();
  return A_[idx];
}

const Eigen::VectorXd& QuadraticSum::A_diag(int i) const {
  check_index(i);
  if (!diagonal_) throw std::logic_error("quadratic: dense instance has no diagonal view");
  return a_diag_[static_cast<size_t>(i)];
}

Eigen::MatrixXd QuadraticSum::mean_A() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d_, d_);
  for (int i = 0; i < n_; ++i) {
    if (diagonal_)
      m.diagonal() += a_diag_[static_cast<size_t>(i)];
    else
      m += A_[static_cast<size_t>(i)];
  }
  return m / static_cast<double>(n_);
}

Eigen::VectorXd QuadraticSum::mean_b() const {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(d_);
  for (const auto& bi : b_) m += bi;
  return m / static_cast<double>(n_);
}

double QuadraticSum::b_scale() const {
  double s = 0;
  for (const auto& bi : b_) s = std::max(s, bi.norm());
  return s > 0 ? s : 1.0;
}

bool QuadraticSum::is_centered(double tol) const {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(d_);
  for (const auto& bi : b_) sum += bi;
  return sum.norm() <= tol * b_scale();
}

namespace {

double min_mean_eigenvalue(const QuadraticSum& q) {
  if (q.is_diagonal()) {
    Eigen::VectorXd diag = q.mean_A().diagonal();
    return diag.minCoeff();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q.mean_A(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double max_component_eigenvalue(const QuadraticSum& q) {
  double L = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < q.n(); ++i) {
    if (q.is_diagonal()) {
      L = std::max(L, q.A_diag(i).maxCoeff());
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q.A_dense(i), Eigen::EigenvaluesOnly);
      L = std::max(L, es.eigenvalues().maxCoeff());
    }
  }
  return L;
}

Eigen::VectorXd solve_minimizer(const QuadraticSum& q) {
  if (q.is_diagonal()) {
    Eigen::VectorXd diag = q.mean_A().diagonal();
    if (diag.minCoeff() <= 0) throw std::invalid_argument("instance is not strongly convex");
    return q.mean_b().cwiseQuotient(diag);
  }
  Eigen::LLT<Eigen::MatrixXd> llt(q.mean_A());
  if (llt.info() != Eigen::Success) throw std::invalid_argument("instance is not strongly convex");
  return llt.solve(q.mean_b());
}

}  // namespace

InstanceStats instance_stats(const QuadraticSum& q, const Eigen::VectorXd& x0) {
  InstanceStats s;
  s.mu = min_mean_eigenvalue(q);
  if (s.mu <= 0) throw std::invalid_argument("instance is not strongly convex");
  s.L = max_component_eigenvalue(q);
  s.kappa = s.L / s.mu;
  s.minimizer = solve_minimizer(q);
  double gs = 0;
  Eigen::VectorXd g;
  for (int i = 0; i < q.n(); ++i) {
    q.gradient(i, s.minimizer, g);
    gs = std::max(gs, g.norm());
  }
  s.g_star = gs;
  s.D = std::max((x0 - s.minimizer).norm(), s.g_star / (2.0 * s.L));
  s.G = s.g_star + 2.0 * s.D * s.L;
  return s;
}

QuadraticSum translate_to_origin(const QuadraticSum& q) {
  const Eigen::VectorXd x_star = solve_minimizer(q);
  std::vector<Eigen::VectorXd> new_b;
  new_b.reserve(static_cast<size_t>(q.n()));
  for (int i = 0; i < q.n(); ++i) {
    if (q.is_diagonal())
      new_b.push_back(q.b(i) - q.A_diag(i).cwiseProduct(x_star));
    else
      new_b.push_back(q.b(i) - q.A_dense(i) * x_star);
  }
  if (q.is_diagonal()) {
    std::vector<Eigen::VectorXd> a;
    a.reserve(static_cast<size_t>(q.n()));
    for (int i = 0; i < q.n(); ++i) a.push_back(q.A_diag(i));
    return QuadraticSum::diagonal(std::move(a), std::move(new_b));
  }
  std::vector<Eigen::MatrixXd> A;
  A.reserve(static_cast<size_t>(q.n()));
  for (int i = 0; i < q.n(); ++i) A.push_back(q.A_dense(i));
  return QuadraticSum::dense(std::move(A), std::move(new_b));
}

double StepSizeRule::resolve(int n, int K, double mu, double L, double L_H, double G) const {
  if (kind == Kind::fixed) {
    if (alpha <= 0) throw std::invalid_argument("step rule: fixed alpha must be positive");
    return alpha;
  }
  if (n < 1 || K < 1 || mu <= 0 || L <= 0) throw std::invalid_argument("step rule: bad parameters");
  const double nK = static_cast<double>(n) * static_cast<double>(K);
  if (nK <= 1) throw std::invalid_argument("step rule: nK must exceed 1");
  double a = 0;
  switch (kind) {
    case Kind::ss_log:
    case Kind::rr_log:
      a = 10.0 * std::log(nK) / (mu * nK);
      break;
    case Kind::igd_log:
      a = 6.0 * std::log(nK) / (mu * nK);
      break;
    case Kind::smooth_1d:
      a = mu / (8.0 * static_cast<double>(n) * (L * L + L_H * G));
      break;
    case Kind::fixed:
      break;
  }
  a = std::min(a, 1.0 / L);
  if (a <= 0) throw std::invalid_argument("step rule: resolved alpha not positive");
  return a;
}

}  // namespace permlab
