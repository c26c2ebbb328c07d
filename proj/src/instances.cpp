#include "permlab/instances.hpp"

#include <cmath>
#include <cstdlib>

#include "permlab/rng.hpp"

namespace permlab {

namespace {

double sigmoid(double u) {
  if (u >= 0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

double softplus(double t) {  // log(1 + e^t), overflow-safe
  return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t)));
}

double log_cosh(double t) {
  return std::abs(t) + std::log1p(std::exp(-2.0 * std::abs(t))) - std::log(2.0);
}

double sech_squared(double t) {
  const double e = std::exp(-std::abs(t));  // cosh(t) = (1 + e^2) / (2e) for e = e^{-|t|}
  const double sech = 2.0 * e / (1.0 + e * e);
  return sech * sech;
}

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

QuadraticSum gen_mean_computation(int n, int d, uint64_t seed) {
  require(n >= 1 && d >= 1, "mean_computation: need n >= 1 and d >= 1");
  Rng rng(seed);
  std::vector<Eigen::VectorXd> diag(static_cast<size_t>(n), Eigen::VectorXd::Constant(d, 2.0));
  std::vector<Eigen::VectorXd> b(static_cast<size_t>(n));
  for (auto& bi : b) {
    Eigen::VectorXd p(d);
    double norm = 0;
    do {
      for (int j = 0; j < d; ++j) p[j] = rng.next_gaussian();
      norm = p.norm();
    } while (norm < 1e-12);
    bi = (2.0 / norm) * p;  // f_i = ||x - p||^2 stores b_i = 2 p
  }
  return QuadraticSum::diagonal(std::move(diag), std::move(b));
}

QuadraticSum gen_lower_bound_f1(int n, double L) {
  require(n >= 4 && n % 2 == 0, "lb_f1: n must be even and >= 4");
  require(L > 0, "lb_f1: L must be positive");
  const int pairs = n / 2;
  std::vector<Eigen::VectorXd> diag, b;
  diag.reserve(static_cast<size_t>(n));
  b.reserve(static_cast<size_t>(n));
  // coordinates (x_1, y_1, ..., x_{n/2}, y_{n/2}); x_i at 2i, y_i at 2i+1
  for (int half = 0; half < 2; ++half) {      // f components, then g components
    for (int i = 0; i < pairs; ++i) {
      const int own = 2 * i + half;           // coordinate carrying +1
      const int other = 2 * i + (1 - half);   // coordinate carrying -1, curvature dropped
      Eigen::VectorXd ai = Eigen::VectorXd::Constant(n, L);
      ai[other] = 0.0;
      Eigen::VectorXd bi = Eigen::VectorXd::Zero(n);
      bi[own] = 1.0;
      bi[other] = -1.0;
      diag.push_back(std::move(ai));
      b.push_back(std::move(bi));
    }
  }
  return QuadraticSum::diagonal(std::move(diag), std::move(b));
}

QuadraticSum gen_lower_bound_f2(int n, double L) {
  require(n >= 2, "lb_f2: n must be >= 2");
  require(L > 0, "lb_f2: L must be positive");
  std::vector<Eigen::VectorXd> diag, b;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd ai = Eigen::VectorXd::Constant(n, L);
    ai[i] = 0.0;
    Eigen::VectorXd bi = Eigen::VectorXd::Constant(n, -1.0 / (n - 1));
    bi[i] = 1.0;
    diag.push_back(std::move(ai));
    b.push_back(std::move(bi));
  }
  return QuadraticSum::diagonal(std::move(diag), std::move(b));
}

QuadraticSum gen_lower_bound_f3(int n, double L) {
  require(n >= 1, "lb_f3: n must be >= 1");
  require(L > 0, "lb_f3: L must be positive");
  std::vector<Eigen::VectorXd> diag(static_cast<size_t>(n), Eigen::VectorXd::Constant(1, 2.0 * L));
  std::vector<Eigen::VectorXd> b(static_cast<size_t>(n), Eigen::VectorXd::Zero(1));
  return QuadraticSum::diagonal(std::move(diag), std::move(b));
}

QuadraticSum gen_lower_bound_combined(int n, double L) {
  const QuadraticSum f1 = gen_lower_bound_f1(n, L);
  const QuadraticSum f2 = gen_lower_bound_f2(n, L);
  const QuadraticSum f3 = gen_lower_bound_f3(n, L);
  const int d = 2 * n + 1;
  std::vector<Eigen::VectorXd> diag, b;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd ai(d), bi(d);
    ai << f1.A_diag(i), f2.A_diag(i), f3.A_diag(i);
    bi << f1.b(i), f2.b(i), f3.b(i);
    diag.push_back(std::move(ai));
    b.push_back(std::move(bi));
  }
  return QuadraticSum::diagonal(std::move(diag), std::move(b));
}

QuadraticSum gen_thm3_pair(double L) {
  require(L > 0, "thm3_pair: L must be positive");
  std::vector<Eigen::VectorXd> diag{Eigen::VectorXd::Constant(1, L),
                                    Eigen::VectorXd::Constant(1, -L / 2.0)};
  std::vector<Eigen::VectorXd> b{Eigen::VectorXd::Constant(1, 1.0),
                                 Eigen::VectorXd::Constant(1, -1.0)};
  return QuadraticSum::diagonal(std::move(diag), std::move(b));
}

QuadraticSum gen_igd_hard(int n, double L) { return gen_lower_bound_combined(n, L); }

LogisticSum::LogisticSum(std::vector<int> z, std::vector<int> y)
    : z_(std::move(z)), y_(std::move(y)) {
  require(!z_.empty() && z_.size() == y_.size(), "logistic: need matching non-empty data");
  long matches = 0;
  for (size_t i = 0; i < z_.size(); ++i) {
    require(z_[i] == 1 || z_[i] == -1, "logistic: points must be +-1");
    require(y_[i] == 0 || y_[i] == 1, "logistic: labels must be 0/1");
    // y_i z_i counts matched positives; negatives are added below
    if (y_[i] == (z_[i] > 0 ? 1 : 0)) ++matches;
  }
  u_bar_ = static_cast<double>(matches) / static_cast<double>(z_.size());
  require(u_bar_ > 0.0 && u_bar_ < 1.0,
          "logistic: sample is separable (all labels agree), empirical minimizer is infinite");
  minimizer_ = std::log(u_bar_ / (1.0 - u_bar_));
}

void LogisticSum::gradient(int i, const Eigen::VectorXd& x, Eigen::VectorXd& g) const {
  check_index(i);
  const size_t idx = static_cast<size_t>(i);
  const double u = x[0] * z_[idx];
  g.resize(1);
  g[0] = z_[idx] * (sigmoid(u) - y_[idx]);
}

double LogisticSum::value(int i, const Eigen::VectorXd& x) const {
  check_index(i);
  const size_t idx = static_cast<size_t>(i);
  const double u = x[0] * z_[idx];
  return softplus(y_[idx] == 1 ? -u : u);
}

double LogisticSum::population_minimizer() const { return -std::log(3.0); }

LogisticSum gen_logistic_1d(int n, uint64_t seed) {
  require(n >= 2, "logistic_1d: n must be >= 2");
  Rng rng(seed);
  std::vector<int> z(static_cast<size_t>(n)), y(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int zi = rng.next_double() < 0.5 ? -1 : 1;
    // Label equals the sign indicator with probability 1/4, putting the
    // population minimizer at logit(1/4) = -log 3.
    const bool match = rng.next_double() < 0.25;
    z[static_cast<size_t>(i)] = zi;
    y[static_cast<size_t>(i)] = match == (zi > 0) ? 1 : 0;
  }
  return LogisticSum(std::move(z), std::move(y));
}

HessianSmoothSum::HessianSmoothSum(std::vector<double> a, std::vector<double> c,
                                   std::vector<double> eps, std::vector<double> w,
                                   std::vector<double> s)
    : a_(std::move(a)), c_(std::move(c)), eps_(std::move(eps)), w_(std::move(w)),
      s_(std::move(s)) {
  const size_t n = a_.size();
  require(n >= 1 && c_.size() == n && eps_.size() == n && w_.size() == n && s_.size() == n,
          "hessian_smooth_1d: parameter lists must be non-empty and equal-length");
  for (size_t i = 0; i < n; ++i) {
    require(a_[i] > 0, "hessian_smooth_1d: curvatures must be positive");
    require(eps_[i] >= 0, "hessian_smooth_1d: perturbation amplitudes must be >= 0");
    require(w_[i] > 0, "hessian_smooth_1d: perturbation widths must be positive");
  }

  // F' is strictly increasing (F'' >= mean a > 0); bracket a sign change and
  // close in with safeguarded Newton.
  Eigen::VectorXd xv(1), g(1);
  auto fprime = [&](double x) {
    double sum = 0;
    xv[0] = x;
    for (int i = 0; i < static_cast<int>(n); ++i) {
      gradient(i, xv, g);
      sum += g[0];
    }
    return sum / static_cast<double>(n);
  };
  double lo = -1, hi = 1;
  while (fprime(lo) > 0) lo *= 2;
  while (fprime(hi) < 0) hi *= 2;
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double fp = fprime(x);
    if (fp > 0) hi = x; else lo = x;
    double fpp = 0;
    for (int i = 0; i < static_cast<int>(n); ++i) fpp += second_derivative(i, x);
    fpp /= static_cast<double>(n);
    double next = x - fp / fpp;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == x) break;
    x = next;
  }
  minimizer_ = x;
}

void HessianSmoothSum::gradient(int i, const Eigen::VectorXd& x, Eigen::VectorXd& g) const {
  check_index(i);
  const size_t idx = static_cast<size_t>(i);
  g.resize(1);
  g[0] = a_[idx] * x[0] + c_[idx] + eps_[idx] * w_[idx] * std::tanh(w_[idx] * (x[0] - s_[idx]));
}

double HessianSmoothSum::value(int i, const Eigen::VectorXd& x) const {
  check_index(i);
  const size_t idx = static_cast<size_t>(i);
  return 0.5 * a_[idx] * x[0] * x[0] + c_[idx] * x[0] +
         eps_[idx] * log_cosh(w_[idx] * (x[0] - s_[idx]));
}

double HessianSmoothSum::second_derivative(int i, double x) const {
  check_index(i);
  const size_t idx = static_cast<size_t>(i);
  return a_[idx] + eps_[idx] * w_[idx] * w_[idx] * sech_squared(w_[idx] * (x - s_[idx]));
}

double HessianSmoothSum::mu() const {
  double sum = 0;
  for (double ai : a_) sum += ai;
  return sum / static_cast<double>(a_.size());
}

double HessianSmoothSum::L() const {
  double m = 0;
  for (size_t i = 0; i < a_.size(); ++i) m = std::max(m, a_[i] + eps_[i] * w_[i] * w_[i]);
  return m;
}

double HessianSmoothSum::L_H() const {
  // max |d^3/dx^3 eps log cosh(w(x-s))| = eps w^3 max |2 sech^2 tanh| = eps w^3 * 4/(3 sqrt 3)
  const double third_bound = 4.0 / (3.0 * std::sqrt(3.0));
  double m = 0;
  for (size_t i = 0; i < a_.size(); ++i) m = std::max(m, eps_[i] * w_[i] * w_[i] * w_[i] * third_bound);
  return m;
}

HessianSmoothSum gen_hessian_smooth_1d(const GeneratorSpec& spec) {
  require(spec.n >= 1, "hessian_smooth_1d: n must be >= 1");
  require(spec.L > 0, "hessian_smooth_1d: L must be positive");
  require(spec.eps >= 0, "hessian_smooth_1d: eps must be >= 0");
  require(spec.w > 0, "hessian_smooth_1d: w must be positive");
  Rng rng(spec.seed);
  const size_t n = static_cast<size_t>(spec.n);
  std::vector<double> a(n), c(n), eps(n, spec.eps), w(n, spec.w), s(n);
  for (size_t i = 0; i < n; ++i) {
    a[i] = spec.L * (0.75 + 0.5 * rng.next_double());
    c[i] = 2.0 * rng.next_double() - 1.0;
    s[i] = rng.next_double() - 0.5;
  }
  return HessianSmoothSum(std::move(a), std::move(c), std::move(eps), std::move(w), std::move(s));
}

namespace {

InstanceStats stats_for_1d(const FiniteSum& fs, double mu, double L, double x_star,
                           const Eigen::VectorXd& x0) {
  require(x0.size() == 1, "instance profile: x0 dimension mismatch");
  InstanceStats st;
  st.mu = mu;
  st.L = L;
  st.kappa = L / mu;
  st.minimizer = Eigen::VectorXd::Constant(1, x_star);
  Eigen::VectorXd g(1);
  for (int i = 0; i < fs.n(); ++i) {
    fs.gradient(i, st.minimizer, g);
    st.g_star = std::max(st.g_star, std::abs(g[0]));
  }
  st.D = std::max((x0 - st.minimizer).norm(), st.g_star / (2.0 * L));
  st.G = st.g_star + 2.0 * st.D * L;
  return st;
}

}  // namespace

InstanceProfile profile_instance(const FiniteSum& fs, const Eigen::VectorXd& x0) {
  if (const auto* q = dynamic_cast<const QuadraticSum*>(&fs))
    return InstanceProfile{instance_stats(*q, x0), 0.0, std::nullopt};
  if (const auto* lg = dynamic_cast<const LogisticSum*>(&fs)) {
    InstanceProfile p;
    p.stats = stats_for_1d(fs, lg->mu(), lg->L(), lg->minimizer(), x0);
    p.L_H = 1.0 / (6.0 * std::sqrt(3.0));  // max |sigmoid''|
    p.population_minimizer = lg->population_minimizer();
    return p;
  }
  if (const auto* hs = dynamic_cast<const HessianSmoothSum*>(&fs)) {
    InstanceProfile p;
    p.stats = stats_for_1d(fs, hs->mu(), hs->L(), hs->minimizer(), x0);
    p.L_H = hs->L_H();
    return p;
  }
  throw std::invalid_argument("instance profile: unsupported instance type");
}

GeneratorSpec GeneratorSpec::from_json(const nlohmann::json& j) {
  GeneratorSpec spec;
  spec.kind = j.at("kind").get<std::string>();
  spec.n = j.value("n", 0);
  spec.d = j.value("d", 0);
  spec.L = j.value("L", 1.0);
  spec.seed = j.value("seed", uint64_t{0});
  spec.eps = j.value("eps", 0.05);
  spec.w = j.value("w", 2.0);
  return spec;
}

nlohmann::json GeneratorSpec::to_json() const {
  return nlohmann::json{{"kind", kind}, {"n", n},     {"d", d},
                        {"L", L},       {"seed", seed}, {"eps", eps}, {"w", w}};
}

std::unique_ptr<FiniteSum> make_instance(const GeneratorSpec& spec) {
  if (spec.kind == "mean_computation")
    return std::make_unique<QuadraticSum>(gen_mean_computation(spec.n, spec.d, spec.seed));
  if (spec.kind == "lb_f1")
    return std::make_unique<QuadraticSum>(gen_lower_bound_f1(spec.n, spec.L));
  if (spec.kind == "lb_f2")
    return std::make_unique<QuadraticSum>(gen_lower_bound_f2(spec.n, spec.L));
  if (spec.kind == "lb_f3")
    return std::make_unique<QuadraticSum>(gen_lower_bound_f3(spec.n, spec.L));
  if (spec.kind == "lb_combined")
    return std::make_unique<QuadraticSum>(gen_lower_bound_combined(spec.n, spec.L));
  if (spec.kind == "thm3_pair") {
    require(spec.n == 0 || spec.n == 2, "thm3_pair: n is fixed at 2");
    return std::make_unique<QuadraticSum>(gen_thm3_pair(spec.L));
  }
  if (spec.kind == "logistic_1d")
    return std::make_unique<LogisticSum>(gen_logistic_1d(spec.n, spec.seed));
  if (spec.kind == "hessian_smooth_1d")
    return std::make_unique<HessianSmoothSum>(gen_hessian_smooth_1d(spec));
  if (spec.kind == "igd_hard")
    return std::make_unique<QuadraticSum>(gen_igd_hard(spec.n, spec.L));
  throw std::invalid_argument("unknown generator kind: " + spec.kind);
}

std::unique_ptr<FiniteSum> build_instance(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind != "quadratic") return make_instance(GeneratorSpec::from_json(j));

  const int n = j.at("n").get<int>();
  const int d = j.at("d").get<int>();
  const auto& A = j.at("A");
  const auto& b = j.at("b");
  require(A.is_array() && static_cast<int>(A.size()) == n, "quadratic: A must list n matrices");
  require(b.is_array() && static_cast<int>(b.size()) == n, "quadratic: b must list n vectors");
  std::vector<Eigen::MatrixXd> As;
  std::vector<Eigen::VectorXd> bs;
  for (int i = 0; i < n; ++i) {
    const auto& Ai = A[static_cast<size_t>(i)];
    const auto& bi = b[static_cast<size_t>(i)];
    require(static_cast<int>(Ai.size()) == d * d, "quadratic: each A_i needs d*d entries (row-major)");
    require(static_cast<int>(bi.size()) == d, "quadratic: each b_i needs d entries");
    Eigen::MatrixXd M(d, d);
    for (int r = 0; r < d; ++r)
      for (int col = 0; col < d; ++col)
        M(r, col) = Ai[static_cast<size_t>(r * d + col)].get<double>();
    Eigen::VectorXd v(d);
    for (int r = 0; r < d; ++r) v[r] = bi[static_cast<size_t>(r)].get<double>();
    As.push_back(std::move(M));
    bs.push_back(std::move(v));
  }
  return std::make_unique<QuadraticSum>(QuadraticSum::dense(std::move(As), std::move(bs)));
}

nlohmann::json quadratic_to_json(const QuadraticSum& q) {
  nlohmann::json A = nlohmann::json::array();
  nlohmann::json b = nlohmann::json::array();
  for (int i = 0; i < q.n(); ++i) {
    const Eigen::MatrixXd Ai = q.A_dense(i);
    nlohmann::json flat = nlohmann::json::array();
    for (int r = 0; r < q.dim(); ++r)
      for (int c = 0; c < q.dim(); ++c) flat.push_back(Ai(r, c));
    A.push_back(std::move(flat));
    nlohmann::json vec = nlohmann::json::array();
    for (int r = 0; r < q.dim(); ++r) vec.push_back(q.b(i)[r]);
    b.push_back(std::move(vec));
  }
  return nlohmann::json{{"kind", "quadratic"}, {"n", q.n()}, {"d", q.dim()},
                        {"A", std::move(A)},   {"b", std::move(b)}};
}

}  // namespace permlab
