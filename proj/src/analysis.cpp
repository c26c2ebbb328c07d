#include "permlab/analysis.hpp"

#include <cmath>

#include "permlab/engine.hpp"
#include "permlab/instances.hpp"
#include "permlab/rng.hpp"
#include "permlab/schedulers.hpp"

namespace permlab {

namespace {

constexpr double kErrorFloor = 1e-300;

struct XY {
  std::vector<double> x, y, k;
  long dropped = 0;
};

XY collect(const std::vector<double>& Ks, const std::vector<double>& errors, bool log_x) {
  if (Ks.size() != errors.size())
    throw std::invalid_argument("rate fit: K and error lists must have equal length");
  XY d;
  for (size_t i = 0; i < Ks.size(); ++i) {
    if (!std::isfinite(errors[i]) || errors[i] <= kErrorFloor) {
      ++d.dropped;
      continue;
    }
    d.x.push_back(log_x ? std::log(Ks[i]) : Ks[i]);
    d.y.push_back(std::log(errors[i]));
    d.k.push_back(Ks[i]);
  }
  return d;
}

RateFit line_fit(RateFit::Model model, const std::vector<double>& Ks,
                 const std::vector<double>& errors) {
  if (Ks.size() < 4) throw std::invalid_argument("rate fit: need at least 4 points");
  XY d = collect(Ks, errors, model == RateFit::Model::poly);
  RateFit fit;
  fit.model = model;
  fit.ks = d.k;
  fit.dropped = d.dropped;
  const size_t m = d.x.size();
  if (m < 2) throw std::invalid_argument("rate fit: fewer than 2 usable (positive) errors");

  double xm = 0, ym = 0;
  for (size_t i = 0; i < m; ++i) {
    xm += d.x[i];
    ym += d.y[i];
  }
  xm /= static_cast<double>(m);
  ym /= static_cast<double>(m);
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < m; ++i) {
    sxx += (d.x[i] - xm) * (d.x[i] - xm);
    sxy += (d.x[i] - xm) * (d.y[i] - ym);
    syy += (d.y[i] - ym) * (d.y[i] - ym);
  }
  fit.exponent_or_rate = sxx > 0 ? sxy / sxx : 0.0;
  fit.intercept = ym - fit.exponent_or_rate * xm;
  double sse = 0;
  for (size_t i = 0; i < m; ++i) {
    const double r = d.y[i] - (fit.intercept + fit.exponent_or_rate * d.x[i]);
    sse += r * r;
  }
  fit.sse = sse;
  fit.r_squared = syy > 0 ? std::max(0.0, 1.0 - sse / syy) : 1.0;
  return fit;
}

}  // namespace

RateFit fit_poly_rate(const std::vector<double>& Ks, const std::vector<double>& errors) {
  return line_fit(RateFit::Model::poly, Ks, errors);
}

RateFit fit_exp_rate(const std::vector<double>& Ks, const std::vector<double>& errors) {
  return line_fit(RateFit::Model::exp, Ks, errors);
}

nlohmann::json RateFit::to_json() const {
  return nlohmann::json{{"model", model == Model::poly ? "poly" : "exp"},
                        {"slope", exponent_or_rate},
                        {"intercept", intercept},
                        {"r_squared", r_squared},
                        {"sse", sse},
                        {"k_range", ks},
                        {"dropped", dropped}};
}

const char* to_string(DecayClass c) {
  switch (c) {
    case DecayClass::exponential: return "exponential";
    case DecayClass::polynomial: return "polynomial";
    case DecayClass::flat: return "flat";
  }
  return "flat";
}

DecayClassification classify_decay(const std::vector<double>& Ks,
                                   const std::vector<double>& errors, double burn_in_frac) {
  if (Ks.size() != errors.size())
    throw std::invalid_argument("classify_decay: K and error lists must have equal length");
  if (burn_in_frac < 0 || burn_in_frac >= 1)
    throw std::invalid_argument("classify_decay: burn-in fraction must be in [0, 1)");
  DecayClassification out;
  const size_t start = static_cast<size_t>(burn_in_frac * static_cast<double>(Ks.size()));
  out.window_begin = static_cast<int>(start);
  std::vector<double> ks, es;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (size_t i = start; i < Ks.size(); ++i) {
    if (!std::isfinite(errors[i]) || errors[i] <= kErrorFloor) continue;
    ks.push_back(Ks[i]);
    es.push_back(errors[i]);
    const double le = std::log(errors[i]);
    lo = std::min(lo, le);
    hi = std::max(hi, le);
  }
  if (ks.size() < 4) return out;  // too degenerate to call anything but flat
  out.ln_range = hi - lo;
  out.poly = line_fit(RateFit::Model::poly, ks, es);
  out.exp = line_fit(RateFit::Model::exp, ks, es);
  out.fitted = true;
  if (out.ln_range < 0.5)
    out.cls = DecayClass::flat;
  else
    out.cls = out.exp.sse <= out.poly.sse ? DecayClass::exponential : DecayClass::polynomial;
  return out;
}

nlohmann::json DecayClassification::to_json() const {
  nlohmann::json j{{"class", to_string(cls)},
                   {"ln_range", ln_range},
                   {"window_begin", window_begin}};
  if (fitted) {
    j["poly"] = poly.to_json();
    j["exp"] = exp.to_json();
  }
  return j;
}

nlohmann::json LemmaReport::to_json() const {
  return nlohmann::json{{"lemma", lemma},   {"trials", trials}, {"violations", violations},
                        {"worst_margin", std::isfinite(worst_margin) ? worst_margin : 0.0},
                        {"status", status}, {"n", n},           {"d", d},
                        {"alpha", alpha},   {"mu", mu},         {"L", L},
                        {"passed", passed()}};
}

namespace {

// Haar-ish random rotation: QR of a Gaussian matrix with the sign fix.
Eigen::MatrixXd random_rotation(Rng& rng, int d) {
  Eigen::MatrixXd g(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) g(r, c) = rng.next_gaussian();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd Q = qr.householderQ();
  const Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < d; ++c)
    if (R(c, c) < 0) Q.col(c) *= -1.0;
  return Q;
}

double spectral_norm(const Eigen::MatrixXd& m) {
  return m.jacobiSvd().singularValues()(0);
}

void track(LemmaReport& rep, double margin, double tol) {
  rep.worst_margin = std::max(rep.worst_margin, margin);
  if (margin > tol) ++rep.violations;
}

}  // namespace

LemmaReport verify_amgm_matrix(long trials, int n, int d, double mu, double L, double alpha,
                               uint64_t seed) {
  if (!(mu > 0) || mu > L) throw std::invalid_argument("amgm: need 0 < mu <= L");
  if (n < 1 || d < 1 || trials < 1 || alpha <= 0)
    throw std::invalid_argument("amgm: need n, d, trials >= 1 and alpha > 0");
  LemmaReport rep;
  rep.lemma = "amgm";
  rep.n = n;
  rep.d = d;
  rep.alpha = alpha;
  rep.mu = mu;
  rep.L = L;
  const double kappa = L / mu;
  const double alpha_max = std::min(2.0, std::sqrt(kappa) / n) / (8.0 * kappa * L);
  if (alpha > alpha_max) {
    rep.status = "hypothesis_unmet";
    return rep;
  }
  rep.trials = trials;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
  for (long t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, static_cast<uint64_t>(t)));
    std::vector<Eigen::MatrixXd> A;
    A.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      // spectra uniform in [mu, L]: floor mu plus a [0, L - mu] spread
      Eigen::VectorXd lam(d);
      for (int j = 0; j < d; ++j) lam[j] = mu + (L - mu) * rng.next_double();
      const Eigen::MatrixXd Q = random_rotation(rng, d);
      A.push_back(Q * lam.asDiagonal() * Q.transpose());
    }
    Eigen::MatrixXd fwd = id, rev = id;
    for (int i = 0; i < n; ++i) fwd = (id - alpha * A[static_cast<size_t>(i)]) * fwd;
    for (int i = n - 1; i >= 0; --i) rev = (id - alpha * A[static_cast<size_t>(i)]) * rev;
    track(rep, spectral_norm(rev * fwd) - (1.0 - alpha * n * mu), 1e-12);
  }
  return rep;
}

LemmaReport verify_coupling(long trials, uint64_t seed, const std::string& family) {
  if (trials < 1) throw std::invalid_argument("coupling: need trials >= 1");
  const bool smooth = family == "hessian_smooth";
  if (!smooth && family != "quadratic")
    throw std::invalid_argument("coupling: family must be quadratic or hessian_smooth");
  LemmaReport rep;
  rep.lemma = "coupling";
  rep.trials = trials;
  constexpr int kEpochs = 4;
  for (long t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, static_cast<uint64_t>(t)));
    const int n = 2 + static_cast<int>(rng.next_below(5));
    std::unique_ptr<FiniteSum> fs;
    double mu = 0, L = 0, L_H = 0, x_star = 0;
    if (smooth) {
      GeneratorSpec spec;
      spec.kind = "hessian_smooth_1d";
      spec.n = n;
      spec.L = 1.0;
      spec.seed = rng.next_u64();
      auto sum = std::make_unique<HessianSmoothSum>(gen_hessian_smooth_1d(spec));
      mu = sum->mu();
      L = sum->L();
      L_H = sum->L_H();
      x_star = sum->minimizer();
      fs = std::move(sum);
    } else {
      std::vector<Eigen::VectorXd> a(static_cast<size_t>(n)), b(static_cast<size_t>(n));
      double amax = 0, asum = 0;
      for (int i = 0; i < n; ++i) {
        const double ai = 0.5 + 1.5 * rng.next_double();
        a[static_cast<size_t>(i)] = Eigen::VectorXd::Constant(1, ai);
        b[static_cast<size_t>(i)] = Eigen::VectorXd::Constant(1, 2.0 * rng.next_double() - 1.0);
        amax = std::max(amax, ai);
        asum += ai;
      }
      auto q = std::make_unique<QuadraticSum>(QuadraticSum::diagonal(std::move(a), std::move(b)));
      mu = asum / n;
      L = amax;
      x_star = instance_stats(*q, Eigen::VectorXd::Zero(1)).minimizer[0];
      fs = std::move(q);
    }
    Eigen::VectorXd x(1), y(1);
    x[0] = x_star + (2.0 * rng.next_double() - 1.0);
    do {
      y[0] = x_star + (2.0 * rng.next_double() - 1.0);
    } while (y[0] == x[0]);
    double G = 0;
    if (smooth) {
      Eigen::VectorXd g(1), xs(1);
      xs[0] = x_star;
      double g_star = 0;
      for (int i = 0; i < n; ++i) {
        fs->gradient(i, xs, g);
        g_star = std::max(g_star, std::abs(g[0]));
      }
      const double dist = std::max(std::abs(x[0] - x_star), std::abs(y[0] - x_star));
      const double D = std::max(dist, g_star / (2.0 * L));
      G = g_star + 2.0 * D * L;
    }
    const double theta = 0.05 + 0.95 * rng.next_double();
    const double alpha = theta * mu / (2.0 * n * (L * L + L_H * G));
    rep.n = n;
    rep.alpha = alpha;
    rep.mu = mu;
    rep.L = L;
    rep.d = 1;

    double gap = std::abs(y[0] - x[0]);
    const double shrink_lo = std::pow(1.0 - alpha * L, n);
    const double shrink_hi = 1.0 - 0.5 * n * mu * alpha;
    for (int k = 0; k < kEpochs; ++k) {
      const Permutation perm = shuffle(rng, n);
      x = sgd_epoch(*fs, x, perm, alpha);
      y = sgd_epoch(*fs, y, perm, alpha);
      const double next = std::abs(y[0] - x[0]);
      const double tol = 1e-12 * std::max(1.0, gap);
      track(rep, shrink_lo * gap - next, tol);      // below the envelope
      track(rep, next - shrink_hi * gap, tol);      // above the envelope
      gap = next;
    }
  }
  return rep;
}

LemmaReport verify_prefix_sums(long trials, const QuadraticSum& q, double alpha, uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("prefix: need trials >= 1");
  if (alpha <= 0) throw std::invalid_argument("prefix: need alpha > 0");
  if (!q.is_centered()) throw std::invalid_argument("prefix: instance must be centered");
  const int n = q.n();
  LemmaReport rep;
  rep.lemma = "prefix";
  rep.trials = trials;
  rep.n = n;
  rep.d = q.dim();
  rep.alpha = alpha;
  double g_star = 0;
  for (int i = 0; i < n; ++i) g_star = std::max(g_star, q.b(i).norm());

  std::vector<double> sum(static_cast<size_t>(n), 0.0), sumsq(static_cast<size_t>(n), 0.0);
  Rng rng(seed);
  Eigen::VectorXd prefix(q.dim());
  for (long t = 0; t < trials; ++t) {
    const Permutation perm = shuffle(rng, n);
    prefix.setZero();
    for (int j = 0; j < n; ++j) {
      prefix += alpha * q.b(perm[static_cast<size_t>(j)]);
      const double v = prefix.squaredNorm();
      sum[static_cast<size_t>(j)] += v;
      sumsq[static_cast<size_t>(j)] += v * v;
    }
  }
  const double logn = std::log(static_cast<double>(n));
  for (int j = 0; j < n; ++j) {
    const double mean = sum[static_cast<size_t>(j)] / static_cast<double>(trials);
    const double var =
        std::max(0.0, sumsq[static_cast<size_t>(j)] / static_cast<double>(trials) - mean * mean);
    const double se = std::sqrt(var / static_cast<double>(trials));
    const double bound = 18.0 * (j + 1) * alpha * alpha * g_star * g_star * logn;
    track(rep, mean - (bound + 3.0 * se), 1e-15);
  }
  return rep;
}

LemmaReport verify_z_moment(long trials, const QuadraticSum& q, double alpha, uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("zmoment: need trials >= 1");
  if (alpha <= 0) throw std::invalid_argument("zmoment: need alpha > 0");
  if (!q.is_centered()) throw std::invalid_argument("zmoment: instance must be centered");
  const int n = q.n();
  const InstanceStats st = instance_stats(q, Eigen::VectorXd::Zero(q.dim()));
  LemmaReport rep;
  rep.lemma = "zmoment";
  rep.n = n;
  rep.d = q.dim();
  rep.alpha = alpha;
  rep.mu = st.mu;
  rep.L = st.L;
  if (alpha > 1.0 / st.L) {
    rep.status = "hypothesis_unmet";
    return rep;
  }
  rep.trials = trials;
  double g_star = 0;
  for (int i = 0; i < n; ++i) g_star = std::max(g_star, q.b(i).norm());
  const double G = 2.0 * g_star;  // smallest valid G: D = G*/(2L)

  double sum = 0, sumsq = 0;
  Rng rng(seed);
  for (long t = 0; t < trials; ++t) {
    const Permutation perm = shuffle(rng, n);
    const double v = flipflop_bias_z(q, perm, alpha).squaredNorm();
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / static_cast<double>(trials);
  const double var = std::max(0.0, sumsq / static_cast<double>(trials) - mean * mean);
  const double se = std::sqrt(var / static_cast<double>(trials));
  const double a2 = alpha * alpha;
  const double bound = 2.0 * n * n * a2 * a2 * st.L * st.L * g_star * g_star +
                       170.0 * std::pow(static_cast<double>(n), 5) * a2 * a2 * a2 *
                           std::pow(st.L, 4) * G * G * std::log(static_cast<double>(n));
  track(rep, mean - (bound + 3.0 * se), 1e-15);
  return rep;
}

LemmaReport verify_bounded_iterates(long runs, uint64_t seed) {
  if (runs < 1) throw std::invalid_argument("bounded: need runs >= 1");
  LemmaReport rep;
  rep.lemma = "bounded";
  rep.trials = runs;
  constexpr int kEpochs = 6;
  for (long r = 0; r < runs; ++r) {
    Rng rng(derive_seed(seed, static_cast<uint64_t>(r)));
    const int n = 2 + static_cast<int>(rng.next_below(5));
    const int d = 1 + static_cast<int>(rng.next_below(4));
    std::vector<Eigen::MatrixXd> A;
    std::vector<Eigen::VectorXd> b;
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd lam(d);
      for (int j = 0; j < d; ++j) lam[j] = 0.5 + 2.0 * rng.next_double();
      const Eigen::MatrixXd Q = random_rotation(rng, d);
      A.push_back(Q * lam.asDiagonal() * Q.transpose());
      Eigen::VectorXd bi(d);
      for (int j = 0; j < d; ++j) bi[j] = rng.next_gaussian();
      b.push_back(bi);
    }
    const QuadraticSum q = QuadraticSum::dense(std::move(A), std::move(b));

    Eigen::VectorXd dir(d);
    for (int j = 0; j < d; ++j) dir[j] = rng.next_gaussian();
    if (dir.norm() < 1e-12) dir[0] = 1.0;
    dir.normalize();
    const double dist = 2.0 * rng.next_double();
    const InstanceStats st0 = instance_stats(q, Eigen::VectorXd::Zero(d));
    const Eigen::VectorXd x0 = st0.minimizer + dist * dir;
    const InstanceStats st = instance_stats(q, x0);

    const double theta = 0.1 + 0.85 * rng.next_double();
    const double alpha = theta / (8.0 * st.kappa * n * st.L);
    const int variant = static_cast<int>(r % 6);
    const BaseOrder base = variant % 3 == 0 ? BaseOrder::igd
                          : variant % 3 == 1 ? BaseOrder::ss
                                             : BaseOrder::rr;
    PermutationStrategy strat(base, variant >= 3, rng.next_u64(), n);

    RunConfig cfg;
    cfg.alpha = alpha;
    cfg.K = kEpochs;
    cfg.x0 = x0;
    cfg.record_iterates = true;
    const Trajectory traj = run(q, strat, cfg, st.minimizer);

    rep.n = n;
    rep.d = d;
    rep.alpha = alpha;
    rep.mu = st.mu;
    rep.L = st.L;
    const double env = 2.0 * st.D;
    const double tol = 1e-10 * std::max(1.0, env);
    Eigen::VectorXd g;
    for (const auto& x : traj.iterates) {
      track(rep, (x - st.minimizer).norm() - env, tol);
      for (int i = 0; i < n; ++i) {
        q.gradient(i, x, g);
        track(rep, g.norm() - st.G, tol);
      }
    }
  }
  return rep;
}

}  // namespace permlab
