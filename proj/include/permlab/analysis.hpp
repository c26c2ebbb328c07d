#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"
#include "permlab/problems.hpp"

namespace permlab {

// Least-squares line through log(error) against either log(K) (poly: the
// slope is minus the rate exponent) or K (exp: the slope is the decay rate).
struct RateFit {
  enum class Model { poly, exp };
  Model model = Model::poly;
  double exponent_or_rate = 0;
  double intercept = 0;
  double r_squared = 0;
  double sse = std::numeric_limits<double>::infinity();  // residual sum on log-error
  std::vector<double> ks;  // K values actually used
  long dropped = 0;        // points discarded for being <= 1e-300 or non-finite

  nlohmann::json to_json() const;
};

RateFit fit_poly_rate(const std::vector<double>& Ks, const std::vector<double>& errors);
RateFit fit_exp_rate(const std::vector<double>& Ks, const std::vector<double>& errors);

enum class DecayClass { exponential, polynomial, flat };
const char* to_string(DecayClass c);

struct DecayClassification {
  DecayClass cls = DecayClass::flat;
  bool fitted = false;  // both fits below are valid
  RateFit poly;
  RateFit exp;
  double ln_range = 0;   // spread of log-error across the fitted window
  int window_begin = 0;  // first index used (burn-in skipped)

  nlohmann::json to_json() const;
};

// Drops a burn-in prefix (the rates are asymptotic in K), discards
// non-positive errors, calls a window spanning less than 0.5 nats flat, and
// otherwise picks the model with the smaller residual.
DecayClassification classify_decay(const std::vector<double>& Ks,
                                   const std::vector<double>& errors,
                                   double burn_in_frac = 0.25);

struct LemmaReport {
  std::string lemma;
  long trials = 0;
  long violations = 0;
  // Largest observed (quantity - bound); negative margins mean slack.
  double worst_margin = -std::numeric_limits<double>::infinity();
  std::string status = "ok";  // "ok" | "hypothesis_unmet"
  int n = 0;
  int d = 0;
  double alpha = 0;
  double mu = 0;
  double L = 0;

  bool passed() const { return violations == 0; }
  nlohmann::json to_json() const;
};

// Spectral norm of (forward epoch product) x (reversed epoch product) stays
// below 1 - alpha n mu, over random symmetric components with spectra in
// [mu, L]. Hypothesis: alpha <= min{2, sqrt(kappa)/n} / (8 kappa L).
LemmaReport verify_amgm_matrix(long trials, int n, int d, double mu, double L, double alpha,
                               uint64_t seed);

// Two runs sharing each epoch's permutation contract toward each other:
// (1-alpha L)^n gap <= new gap <= (1 - n mu alpha / 2) gap, per epoch, under
// alpha <= mu / (2n (L^2 + L_H G)). family: "quadratic" | "hessian_smooth".
LemmaReport verify_coupling(long trials, uint64_t seed,
                            const std::string& family = "quadratic");

// E ||sum_{i<=j} alpha b_{sigma(i)}||^2 <= 18 j alpha^2 (G*)^2 log n over
// uniform permutations, with a 3-standard-error cushion. Requires sum b = 0.
LemmaReport verify_prefix_sums(long trials, const QuadraticSum& q, double alpha, uint64_t seed);

// E ||z||^2 <= 2 n^2 a^4 L^2 (G*)^2 + 170 n^5 a^6 L^4 G^2 log n over uniform
// permutations, G* = max ||b_i||. z is start-independent, so the verifier
// uses the smallest valid G (= 2 G*, from D = G*/(2L)). Hypothesis a <= 1/L.
LemmaReport verify_z_moment(long trials, const QuadraticSum& q, double alpha, uint64_t seed);

// With alpha < 1/(8 kappa n L), every iterate of any schedule stays within
// 2D of the minimizer and every component gradient along the way is <= G.
LemmaReport verify_bounded_iterates(long runs, uint64_t seed);

}  // namespace permlab
