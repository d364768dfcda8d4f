#ifndef LBOUND_POISSON_MODEL_HPP
#define LBOUND_POISSON_MODEL_HPP

#include <cstdint>
#include <vector>

#include <json.hpp>

// Poisson observation model with an uncertain lower bound:
//
//   X | theta ~ Poisson(theta)
//   g1(theta) prop. theta^{a-1} e^{-b theta} 1{theta >= 0}
//   g2(alpha) prop. alpha^{c-1} e^{-d alpha} 1{alpha >= 0}
//
// with a, c > 0, b > -1, d >= 0.  Posteriors:
//
//   pi1(theta|x) prop. theta^{a+x-1} e^{-theta(1+b)} F_{c,d}(theta)   (d > 0)
//   pi2(alpha|x) prop. alpha^{c-1}  e^{-d alpha}  Fbar_{x+a,1+b}(alpha)
//
// where F / Fbar are Gamma CDF / survivor functions.  When a is a positive
// integer, pi2 is a finite Gamma mixture with truncated-negative-binomial
// weights p_y prop. rho^y Gamma(c+y)/y!, rho = (1+b)/(1+b+d), on
// y = 0..x+a-1, with components Gamma(c+y, 1+b+d).
//
// x is a single count.  n iid observations reduce to this API by
// sufficiency (x = sum x_i) with the exposure folded into the prior rate:
// the posterior of theta given the sum uses b' = b + n - 1.

namespace lbound {

struct PoissonPrior {
  double a = 1.0;        // > 0
  double b = 0.0;        // > -1
  double c_alpha = 1.0;  // > 0 (the weight-prior shape; "c" in JSON)
  double d = 0.0;        // >= 0

  void validate() const;  // throws std::domain_error

  static PoissonPrior from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct GammaMixture {
  std::vector<double> weights;  // sum to 1, length x + a
  std::vector<double> shapes;   // c_alpha + y
  double rate = 1.0;            // 1 + b + d

  double pdf(double alpha) const;
  double mean() const;  // sum_y p_y (c_alpha + y) / rate
  nlohmann::json to_json() const;
};

// Normalized posterior density of theta at a point; requires d > 0 (with
// d = 0 the weight is a plain power and the Gamma-CDF form does not apply;
// throws std::domain_error).  The d -> inf limit is Gamma(a+x, 1+b).
double theta_posterior_pdf(const PoissonPrior& prior, unsigned x, double theta);

// Posterior mean of theta by quadrature; requires d > 0.
double theta_posterior_mean(const PoissonPrior& prior, unsigned x);

// Normalized posterior density of alpha at a point; valid for all d >= 0.
double alpha_posterior_pdf(const PoissonPrior& prior, unsigned x, double alpha);

// Finite Gamma-mixture representation of the alpha posterior; requires a to
// be a positive integer (throws std::domain_error otherwise).  Weights are
// computed in log space and normalized.
GammaMixture alpha_posterior_mixture(const PoissonPrior& prior, unsigned x);

// E(alpha | x): mixture path when a is a positive integer, quadrature of
// the survivor-weighted kernel otherwise.
double alpha_bayes_estimate(const PoissonPrior& prior, unsigned x);

}  // namespace lbound

#endif  // LBOUND_POISSON_MODEL_HPP
