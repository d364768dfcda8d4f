#include "lbound/poisson_model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "lbound/special_fn.hpp"

namespace lbound {

namespace {

double integrate_positive(const std::function<double(double)>& f) {
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate(f, 1e-12);
}

// log of theta^{a+x-1} e^{-theta(1+b)} F_{c,d}(theta), up to the reference
// shift handled by the callers.  Returns -inf where the kernel vanishes.
double log_theta_kernel(const PoissonPrior& p, unsigned x, double theta) {
  const double F = gamma_cdf(p.c_alpha, p.d, theta);
  if (F <= 0.0) return -std::numeric_limits<double>::infinity();
  return (p.a + x - 1.0) * std::log(theta) - theta * (1.0 + p.b) +
         std::log(F);
}

double log_alpha_kernel(const PoissonPrior& p, unsigned x, double alpha) {
  const double S = gamma_sf(x + p.a, 1.0 + p.b, alpha);
  if (S <= 0.0) return -std::numeric_limits<double>::infinity();
  return (p.c_alpha - 1.0) * std::log(alpha) - p.d * alpha + std::log(S);
}

// Reference point near the kernel mode, to scale integrands into exp range.
double theta_reference(const PoissonPrior& p, unsigned x) {
  return std::max((p.a + x) / (1.0 + p.b), 1e-3);
}

double alpha_reference(const PoissonPrior& p, unsigned x) {
  // the survivor factor is ~1 out to the Gamma(x+a,1+b) bulk
  return std::max(std::min(p.c_alpha / (1.0 + p.b + p.d),
                           (x + p.a) / (1.0 + p.b)),
                  1e-3);
}

bool is_positive_integer(double a) {
  return a >= 1.0 && a == std::floor(a) && a < 1e9;
}

}  // namespace

void PoissonPrior::validate() const {
  if (!std::isfinite(a) || a <= 0.0) {
    throw std::domain_error("PoissonPrior: a must be > 0");
  }
  if (!std::isfinite(b) || b <= -1.0) {
    throw std::domain_error("PoissonPrior: b must be > -1");
  }
  if (!std::isfinite(c_alpha) || c_alpha <= 0.0) {
    throw std::domain_error("PoissonPrior: c must be > 0");
  }
  if (!std::isfinite(d) || d < 0.0) {
    throw std::domain_error("PoissonPrior: d must be >= 0");
  }
}

PoissonPrior PoissonPrior::from_json(const nlohmann::json& j) {
  PoissonPrior p;
  p.a = j.at("a").get<double>();
  p.b = j.at("b").get<double>();
  p.c_alpha = j.at("c").get<double>();
  p.d = j.at("d").get<double>();
  p.validate();
  return p;
}

nlohmann::json PoissonPrior::to_json() const {
  return {{"a", a}, {"b", b}, {"c", c_alpha}, {"d", d}};
}

double GammaMixture::pdf(double alpha) const {
  if (std::isnan(alpha)) return alpha;
  if (alpha <= 0.0) return 0.0;
  const double la = std::log(alpha);
  const double lr = std::log(rate);
  double v = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double k = shapes[i];
    v += weights[i] *
         std::exp(k * lr + (k - 1.0) * la - rate * alpha - std::lgamma(k));
  }
  return v;
}

double GammaMixture::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    m += weights[i] * shapes[i];
  }
  return m / rate;
}

nlohmann::json GammaMixture::to_json() const {
  return {{"weights", weights}, {"shapes", shapes}, {"rate", rate}};
}

double theta_posterior_pdf(const PoissonPrior& prior, unsigned x,
                           double theta) {
  prior.validate();
  if (prior.d <= 0.0) {
    throw std::domain_error(
        "theta_posterior_pdf: requires d > 0 (the Gamma-CDF weight "
        "degenerates at d = 0)");
  }
  if (std::isnan(theta)) return theta;
  if (theta <= 0.0) return 0.0;
  const double ref = log_theta_kernel(prior, x, theta_reference(prior, x));
  const double norm = integrate_positive([&](double t) {
    const double lk = log_theta_kernel(prior, x, t);
    return std::isfinite(lk) ? std::exp(lk - ref) : 0.0;
  });
  const double lk = log_theta_kernel(prior, x, theta);
  return std::isfinite(lk) ? std::exp(lk - ref) / norm : 0.0;
}

double theta_posterior_mean(const PoissonPrior& prior, unsigned x) {
  prior.validate();
  if (prior.d <= 0.0) {
    throw std::domain_error("theta_posterior_mean: requires d > 0");
  }
  const double ref = log_theta_kernel(prior, x, theta_reference(prior, x));
  const double den = integrate_positive([&](double t) {
    const double lk = log_theta_kernel(prior, x, t);
    return std::isfinite(lk) ? std::exp(lk - ref) : 0.0;
  });
  const double num = integrate_positive([&](double t) {
    const double lk = log_theta_kernel(prior, x, t);
    return std::isfinite(lk) ? t * std::exp(lk - ref) : 0.0;
  });
  return num / den;
}

double alpha_posterior_pdf(const PoissonPrior& prior, unsigned x,
                           double alpha) {
  prior.validate();
  if (std::isnan(alpha)) return alpha;
  if (alpha <= 0.0) return 0.0;
  const double ref = log_alpha_kernel(prior, x, alpha_reference(prior, x));
  const double norm = integrate_positive([&](double t) {
    const double lk = log_alpha_kernel(prior, x, t);
    return std::isfinite(lk) ? std::exp(lk - ref) : 0.0;
  });
  const double lk = log_alpha_kernel(prior, x, alpha);
  return std::isfinite(lk) ? std::exp(lk - ref) / norm : 0.0;
}

GammaMixture alpha_posterior_mixture(const PoissonPrior& prior, unsigned x) {
  prior.validate();
  if (!is_positive_integer(prior.a)) {
    throw std::domain_error(
        "alpha_posterior_mixture: the finite mixture form requires a to be "
        "a positive integer");
  }
  const std::size_t n = static_cast<std::size_t>(prior.a) + x;
  const double log_rho =
      std::log1p(prior.b) - std::log(1.0 + prior.b + prior.d);

  // log p~_y = y log rho + lgamma(c+y) - lgamma(y+1), normalized by
  // log-sum-exp; Gamma(c+y) rho^y overflows well before x ~ 200 otherwise.
  std::vector<double> lw(n);
  double lmax = -std::numeric_limits<double>::infinity();
  for (std::size_t y = 0; y < n; ++y) {
    lw[y] = y * log_rho + std::lgamma(prior.c_alpha + y) -
            std::lgamma(static_cast<double>(y) + 1.0);
    lmax = std::max(lmax, lw[y]);
  }
  double sum = 0.0;
  for (double& v : lw) {
    v = std::exp(v - lmax);
    sum += v;
  }

  GammaMixture mix;
  mix.rate = 1.0 + prior.b + prior.d;
  mix.weights.resize(n);
  mix.shapes.resize(n);
  for (std::size_t y = 0; y < n; ++y) {
    mix.weights[y] = lw[y] / sum;
    mix.shapes[y] = prior.c_alpha + static_cast<double>(y);
  }
  return mix;
}

double alpha_bayes_estimate(const PoissonPrior& prior, unsigned x) {
  prior.validate();
  if (is_positive_integer(prior.a)) {
    return alpha_posterior_mixture(prior, x).mean();
  }
  const double ref = log_alpha_kernel(prior, x, alpha_reference(prior, x));
  const double den = integrate_positive([&](double t) {
    const double lk = log_alpha_kernel(prior, x, t);
    return std::isfinite(lk) ? std::exp(lk - ref) : 0.0;
  });
  const double num = integrate_positive([&](double t) {
    const double lk = log_alpha_kernel(prior, x, t);
    return std::isfinite(lk) ? t * std::exp(lk - ref) : 0.0;
  });
  return num / den;
}

}  // namespace lbound
