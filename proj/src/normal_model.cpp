#include "lbound/normal_model.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include "lbound/special_fn.hpp"

namespace lbound {

NormalPrior NormalPrior::normal(double mu, double tau2) {
  if (!std::isfinite(mu) || !std::isfinite(tau2) || tau2 <= 0.0) {
    throw std::domain_error("NormalPrior: mu must be finite and tau2 > 0");
  }
  return {false, mu, tau2};
}

void NormalConfig::validate() const {
  if (!std::isfinite(sigma2) || sigma2 <= 0.0) {
    throw std::domain_error("NormalConfig: sigma2 must be > 0");
  }
  if (!prior.flat) {
    if (!std::isfinite(prior.mu) || !std::isfinite(prior.tau2) ||
        prior.tau2 <= 0.0) {
      throw std::domain_error("NormalConfig: prior tau2 must be > 0");
    }
  }
  if (!std::isfinite(alpha_mu)) {
    throw std::domain_error("NormalConfig: alpha mu must be finite");
  }
  if (!std::isfinite(alpha_sigma2) || alpha_sigma2 < 0.0) {
    throw std::domain_error("NormalConfig: alpha sigma2 must be >= 0");
  }
}

NormalConfig NormalConfig::from_json(const nlohmann::json& j) {
  NormalConfig cfg;
  cfg.sigma2 = j.at("sigma2").get<double>();
  const auto& p = j.at("prior");
  const auto& t2 = p.at("tau2");
  if (t2.is_string()) {
    if (t2.get<std::string>() != "flat") {
      throw std::domain_error("NormalConfig: prior tau2 must be a number or \"flat\"");
    }
    cfg.prior = NormalPrior::flat_prior();
  } else {
    cfg.prior = NormalPrior::normal(p.value("mu", 0.0), t2.get<double>());
  }
  if (j.contains("alpha")) {
    const auto& a = j.at("alpha");
    cfg.alpha_mu = a.value("mu", 0.0);
    cfg.alpha_sigma2 = a.at("sigma2").get<double>();
  }
  cfg.validate();
  return cfg;
}

nlohmann::json NormalConfig::to_json() const {
  nlohmann::json p;
  if (prior.flat) {
    p = {{"tau2", "flat"}};
  } else {
    p = {{"mu", prior.mu}, {"tau2", prior.tau2}};
  }
  return {{"sigma2", sigma2},
          {"prior", p},
          {"alpha", {{"mu", alpha_mu}, {"sigma2", alpha_sigma2}}}};
}

double TruncatedNormal::mean() const {
  return mu + sigma * inverse_mills((mu - lower) / sigma);
}

double TruncatedNormal::pdf(double x) const {
  if (x < lower) return 0.0;
  const double z = (x - mu) / sigma;
  // normalizer P(theta >= lower) = Phi((mu - lower)/sigma)
  return std_normal_pdf(z) / (sigma * std_normal_cdf((mu - lower) / sigma));
}

PosteriorParams posterior_update(const NormalConfig& cfg, double x) {
  cfg.validate();
  if (cfg.prior.flat) return {x, cfg.sigma2};
  const double t2 = cfg.prior.tau2;
  const double s2 = cfg.sigma2;
  const double w = t2 / (t2 + s2);
  return {w * x + (1.0 - w) * cfg.prior.mu, s2 * w};
}

LocScaleEsn theta_posterior(const NormalConfig& cfg, double x) {
  const PosteriorParams p = posterior_update(cfg, x);
  if (cfg.alpha_sigma2 <= 0.0) {
    throw std::domain_error(
        "theta_posterior: alpha_sigma2 = 0 is a deterministic bound; use "
        "theta_posterior_truncated");
  }
  const double sa = std::sqrt(cfg.alpha_sigma2);
  const double tp = std::sqrt(p.tau_prime2);
  ExtendedSkewNormal z((p.mu_hat - cfg.alpha_mu) / sa, tp / sa);
  return LocScaleEsn(z, p.mu_hat, tp);
}

TruncatedNormal theta_posterior_truncated(const NormalConfig& cfg, double x) {
  const PosteriorParams p = posterior_update(cfg, x);
  if (cfg.alpha_sigma2 != 0.0) {
    throw std::domain_error(
        "theta_posterior_truncated: requires alpha_sigma2 = 0");
  }
  return {p.mu_hat, std::sqrt(p.tau_prime2), cfg.alpha_mu};
}

double theta_bayes_estimate(const NormalConfig& cfg, double x) {
  const PosteriorParams p = posterior_update(cfg, x);
  const double s = std::sqrt(p.tau_prime2 + cfg.alpha_sigma2);
  return p.mu_hat +
         p.tau_prime2 / s * inverse_mills((p.mu_hat - cfg.alpha_mu) / s);
}

LocScaleEsn alpha_posterior(const NormalConfig& cfg, double x) {
  const PosteriorParams p = posterior_update(cfg, x);
  if (cfg.alpha_sigma2 <= 0.0) {
    throw std::domain_error(
        "alpha_posterior: degenerate for alpha_sigma2 = 0 (point mass at "
        "alpha_mu)");
  }
  // pi2(alpha|x) prop. phi((alpha-alpha_mu)/sigma_a) Phi((mu_hat-alpha)/tau'):
  // in terms of V = (alpha_mu - alpha)/sigma_a the weight is
  // Phi((mu_hat-alpha_mu)/tau' + (sigma_a/tau') v), a standard ESN.
  const double sa = std::sqrt(cfg.alpha_sigma2);
  const double tp = std::sqrt(p.tau_prime2);
  ExtendedSkewNormal v((p.mu_hat - cfg.alpha_mu) / tp, sa / tp);
  return LocScaleEsn(v, cfg.alpha_mu, sa, /*refl=*/true);
}

double alpha_bayes_estimate(const NormalConfig& cfg, double x) {
  const PosteriorParams p = posterior_update(cfg, x);
  if (cfg.alpha_sigma2 == 0.0) return cfg.alpha_mu;
  const double s = std::sqrt(p.tau_prime2 + cfg.alpha_sigma2);
  return cfg.alpha_mu -
         cfg.alpha_sigma2 / s * inverse_mills((p.mu_hat - cfg.alpha_mu) / s);
}

Estimator::Estimator(Kind k, double c, double sigma2, std::string id)
    : kind_(k), c_(c), sigma_(std::sqrt(sigma2)), id_(std::move(id)) {
  if (!std::isfinite(sigma2) || sigma2 <= 0.0) {
    throw std::domain_error("Estimator: sigma2 must be > 0");
  }
}

Estimator Estimator::unbiased() {
  return Estimator(Kind::kUnbiased, 0.0, 1.0, "unbiased");
}

Estimator Estimator::mle_positive() {
  return Estimator(Kind::kMlePositive, 0.0, 1.0, "mle+");
}

Estimator Estimator::katz(double sigma2) {
  return Estimator(Kind::kKatz, 1.0, sigma2, "katz");
}

Estimator Estimator::delta_c(double c, double sigma2) {
  if (!(c >= 0.0 && c <= 1.0)) {
    throw std::domain_error("Estimator: delta_c requires c in [0,1]");
  }
  return Estimator(Kind::kDeltaC, c, sigma2, "delta_c:" + std::to_string(c));
}

Estimator Estimator::trunc_delta_c(double c, double sigma2) {
  if (!(c >= 0.0 && c <= 1.0)) {
    throw std::domain_error("Estimator: trunc_delta_c requires c in [0,1]");
  }
  return Estimator(Kind::kTruncDeltaC, c, sigma2,
                   "trunc_delta_c:" + std::to_string(c));
}

Estimator Estimator::hier_bayes(NormalConfig cfg) {
  cfg.validate();
  Estimator e(Kind::kHierBayes, 0.0, cfg.sigma2, "bayes");
  e.cfg_ = cfg;
  return e;
}

Estimator Estimator::parse(std::string_view id, double sigma2) {
  return parse(id, sigma2, nullptr);
}

Estimator Estimator::parse(std::string_view id, double sigma2,
                           const NormalConfig* bayes_cfg) {
  auto parse_c = [&](std::string_view tail) {
    double c = 0.0;
    const auto res = std::from_chars(tail.data(), tail.data() + tail.size(), c);
    if (res.ec != std::errc() || res.ptr != tail.data() + tail.size()) {
      throw std::invalid_argument("Estimator: bad coefficient in id '" +
                                  std::string(id) + "'");
    }
    return c;
  };
  if (id == "unbiased") return unbiased();
  if (id == "mle+") return mle_positive();
  if (id == "katz") return katz(sigma2);
  if (id == "bayes") {
    if (bayes_cfg == nullptr) {
      throw std::invalid_argument(
          "Estimator: 'bayes' requires a model configuration");
    }
    NormalConfig cfg = *bayes_cfg;
    cfg.sigma2 = sigma2;
    return hier_bayes(cfg);
  }
  constexpr std::string_view kDelta = "delta_c:";
  constexpr std::string_view kTrunc = "trunc_delta_c:";
  if (id.substr(0, kTrunc.size()) == kTrunc) {
    Estimator e = trunc_delta_c(parse_c(id.substr(kTrunc.size())), sigma2);
    e.id_ = std::string(id);
    return e;
  }
  if (id.substr(0, kDelta.size()) == kDelta) {
    Estimator e = delta_c(parse_c(id.substr(kDelta.size())), sigma2);
    e.id_ = std::string(id);
    return e;
  }
  throw std::invalid_argument("Estimator: unknown id '" + std::string(id) +
                              "'");
}

double Estimator::operator()(double x) const {
  switch (kind_) {
    case Kind::kUnbiased:
      return x;
    case Kind::kMlePositive:
      return x > 0.0 ? x : 0.0;
    case Kind::kKatz:
    case Kind::kDeltaC: {
      return x + c_ * sigma_ * inverse_mills(c_ * x / sigma_);
    }
    case Kind::kTruncDeltaC: {
      const double d = x + c_ * sigma_ * inverse_mills(c_ * x / sigma_);
      return d > 0.0 ? d : 0.0;
    }
    case Kind::kHierBayes:
      return theta_bayes_estimate(cfg_, x);
  }
  return x;  // unreachable
}

double evaluate_estimator(const Estimator& est, double x) { return est(x); }

}  // namespace lbound
