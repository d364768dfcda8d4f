#include "lbound/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lbound/esn.hpp"
#include "lbound/normal_model.hpp"
#include "lbound/poisson_model.hpp"
#include "lbound/risk_engine.hpp"

namespace lbound::cli {

namespace {

using nlohmann::json;

// Validation failure tied to a named option; surfaces as exit code 2.
struct OptionError : std::runtime_error {
  explicit OptionError(const std::string& msg) : std::runtime_error(msg) {}
};

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw OptionError("--config: cannot read '" + path + "'");
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw OptionError("--config: '" + path + "' is not valid JSON (" +
                      e.what() + ")");
  }
  return j;
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Flags shared by every subcommand that needs a normal-model configuration.
struct NormalOpts {
  std::string config_path;
  double sigma2 = 1.0;
  bool sigma2_given = false;
  bool flat_prior = false;
  double prior_mu = 0.0;
  double prior_tau2 = 0.0;
  bool prior_tau2_given = false;
  double alpha_mu = 0.0;
  double alpha_sigma2 = 0.0;
  bool alpha_sigma2_given = false;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--config", config_path,
                    "JSON model configuration "
                    "{\"sigma2\":...,\"prior\":{...},\"alpha\":{...}}");
    cmd->add_option("--sigma2", sigma2, "sampling variance")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--flat-prior", flat_prior, "flat (improper) prior on theta");
    cmd->add_option("--prior-mu", prior_mu, "theta prior mean");
    cmd->add_option("--prior-tau2", prior_tau2, "theta prior variance")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--alpha-mu", alpha_mu, "bound prior mean (default 0)");
    cmd->add_option("--alpha-sigma2", alpha_sigma2,
                    "bound prior variance (0 = deterministic bound)")
        ->check(CLI::NonNegativeNumber);
  }

  void note_given(const CLI::App* cmd) {
    sigma2_given = cmd->count("--sigma2") > 0;
    prior_tau2_given = cmd->count("--prior-tau2") > 0;
    alpha_sigma2_given = cmd->count("--alpha-sigma2") > 0;
  }

  NormalConfig resolve() const {
    if (!config_path.empty()) {
      try {
        return NormalConfig::from_json(load_json_file(config_path));
      } catch (const json::exception& e) {
        throw OptionError(std::string("--config: ") + e.what());
      }
    }
    if (!sigma2_given) {
      throw OptionError("--sigma2 is required when --config is not given");
    }
    NormalConfig cfg;
    cfg.sigma2 = sigma2;
    if (flat_prior) {
      if (prior_tau2_given) {
        throw OptionError("--prior-tau2 conflicts with --flat-prior");
      }
      cfg.prior = NormalPrior::flat_prior();
    } else {
      if (!prior_tau2_given) {
        throw OptionError(
            "--prior-tau2 is required unless --flat-prior is set");
      }
      cfg.prior = NormalPrior::normal(prior_mu, prior_tau2);
    }
    if (!alpha_sigma2_given) {
      throw OptionError("--alpha-sigma2 is required when --config is not given");
    }
    cfg.alpha_mu = alpha_mu;
    cfg.alpha_sigma2 = alpha_sigma2;
    cfg.validate();
    return cfg;
  }
};

struct PoissonOpts {
  std::string config_path;
  double a = 1.0, b = 0.0, c = 1.0, d = 0.0;
  bool abcd_given = false;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--config", config_path,
                    "JSON prior {\"a\":...,\"b\":...,\"c\":...,\"d\":...}");
    cmd->add_option("--a", a, "theta prior shape (a > 0)");
    cmd->add_option("--b", b, "theta prior rate offset (b > -1)");
    cmd->add_option("--c", c, "bound prior shape (c > 0)");
    cmd->add_option("--d", d, "bound prior rate (d >= 0)");
  }

  void note_given(const CLI::App* cmd) {
    abcd_given = cmd->count("--a") > 0;
  }

  PoissonPrior resolve() const {
    if (!config_path.empty()) {
      try {
        return PoissonPrior::from_json(load_json_file(config_path));
      } catch (const json::exception& e) {
        throw OptionError(std::string("--config: ") + e.what());
      }
    }
    if (!abcd_given) {
      throw OptionError("--a/--b/--c/--d or --config is required");
    }
    PoissonPrior p{a, b, c, d};
    p.validate();
    return p;
  }
};

json poisson_alpha_summary(const PoissonPrior& prior, unsigned x) {
  json out;
  out["mean"] = alpha_bayes_estimate(prior, x);
  if (prior.a >= 1.0 && prior.a == std::floor(prior.a)) {
    out["mixture"] = alpha_posterior_mixture(prior, x).to_json();
  }
  return out;
}

json normal_posterior_summary(const NormalConfig& cfg, double x,
                              const std::string& target) {
  json out;
  if (target == "theta") {
    if (cfg.alpha_sigma2 > 0.0) {
      const LocScaleEsn post = theta_posterior(cfg, x);
      out = {{"family", "esn"},
             {"psi1", post.standard.psi1()},
             {"psi2", post.standard.psi2()},
             {"location", post.location},
             {"scale", post.scale},
             {"reflected", post.reflected},
             {"mean", post.mean()},
             {"variance", post.variance()}};
    } else {
      const TruncatedNormal post = theta_posterior_truncated(cfg, x);
      out = {{"family", "truncated_normal"},
             {"mu", post.mu},
             {"sigma", post.sigma},
             {"lower", post.lower},
             {"mean", post.mean()}};
    }
  } else {  // alpha
    if (cfg.alpha_sigma2 > 0.0) {
      const LocScaleEsn post = alpha_posterior(cfg, x);
      out = {{"family", "esn"},
             {"psi1", post.standard.psi1()},
             {"psi2", post.standard.psi2()},
             {"location", post.location},
             {"scale", post.scale},
             {"reflected", post.reflected},
             {"mean", post.mean()},
             {"variance", post.variance()}};
    } else {
      out = {{"family", "point_mass"}, {"at", cfg.alpha_mu}};
    }
  }
  return out;
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

int run_impl(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err) {
  CLI::App app{
      "Hierarchical-Bayes inference for a parameter with an uncertain lower "
      "bound, and a frequentist risk engine for the delta_c estimators"};
  app.require_subcommand(1);

  // estimate-normal ---------------------------------------------------------
  auto* est_n = app.add_subcommand(
      "estimate-normal", "Bayes point estimate E(theta|x), normal model");
  double en_x = 0.0;
  est_n->add_option("--x", en_x, "observation")->required();
  NormalOpts en_opts;
  en_opts.add_to(est_n);

  // estimate-poisson --------------------------------------------------------
  auto* est_p = app.add_subcommand(
      "estimate-poisson", "posterior means for the Poisson model");
  unsigned ep_x = 0;
  std::string ep_target = "theta";
  est_p->add_option("--x", ep_x, "observed count")->required();
  est_p->add_option("--target", ep_target, "theta or alpha (default theta)")
      ->check(CLI::IsMember({"theta", "alpha"}));
  PoissonOpts ep_opts;
  ep_opts.add_to(est_p);

  // posterior ---------------------------------------------------------------
  auto* post = app.add_subcommand(
      "posterior", "posterior distribution summary for theta or alpha");
  std::string po_model;
  std::string po_target = "theta";
  double po_x = 0.0;
  unsigned po_xc = 0;
  post->add_option("--model", po_model, "normal or poisson")
      ->required()
      ->check(CLI::IsMember({"normal", "poisson"}));
  post->add_option("--target", po_target, "theta or alpha")
      ->check(CLI::IsMember({"theta", "alpha"}));
  auto* po_x_opt = post->add_option("--x", po_x, "observation (normal model)");
  auto* po_xc_opt =
      post->add_option("--count", po_xc, "observed count (poisson model)");
  NormalOpts po_nopts;
  po_nopts.add_to(post);
  PoissonOpts po_popts;
  // --config is shared; a/b/c/d added for the poisson side
  post->add_option("--a", po_popts.a, "theta prior shape (poisson)");
  post->add_option("--b", po_popts.b, "theta prior rate offset (poisson)");
  post->add_option("--c", po_popts.c, "bound prior shape (poisson)");
  post->add_option("--d", po_popts.d, "bound prior rate (poisson)");

  // sample ------------------------------------------------------------------
  auto* smp = app.add_subcommand(
      "sample", "draw from an extended skew-normal distribution");
  double s_psi1 = 0.0, s_psi2 = 0.0, s_loc = 0.0, s_scale = 1.0;
  std::size_t s_n = 0;
  std::uint64_t s_seed = 0;
  smp->add_option("--psi1", s_psi1, "shape/location parameter")->required();
  smp->add_option("--psi2", s_psi2, "skewness parameter (>= 0)")->required();
  smp->add_option("--location", s_loc, "affine location (default 0)");
  smp->add_option("--scale", s_scale, "affine scale (default 1)")
      ->check(CLI::PositiveNumber);
  smp->add_option("--n", s_n, "number of draws")->required();
  smp->add_option("--seed", s_seed, "RNG seed (stochastic output)")
      ->required();

  // risk-curve --------------------------------------------------------------
  auto* rc = app.add_subcommand(
      "risk-curve", "squared-error risk over a theta grid, CSV on stdout");
  std::string rc_estimators;
  double rc_sigma2 = 1.0, rc_from = 0.0, rc_to = 0.0, rc_step = 0.01;
  std::string rc_method = "quadrature";
  std::size_t rc_mc_n = 1'000'000;
  std::uint64_t rc_seed = 0;
  std::string rc_config;
  rc->add_option("--estimators", rc_estimators,
                 "comma-separated ids: unbiased, mle+, katz, delta_c:<c>, "
                 "trunc_delta_c:<c>, bayes")
      ->required();
  rc->add_option("--sigma2", rc_sigma2, "sampling variance (default 1)")
      ->check(CLI::PositiveNumber);
  rc->add_option("--from", rc_from, "grid start")->required();
  rc->add_option("--to", rc_to, "grid end")->required();
  rc->add_option("--step", rc_step, "grid step")
      ->required()
      ->check(CLI::PositiveNumber);
  rc->add_option("--method", rc_method, "quadrature or mc")
      ->check(CLI::IsMember({"quadrature", "mc"}));
  rc->add_option("--mc-n", rc_mc_n, "Monte Carlo draws per point");
  auto* rc_seed_opt =
      rc->add_option("--seed", rc_seed, "master seed (required for mc)");
  rc->add_option("--config", rc_config,
                 "normal-model JSON config (needed for the bayes id)");

  // dominance ---------------------------------------------------------------
  auto* dom = app.add_subcommand(
      "dominance", "cutoff theta_0(c): delta_c beats X for theta >= theta_0");
  double dom_c = 0.0;
  dom->add_option("--c", dom_c, "shrinkage coefficient in (0, 1]")->required();

  // minimax-check -----------------------------------------------------------
  auto* mm = app.add_subcommand(
      "minimax-check", "verify risk(delta_c) <= sigma^2 on [0, theta-max]");
  double mm_c = 0.0, mm_theta_max = 10.0, mm_step = 0.05;
  mm->add_option("--c", mm_c, "shrinkage coefficient in [0, 1]")->required();
  mm->add_option("--theta-max", mm_theta_max, "grid end (>= 10)");
  mm->add_option("--step", mm_step, "grid step (<= 0.05)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  if (est_n->parsed()) {
    en_opts.note_given(est_n);
    const NormalConfig cfg = en_opts.resolve();
    const PosteriorParams p = posterior_update(cfg, en_x);
    emit(out, json{{"estimate", theta_bayes_estimate(cfg, en_x)},
                   {"mu_hat", p.mu_hat},
                   {"tau_prime2", p.tau_prime2}});
    return 0;
  }

  if (est_p->parsed()) {
    ep_opts.note_given(est_p);
    const PoissonPrior prior = ep_opts.resolve();
    if (ep_target == "theta") {
      if (prior.d <= 0.0) {
        throw OptionError(
            "--d: the theta posterior needs d > 0 (with d = 0 the bound "
            "prior is improper in the Gamma-CDF form)");
      }
      emit(out, json{{"mean", theta_posterior_mean(prior, ep_x)}});
    } else {
      emit(out, poisson_alpha_summary(prior, ep_x));
    }
    return 0;
  }

  if (post->parsed()) {
    if (po_model == "normal") {
      if (po_x_opt->count() == 0) {
        throw OptionError("--x is required for --model normal");
      }
      po_nopts.note_given(post);
      emit(out, normal_posterior_summary(po_nopts.resolve(), po_x, po_target));
    } else {
      if (po_xc_opt->count() == 0) {
        throw OptionError("--count is required for --model poisson");
      }
      po_popts.config_path = po_nopts.config_path;
      po_popts.abcd_given = post->count("--a") > 0;
      const PoissonPrior prior = po_popts.resolve();
      if (po_target == "theta") {
        if (prior.d <= 0.0) {
          throw OptionError("--d: the theta posterior needs d > 0");
        }
        emit(out, json{{"family", "gamma_cdf_weighted"},
                       {"shape", prior.a + po_xc},
                       {"rate", 1.0 + prior.b},
                       {"weight_shape", prior.c_alpha},
                       {"weight_rate", prior.d},
                       {"mean", theta_posterior_mean(prior, po_xc)}});
      } else {
        json j = poisson_alpha_summary(prior, po_xc);
        j["family"] = j.contains("mixture") ? "gamma_mixture"
                                            : "gamma_tail_weighted";
        emit(out, j);
      }
    }
    return 0;
  }

  if (smp->parsed()) {
    if (s_n == 0) throw OptionError("--n must be >= 1");
    const LocScaleEsn dist(ExtendedSkewNormal(s_psi1, s_psi2), s_loc, s_scale);
    out << "value\n";
    for (double v : dist.sample(s_n, s_seed)) {
      out << fmt17(v) << "\n";
    }
    return 0;
  }

  if (rc->parsed()) {
    const std::vector<std::string> ids = split_csv(rc_estimators);
    if (ids.empty()) {
      throw OptionError("--estimators: need at least one estimator id");
    }
    if (!(rc_to >= rc_from)) {
      throw OptionError("--to must be >= --from");
    }
    std::optional<NormalConfig> bayes_cfg;
    if (!rc_config.empty()) {
      try {
        bayes_cfg = NormalConfig::from_json(load_json_file(rc_config));
      } catch (const json::exception& e) {
        throw OptionError(std::string("--config: ") + e.what());
      }
    }
    const RiskMethod method = rc_method == "quadrature"
                                  ? RiskMethod::kQuadrature
                                  : RiskMethod::kMonteCarlo;
    McParams mc;
    if (method == RiskMethod::kMonteCarlo) {
      if (rc_seed_opt->count() == 0) {
        throw OptionError("--seed is required with --method mc");
      }
      if (rc_mc_n < 1000) throw OptionError("--mc-n must be >= 1000");
      mc.n = rc_mc_n;
      mc.seed = rc_seed;
    }
    const auto curves =
        risk_curve(ids, rc_sigma2, rc_from, rc_to, rc_step, method,
                   method == RiskMethod::kMonteCarlo ? &mc : nullptr,
                   bayes_cfg ? &*bayes_cfg : nullptr);
    write_risk_csv(out, curves);
    return 0;
  }

  if (dom->parsed()) {
    if (!(dom_c > 0.0 && dom_c <= 1.0)) {
      throw OptionError("--c must be in (0, 1]");
    }
    emit(out, json{{"c", dom_c}, {"theta0", dominance_cutoff(dom_c)}});
    return 0;
  }

  if (mm->parsed()) {
    if (!(mm_c >= 0.0 && mm_c <= 1.0)) {
      throw OptionError("--c must be in [0, 1]");
    }
    if (!(mm_theta_max >= 10.0)) {
      throw OptionError("--theta-max must be >= 10");
    }
    if (!(mm_step > 0.0 && mm_step <= 0.05)) {
      throw OptionError("--step must be in (0, 0.05]");
    }
    const DominanceReport r = minimax_check(mm_c, mm_theta_max, mm_step);
    json j{{"c", r.c},
           {"sup_risk_on_nonneg", r.sup_risk_on_nonneg},
           {"dominates_on_nonneg", r.dominates_on_nonneg},
           {"boundary_case", r.boundary_case},
           {"tail_converged", r.tail_converged}};
    if (std::isnan(r.cutoff_theta0)) {
      j["cutoff_theta0"] = nullptr;
    } else {
      j["cutoff_theta0"] = r.cutoff_theta0;
    }
    emit(out, j);
    return 0;
  }

  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  try {
    return run_impl(argc, argv, out, err);
  } catch (const OptionError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace lbound::cli
