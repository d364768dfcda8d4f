#include "lbound/risk_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <stdexcept>

#include "lbound/rng.hpp"
#include "lbound/special_fn.hpp"

namespace lbound {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kInvSqrtPi = 0.56418958354775628695;

// ---------------------------------------------------------------------------
// Gauss-Hermite rules (physicists' convention):
//   integral f(u) e^{-u^2} du  ~=  sum_i w_i f(u_i)
// Built by Golub-Welsch: QL with implicit shifts on the symmetric
// tridiagonal Jacobi matrix (diagonal 0, off-diagonal sqrt(j/2)), carrying
// only the first row of the eigenvector matrix, whose squared entries give
// the weights.  Newton marching from asymptotic guesses jumps roots once n
// grows past a few hundred; this stays exact through n = 2048 and beyond.

struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussHermiteRule build_gauss_hermite(std::size_t n) {
  std::vector<double> d(n, 0.0), e(n, 0.0), q(n, 0.0);
  for (std::size_t j = 1; j < n; ++j) e[j - 1] = std::sqrt(0.5 * j);
  q[0] = 1.0;
  auto sign = [](double a, double b) {
    return b >= 0 ? std::fabs(a) : -std::fabs(a);
  };
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= 1e-306 + 2.3e-16 * dd) break;
      }
      if (m != l) {
        if (++iter == 50) {
          throw std::runtime_error("gauss_hermite: eigenvalue iteration stuck");
        }
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + sign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        for (std::size_t i = m; i-- > l;) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          f = q[i + 1];
          q[i + 1] = s * q[i] + c * f;
          q[i] = c * q[i] - s * f;
        }
        if (r == 0.0 && m - l > 1) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }

  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  GaussHermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  constexpr double kSqrtPi = 1.7724538509055160273;
  for (std::size_t i = 0; i < n; ++i) {
    rule.nodes[i] = d[idx[i]];
    rule.weights[i] = kSqrtPi * q[idx[i]] * q[idx[i]];
  }
  // the rule is symmetric; enforce exact mirror pairs
  for (std::size_t i = 0; i < n / 2; ++i) {
    const std::size_t j = n - 1 - i;
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    rule.nodes[j] = x;
    rule.nodes[i] = -x;
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.weights[i] = rule.weights[j] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

const GaussHermiteRule& gauss_hermite(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, GaussHermiteRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, build_gauss_hermite(n)).first;
  }
  return it->second;
}

// E[f(Z)] for Z ~ N(mean, sd^2), doubling the rule from 128 nodes until two
// successive estimates agree within tol (absolute).  The last estimate is
// returned if 2048 nodes still disagree (piecewise-smooth integrands like
// mle+ converge only algebraically; their consumers use MC tolerances).
double gauss_hermite_mean(const std::function<double(double)>& f, double mean,
                          double sd, double tol) {
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t n = 128; n <= 2048; n *= 2) {
    const GaussHermiteRule& rule = gauss_hermite(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += rule.weights[i] * f(mean + kSqrt2 * sd * rule.nodes[i]);
    }
    const double value = kInvSqrtPi * acc;
    if (n > 128 && std::fabs(value - prev) < tol) return value;
    prev = value;
  }
  return prev;
}

double unit_risk(const Estimator& est, double theta) {
  return gauss_hermite_mean(
      [&](double x) {
        const double e = est(x) - theta;
        return e * e;
      },
      theta, 1.0, 1e-10);
}

int sign_with_tol(double v, double tol) {
  if (v > tol) return 1;
  if (v < -tol) return -1;
  return 0;
}

}  // namespace

double risk_quadrature(const Estimator& est, double theta, double sigma2) {
  if (!std::isfinite(theta)) {
    throw std::domain_error("risk_quadrature: theta must be finite");
  }
  if (!std::isfinite(sigma2) || sigma2 <= 0.0) {
    throw std::domain_error("risk_quadrature: sigma2 must be > 0");
  }
  const double sigma = std::sqrt(sigma2);
  switch (est.kind()) {
    case Estimator::Kind::kUnbiased:
      return gauss_hermite_mean(
                 [&](double z) { return z * z; }, 0.0, 1.0, 1e-10) *
             sigma2;
    case Estimator::Kind::kMlePositive:
    case Estimator::Kind::kKatz:
    case Estimator::Kind::kDeltaC:
    case Estimator::Kind::kTruncDeltaC: {
      // reduce to the unit-variance problem: delta(sigma z) = sigma delta~(z)
      const Estimator unit = est.kind() == Estimator::Kind::kMlePositive
                                 ? Estimator::mle_positive()
                             : est.kind() == Estimator::Kind::kKatz
                                 ? Estimator::katz(1.0)
                             : est.kind() == Estimator::Kind::kDeltaC
                                 ? Estimator::delta_c(est.c(), 1.0)
                                 : Estimator::trunc_delta_c(est.c(), 1.0);
      return sigma2 * unit_risk(unit, theta / sigma);
    }
    case Estimator::Kind::kHierBayes:
      // not scale equivariant (the prior carries its own scales)
      return gauss_hermite_mean(
          [&](double x) {
            const double e = est(x) - theta;
            return e * e;
          },
          theta, sigma, 1e-10 * sigma2);
  }
  throw std::logic_error("risk_quadrature: unhandled estimator kind");
}

McEstimate risk_monte_carlo(const Estimator& est, double theta, double sigma2,
                            std::size_t n, std::uint64_t seed) {
  if (n < 1000) {
    throw std::domain_error("risk_monte_carlo: n must be >= 1000");
  }
  if (!std::isfinite(sigma2) || sigma2 <= 0.0) {
    throw std::domain_error("risk_monte_carlo: sigma2 must be > 0");
  }
  const double sigma = std::sqrt(sigma2);
  NormalStream g(seed);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = theta + sigma * g.next();
    const double e = est(x) - theta;
    const double v = e * e;
    const double delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v - mean);
  }
  const double var = m2 / static_cast<double>(n - 1);
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

double risk_difference_stein(double c, double theta) {
  if (!(c > 0.0 && c <= 1.0)) {
    throw std::domain_error("risk_difference_stein: c must be in (0, 1]");
  }
  const double e =
      gauss_hermite_mean([&](double x) { return t_fn(c * x); }, theta, 1.0,
                         1e-10);
  return -c * c * e;
}

std::vector<SignChangeBracket> sign_change_scan(double c,
                                                std::span<const double> grid) {
  constexpr double kZeroTol = 1e-11;
  std::vector<SignChangeBracket> out;
  int last_sign = 0;
  double last_pos = 0.0;
  for (double theta : grid) {
    const double v = risk_difference_stein(c, theta);
    const int s = sign_with_tol(v, kZeroTol);
    if (s != 0) {
      if (last_sign != 0 && s != last_sign) {
        out.push_back({last_pos, theta, last_sign > 0});
      }
      last_sign = s;
      last_pos = theta;
    }
  }
  return out;
}

double dominance_cutoff(double c) {
  if (!(c > 0.0 && c <= 1.0)) {
    throw std::domain_error("dominance_cutoff: c must be in (0, 1]");
  }
  const std::vector<double> grid = make_grid(-20.0, 20.0, 0.01);
  const auto brackets = sign_change_scan(c, grid);
  if (brackets.empty()) {
    throw std::runtime_error(
        "dominance_cutoff: no sign change of Delta_c bracketed in [-20, 20]");
  }
  if (brackets.size() > 1 || !brackets.front().downward) {
    throw std::runtime_error(
        "dominance_cutoff: Delta_c is expected to change sign exactly once "
        "from + to -; the scan disagrees");
  }
  double lo = brackets.front().lo;
  double hi = brackets.front().hi;
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    if (risk_difference_stein(c, mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double root = 0.5 * (lo + hi);
  if (!(risk_difference_stein(c, root - 0.05) > 0.0) ||
      !(risk_difference_stein(c, root + 0.05) < 0.0)) {
    throw std::runtime_error(
        "dominance_cutoff: sign probes around the root failed");
  }
  return root;
}

DominanceReport minimax_check(double c, double theta_max, double step) {
  if (!(c >= 0.0 && c <= 1.0)) {
    throw std::domain_error("minimax_check: c must be in [0, 1]");
  }
  if (!(theta_max >= 10.0)) {
    throw std::domain_error("minimax_check: theta_max must be >= 10");
  }
  if (!(step > 0.0 && step <= 0.05)) {
    throw std::domain_error("minimax_check: step must be in (0, 0.05]");
  }
  DominanceReport report;
  report.c = c;
  report.boundary_case = (c == 0.0);
  const Estimator est =
      c == 0.0 ? Estimator::unbiased() : Estimator::delta_c(c, 1.0);
  double sup = -std::numeric_limits<double>::infinity();
  double last = 0.0;
  for (double theta : make_grid(0.0, theta_max, step)) {
    last = risk_quadrature(est, theta, 1.0);
    sup = std::max(sup, last);
  }
  report.sup_risk_on_nonneg = sup;
  report.dominates_on_nonneg = sup <= 1.0 + 1e-6;
  report.tail_converged = std::fabs(last - 1.0) <= 1e-3;
  report.cutoff_theta0 = report.boundary_case
                             ? std::numeric_limits<double>::quiet_NaN()
                             : dominance_cutoff(c);
  return report;
}

std::vector<double> make_grid(double from, double to, double step) {
  if (!(step > 0.0) || !(to >= from)) {
    throw std::domain_error("make_grid: need step > 0 and to >= from");
  }
  const std::size_t n =
      static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = from + static_cast<double>(i) * step;
  }
  return grid;
}

std::vector<RiskCurve> risk_curve(const std::vector<std::string>& estimator_ids,
                                  double sigma2, double theta_min,
                                  double theta_max, double step,
                                  RiskMethod method, const McParams* mc,
                                  const NormalConfig* bayes_cfg) {
  if (method == RiskMethod::kMonteCarlo && mc == nullptr) {
    throw std::domain_error("risk_curve: Monte Carlo method needs McParams");
  }
  const std::vector<double> grid = make_grid(theta_min, theta_max, step);
  std::vector<RiskCurve> curves;
  curves.reserve(estimator_ids.size());
  for (std::size_t e = 0; e < estimator_ids.size(); ++e) {
    const Estimator est = Estimator::parse(estimator_ids[e], sigma2, bayes_cfg);
    RiskCurve curve;
    curve.estimator_id = estimator_ids[e];
    curve.sigma2 = sigma2;
    curve.theta_grid = grid;
    curve.method = method;
    curve.risk.resize(grid.size());
    if (method == RiskMethod::kMonteCarlo) {
      curve.mc_std_err.resize(grid.size());
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (method == RiskMethod::kQuadrature) {
        curve.risk[i] = risk_quadrature(est, grid[i], sigma2);
      } else {
        // one substream per (estimator, theta) pair, independent of order
        const std::uint64_t counter = e * grid.size() + i;
        const McEstimate r = risk_monte_carlo(
            est, grid[i], sigma2, mc->n, substream_seed(mc->seed, counter));
        curve.risk[i] = r.value;
        curve.mc_std_err[i] = r.std_err;
      }
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

void write_risk_csv(std::ostream& out, const std::vector<RiskCurve>& curves) {
  out << "estimator,theta,risk,method,std_err\n";
  char buf[64];
  auto fmt = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  for (const RiskCurve& c : curves) {
    const char* method =
        c.method == RiskMethod::kQuadrature ? "quadrature" : "monte_carlo";
    for (std::size_t i = 0; i < c.theta_grid.size(); ++i) {
      out << c.estimator_id << ',' << fmt(c.theta_grid[i]) << ','
          << fmt(c.risk[i]) << ',' << method << ',';
      if (!c.mc_std_err.empty()) out << fmt(c.mc_std_err[i]);
      out << '\n';
    }
  }
}

}  // namespace lbound
