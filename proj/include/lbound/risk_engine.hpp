#ifndef LBOUND_RISK_ENGINE_HPP
#define LBOUND_RISK_ENGINE_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lbound/normal_model.hpp"

// Frequentist squared-error risk R(theta, delta) = E_theta[(delta(X)-theta)^2]
// for X ~ N(theta, sigma^2), and the machinery verifying that the delta_c
// family dominates the unbiased estimator on theta >= 0:
//
//   Delta_c(theta) = R(theta, delta_c) - R(theta, delta_0)
//                  = -c^2 E_theta[T(cX)],   T(s) = R(s)(R(s)+2s),
//
// via Stein's identity (unit variance; the general case rescales).  Since
// R(s)+2s increases through a single zero, Delta_c changes sign exactly once,
// from + to -, at a cutoff theta_0(c) < 0; on [0, inf) the risk stays below
// sigma^2, which is the minimax value.
//
// All evaluations are pure; grid points may be computed concurrently and
// Monte Carlo substreams are derived from the master seed by counter, so
// results do not depend on evaluation order.

namespace lbound {

enum class RiskMethod { kQuadrature, kMonteCarlo };

struct RiskCurve {
  std::string estimator_id;
  double sigma2 = 1.0;
  std::vector<double> theta_grid;
  std::vector<double> risk;
  RiskMethod method = RiskMethod::kQuadrature;
  std::vector<double> mc_std_err;  // empty for quadrature
};

struct DominanceReport {
  double c = 0.0;
  double cutoff_theta0 = 0.0;     // NaN for the c = 0 boundary case
  double sup_risk_on_nonneg = 0.0;
  bool dominates_on_nonneg = false;
  bool boundary_case = false;     // c == 0: risk is identically sigma^2
  bool tail_converged = false;    // |risk(theta_max) - sigma^2| <= 1e-3 sigma^2
};

struct McEstimate {
  double value = 0.0;
  double std_err = 0.0;
};

struct McParams {
  std::size_t n = 1'000'000;
  std::uint64_t seed = 0;
};

struct SignChangeBracket {
  double lo = 0.0;
  double hi = 0.0;
  bool downward = false;  // + on the left, - on the right
};

// Gauss-Hermite risk integral, 128 nodes doubled (up to 2048) until two
// successive estimates agree within 1e-10 * sigma2.  Scale-equivariant
// estimators are reduced to the unit-variance problem first.
double risk_quadrature(const Estimator& est, double theta, double sigma2);

// Plain Monte Carlo over n draws; deterministic given seed.
McEstimate risk_monte_carlo(const Estimator& est, double theta, double sigma2,
                            std::size_t n, std::uint64_t seed);

// Delta_c(theta) at unit variance through the Stein identity.
double risk_difference_stein(double c, double theta);

// Sign changes of Delta_c over the grid; |values| below 1e-11 are treated
// as zero so that quadrature noise at a root cannot split one crossing in
// two.  The theory predicts exactly one bracket, downward.
std::vector<SignChangeBracket> sign_change_scan(double c,
                                                std::span<const double> grid);

// Root theta_0(c) of Delta_c by scan over [-20, 20] plus bisection to an
// interval below 1e-6, with sign probes on each side.  Throws
// std::runtime_error if no (or more than one) crossing is bracketed.
double dominance_cutoff(double c);

// Checks risk(delta_c, theta) <= sigma^2 (1 + 1e-6) on the grid
// [0, theta_max] at unit variance and fills a DominanceReport.
DominanceReport minimax_check(double c, double theta_max, double step);

// Inclusive grid from..to in steps of `step`.
std::vector<double> make_grid(double from, double to, double step);

// One curve per estimator id over the theta grid.  "bayes" resolves against
// *bayes_cfg when given.  Unknown ids throw std::invalid_argument.
std::vector<RiskCurve> risk_curve(const std::vector<std::string>& estimator_ids,
                                  double sigma2, double theta_min,
                                  double theta_max, double step,
                                  RiskMethod method,
                                  const McParams* mc = nullptr,
                                  const NormalConfig* bayes_cfg = nullptr);

// CSV rows `estimator,theta,risk,method,std_err` (header mandatory, numbers
// with 17 significant digits so they re-parse to the same value).
void write_risk_csv(std::ostream& out, const std::vector<RiskCurve>& curves);

}  // namespace lbound

#endif  // LBOUND_RISK_ENGINE_HPP
