#ifndef LBOUND_TESTS_TEST_UTIL_HPP
#define LBOUND_TESTS_TEST_UTIL_HPP

#include <algorithm>
#include <functional>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lbound/esn.hpp"

namespace test_util {

inline double quad_real_line(const std::function<double(double)>& f) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, -inf, inf, 12, 1e-11);
}

inline double quad_from(double lo, const std::function<double(double)>& f) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, lo, inf, 12, 1e-11);
}

// e^{tz} * pdf(z) assembled in log space: the plain product is inf * 0 at
// the huge |z| probed by the infinite-interval transform.
inline double mgf_integrand(const lbound::ExtendedSkewNormal& d, double t,
                            double z) {
  return std::exp(t * z + d.log_pdf(z));
}

// Kolmogorov-Smirnov distance between the empirical distribution of the
// samples and the model cdf.  The cdf along the sorted samples is built
// incrementally (one anchored adaptive integral plus fixed-order panels
// between neighbors), which keeps 1e5-point sweeps cheap.
inline double ks_statistic(std::vector<double> samples,
                           const lbound::ExtendedSkewNormal& dist) {
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  auto pdf = [&dist](double z) { return dist.pdf(z); };
  double d = 0.0;
  double f = dist.cdf(samples.front());
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) {
      f += boost::math::quadrature::gauss<double, 15>::integrate(
          pdf, samples[i - 1], samples[i]);
    }
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(f - lo, hi - f));
  }
  return d;
}

}  // namespace test_util

#endif  // LBOUND_TESTS_TEST_UTIL_HPP
