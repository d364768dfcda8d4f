#ifndef LBOUND_ESN_HPP
#define LBOUND_ESN_HPP

#include <cstdint>
#include <vector>

// Extended skew-normal family
//
//   f_{psi1,psi2}(z) = phi(z) * Phi(psi1 + psi2*z) / Phi(gamma0),
//   gamma0 = psi1/sqrt(1+psi2^2),   gamma1 = psi2/sqrt(1+psi2^2),
//
// which generalizes Azzalini's skew normal (psi1 = 0 gives 2*phi*Phi(psi2 z),
// psi2 = 0 collapses to N(0,1)).  Closed forms:
//
//   E[e^{tZ}] = e^{t^2/2} Phi(gamma1*t + gamma0) / Phi(gamma0)
//   E[Z]      = gamma1 * R(gamma0)
//   Var[Z]    = 1 - gamma1^2 * R(gamma0) * (gamma0 + R(gamma0))
//
// with R the inverse Mills ratio.  Only psi2 >= 0 is admitted: every
// posterior in this library has psi2 equal to a ratio of scales.  A
// negative-psi2 variant is reachable through the reflection
// f_{psi1,-psi2}(z) = f_{psi1,psi2}(-z) and is intentionally not wrapped.

namespace lbound {

class ExtendedSkewNormal {
 public:
  // Requires psi1 finite and psi2 >= 0 finite; throws std::invalid_argument.
  ExtendedSkewNormal(double psi1, double psi2);

  double psi1() const { return psi1_; }
  double psi2() const { return psi2_; }
  double gamma0() const { return gamma0_; }
  double gamma1() const { return gamma1_; }

  double pdf(double z) const;
  double log_pdf(double z) const;
  double mgf(double t) const;
  double mean() const;
  double variance() const;

  // Adaptive Gauss-Kronrod integral of the pdf over (-inf, z]; absolute
  // error ~1e-11.
  double cdf(double z) const;

  // Exact rejection sampling from the conditioning representation: draw
  // (u1, u2) iid N(0,1) and accept u1 when u2 <= psi1 + psi2*u1.  The
  // acceptance probability is Phi(gamma0); throws std::domain_error
  // ("degenerate tail") when that is below 1e-12.  Deterministic given
  // seed; concurrent callers should use distinct seeds.
  std::vector<double> sample(std::size_t n, std::uint64_t seed) const;

  struct SampleStats {
    std::vector<double> values;
    std::uint64_t attempts = 0;  // accepted n out of this many proposals
  };
  SampleStats sample_with_stats(std::size_t n, std::uint64_t seed) const;

 private:
  double psi1_, psi2_, gamma0_, gamma1_;
  double log_norm_;  // log Phi(gamma0)
};

// Affine image X = location +- scale * Z of a standard ESN variable.  The
// family itself only admits psi2 >= 0 (right skew); `reflected` flips the
// orientation (X = location - scale * Z), which is how left-skewed
// posteriors such as the one of the lower bound are represented.
struct LocScaleEsn {
  ExtendedSkewNormal standard;
  double location = 0.0;
  double scale = 1.0;  // > 0
  bool reflected = false;

  LocScaleEsn(ExtendedSkewNormal s, double loc, double sc, bool refl = false);

  double pdf(double x) const;
  double cdf(double x) const;
  double mean() const {
    const double m = scale * standard.mean();
    return reflected ? location - m : location + m;
  }
  double variance() const { return scale * scale * standard.variance(); }
  std::vector<double> sample(std::size_t n, std::uint64_t seed) const;
};

}  // namespace lbound

#endif  // LBOUND_ESN_HPP
