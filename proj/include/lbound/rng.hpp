#ifndef LBOUND_RNG_HPP
#define LBOUND_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

// Deterministic random number machinery.  The normal transform is pinned
// here (Marsaglia polar on top of mt19937_64) rather than delegated to
// std::normal_distribution, whose draw sequence is implementation-defined;
// identical seeds must reproduce identical streams across toolchains.

namespace lbound {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Seed for the k-th substream of a master seed.  Counter-based so that
// streams are reproducible independent of evaluation order.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t counter) {
  return splitmix64(master ^ splitmix64(counter));
}

class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : gen_(splitmix64(seed)) {}

  // Uniform on [0, 1) with 53 random bits.
  double next_uniform() { return (gen_() >> 11) * 0x1.0p-53; }

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * next_uniform() - 1.0;
      v = 2.0 * next_uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    have_spare_ = true;
    return u * m;
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace lbound

#endif  // LBOUND_RNG_HPP
