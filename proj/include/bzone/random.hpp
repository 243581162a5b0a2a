#pragma once
// Seeded randomness with a stability contract: every distribution here is
// implemented in-repo on top of the raw mt19937_64 stream, so simulated data
// are bit-reproducible across standard libraries and platforms.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace bzone {

// splitmix64 finalizer; used to derive independent child seeds.
inline std::uint64_t splitmix64_mix(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Child seed for replication/worker `stream` under a master seed. Counter
// based: child k is the k-th output of splitmix64 seeded at `seed`, so any
// subset of streams can be generated independently and in any order.
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64_mix(seed + stream * 0x9E3779B97F4A7C15ULL);
}

enum class NoiseLaw { Gaussian, ShiftedExponential, StudentT5 };

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via Box-Muller; the pair's second member is cached.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u1 = uniform01();
    while (u1 == 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
  }

  // Unit-variance, mean-zero draw from the requested law.
  double noise(NoiseLaw law) {
    switch (law) {
      case NoiseLaw::Gaussian:
        return normal();
      case NoiseLaw::ShiftedExponential: {
        // Exp(1) - 1: mean 0, variance 1.
        double u = uniform01();
        while (u == 0.0) u = uniform01();
        return -std::log(u) - 1.0;
      }
      case NoiseLaw::StudentT5: {
        // t_5 = Z / sqrt(chi2_5 / 5), variance 5/3; rescaled to variance 1.
        const double z = normal();
        double chi2 = 0.0;
        for (int i = 0; i < 5; ++i) {
          const double g = normal();
          chi2 += g * g;
        }
        const double t = z / std::sqrt(chi2 / 5.0);
        return t * 0.77459666924148337704;  // sqrt(3/5)
      }
    }
    throw std::logic_error("noise: unknown law");
  }

 private:
  std::mt19937_64 gen_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

inline NoiseLaw parse_noise_law(const std::string& s) {
  if (s == "gaussian" || s == "normal") return NoiseLaw::Gaussian;
  if (s == "shifted_exponential" || s == "shifted-exponential") return NoiseLaw::ShiftedExponential;
  if (s == "t5" || s == "student_t5") return NoiseLaw::StudentT5;
  throw std::invalid_argument("unknown noise law: " + s);
}

inline const char* noise_law_name(NoiseLaw law) {
  switch (law) {
    case NoiseLaw::Gaussian: return "gaussian";
    case NoiseLaw::ShiftedExponential: return "shifted_exponential";
    case NoiseLaw::StudentT5: return "t5";
  }
  return "unknown";
}

}  // namespace bzone
