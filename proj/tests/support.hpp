#pragma once

// Shared test helpers: seeded generators and independent trial-division
// oracles. Every property loop logs its seed through doctest's INFO.

#include <cstdint>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <vector>

namespace testing {

inline std::uint64_t base_seed() {
  if (const char* s = std::getenv("EKAC_TEST_SEED")) return std::strtoull(s, nullptr, 10);
  return 20240611;
}

class Gen {
 public:
  explicit Gen(std::uint64_t salt) : seed_(base_seed() ^ (salt * 0x9e3779b97f4a7c15ULL)), rng_(seed_) {}
  std::uint64_t seed() const { return seed_; }
  std::uint64_t u64(std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng_);
  }
  std::int64_t i64(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::vector<double> reals(std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (double& x : v) x = real(lo, hi);
    return v;
  }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 rng_;
};

inline bool naive_is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline std::vector<std::uint64_t> naive_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline double rel_err(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace testing
