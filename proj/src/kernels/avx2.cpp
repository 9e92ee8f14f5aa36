// Compiled with -mavx2 -mfma; only reached through dispatch() when the CPU
// reports AVX2.
#include "ekac/kernels.hpp"

#include <immintrin.h>

#include <array>
#include <cassert>
#include <stdexcept>

namespace ekac::kernels {
namespace {

struct Lanes {
  __m256d sum = _mm256_setzero_pd();
  __m256d comp = _mm256_setzero_pd();
};

inline __m256d abs_pd(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

// Four independent Neumaier accumulators.
inline void neumaier_add(Lanes& acc, __m256d x) {
  const __m256d t = _mm256_add_pd(acc.sum, x);
  const __m256d big_sum =
      _mm256_cmp_pd(abs_pd(acc.sum), abs_pd(x), _CMP_GE_OQ);
  const __m256d when_sum = _mm256_add_pd(_mm256_sub_pd(acc.sum, t), x);
  const __m256d when_x = _mm256_add_pd(_mm256_sub_pd(x, t), acc.sum);
  acc.comp = _mm256_add_pd(acc.comp, _mm256_blendv_pd(when_x, when_sum, big_sum));
  acc.sum = t;
}

inline CompensatedSum reduce(const Lanes& acc) {
  alignas(32) double s[4];
  alignas(32) double c[4];
  _mm256_store_pd(s, acc.sum);
  _mm256_store_pd(c, acc.comp);
  CompensatedSum out;
  for (int i = 0; i < 4; ++i) out.merge(CompensatedSum{s[i], c[i]});
  return out;
}

double dot_avx2(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  const std::size_t n = a.size();
  const std::size_t n4 = n & ~std::size_t{3};
  Lanes acc;
  for (std::size_t i = 0; i < n4; i += 4) {
    const __m256d x = _mm256_mul_pd(_mm256_loadu_pd(a.data() + i),
                                    _mm256_loadu_pd(b.data() + i));
    neumaier_add(acc, x);
  }
  CompensatedSum out = reduce(acc);
  for (std::size_t i = n4; i < n; ++i) out.add(a[i] * b[i]);
  return out.value();
}

double dot3_avx2(std::span<const double> a, std::span<const double> b,
                 std::span<const double> c) {
  assert(a.size() == b.size() && b.size() == c.size());
  const std::size_t n = a.size();
  const std::size_t n4 = n & ~std::size_t{3};
  Lanes acc;
  for (std::size_t i = 0; i < n4; i += 4) {
    const __m256d ab = _mm256_mul_pd(_mm256_loadu_pd(a.data() + i),
                                     _mm256_loadu_pd(b.data() + i));
    neumaier_add(acc, _mm256_mul_pd(ab, _mm256_loadu_pd(c.data() + i)));
  }
  CompensatedSum out = reduce(acc);
  for (std::size_t i = n4; i < n; ++i) out.add(a[i] * b[i] * c[i]);
  return out.value();
}

constexpr std::size_t kMaxPower = 64;

void power_sums_avx2(std::span<const double> values, std::span<double> sums,
                     std::span<double> comps) {
  assert(sums.size() == comps.size());
  const std::size_t m_max = sums.size() - 1;
  if (m_max > kMaxPower) throw std::length_error("power_sums: m_max > 64");
  const std::size_t n = values.size();
  const std::size_t n4 = n & ~std::size_t{3};

  std::array<Lanes, kMaxPower + 1> acc{};
  for (std::size_t i = 0; i < n4; i += 4) {
    const __m256d v = _mm256_loadu_pd(values.data() + i);
    __m256d p = v;
    neumaier_add(acc[1], p);
    for (std::size_t m = 2; m <= m_max; ++m) {
      p = _mm256_mul_pd(p, v);
      neumaier_add(acc[m], p);
    }
  }
  for (std::size_t m = 1; m <= m_max; ++m) {
    CompensatedSum s{sums[m], comps[m]};
    if (n4 != 0) s.merge(reduce(acc[m]));
    sums[m] = s.sum;
    comps[m] = s.comp;
  }
  // Tail through the same element-wise order as the scalar reference.
  for (std::size_t i = n4; i < n; ++i) {
    double p = 1.0;
    for (std::size_t m = 1; m <= m_max; ++m) {
      p *= values[i];
      CompensatedSum s{sums[m], comps[m]};
      s.add(p);
      sums[m] = s.sum;
      comps[m] = s.comp;
    }
  }
}

}  // namespace

const KernelTable& avx2_kernels() {
  static const KernelTable table{dot_avx2, dot3_avx2, power_sums_avx2};
  return table;
}

}  // namespace ekac::kernels
