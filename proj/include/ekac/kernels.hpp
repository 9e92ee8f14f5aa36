#pragma once

// Data-parallel inner loops. Each kernel has a portable scalar reference and,
// on x86-64, an AVX2+FMA variant; `dispatch()` picks one at runtime from the
// CPU feature flags. All kernels use Neumaier-compensated accumulation; the
// variants differ only in summation order, so results agree to rounding.

#include <cstddef>
#include <span>
#include <string_view>

namespace ekac::kernels {

/// Running compensated sum. `value()` folds the compensation back in.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    const double t = sum + x;
    if ((sum >= 0 ? sum : -sum) >= (x >= 0 ? x : -x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  void merge(const CompensatedSum& other) {
    add(other.sum);
    add(other.comp);
  }
  double value() const { return sum + comp; }
};

enum class Isa { kScalar, kAvx2 };

std::string_view isa_name(Isa isa);

/// True when the running CPU can execute the given variant.
bool isa_supported(Isa isa);

struct KernelTable {
  /// Σ a[i]·b[i]
  double (*dot)(std::span<const double> a, std::span<const double> b);
  /// Σ a[i]·b[i]·c[i]
  double (*dot3)(std::span<const double> a, std::span<const double> b,
                 std::span<const double> c);
  /// For m = 1..sums.size()-1: sums[m] += Σ_i values[i]^m (compensated via
  /// comps). Index 0 is left untouched; callers track the count exactly.
  void (*power_sums)(std::span<const double> values, std::span<double> sums,
                     std::span<double> comps);
};

const KernelTable& scalar_kernels();
#if defined(__x86_64__) || defined(_M_X64)
const KernelTable& avx2_kernels();
#endif

const KernelTable& kernels_for(Isa isa);

/// Best variant for this CPU, unless overridden with `force_isa` or the
/// EKAC_ISA environment variable ("scalar" / "avx2").
const KernelTable& dispatch();
Isa active_isa();
void force_isa(Isa isa);

}  // namespace ekac::kernels
