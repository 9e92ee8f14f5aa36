#include "ekac/kernels.hpp"

#include <cassert>

namespace ekac::kernels {
namespace {

double dot_scalar(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  CompensatedSum acc;
  for (std::size_t i = 0; i < a.size(); ++i) acc.add(a[i] * b[i]);
  return acc.value();
}

double dot3_scalar(std::span<const double> a, std::span<const double> b,
                   std::span<const double> c) {
  assert(a.size() == b.size() && b.size() == c.size());
  CompensatedSum acc;
  for (std::size_t i = 0; i < a.size(); ++i) acc.add(a[i] * b[i] * c[i]);
  return acc.value();
}

void power_sums_scalar(std::span<const double> values, std::span<double> sums,
                       std::span<double> comps) {
  assert(sums.size() == comps.size());
  const std::size_t m_max = sums.size() - 1;
  for (const double v : values) {
    double p = 1.0;
    for (std::size_t m = 1; m <= m_max; ++m) {
      p *= v;
      CompensatedSum s{sums[m], comps[m]};
      s.add(p);
      sums[m] = s.sum;
      comps[m] = s.comp;
    }
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{dot_scalar, dot3_scalar, power_sums_scalar};
  return table;
}

}  // namespace ekac::kernels
