#include <gmpxx.h>

#include "doctest.h"
#include "ekac/kernels.hpp"
#include "support.hpp"

using namespace ekac::kernels;

namespace {

// Products are rounded before summation, so the error bound scales with
// sum |a_i b_i| rather than with the result.
double abs_dot(const std::vector<double>& a, const std::vector<double>& b,
               const std::vector<double>* c = nullptr) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] * b[i] * (c ? (*c)[i] : 1.0));
  return s;
}

double exact_dot(const std::vector<double>& a, const std::vector<double>& b,
                 const std::vector<double>* c = nullptr) {
  mpq_class s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    mpq_class t = mpq_class(a[i]) * mpq_class(b[i]);
    if (c) t *= mpq_class((*c)[i]);
    s += t;
  }
  return s.get_d();
}

std::vector<double> exact_power_sums(const std::vector<double>& v, unsigned m_max) {
  std::vector<mpq_class> s(m_max + 1, 0);
  for (const double x : v) {
    mpq_class p = 1;
    const mpq_class q(x);
    for (unsigned m = 1; m <= m_max; ++m) {
      p *= q;
      s[m] += p;
    }
  }
  std::vector<double> out(m_max + 1, 0.0);
  for (unsigned m = 1; m <= m_max; ++m) out[m] = s[m].get_d();
  return out;
}

}  // namespace

TEST_CASE("compensated sum recovers cancelled low-order terms") {
  CompensatedSum s;
  s.add(1e16);
  s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == 1.0);

  CompensatedSum a;
  CompensatedSum b;
  a.add(1e16);
  b.add(1.0);
  b.add(-1e16);
  a.merge(b);
  CHECK(a.value() == 1.0);
}

TEST_CASE("scalar kernels match exact rational sums") {
  testing::Gen gen(1);
  INFO("seed " << gen.seed());
  const KernelTable& k = scalar_kernels();
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t n = gen.u64(0, 500);
    auto a = gen.reals(n, -1e3, 1e3);
    auto b = gen.reals(n, 0, 1);
    auto c = gen.reals(n, 0, 1);
    constexpr double u = 0x1p-52;
    CHECK(std::abs(k.dot(a, b) - exact_dot(a, b)) <= u * abs_dot(a, b));
    CHECK(std::abs(k.dot3(a, b, c) - exact_dot(a, b, &c)) <= 2 * u * abs_dot(a, b, &c));
  }
}

TEST_CASE("power sums match exact rational powers and leave index 0 alone") {
  testing::Gen gen(2);
  INFO("seed " << gen.seed());
  for (const Isa isa : {Isa::kScalar, Isa::kAvx2}) {
    if (!isa_supported(isa)) continue;
    const KernelTable& k = kernels_for(isa);
    for (int rep = 0; rep < 20; ++rep) {
      const std::size_t n = gen.u64(0, 300);
      auto v = gen.reals(n, -3, 3);
      std::vector<double> sums(9, 0.0);
      std::vector<double> comps(9, 0.0);
      sums[0] = 42.0;
      k.power_sums(v, sums, comps);
      CHECK(sums[0] == 42.0);
      const auto want = exact_power_sums(v, 8);
      for (unsigned m = 1; m <= 8; ++m) {
        const double got = sums[m] + comps[m];
        CHECK(std::abs(got - want[m]) <= 1e-12 * (1.0 + std::abs(want[m])));
      }
    }
  }
}

TEST_CASE("avx2 variants agree with the scalar reference") {
  if (!isa_supported(Isa::kAvx2)) {
    MESSAGE("AVX2 not available on this CPU; equivalence test skipped");
    return;
  }
  testing::Gen gen(3);
  INFO("seed " << gen.seed());
  const KernelTable& s = kernels_for(Isa::kScalar);
  const KernelTable& v = kernels_for(Isa::kAvx2);
  // Every tail length 0..9, then random sizes.
  for (std::size_t n = 0; n < 10; ++n) {
    auto a = gen.reals(n, -1, 1);
    auto b = gen.reals(n, -1, 1);
    auto c = gen.reals(n, -1, 1);
    CHECK(testing::rel_err(s.dot(a, b), v.dot(a, b)) <= 1e-14);
    CHECK(testing::rel_err(s.dot3(a, b, c), v.dot3(a, b, c)) <= 1e-14);
  }
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = gen.u64(0, 5000);
    auto a = gen.reals(n, -10, 10);
    auto b = gen.reals(n, 0, 1);
    auto c = gen.reals(n, 0, 1);
    CHECK(testing::rel_err(s.dot(a, b), v.dot(a, b)) <= 1e-13);
    CHECK(testing::rel_err(s.dot3(a, b, c), v.dot3(a, b, c)) <= 1e-13);
    std::vector<double> ss(11, 0.0), sc(11, 0.0), vs(11, 0.0), vc(11, 0.0);
    s.power_sums(a, ss, sc);
    v.power_sums(a, vs, vc);
    for (unsigned m = 1; m <= 10; ++m) {
      CHECK(std::abs((ss[m] + sc[m]) - (vs[m] + vc[m])) <=
            1e-13 * (1.0 + std::abs(ss[m] + sc[m])));
    }
  }
}

TEST_CASE("dispatch honours force_isa") {
  const Isa before = active_isa();
  force_isa(Isa::kScalar);
  CHECK(active_isa() == Isa::kScalar);
  CHECK(&dispatch() == &scalar_kernels());
  if (isa_supported(Isa::kAvx2)) {
    force_isa(Isa::kAvx2);
    CHECK(active_isa() == Isa::kAvx2);
  }
  force_isa(before);
  CHECK(isa_name(Isa::kScalar) == "scalar");
}
