#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "ekac/error.hpp"
#include "ekac/gaussian_fit.hpp"
#include "support.hpp"

using namespace ekac;

namespace {

// Phi(u) by composite 20-point Gauss-Legendre on [0, |u|] plus symmetry.
double phi_quadrature(double u) {
  static const double xs[10] = {0.0765265211334973, 0.2277858511416451, 0.3737060887154195,
                                0.5108670019508271, 0.6360536807265150, 0.7463319064601508,
                                0.8391169718222188, 0.9122344282513259, 0.9639719272779138,
                                0.9931285991850949};
  static const double ws[10] = {0.1527533871307258, 0.1491729864726037, 0.1420961093183820,
                                0.1316886384491766, 0.1181945319615184, 0.1019301198172404,
                                0.0832767415767048, 0.0626720483341091, 0.0406014298003869,
                                0.0176140071391521};
  const double a = std::abs(u);
  const int panels = 400;
  const double h = a / panels;
  double s = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double mid = (k + 0.5) * h;
    for (int i = 0; i < 10; ++i) {
      for (const double sign : {-1.0, 1.0}) {
        const double t = mid + sign * xs[i] * h / 2;
        s += ws[i] * std::exp(-t * t / 2);
      }
    }
  }
  const double half = s * h / 2 / std::sqrt(2 * M_PI);
  return u >= 0 ? 0.5 + half : 0.5 - half;
}

}  // namespace

TEST_CASE("phi against quadrature at 10^3 points") {
  for (int i = 0; i < 1000; ++i) {
    const double u = -8.0 + 16.0 * i / 999.0;
    INFO("u = " << u);
    CHECK(std::abs(phi(u) - phi_quadrature(u)) <= 1e-12);
  }
  CHECK(phi(0.0) == 0.5);
}

TEST_CASE("ks distance") {
  CHECK_THROWS_AS(Ecdf({}), DomainError);
  const Ecdf one({0.0});
  CHECK(ks_distance(one) == doctest::Approx(0.5));
  const Ecdf two({-10.0, 10.0});
  CHECK(ks_distance(two) == doctest::Approx(0.5));
  testing::Gen gen(71);
  INFO("seed " << gen.seed());
  std::normal_distribution<double> nd;
  std::vector<double> v(20'000);
  for (double& x : v) x = nd(gen.engine());
  const double d = ks_distance(Ecdf(v));
  CHECK(d < 0.02);
  std::shuffle(v.begin(), v.end(), gen.engine());
  CHECK(ks_distance(Ecdf(v)) == d);
  for (double& x : v) x += 1.0;
  CHECK(ks_distance(Ecdf(v)) > 0.3);
}

TEST_CASE("ks distance equals a brute-force sup over both sides of each jump") {
  testing::Gen gen(72);
  INFO("seed " << gen.seed());
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> v(gen.u64(1, 60));
    for (double& x : v) x = std::round(gen.real(-3, 3) * 2) / 2;  // ties
    const Ecdf e(v);
    double brute = 0.0;
    for (const double u : e.values()) {
      const double below = static_cast<double>(std::count_if(v.begin(), v.end(), [&](double t) { return t < u; }));
      const double upto = static_cast<double>(std::count_if(v.begin(), v.end(), [&](double t) { return t <= u; }));
      const double n = static_cast<double>(v.size());
      brute = std::max({brute, std::abs(below / n - phi(u)), std::abs(upto / n - phi(u))});
    }
    CHECK(ks_distance(e) == doctest::Approx(brute).epsilon(1e-15));
  }
}

TEST_CASE("histogram") {
  Histogram h;
  CHECK(h.bins() == 101);
  h.add(-100.0);
  h.add(100.0);
  h.add(0.0);
  h.add(std::nan(""));
  CHECK(h.counts().front() == 2);
  CHECK(h.counts().back() == 1);
  CHECK(h.counts()[50] == 1);
  CHECK(h.total() == 4);
  CHECK(h.bin_lo(0) == -5.0);
  CHECK(h.bin_hi(100) == doctest::Approx(5.0));
}

TEST_CASE("fit accumulator") {
  testing::Gen gen(73);
  INFO("seed " << gen.seed());
  std::normal_distribution<double> nd(10.0, 2.0);
  FitAccumulator a(10.0, 2.0), b(10.0, 2.0), all(10.0, 2.0);
  for (int i = 0; i < 30'000; ++i) {
    const double v = nd(gen.engine());
    (i % 3 ? a : b).add(v);
    all.add(v);
  }
  a.merge(std::move(b));
  const FitReport r = std::move(a).finish();
  const FitReport r_all = std::move(all).finish();
  CHECK(r.n == 30'000);
  CHECK(r.histogram.total() == r.n);
  CHECK_FALSE(r.approximate);
  CHECK(r.ks_distance == r_all.ks_distance);
  CHECK(std::abs(r.sample_moments[0]) < 0.05);
  CHECK(std::abs(r.sample_moments[1] - 1.0) < 0.05);
  CHECK(std::abs(r.sample_moments[3] - 3.0) < 0.2);
  CHECK(r.histogram_csv().rfind("bin,lo,hi,count\n", 0) == 0);
  CHECK_THROWS_AS(FitAccumulator(0.0, 0.0), ZeroVarianceError);
  CHECK_THROWS_AS(FitAccumulator(0.0, 1.0).finish(), DomainError);
}

TEST_CASE("binned sketch beyond the exact limit") {
  testing::Gen gen(74);
  INFO("seed " << gen.seed());
  std::normal_distribution<double> nd;
  FitAccumulator exact(0.0, 1.0), sketch(0.0, 1.0, 1000);
  for (int i = 0; i < 50'000; ++i) {
    const double v = nd(gen.engine());
    exact.add(v);
    sketch.add(v);
  }
  CHECK(sketch.approximate());
  const FitReport re = std::move(exact).finish();
  const FitReport rs = std::move(sketch).finish();
  CHECK(rs.approximate);
  CHECK(std::abs(re.ks_distance - rs.ks_distance) < 1e-3);
  CHECK(rs.histogram.total() == 50'000);
}
