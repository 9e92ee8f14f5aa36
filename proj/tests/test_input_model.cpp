#include <cmath>

#include "doctest.h"
#include "ekac/error.hpp"
#include "ekac/input_model.hpp"
#include "support.hpp"

using namespace ekac;

namespace {

// li(x) - li(2) via Ramanujan's series for the principal-value integral.
double li_series(double x) {
  constexpr double kGamma = 0.57721566490153286061;
  constexpr double kLi2 = 1.04516378011749278484;
  const double l = std::log(x);
  double sum = 0.0;
  double term = 1.0;  // (ln x)^n / (n! 2^{n-1})
  double inner = 0.0;
  for (int n = 1; n < 200; ++n) {
    term *= l / n;
    if (n > 1) term /= 2.0;
    if ((n - 1) % 2 == 0) inner += 1.0 / n;  // sum over k <= (n-1)/2 of 1/(2k+1)
    sum += ((n % 2 == 1) ? 1.0 : -1.0) * term * inner;
  }
  return kGamma + std::log(l) + std::sqrt(x) * sum - kLi2;
}

std::vector<std::uint64_t> values_of(const InputSet& set, PrimeTablePtr t) {
  std::vector<std::uint64_t> out;
  ElementStream(set, std::move(t)).for_each([&](const FactorRecord& r) { out.push_back(r.a); });
  return out;
}

}  // namespace

TEST_CASE("enumeration of input sets") {
  const auto t = primes_up_to(1000);
  CHECK(values_of(InputSet::all_integers(5), t) == std::vector<std::uint64_t>{1, 2, 3, 4, 5});
  CHECK(values_of(InputSet::shifted_primes(10, 1), t) == std::vector<std::uint64_t>{1, 2, 4, 6});
  CHECK(values_of(InputSet::shifted_primes(100, 1), t).size() == 25);
  const auto neg = values_of(InputSet::shifted_primes(30, -2), t);
  CHECK(neg.front() == 4);
  CHECK(neg.back() == 31);
  CHECK(neg.size() == 10);
  CHECK_THROWS_AS(ElementStream(InputSet::shifted_primes(2000, 1), t), CapabilityError);
  CHECK_THROWS_AS(InputSet::shifted_primes(100, 0), DomainError);
  CHECK_THROWS_AS(InputSet::shifted_primes(100, 100), EmptyRangeError);
}

TEST_CASE("shifted primes stream matches an independent construction") {
  const auto t = primes_up_to(200'000);
  for (const std::int64_t a : {1, 2, -1, 7}) {
    std::vector<std::uint64_t> want;
    for (std::uint64_t p = 2; p <= 200'000; ++p) {
      if (testing::naive_is_prime(p) && static_cast<std::int64_t>(p) > a) {
        want.push_back(static_cast<std::uint64_t>(static_cast<std::int64_t>(p) - a));
      }
    }
    std::vector<std::uint64_t> got;
    ElementStream(InputSet::shifted_primes(200'000, a), t, 5000)
        .for_each([&](const FactorRecord& r) {
          got.push_back(r.a);
          REQUIRE(std::vector<std::uint64_t>(r.primes.begin(), r.primes.end()) ==
                  testing::naive_factors(r.a));
        });
    CHECK(got == want);
  }
}

TEST_CASE("density_h") {
  CHECK(density_h(DensityModel::unit(), 6) == 1);
  CHECK(density_h(DensityModel::shifted_prime(1), 6) == 3);
  CHECK(density_h(DensityModel::shifted_prime(3), 3) == 0);
  CHECK_THROWS_AS(density_h(DensityModel::unit(), 12), DomainError);
  testing::Gen gen(21);
  INFO("seed " << gen.seed());
  const DensityModel m = DensityModel::shifted_prime(6);
  const std::vector<std::uint64_t> ps = {2, 3, 5, 7, 11, 13, 17, 19, 23};
  for (int rep = 0; rep < 200; ++rep) {
    std::uint64_t d1 = 1, d2 = 1;
    for (const std::uint64_t p : ps) {
      const auto r = gen.u64(0, 2);
      if (r == 1) d1 *= p;
      if (r == 2) d2 *= p;
    }
    CHECK(density_h(m, d1 * d2) == density_h(m, d1) * density_h(m, d2));
    CHECK(density_h(m, d1) <= d1);
    CHECK(density_h(m, d1) >= 0);
  }
}

TEST_CASE("big_x and the logarithmic integral") {
  CHECK(big_x(InputSet::all_integers(1000)) == 1000.0);
  CHECK(log_integral(2.0) == 0.0);
  CHECK(std::abs(big_x(InputSet::shifted_primes(100, 1)) - li_series(100.0)) <= 1e-9);
  CHECK(std::abs(log_integral(100.0) - 29.0809778039) <= 1e-9);
  for (const double x : {3.0, 10.0, 1e3, 1e5, 1e6, 1e8}) {
    INFO("x = " << x);
    CHECK(std::abs(log_integral(x) - li_series(x)) <= 1e-9 * std::max(1.0, li_series(x) / 1e4));
  }
}

TEST_CASE("empirical remainders") {
  const auto t = primes_up_to(100);
  const DensityModel unit = DensityModel::unit();
  const Remainder r3 = empirical_remainder(InputSet::all_integers(10), unit, 3, *t);
  REQUIRE(r3.exact);
  CHECK(*r3.exact == make_rational(-1, 3));
  CHECK(*empirical_remainder(InputSet::all_integers(12), unit, 3, *t).exact == 0);
  CHECK(*empirical_remainder(InputSet::all_integers(10), unit, 1, *t).exact == 0);
}

TEST_CASE("all-integers remainders are below one in absolute value") {
  testing::Gen gen(22);
  INFO("seed " << gen.seed());
  const auto t = primes_up_to(100);
  for (int rep = 0; rep < 300; ++rep) {
    const std::uint64_t x = gen.u64(16, 1'000'000);
    std::uint64_t d = 1;
    for (const std::uint64_t p : {2, 3, 5, 7, 11, 13, 17}) {
      if (gen.u64(0, 1)) d *= p;
    }
    const Remainder r = empirical_remainder(InputSet::all_integers(x), DensityModel::unit(), d, *t);
    CHECK(abs(*r.exact) < 1);
    CHECK(r.count == x / d);
  }
}

TEST_CASE("remainder counts agree between enumeration orders") {
  const auto t = primes_up_to(50'000);
  const InputSet set = InputSet::shifted_primes(50'000, 1);
  const DensityModel m = DensityModel::for_set(set);
  // Descending recount over segments in reverse order.
  ElementStream stream(set, t, 977);
  for (const std::uint64_t d : {1ULL, 2ULL, 6ULL, 30ULL, 210ULL}) {
    std::uint64_t rev = 0;
    for (std::size_t k = stream.segment_count(); k-- > 0;) {
      const FactorSegment seg = stream.segment(k);
      for (std::size_t i = seg.size(); i-- > 0;) rev += (seg[i].a % d == 0);
    }
    const Remainder r = empirical_remainder(set, m, d, *t);
    CHECK(r.count == rev);
    CHECK(r.count == count_multiples(set, d, *t));
    const double x = big_x(set);
    CHECK(std::abs(r.value - (static_cast<double>(rev) - to_double(density_h(m, d)) / d * x)) <= 1e-9 * x);
  }
}
