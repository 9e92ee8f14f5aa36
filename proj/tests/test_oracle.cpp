#include <numeric>
#include <set>

#include "doctest.h"
#include "ekac/error.hpp"
#include "ekac/oracle.hpp"
#include "ekac/sieve.hpp"
#include "support.hpp"

using namespace ekac;
using namespace ekac::oracle;

namespace {

const DensityModel kUnit = DensityModel::unit();
const DensityModel kShift1 = DensityModel::shifted_prime(1);

Rational q(std::int64_t n, std::int64_t d = 1) { return make_rational(n, d); }

}  // namespace

TEST_CASE("f_r") {
  CHECK(f_r(2, 4, kUnit) == q(1, 2));
  CHECK(f_r(2, 3, kUnit) == q(-1, 2));
  CHECK(f_r(6, 3, kUnit) == q(-1, 3));
  CHECK(f_r(1, 17, kUnit) == 1);
  testing::Gen gen(81);
  INFO("seed " << gen.seed());
  for (int rep = 0; rep < 300; ++rep) {
    const auto r1 = gen.u64(1, 5000), r2 = gen.u64(1, 5000), a = gen.u64(1, 100'000);
    CHECK(f_r(r1 * r2, a, kShift1) == f_r(r1, a, kShift1) * f_r(r2, a, kShift1));
  }
}

TEST_CASE("H and J values") {
  for (const std::uint64_t p : {2, 3, 5, 97}) CHECK(H_of(p, kUnit) == 0);
  CHECK(H_of(4, kUnit) == q(1, 4));
  CHECK(H_of(8, kUnit) == 0);
  CHECK(H_of(12, kUnit) == 0);
  CHECK(H_of(1, kUnit) == 1);
  CHECK(J_of(2, 2, kUnit) == 1);
  CHECK(J_of(4, 1, kUnit) == q(1, 4));
}

TEST_CASE("H multiplicative on coprime arguments, J multiplicative in r") {
  testing::Gen gen(82);
  INFO("seed " << gen.seed());
  for (int rep = 0; rep < 300; ++rep) {
    const auto m = gen.u64(1, 3000), n = gen.u64(1, 3000);
    if (std::gcd(m, n) != 1) continue;
    CHECK(H_of(m * n, kShift1) == H_of(m, kShift1) * H_of(n, kShift1));
    const auto s = gen.u64(1, 300);
    CHECK(J_of(m * n, s, kUnit) == J_of(m, s, kUnit) * J_of(n, s, kUnit));
  }
}

TEST_CASE("H and J bounds") {
  const std::vector<std::uint64_t> samples = {1, 2, 3, 6, 10, 15, 35, 210, 1001};
  for (std::uint64_t p = 2; p <= 97; ++p) {
    if (!is_prime_u64(p)) continue;
    INFO("p = " << p);
    CHECK(check_H_J_bounds(kUnit, p, 6, samples).pass);
    CHECK(check_H_J_bounds(kShift1, p, 6, samples).pass);
    CHECK(check_H_J_bounds(DensityModel::shifted_prime(6), p, 6, samples).pass);
  }
}

TEST_CASE("divisor identities") {
  CHECK(verify_divisor_identities(12, kUnit).pass);
  CHECK(verify_divisor_identities(1, kUnit).pass);
  testing::Gen gen(83);
  INFO("seed " << gen.seed());
  for (int rep = 0; rep < 500; ++rep) {
    const auto r = gen.u64(1, 100'000);
    const CheckResult c = verify_divisor_identities(r, kShift1);
    CHECK_MESSAGE(c.pass, c.witness);
  }
  const CheckResult bad = verify_divisor_identities(
      12, kUnit, [](std::uint64_t n, const DensityModel& m) { return H_of(n, m) + 1; });
  CHECK_FALSE(bad.pass);
  CHECK(bad.witness.find("r=12") != std::string::npos);
}

TEST_CASE("remainder identity") {
  CHECK(verify_remainder_identity(InputSet::all_integers(100), 6, kUnit).pass);
  CHECK(verify_remainder_identity(InputSet::all_integers(100), 1, kUnit).pass);
  const auto t = primes_up_to(10'000);
  testing::Gen gen(84);
  INFO("seed " << gen.seed());
  for (int rep = 0; rep < 100; ++rep) {
    const CheckResult c = verify_remainder_identity(InputSet::all_integers(10'000), gen.u64(1, 100'000), kUnit, t);
    CHECK_MESSAGE(c.pass, c.witness);
  }
  const InputSet sp = InputSet::shifted_primes(10'000, 1);
  for (int rep = 0; rep < 20; ++rep) {
    CHECK(verify_remainder_identity(sp, gen.u64(1, 100'000), kShift1, t).pass);
  }
  CHECK_THROWS_AS(verify_remainder_identity(InputSet::all_integers(2'000'000), 6, kUnit), SizeGuardError);
}

TEST_CASE("T_k enumeration") {
  CHECK(enumerate_T_k(2).size() == 1);
  CHECK(enumerate_T_k(4).size() == 6);
  std::uint64_t expect[] = {0, 1, 6, 90, 2520, 113400};
  for (unsigned k = 2; k <= 10; k += 2) {
    const auto maps = enumerate_T_k(k);
    CHECK(maps.size() == expect[k / 2]);
    std::set<std::array<std::uint8_t, 12>> unique;
    for (const auto& m : maps) {
      unique.insert(m.assignment);
      for (unsigned j = 0; j < k / 2; ++j) {
        const auto [a, b] = m.preimages(j);
        CHECK(a < b);
        CHECK(m.assignment[a] == j);
        CHECK(m.assignment[b] == j);
      }
    }
    CHECK(unique.size() == maps.size());
  }
  CHECK_THROWS_AS(enumerate_T_k(3), DomainError);
  CHECK_THROWS_AS(enumerate_T_k(14), SizeGuardError);
}

TEST_CASE("pairing rewrite") {
  const RationalG omega = rational_g(StronglyAdditive::omega());
  const std::vector<std::uint64_t> p23 = {2, 3};
  CHECK(verify_pairing_rewrite(2, p23, {omega, omega}, kUnit).pass);
  const std::vector<std::uint64_t> p235 = {2, 3, 5};
  CHECK(verify_pairing_rewrite(4, p235, {omega, omega, omega, omega}, kUnit).pass);
  testing::Gen gen(85);
  INFO("seed " << gen.seed());
  const std::vector<std::uint64_t> p8 = {2, 3, 5, 7, 11, 13, 17, 19};
  for (int rep = 0; rep < 3; ++rep) {
    std::vector<RationalG> gs;
    for (int i = 0; i < 4; ++i) {
      auto vals = std::make_shared<std::map<std::uint64_t, Rational>>();
      for (const auto p : p8) (*vals)[p] = q(gen.i64(0, 9), gen.i64(1, 7));
      gs.push_back([vals](std::uint64_t p) { return vals->at(p); });
    }
    CHECK(verify_pairing_rewrite(4, p8, gs, kShift1).pass);
  }
  CHECK_THROWS_AS(verify_pairing_rewrite(8, p23, std::vector<RationalG>(8, omega), kUnit), SizeGuardError);
  const std::vector<std::uint64_t> p9 = {2, 3, 5, 7, 11, 13, 17, 19, 23};
  CHECK_THROWS_AS(verify_pairing_rewrite(2, p9, {omega, omega}, kUnit), SizeGuardError);
}

TEST_CASE("pairing closed form") {
  CHECK(verify_phi_identity(PolyQ::parse("T"), 2, {q(3)}, {{q(5)}}).pass);
  CHECK(verify_phi_identity(PolyQ::parse("T^2"), 2, {q(2, 3)}, {{q(7, 5)}}).pass);
  CHECK(verify_phi_identity(PolyQ::parse("T1*T2 + 0.5*T1^3"), 4, {q(1, 2), q(3)},
                            {{q(2), q(-1, 3)}, {q(-1, 3), q(5, 4)}})
            .pass);
  CHECK(verify_phi_identity(PolyQ::parse("T^2 + T"), 8, {q(2)}, {{q(3)}}).pass);
  CHECK_THROWS_AS(verify_phi_identity(PolyQ::parse("T"), 3, {q(1)}, {{q(1)}}), DomainError);
}

TEST_CASE("F product identity") {
  const RationalG omega = rational_g(StronglyAdditive::omega());
  const std::vector<std::uint64_t> p235 = {2, 3, 5};
  const InputSet a1000 = InputSet::all_integers(1000);
  for (unsigned k = 1; k <= 4; ++k) {
    INFO("k = " << k);
    CHECK(verify_F_product_identity(a1000, p235, std::vector<RationalG>(k, omega), kUnit).pass);
  }
  CHECK(verify_F_product_identity(InputSet::shifted_primes(5000, 1), std::vector<std::uint64_t>{2, 3, 5, 7, 11},
                                  {omega, omega, omega}, kShift1)
            .pass);
  CHECK_THROWS_AS(verify_F_product_identity(InputSet::all_integers(20'000), p235, {omega}, kUnit), SizeGuardError);
}

TEST_CASE("D_k") {
  const std::vector<std::uint64_t> p23 = {2, 3};
  const std::vector<std::uint64_t> p235 = {2, 3, 5};
  CHECK(enumerate_D_k(0, p235) == std::vector<std::uint64_t>{1});
  CHECK(enumerate_D_k(2, p23) == std::vector<std::uint64_t>{1, 2, 3, 6});
  CHECK(enumerate_D_k(2, p235) == std::vector<std::uint64_t>{1, 2, 3, 5, 6, 10, 15});
  const auto t = primes_up_to(100);
  for (const auto d : enumerate_D_k(3, t->primes())) {
    CHECK(d <= 97ULL * 97 * 97);
    CHECK(mobius_squarefree(d) != 0);
  }
  CHECK_THROWS_AS(enumerate_D_k(4, primes_up_to(100'000)->primes()), SizeGuardError);
}

TEST_CASE("mobius") {
  CHECK(mobius_squarefree(1) == 1);
  CHECK(mobius_squarefree(30) == -1);
  CHECK(mobius_squarefree(6) == 1);
  CHECK_THROWS_AS(mobius_squarefree(12), DomainError);
}

TEST_CASE("suite is deterministic and passes") {
  const auto a = run_suite({});
  const auto b = run_suite({});
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK_MESSAGE(a[i].pass, a[i].name << ": " << a[i].witness);
    CHECK(a[i].cases == b[i].cases);
    CHECK(a[i].witness == b[i].witness);
  }
}
