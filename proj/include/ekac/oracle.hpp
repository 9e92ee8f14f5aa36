#pragma once

// Exact rational checks of the sieve and moment algebra on small instances.
// Every comparison here is exact equality; there are no tolerances.

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ekac/additive.hpp"
#include "ekac/input_model.hpp"
#include "ekac/poly.hpp"
#include "ekac/rational.hpp"

namespace ekac::oracle {

using Factorization = std::vector<std::pair<std::uint64_t, unsigned>>;

/// Trial-division factorization, primes ascending. n >= 1.
Factorization factorize(std::uint64_t n);

/// (-1)^omega(n) for squarefree n; DomainError otherwise.
int mobius_squarefree(std::uint64_t n);

/// Completely multiplicative in r: prod over p^alpha || r of (1 - h(p)/p)^alpha
/// when p | a, (-h(p)/p)^alpha otherwise.
Rational f_r(std::uint64_t r, std::uint64_t a, const DensityModel& model);

/// prod over p^alpha || n of (h/p)(1 - h/p)^alpha + (-h/p)^alpha (1 - h/p).
Rational H_of(std::uint64_t n, const DensityModel& model);
Rational H_of(const Factorization& n, const DensityModel& model);

/// prod over p^alpha || r, p | s of (1 - h/p)^alpha - (-h/p)^alpha, times
/// prod over p^alpha || r, p not dividing s, of (-h/p)^alpha.
Rational J_of(std::uint64_t r, std::uint64_t s, const DensityModel& model);

struct CheckResult {
  bool pass = true;
  std::string witness;  ///< first violation, empty on success
};

using HFunction = std::function<Rational(std::uint64_t, const DensityModel&)>;

/// With R the radical of r: sum over d | R of f_r(d)(h(d)/d) prod_{p | R/d}
/// (1 - h/p) equals H(r), and for every s | R, sum over de = s of
/// f_r(d) mu(e) equals J(r, s). `h_fn` replaces H_of (fault injection).
CheckResult verify_divisor_identities(std::uint64_t r, const DensityModel& model,
                                      const HFunction& h_fn = {});

/// sum over a in A of f_r(a) = H(r) X + sum over s | r of mu^2(s) J(r,s) E_s,
/// with E_s = #A_s - (h(s)/s) X. X is x for AllIntegers; for ShiftedPrimes a
/// rational approximation of li(x) is used (the identity holds for any X).
/// Size guard: #A <= 10^6.
CheckResult verify_remainder_identity(const InputSet& set, std::uint64_t r,
                                      const DensityModel& model,
                                      PrimeTablePtr primes = nullptr);

/// A 2-to-1 map {0..k-1} -> {0..k/2-1}.
struct TwoToOneMap {
  unsigned k = 0;
  std::array<std::uint8_t, 12> assignment{};
  /// The two preimages of j, smaller first.
  std::pair<unsigned, unsigned> preimages(unsigned j) const;
};

/// Every 2-to-1 map for even k in [2, 12] (DomainError / SizeGuardError).
std::vector<TwoToOneMap> enumerate_T_k(unsigned k);
/// Same enumeration without materializing.
void for_each_T_k(unsigned k, const std::function<void(const TwoToOneMap&)>& fn);

/// Exact g values on primes.
using RationalG = std::function<Rational(std::uint64_t)>;
RationalG rational_g(const StronglyAdditive& g);

/// Pairing rewrite: k-tuples of window primes whose product is squarefull
/// with exactly k/2 distinct primes, weighted by H(product) prod g_i(p_i),
/// against (1/(k/2)!) sum over tau in T_k and distinct q-tuples. Guards:
/// |window| <= 8, k <= 6, k even, gs.size() == k.
CheckResult verify_pairing_rewrite(unsigned k, std::span<const std::uint64_t> window,
                                   const std::vector<RationalG>& gs,
                                   const DensityModel& model);

using RationalMatrix = std::vector<std::vector<Rational>>;

/// Closed form of the pairing sum over the k = m monomials of R_m against
/// C_m (sum_ij Q_i(y) Q_j(y) z_ij)^{m/2}. Guards: m even, m <= 8.
CheckResult verify_phi_identity(const PolyQ& q, unsigned m,
                                const std::vector<Rational>& y,
                                const RationalMatrix& z);

/// sum over a of prod_j F_{g_j}^P(a) against the expansion over prime tuples
/// through H, J and the empirical E_s. Guards: #A <= 10^4, |window| <= 5,
/// 1 <= k <= 4.
CheckResult verify_F_product_identity(const InputSet& set,
                                      std::span<const std::uint64_t> window,
                                      const std::vector<RationalG>& gs,
                                      const DensityModel& model,
                                      PrimeTablePtr primes = nullptr);

/// Products of up to k distinct window primes, ascending; includes 1.
/// SizeGuardError beyond 10^6 elements or on uint64 overflow.
std::vector<std::uint64_t> enumerate_D_k(unsigned k,
                                         std::span<const std::uint64_t> window);

/// H(p) = 0, H(n) = 0 for n = p * s (s coprime to p), |H(p^alpha)| <= H(p^2),
/// |J(p^alpha, s)| <= 1, and |J(p^alpha, s)| <= h(p)/p when p does not divide
/// s, for alpha in [1, alpha_max].
CheckResult check_H_J_bounds(const DensityModel& model, std::uint64_t p,
                             unsigned alpha_max,
                             std::span<const std::uint64_t> s_samples);

struct SuiteEntry {
  std::string name;
  std::uint64_t seed = 0;
  std::size_t cases = 0;
  bool pass = true;
  std::string witness;
};

struct SuiteOptions {
  std::uint64_t seed = 1;
  /// Replace H inside the divisor-identity checks (forced-failure fixture).
  HFunction h_override;
};

/// The full battery, deterministic for a given seed.
std::vector<SuiteEntry> run_suite(const SuiteOptions& options);

}  // namespace ekac::oracle
