#include "ekac/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "ekac/error.hpp"
#include "ekac/moments.hpp"
#include "ekac/sieve.hpp"

namespace ekac::oracle {

namespace {

Rational w_of(const DensityModel& model, std::uint64_t p) {
  return model.h_over_p_exact(p);
}

std::vector<std::uint64_t> radical_primes(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (const auto& [p, a] : factorize(n)) out.push_back(p);
  return out;
}

std::uint64_t mask_product(std::span<const std::uint64_t> ps, unsigned mask) {
  std::uint64_t d = 1;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (mask & (1u << i)) d *= ps[i];
  }
  return d;
}

Rational factorial(unsigned n) {
  mpz_class f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return Rational(f);
}

std::vector<std::uint64_t> collect_values(const InputSet& set, PrimeTablePtr& primes,
                                          std::uint64_t guard) {
  const std::uint64_t bound = set.is_shifted() ? set.x() : set.x();
  if (!primes) primes = primes_up_to(std::max<std::uint64_t>(bound, 2));
  std::vector<std::uint64_t> values;
  ElementStream stream(set, primes);
  stream.for_each([&](const FactorRecord& r) { values.push_back(r.a); });
  if (values.size() > guard) {
    throw SizeGuardError("oracle: #A = " + std::to_string(values.size()) +
                         " exceeds the size guard " + std::to_string(guard));
  }
  return values;
}

Rational big_x_exact(const InputSet& set) {
  if (!set.is_shifted()) return make_rational_u(set.x());
  return rational_from_double(log_integral(static_cast<double>(set.x())));
}

void check_window(std::span<const std::uint64_t> window, std::size_t max_size) {
  if (window.size() > max_size) {
    throw SizeGuardError("oracle: window of " + std::to_string(window.size()) +
                         " primes exceeds " + std::to_string(max_size) +
                         " (enumeration is k * |P|^k)");
  }
  for (std::size_t i = 0; i < window.size(); ++i) {
    if (!is_prime_u64(window[i])) {
      throw DomainError("oracle: window entry " + std::to_string(window[i]) +
                        " is not prime");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (window[j] == window[i]) throw DomainError("oracle: repeated window prime");
    }
  }
}

}  // namespace

Factorization factorize(std::uint64_t n) {
  if (n == 0) throw DomainError("factorize: n must be positive");
  Factorization out;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    unsigned a = 0;
    while (n % p == 0) {
      n /= p;
      ++a;
    }
    out.emplace_back(p, a);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

int mobius_squarefree(std::uint64_t n) {
  int sign = 1;
  for (const auto& [p, a] : factorize(n)) {
    if (a > 1) throw DomainError("mobius: " + std::to_string(n) + " is not squarefree");
    sign = -sign;
  }
  return sign;
}

Rational f_r(std::uint64_t r, std::uint64_t a, const DensityModel& model) {
  Rational out(1);
  for (const auto& [p, alpha] : factorize(r)) {
    const Rational w = w_of(model, p);
    out *= (a % p == 0) ? pow(Rational(1) - w, alpha) : pow(Rational(-w), alpha);
  }
  return out;
}

Rational H_of(const Factorization& n, const DensityModel& model) {
  Rational out(1);
  for (const auto& [p, alpha] : n) {
    const Rational w = w_of(model, p);
    const Rational one_minus = Rational(1) - w;
    out *= w * pow(one_minus, alpha) + pow(Rational(-w), alpha) * one_minus;
  }
  return out;
}

Rational H_of(std::uint64_t n, const DensityModel& model) {
  return H_of(factorize(n), model);
}

Rational J_of(std::uint64_t r, std::uint64_t s, const DensityModel& model) {
  if (s == 0) throw DomainError("J_of: s must be positive");
  Rational out(1);
  for (const auto& [p, alpha] : factorize(r)) {
    const Rational w = w_of(model, p);
    if (s % p == 0) {
      out *= pow(Rational(1) - w, alpha) - pow(Rational(-w), alpha);
    } else {
      out *= pow(Rational(-w), alpha);
    }
  }
  return out;
}

CheckResult verify_divisor_identities(std::uint64_t r, const DensityModel& model,
                                      const HFunction& h_fn) {
  const std::vector<std::uint64_t> ps = radical_primes(r);
  const unsigned full = (1u << ps.size()) - 1;
  CheckResult res;

  Rational lhs(0);
  for (unsigned mask = 0; mask <= full; ++mask) {
    Rational term = f_r(r, mask_product(ps, mask), model);
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const Rational w = w_of(model, ps[i]);
      term *= (mask & (1u << i)) ? w : Rational(1) - w;
    }
    lhs += term;
  }
  const Rational h = h_fn ? h_fn(r, model) : H_of(r, model);
  if (lhs != h) {
    res.pass = false;
    res.witness = "r=" + std::to_string(r) + ": divisor sum " + to_string(lhs) +
                  " != H(r) " + to_string(h);
    return res;
  }

  for (unsigned smask = 0; smask <= full; ++smask) {
    const std::uint64_t s = mask_product(ps, smask);
    Rational sum(0);
    // d ranges over the submasks of smask, e = s/d.
    for (unsigned d = smask;; d = (d - 1) & smask) {
      const int mu = (std::popcount(smask ^ d) % 2 == 0) ? 1 : -1;
      sum += f_r(r, mask_product(ps, d), model) * mu;
      if (d == 0) break;
    }
    const Rational j = J_of(r, s, model);
    if (sum != j) {
      res.pass = false;
      res.witness = "r=" + std::to_string(r) + " s=" + std::to_string(s) +
                    ": sum f_r(d) mu(e) " + to_string(sum) + " != J " + to_string(j);
      return res;
    }
  }
  return res;
}

CheckResult verify_remainder_identity(const InputSet& set, std::uint64_t r,
                                      const DensityModel& model,
                                      PrimeTablePtr primes) {
  const std::vector<std::uint64_t> values = collect_values(set, primes, 1'000'000);
  const std::vector<std::uint64_t> ps = radical_primes(r);
  if (ps.size() > 20) throw SizeGuardError("remainder identity: too many primes");
  std::vector<std::uint64_t> by_mask(std::size_t{1} << ps.size(), 0);
  for (const std::uint64_t v : values) {
    unsigned mask = 0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      if (v % ps[i] == 0) mask |= 1u << i;
    }
    ++by_mask[mask];
  }
  Rational lhs(0);
  for (unsigned mask = 0; mask < by_mask.size(); ++mask) {
    if (by_mask[mask] == 0) continue;
    lhs += make_rational_u(by_mask[mask]) * f_r(r, mask_product(ps, mask), model);
  }

  const Rational x = big_x_exact(set);
  Rational rhs = H_of(r, model) * x;
  for (unsigned mask = 0; mask < by_mask.size(); ++mask) {
    const std::uint64_t s = mask_product(ps, mask);
    const Remainder rem = empirical_remainder(set, model, s, *primes);
    Rational e_s;
    if (rem.exact) {
      e_s = *rem.exact;
    } else {
      Rational hs(1);
      for (std::size_t i = 0; i < ps.size(); ++i) {
        if (mask & (1u << i)) hs *= w_of(model, ps[i]);
      }
      e_s = make_rational_u(rem.count) - hs * x;
    }
    rhs += J_of(r, s, model) * e_s;
  }
  CheckResult res;
  if (lhs != rhs) {
    res.pass = false;
    res.witness = set.describe() + " r=" + std::to_string(r) + ": " +
                  to_string(lhs) + " != " + to_string(rhs);
  }
  return res;
}

std::pair<unsigned, unsigned> TwoToOneMap::preimages(unsigned j) const {
  unsigned found[2] = {0, 0};
  unsigned n = 0;
  for (unsigned i = 0; i < k && n < 2; ++i) {
    if (assignment[i] == j) found[n++] = i;
  }
  return {found[0], found[1]};
}

void for_each_T_k(unsigned k, const std::function<void(const TwoToOneMap&)>& fn) {
  if (k == 0 || k % 2 != 0) throw DomainError("T_k: k must be even and positive");
  if (k > 12) throw SizeGuardError("T_k: k above 12 (|T_k| = k!/2^{k/2})");
  TwoToOneMap map;
  map.k = k;
  std::array<unsigned, 6> used{};
  const unsigned labels = k / 2;
  std::function<void(unsigned)> rec = [&](unsigned pos) {
    if (pos == k) {
      fn(map);
      return;
    }
    for (unsigned l = 0; l < labels; ++l) {
      if (used[l] == 2) continue;
      ++used[l];
      map.assignment[pos] = static_cast<std::uint8_t>(l);
      rec(pos + 1);
      --used[l];
    }
  };
  rec(0);
}

std::vector<TwoToOneMap> enumerate_T_k(unsigned k) {
  std::vector<TwoToOneMap> out;
  for_each_T_k(k, [&](const TwoToOneMap& m) { out.push_back(m); });
  return out;
}

RationalG rational_g(const StronglyAdditive& g) {
  return [g](std::uint64_t p) { return rational_from_double(g.at(p)); };
}

CheckResult verify_pairing_rewrite(unsigned k, std::span<const std::uint64_t> window,
                                   const std::vector<RationalG>& gs,
                                   const DensityModel& model) {
  if (k == 0 || k % 2 != 0) throw DomainError("pairing rewrite: k must be even");
  if (k > 6) throw SizeGuardError("pairing rewrite: k above 6");
  check_window(window, 8);
  if (gs.size() != k) throw DomainError("pairing rewrite: need k functions");
  const std::size_t n = window.size();
  const unsigned half = k / 2;

  std::vector<std::vector<Rational>> g(k, std::vector<Rational>(n));
  for (unsigned i = 0; i < k; ++i) {
    for (std::size_t t = 0; t < n; ++t) g[i][t] = gs[i](window[t]);
  }

  Rational lhs(0);
  std::vector<std::size_t> idx(k, 0);
  while (true) {
    std::map<std::uint64_t, unsigned> mult;
    for (unsigned i = 0; i < k; ++i) ++mult[window[idx[i]]];
    bool squarefull = true;
    for (const auto& [p, a] : mult) squarefull = squarefull && a >= 2;
    if (squarefull && mult.size() == half) {
      Factorization f(mult.begin(), mult.end());
      Rational term = H_of(f, model);
      for (unsigned i = 0; i < k; ++i) term *= g[i][idx[i]];
      lhs += term;
    }
    unsigned pos = 0;
    while (pos < k && ++idx[pos] == n) idx[pos++] = 0;
    if (pos == k) break;
  }

  std::vector<Rational> var(n);
  for (std::size_t t = 0; t < n; ++t) {
    const Rational w = w_of(model, window[t]);
    var[t] = w * (Rational(1) - w);
  }
  Rational rhs(0);
  for_each_T_k(k, [&](const TwoToOneMap& tau) {
    std::vector<std::size_t> q(half, 0);
    while (true) {
      bool distinct = true;
      for (unsigned a = 0; a < half && distinct; ++a) {
        for (unsigned b = 0; b < a; ++b) distinct = distinct && q[a] != q[b];
      }
      if (distinct) {
        Rational term(1);
        for (unsigned j = 0; j < half; ++j) {
          const auto [u1, u2] = tau.preimages(j);
          term *= g[u1][q[j]] * g[u2][q[j]] * var[q[j]];
        }
        rhs += term;
      }
      unsigned pos = 0;
      while (pos < half && ++q[pos] == n) q[pos++] = 0;
      if (pos == half) break;
    }
  });
  rhs /= factorial(half);

  CheckResult res;
  if (lhs != rhs) {
    res.pass = false;
    res.witness = "k=" + std::to_string(k) + ": " + to_string(lhs) + " != " +
                  to_string(rhs);
  }
  return res;
}

CheckResult verify_phi_identity(const PolyQ& q, unsigned m,
                                const std::vector<Rational>& y,
                                const RationalMatrix& z) {
  if (m == 0 || m % 2 != 0) throw DomainError("phi identity: m must be even");
  if (m > 8) throw SizeGuardError("phi identity: m above 8");
  const std::size_t l = q.num_vars();
  if (y.size() != l || z.size() != l) throw DomainError("phi identity: dimension mismatch");
  for (std::size_t i = 0; i < l; ++i) {
    if (z[i].size() != l) throw DomainError("phi identity: z not square");
    for (std::size_t j = 0; j < i; ++j) {
      if (z[i][j] != z[j][i]) throw DomainError("phi identity: z not symmetric");
    }
  }

  const RmExpansion rm = expand_R_m(q, m);
  const std::vector<TwoToOneMap> taus = enumerate_T_k(m);
  Rational lhs(0);
  for (const RmMonomial& mono : rm.monomials) {
    if (mono.x_degree() != m) continue;
    Rational ys(1);
    for (const unsigned w : mono.y_vars) ys *= y[w];
    Rational inner(0);
    for (const TwoToOneMap& tau : taus) {
      Rational prod(1);
      for (unsigned j = 0; j < m / 2; ++j) {
        const auto [u1, u2] = tau.preimages(j);
        prod *= z[mono.x_vars[u1]][mono.x_vars[u2]];
      }
      inner += prod;
    }
    lhs += mono.coeff * ys * inner;
  }
  lhs /= factorial(m / 2);

  std::vector<Rational> grad(l);
  for (std::size_t i = 0; i < l; ++i) grad[i] = q.partial(i).eval_exact(y);
  Rational quad(0);
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t j = 0; j < l; ++j) quad += grad[i] * grad[j] * z[i][j];
  }
  const Rational rhs = Rational(gaussian_moment_C_exact(m)) * pow(quad, m / 2);

  CheckResult res;
  if (lhs != rhs) {
    res.pass = false;
    res.witness = "Q=" + q.to_string() + " m=" + std::to_string(m) + ": " +
                  to_string(lhs) + " != " + to_string(rhs);
  }
  return res;
}

CheckResult verify_F_product_identity(const InputSet& set,
                                      std::span<const std::uint64_t> window,
                                      const std::vector<RationalG>& gs,
                                      const DensityModel& model,
                                      PrimeTablePtr primes) {
  const unsigned k = static_cast<unsigned>(gs.size());
  if (k == 0) throw DomainError("F product identity: need at least one function");
  if (k > 4) throw SizeGuardError("F product identity: k above 4");
  check_window(window, 5);
  const std::vector<std::uint64_t> values = collect_values(set, primes, 10'000);
  const std::size_t n = window.size();

  std::vector<std::vector<Rational>> g(k, std::vector<Rational>(n));
  std::vector<Rational> w(n);
  for (std::size_t t = 0; t < n; ++t) w[t] = w_of(model, window[t]);
  std::vector<Rational> mean(k, Rational(0));
  for (unsigned j = 0; j < k; ++j) {
    for (std::size_t t = 0; t < n; ++t) {
      g[j][t] = gs[j](window[t]);
      mean[j] += g[j][t] * w[t];
    }
  }

  std::vector<std::uint64_t> by_mask(std::size_t{1} << n, 0);
  for (const std::uint64_t v : values) {
    unsigned mask = 0;
    for (std::size_t t = 0; t < n; ++t) {
      if (v % window[t] == 0) mask |= 1u << t;
    }
    ++by_mask[mask];
  }
  Rational lhs(0);
  for (unsigned mask = 0; mask < by_mask.size(); ++mask) {
    if (by_mask[mask] == 0) continue;
    Rational prod(1);
    for (unsigned j = 0; j < k; ++j) {
      Rational f = -mean[j];
      for (std::size_t t = 0; t < n; ++t) {
        if (mask & (1u << t)) f += g[j][t];
      }
      prod *= f;
    }
    lhs += make_rational_u(by_mask[mask]) * prod;
  }

  const Rational x = big_x_exact(set);
  std::map<std::uint64_t, Rational> e_cache;
  const auto e_of = [&](unsigned smask) -> const Rational& {
    const std::uint64_t s = mask_product(window, smask);
    auto it = e_cache.find(s);
    if (it != e_cache.end()) return it->second;
    std::uint64_t count = 0;
    for (unsigned mask = 0; mask < by_mask.size(); ++mask) {
      if ((mask & smask) == smask) count += by_mask[mask];
    }
    Rational hs(1);
    for (std::size_t t = 0; t < n; ++t) {
      if (smask & (1u << t)) hs *= w[t];
    }
    return e_cache.emplace(s, make_rational_u(count) - hs * x).first->second;
  };

  Rational rhs(0);
  std::vector<std::size_t> idx(k, 0);
  while (true) {
    Rational coef(1);
    std::uint64_t r = 1;
    unsigned rmask = 0;
    for (unsigned j = 0; j < k; ++j) {
      coef *= g[j][idx[j]];
      r *= window[idx[j]];
      rmask |= 1u << idx[j];
    }
    if (coef != 0) {
      Rational inner = H_of(r, model) * x;
      for (unsigned s = rmask;; s = (s - 1) & rmask) {
        inner += J_of(r, mask_product(window, s), model) * e_of(s);
        if (s == 0) break;
      }
      rhs += coef * inner;
    }
    unsigned pos = 0;
    while (pos < k && ++idx[pos] == n) idx[pos++] = 0;
    if (pos == k) break;
  }

  CheckResult res;
  if (lhs != rhs) {
    res.pass = false;
    res.witness = set.describe() + " k=" + std::to_string(k) + ": " +
                  to_string(lhs) + " != " + to_string(rhs);
  }
  return res;
}

std::vector<std::uint64_t> enumerate_D_k(unsigned k,
                                         std::span<const std::uint64_t> window) {
  constexpr std::size_t kGuard = 1'000'000;
  std::vector<std::uint64_t> sorted(window.begin(), window.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::uint64_t> out;
  std::function<void(std::size_t, unsigned, std::uint64_t)> rec =
      [&](std::size_t start, unsigned left, std::uint64_t prod) {
        out.push_back(prod);
        if (out.size() > kGuard) {
          throw SizeGuardError("D_k: more than 10^6 elements");
        }
        if (left == 0) return;
        for (std::size_t i = start; i < sorted.size(); ++i) {
          if (prod > UINT64_MAX / sorted[i]) {
            throw SizeGuardError("D_k: product overflows 64 bits");
          }
          rec(i + 1, left - 1, prod * sorted[i]);
        }
      };
  rec(0, k, 1);
  std::sort(out.begin(), out.end());
  return out;
}

CheckResult check_H_J_bounds(const DensityModel& model, std::uint64_t p,
                             unsigned alpha_max,
                             std::span<const std::uint64_t> s_samples) {
  CheckResult res;
  const auto fail = [&](const std::string& what) {
    res.pass = false;
    res.witness = "p=" + std::to_string(p) + ": " + what;
    return res;
  };
  if (H_of(p, model) != 0) return fail("H(p) != 0");
  for (const std::uint64_t s : s_samples) {
    if (s % p == 0 || s == 0) continue;
    if (H_of(p * s, model) != 0) {
      return fail("H(" + std::to_string(p * s) + ") != 0 for non-squarefull argument");
    }
  }
  const Rational h2 = H_of(p * p, model);
  const Rational w = w_of(model, p);
  std::uint64_t pa = 1;
  for (unsigned alpha = 1; alpha <= alpha_max; ++alpha) {
    pa *= p;
    if (alpha >= 2 && abs(H_of(pa, model)) > h2) {
      return fail("|H(p^" + std::to_string(alpha) + ")| > H(p^2)");
    }
    for (const std::uint64_t s : s_samples) {
      if (s == 0) continue;
      const Rational j = abs(J_of(pa, s, model));
      if (j > 1) return fail("|J(p^" + std::to_string(alpha) + "," + std::to_string(s) + ")| > 1");
      if (s % p != 0 && j > w) {
        return fail("|J(p^" + std::to_string(alpha) + "," + std::to_string(s) +
                    ")| > h(p)/p");
      }
    }
  }
  return res;
}

namespace {

using Rng = std::mt19937_64;

Rational random_rational(Rng& rng, int lo, int hi, int max_den) {
  std::uniform_int_distribution<int> num(lo, hi);
  std::uniform_int_distribution<int> den(1, max_den);
  return make_rational(num(rng), den(rng));
}

RationalG random_g(Rng& rng, std::span<const std::uint64_t> window) {
  auto table = std::make_shared<std::map<std::uint64_t, Rational>>();
  for (const std::uint64_t p : window) (*table)[p] = random_rational(rng, 0, 9, 7);
  return [table](std::uint64_t p) { return table->at(p); };
}

PolyQ random_q(Rng& rng, std::size_t l, unsigned max_degree) {
  std::uniform_int_distribution<unsigned> nterms(1, 4);
  std::uniform_int_distribution<unsigned> expo(0, max_degree);
  std::uniform_int_distribution<int> coef(1, 16);
  while (true) {
    std::map<Exponents, double> terms;
    const unsigned count = nterms(rng);
    for (unsigned t = 0; t < count; ++t) {
      Exponents e(l, 0);
      unsigned left = max_degree;
      for (std::size_t i = 0; i < l; ++i) {
        e[i] = std::min(expo(rng), left);
        left -= e[i];
      }
      terms[e] += coef(rng) / 8.0;
    }
    Polynomial p(l, terms);
    if (p.degree() > 0) return PolyQ(p);
  }
}

template <class Fn>
SuiteEntry run_entry(const std::string& name, std::uint64_t seed, Fn&& body) {
  SuiteEntry e;
  e.name = name;
  e.seed = seed;
  try {
    body(e);
  } catch (const std::exception& ex) {
    e.pass = false;
    e.witness = std::string("exception: ") + ex.what();
  }
  return e;
}

void record(SuiteEntry& e, const CheckResult& r) {
  ++e.cases;
  if (!r.pass && e.pass) {
    e.pass = false;
    e.witness = r.witness;
  }
}

}  // namespace

std::vector<SuiteEntry> run_suite(const SuiteOptions& options) {
  const std::uint64_t seed = options.seed;
  const DensityModel unit = DensityModel::unit();
  const DensityModel shifted = DensityModel::shifted_prime(1);
  std::vector<SuiteEntry> out;

  out.push_back(run_entry("f_r complete multiplicativity", seed, [&](SuiteEntry& e) {
    Rng rng(seed);
    std::uniform_int_distribution<std::uint64_t> dist(1, 2000);
    for (int i = 0; i < 300; ++i) {
      const std::uint64_t r1 = dist(rng);
      const std::uint64_t r2 = dist(rng);
      const std::uint64_t a = dist(rng);
      for (const DensityModel* m : {&unit, &shifted}) {
        CheckResult c;
        if (f_r(r1 * r2, a, *m) != f_r(r1, a, *m) * f_r(r2, a, *m)) {
          c.pass = false;
          c.witness = "r1=" + std::to_string(r1) + " r2=" + std::to_string(r2) +
                      " a=" + std::to_string(a);
        }
        record(e, c);
      }
    }
  }));

  out.push_back(run_entry("H and J bounds", seed, [&](SuiteEntry& e) {
    const std::vector<std::uint64_t> samples = {1, 2, 3, 5, 6, 7, 10, 30, 77, 210};
    for (const std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43,
                                  47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97}) {
      record(e, check_H_J_bounds(unit, p, 6, samples));
      record(e, check_H_J_bounds(shifted, p, 6, samples));
    }
  }));

  out.push_back(run_entry("divisor identities", seed, [&](SuiteEntry& e) {
    record(e, verify_divisor_identities(1, unit, options.h_override));
    record(e, verify_divisor_identities(12, unit, options.h_override));
    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_int_distribution<std::uint64_t> dist(1, 100'000);
    for (int i = 0; i < 500; ++i) {
      const std::uint64_t r = dist(rng);
      record(e, verify_divisor_identities(r, unit, options.h_override));
      record(e, verify_divisor_identities(r, shifted, options.h_override));
    }
  }));

  out.push_back(run_entry("remainder identity", seed, [&](SuiteEntry& e) {
    const InputSet small = InputSet::all_integers(100);
    record(e, verify_remainder_identity(small, 6, unit));
    record(e, verify_remainder_identity(small, 1, unit));
    const InputSet set = InputSet::all_integers(10'000);
    PrimeTablePtr table = primes_up_to(10'000);
    Rng rng(seed + 1);
    std::uniform_int_distribution<std::uint64_t> dist(1, 100'000);
    for (int i = 0; i < 100; ++i) {
      record(e, verify_remainder_identity(set, dist(rng), unit, table));
    }
    const InputSet sp = InputSet::shifted_primes(5'000, 1);
    PrimeTablePtr sp_table = primes_up_to(5'000);
    for (int i = 0; i < 20; ++i) {
      record(e, verify_remainder_identity(sp, dist(rng), shifted, sp_table));
    }
  }));

  out.push_back(run_entry("T_k enumeration", seed, [&](SuiteEntry& e) {
    for (unsigned k = 2; k <= 10; k += 2) {
      std::uint64_t count = 0;
      for_each_T_k(k, [&](const TwoToOneMap&) { ++count; });
      mpz_class expect = 1;
      for (unsigned i = 2; i <= k; ++i) expect *= i;
      expect >>= k / 2;
      CheckResult c;
      if (mpz_class(static_cast<unsigned long>(count)) != expect) {
        c.pass = false;
        c.witness = "k=" + std::to_string(k) + " count " + std::to_string(count);
      }
      record(e, c);
    }
  }));

  out.push_back(run_entry("pairing rewrite", seed, [&](SuiteEntry& e) {
    const std::vector<std::uint64_t> window = {2, 3, 5, 7};
    const RationalG omega = rational_g(StronglyAdditive::omega());
    record(e, verify_pairing_rewrite(2, std::span(window).first(2), {omega, omega}, unit));
    record(e, verify_pairing_rewrite(4, std::span(window).first(3),
                                     {omega, omega, omega, omega}, unit));
    Rng rng(seed + 2);
    for (const unsigned k : {2u, 4u, 6u}) {
      for (const DensityModel* m : {&unit, &shifted}) {
        std::vector<RationalG> gs;
        for (unsigned i = 0; i < k; ++i) gs.push_back(random_g(rng, window));
        record(e, verify_pairing_rewrite(k, window, gs, *m));
      }
    }
  }));

  out.push_back(run_entry("pairing closed form", seed, [&](SuiteEntry& e) {
    record(e, verify_phi_identity(PolyQ::parse("T"), 2, {Rational(3)}, {{Rational(5)}}));
    record(e, verify_phi_identity(PolyQ::parse("T^2"), 2, {make_rational(2, 3)},
                                  {{make_rational(7, 5)}}));
    Rng rng(seed + 3);
    for (int i = 0; i < 6; ++i) {
      const PolyQ q = random_q(rng, 2, 3);
      const std::vector<Rational> y = {random_rational(rng, 0, 9, 5),
                                       random_rational(rng, 0, 9, 5)};
      const Rational off = random_rational(rng, -4, 4, 3);
      const RationalMatrix z = {{random_rational(rng, 1, 9, 4), off},
                                {off, random_rational(rng, 1, 9, 4)}};
      for (const unsigned m : {2u, 4u}) record(e, verify_phi_identity(q, m, y, z));
    }
  }));

  out.push_back(run_entry("F product identity", seed, [&](SuiteEntry& e) {
    const std::vector<std::uint64_t> window = {2, 3, 5};
    const RationalG omega = rational_g(StronglyAdditive::omega());
    const InputSet set = InputSet::all_integers(1000);
    PrimeTablePtr table = primes_up_to(1000);
    for (unsigned k = 1; k <= 4; ++k) {
      record(e, verify_F_product_identity(set, window, std::vector<RationalG>(k, omega),
                                          unit, table));
    }
    Rng rng(seed + 4);
    const std::vector<std::uint64_t> w5 = {2, 3, 5, 7, 11};
    const InputSet sp = InputSet::shifted_primes(3000, 1);
    PrimeTablePtr sp_table = primes_up_to(3000);
    for (unsigned k = 1; k <= 4; ++k) {
      std::vector<RationalG> gs;
      for (unsigned i = 0; i < k; ++i) gs.push_back(random_g(rng, w5));
      record(e, verify_F_product_identity(set, w5, gs, unit, table));
      record(e, verify_F_product_identity(sp, w5, gs, shifted, sp_table));
    }
  }));

  out.push_back(run_entry("D_k enumeration", seed, [&](SuiteEntry& e) {
    const std::vector<std::uint64_t> window = {2, 3, 5, 7, 11, 13};
    for (unsigned k = 0; k <= 4; ++k) {
      const std::vector<std::uint64_t> d = enumerate_D_k(k, window);
      CheckResult c;
      std::uint64_t expect = 0;
      std::uint64_t binom = 1;
      for (unsigned i = 0; i <= k; ++i) {
        expect += binom;
        binom = binom * (window.size() - i) / (i + 1);
      }
      if (d.size() != expect || d.front() != 1) {
        c.pass = false;
        c.witness = "k=" + std::to_string(k) + " size " + std::to_string(d.size());
      }
      for (const std::uint64_t v : d) {
        for (const auto& [p, a] : factorize(v)) {
          if (a > 1) {
            c.pass = false;
            c.witness = "non-squarefree element " + std::to_string(v);
          }
        }
      }
      record(e, c);
    }
  }));

  return out;
}

}  // namespace ekac::oracle
