// Acceptance gate: one PASS/FAIL line per criterion, tolerances pinned here.
// Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "ekac/experiment.hpp"
#include "ekac/kernels.hpp"
#include "ekac/moments.hpp"
#include "ekac/oracle.hpp"
#include "ekac/sieve.hpp"

using namespace ekac;

namespace {

constexpr std::uint64_t kSeed = 20240611;

// Criterion 1
constexpr double kOracleSeconds = 120.0;
// Criterion 4
constexpr double kM2Lo = 0.7, kM2Hi = 1.3;
constexpr double kM1Max = 0.5;
constexpr double kM4Lo = 1.5, kM4Hi = 6.0;
constexpr double kKsClassical = 0.15;
constexpr double kClassicalSeconds = 60.0;
// Criterion 5
constexpr double kCor13Rel = 1e-12;
constexpr double kCor13Mean = 0.5;
// Criterion 6
constexpr double kCovRel = 0.10;
// Criterion 7
constexpr double kShiftedMeanRel = 0.10;
constexpr double kKsShifted = 0.25;
// Criterion 8
constexpr double kMergeRel = 1e-9;
constexpr double kBigRunSeconds = 60.0;

struct Line {
  bool pass = true;
  std::string detail;
  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [FAIL]");
  }
};

std::string fmt(const char* f, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::uint64_t> trial_division(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

Line criterion1() {
  Line l;
  const auto t0 = std::chrono::steady_clock::now();
  oracle::SuiteOptions opts;
  opts.seed = kSeed;
  for (const auto& e : oracle::run_suite(opts)) {
    l.check(e.pass, e.name + " x" + std::to_string(e.cases) +
                        (e.pass ? "" : " witness " + e.witness));
  }
  const double s = seconds_since(t0);
  l.check(s <= kOracleSeconds, fmt("%.2fs <= 120s", s));
  return l;
}

Line criterion2() {
  Line l;
  for (unsigned m = 2; m <= 8; m += 2) {
    mpz_class half = 1, full = 1;
    for (unsigned i = 2; i <= m / 2; ++i) half *= i;
    for (unsigned i = 2; i <= m; ++i) full *= i;
    mpq_class ratio(mpz_class(static_cast<unsigned long>(oracle::enumerate_T_k(m).size())), half);
    mpq_class closed(full, (half << (m / 2)));
    ratio.canonicalize();
    closed.canonicalize();
    const bool ok = ratio == closed && closed == mpq_class(gaussian_moment_C_exact(m));
    l.check(ok, "m=" + std::to_string(m) + " |T_m|/(m/2)! = " + ratio.get_str());
  }
  return l;
}

Line criterion3() {
  Line l;
  std::mt19937_64 rng(kSeed);
  std::uniform_int_distribution<int> small(0, 3);
  std::uniform_int_distribution<int> num(-12, 12);
  std::uniform_int_distribution<int> den(1, 7);
  std::uniform_int_distribution<int> coef(1, 12);
  std::uniform_int_distribution<int> mpick(1, 4);
  std::uniform_int_distribution<int> lpick(1, 2);
  std::size_t polys = 0, points = 0, bad_min = 0, bad_deg = 0, bad_eval = 0;
  while (polys < 200) {
    const std::size_t vars = static_cast<std::size_t>(lpick(rng));
    std::map<Exponents, double> terms;
    const int count = 1 + small(rng);
    for (int t = 0; t < count; ++t) {
      Exponents e(vars, 0);
      unsigned left = 3;
      for (auto& x : e) {
        x = std::min<unsigned>(static_cast<unsigned>(small(rng)), left);
        left -= x;
      }
      terms[e] += coef(rng) / 4.0;
    }
    const Polynomial p(vars, terms);
    if (p.degree() == 0) continue;
    const PolyQ q(p);
    ++polys;
    const unsigned m = static_cast<unsigned>(mpick(rng));
    const RmExpansion rm = expand_R_m(q, m);
    std::size_t min_k = ~std::size_t{0};
    for (const auto& mono : rm.monomials) {
      min_k = std::min(min_k, mono.x_degree());
      if (mono.x_degree() + mono.y_degree() > q.degree() * m) ++bad_deg;
    }
    if (min_k != m) ++bad_min;
    for (int k = 0; k < 100; ++k) {
      std::vector<Rational> x(vars), y(vars), xy(vars);
      for (std::size_t i = 0; i < vars; ++i) {
        x[i] = make_rational(num(rng), den(rng));
        y[i] = make_rational(num(rng), den(rng));
        xy[i] = x[i] + y[i];
      }
      ++points;
      if (rm.eval_exact(x, y) != pow(q.eval_exact(xy) - q.eval_exact(y), m)) ++bad_eval;
    }
  }
  l.check(bad_min == 0, "min k = m attained in " + std::to_string(polys - bad_min) + "/200");
  l.check(bad_deg == 0, "k + k~ <= delta m violations " + std::to_string(bad_deg));
  l.check(bad_eval == 0, "exact re-evaluation mismatches " + std::to_string(bad_eval) + "/" +
                             std::to_string(points));
  return l;
}

Line criterion4() {
  Line l;
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentContext ctx(preset("classical-omega"));
  const ExperimentResult r = run_experiment(ctx, resolve_workers(0));
  const double secs = seconds_since(t0);
  const auto& rows = r.moment_report.rows;
  const double m1 = rows[1].ratio, m2 = rows[2].ratio, m4 = rows[4].ratio;
  l.check(m2 >= kM2Lo && m2 <= kM2Hi, fmt("M2 ratio %.4f in [0.7,1.3]", m2));
  l.check(std::abs(m1) <= kM1Max, fmt("|M1 ratio| %.4f <= 0.5", std::abs(m1)));
  l.check(m4 >= kM4Lo && m4 <= kM4Hi, fmt("M4 ratio %.4f in [1.5,6]", m4));
  l.check(r.fit.ks_distance <= kKsClassical, fmt("KS %.4f <= 0.15", r.fit.ks_distance));
  ExperimentConfig small = preset("classical-omega");
  small.x = 10'000;
  const ExperimentContext ctx_small(small);
  const double ks_small = run_experiment(ctx_small, 1).fit.ks_distance;
  l.check(r.fit.ks_distance < ks_small,
          fmt("KS(1e6) %.4f", r.fit.ks_distance) + fmt(" < KS(1e4) %.4f", ks_small));
  l.check(secs <= kClassicalSeconds, fmt("%.2fs <= 60s", secs));
  return l;
}

Line criterion5() {
  Line l;
  ExperimentConfig c = preset("cor1-omega-square");
  const ExperimentContext ctx(c);
  mpf_class mu(0, 256), var(0, 256);
  for (const std::uint64_t p : ctx.table()->primes()) {
    mpf_class inv(1, 256);
    inv /= static_cast<unsigned long>(p);
    mu += inv;
    var += inv * (1 - inv);
  }
  const double want_a = mpf_class(mu * mu).get_d();
  const double want_b2 = mpf_class(4 * mu * mu * var).get_d();
  const StatBundle& b = ctx.bundle_x();
  const double rel_a = std::abs(b.a_q - want_a) / want_a;
  const double rel_b = std::abs(b.b_q * b.b_q - want_b2) / want_b2;
  l.check(rel_a <= kCor13Rel, fmt("A_Q rel err %.2e <= 1e-12", rel_a));
  l.check(rel_b <= kCor13Rel, fmt("B_Q^2 rel err %.2e <= 1e-12", rel_b));
  const ExperimentResult r = run_experiment(ctx, resolve_workers(0));
  const double mean = r.fit.sample_moments[0];
  l.check(std::abs(mean) <= kCor13Mean, fmt("|normalized mean| %.4f <= 0.5", std::abs(mean)));
  return l;
}

Line criterion6() {
  Line l;
  const ExperimentContext ctx(preset("ex2-product-classes"));
  const double kappa = ctx.bundle_x().kappa(0, 1);
  double direct = 0.0;
  for (const std::uint64_t p : ctx.table()->primes()) {
    if (p % 12 != 1) continue;
    const double w = 1.0 / static_cast<double>(p);
    direct += w * (1.0 - w);
  }
  const double ratio = kappa / direct;
  l.check(std::abs(ratio - 1.0) <= kCovRel, fmt("kappa/direct %.12f within 10%% of 1", ratio));
  return l;
}

Line criterion7() {
  Line l;
  const ExperimentContext ctx(preset("thm15-shifted"));
  const ExperimentResult r = run_experiment(ctx, resolve_workers(0));
  const double mu = ctx.bundle_x().means[0];
  const double ratio = r.sample_mean_full / mu;
  l.check(std::abs(ratio - 1.0) <= kShiftedMeanRel,
          fmt("mean omega(p-1) %.4f", r.sample_mean_full) + fmt(" / mu %.4f", mu) +
              fmt(" = %.4f", ratio));
  l.check(r.fit.ks_distance <= kKsShifted, fmt("KS %.4f <= 0.25", r.fit.ks_distance));
  return l;
}

Line criterion8() {
  Line l;
  std::uint64_t mismatches = 0, seen = 0;
  FactorStream(2, 1'000'000).for_each([&](const FactorRecord& r) {
    ++seen;
    const auto want = trial_division(r.a);
    if (want.size() != r.primes.size() || !std::equal(want.begin(), want.end(), r.primes.begin())) {
      ++mismatches;
    }
  });
  l.check(mismatches == 0 && seen == 999'999,
          "stream vs trial division: " + std::to_string(mismatches) + " mismatches in " +
              std::to_string(seen));

  const ExperimentContext ctx(preset("classical-omega"));
  const ExperimentResult one = run_experiment(ctx, 1);
  const ExperimentResult seven = run_experiment(ctx, 7);
  double worst = 0.0;
  for (unsigned m = 0; m <= one.moments.m_max(); ++m) {
    const double a = one.moments.power_sum(m), b = seven.moments.power_sum(m);
    const double scale = std::max(std::abs(a), std::abs(b));
    if (scale > 0) worst = std::max(worst, std::abs(a - b) / scale);
  }
  l.check(worst <= kMergeRel, fmt("7-partition merge rel err %.2e <= 1e-9", worst));

  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig big = preset("classical-omega");
  big.x = 10'000'000;
  const ExperimentContext big_ctx(big);
  const ExperimentResult r = run_experiment(big_ctx, resolve_workers(0));
  const double secs = seconds_since(t0);
  l.check(r.count == 10'000'000 && secs <= kBigRunSeconds,
          fmt("x=1e7 run %.2fs <= 60s", secs) +
              " (workers=" + std::to_string(r.workers) + ")");
  return l;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Line()>>> criteria = {
      {"exact oracle suite", criterion1},
      {"T_m count vs C_m", criterion2},
      {"R_m structure", criterion3},
      {"classical omega at 1e6", criterion4},
      {"omega^2 statistics", criterion5},
      {"mod 4 / mod 3 covariance", criterion6},
      {"shifted primes a=1", criterion7},
      {"engineering", criterion8},
  };
  std::printf("kernel isa: %s\n", std::string(kernels::isa_name(kernels::active_isa())).c_str());
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Line l;
    try {
      l = criteria[i].second();
    } catch (const std::exception& e) {
      l.pass = false;
      l.detail = std::string("exception: ") + e.what();
    }
    failures += !l.pass;
    std::printf("CRITERION %zu %s: %s -- %s\n", i + 1, l.pass ? "PASS" : "FAIL",
                criteria[i].first, l.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
