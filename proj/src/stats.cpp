#include "ekac/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ekac/error.hpp"
#include "ekac/kernels.hpp"

namespace ekac {

double mean_mu(const StronglyAdditive& g, const PrimeWindow& window,
               const DensityModel& model) {
  kernels::CompensatedSum acc;
  for (const std::uint64_t p : window.primes()) acc.add(g.at(p) * model.h_over_p(p));
  return acc.value();
}

Rational mean_mu_exact(const StronglyAdditive& g, const PrimeWindow& window,
                       const DensityModel& model) {
  Rational total(0);
  for (const std::uint64_t p : window.primes()) {
    total += rational_from_double(g.at(p)) * model.h_over_p_exact(p);
  }
  return total;
}

double covariance_kappa(const StronglyAdditive& g1, const StronglyAdditive& g2,
                        const PrimeWindow& window, const DensityModel& model) {
  kernels::CompensatedSum acc;
  for (const std::uint64_t p : window.primes()) {
    const double w = model.h_over_p(p);
    acc.add(g1.at(p) * g2.at(p) * (w * (1.0 - w)));
  }
  return acc.value();
}

Rational covariance_kappa_exact(const StronglyAdditive& g1,
                                const StronglyAdditive& g2,
                                const PrimeWindow& window,
                                const DensityModel& model) {
  Rational total(0);
  for (const std::uint64_t p : window.primes()) {
    const Rational w = model.h_over_p_exact(p);
    total += rational_from_double(g1.at(p)) * rational_from_double(g2.at(p)) *
             w * (Rational(1) - w);
  }
  return total;
}

FrakBounds frak_bounds(std::span<const StronglyAdditive> gs,
                       const PrimeWindow& window, const DensityModel& model) {
  if (gs.empty()) throw DomainError("frak_bounds: no functions");
  FrakBounds out{mean_mu(gs[0], window, model),
                 covariance_kappa(gs[0], gs[0], window, model)};
  for (std::size_t j = 1; j < gs.size(); ++j) {
    out.frak_m = std::max(out.frak_m, mean_mu(gs[j], window, model));
    out.frak_k = std::max(out.frak_k, covariance_kappa(gs[j], gs[j], window, model));
  }
  return out;
}

double a_q(const PolyQ& q, std::span<const double> means) { return q.eval(means); }

double b_q_squared(const PolyQ& q, std::span<const double> means,
                   const SymMatrix& kappa) {
  const std::size_t l = q.num_vars();
  if (means.size() != l || kappa.size() != l) {
    throw DomainError("b_q: dimension mismatch");
  }
  std::vector<double> grad(l);
  for (std::size_t i = 0; i < l; ++i) grad[i] = q.partial(i).eval(means);
  kernels::CompensatedSum acc;
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t j = 0; j < l; ++j) acc.add(grad[i] * grad[j] * kappa(i, j));
  }
  return acc.value();
}

double b_q(const PolyQ& q, std::span<const double> means, const SymMatrix& kappa) {
  const double r = b_q_squared(q, means, kappa);
  if (r < -1e-9) {
    throw DomainError("b_q: negative radicand " + std::to_string(r) +
                      " (covariance matrix not positive semidefinite)");
  }
  return r > 0.0 ? std::sqrt(r) : 0.0;
}

PrimeSumCache::PrimeSumCache(std::vector<StronglyAdditive> gs, DensityModel model,
                             PrimeTablePtr table, std::uint64_t upto)
    : gs_(std::move(gs)), model_(model), table_(std::move(table)), upto_(upto) {
  if (gs_.empty()) throw DomainError("PrimeSumCache: no functions");
  if (!table_ || table_->limit() < upto) {
    throw CapabilityError("PrimeSumCache: prime table does not reach " +
                          std::to_string(upto));
  }
  const std::size_t n = table_->count_up_to(upto);
  const auto primes = table_->primes().first(n);
  weight_.resize(n);
  var_weight_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double w = model_.h_over_p(primes[k]);
    weight_[k] = w;
    var_weight_[k] = w * (1.0 - w);
  }
  g_.assign(gs_.size(), std::vector<double>(n));
  prefix_mean_.assign(gs_.size() + 1, std::vector<double>(n + 1, 0.0));
  for (std::size_t j = 0; j < gs_.size(); ++j) {
    kernels::CompensatedSum acc;
    for (std::size_t k = 0; k < n; ++k) {
      g_[j][k] = gs_[j].at(primes[k]);
      acc.add(g_[j][k] * weight_[k]);
      prefix_mean_[j][k + 1] = acc.value();
    }
  }
  kernels::CompensatedSum ones;
  for (std::size_t k = 0; k < n; ++k) {
    ones.add(weight_[k]);
    prefix_mean_.back()[k + 1] = ones.value();
  }
}

double PrimeSumCache::mean(std::size_t j, std::size_t n) const {
  return kernels::dispatch().dot(std::span(g_[j]).first(n),
                                 std::span(weight_).first(n));
}

double PrimeSumCache::kappa(std::size_t i, std::size_t j, std::size_t n) const {
  return kernels::dispatch().dot3(std::span(g_[i]).first(n),
                                  std::span(g_[j]).first(n),
                                  std::span(var_weight_).first(n));
}

double PrimeSumCache::mu_one(std::size_t n) const { return prefix_mean_.back()[n]; }

double PrimeSumCache::frak_m_prefix(std::size_t n) const {
  double m = prefix_mean_[0][n];
  for (std::size_t j = 1; j < gs_.size(); ++j) m = std::max(m, prefix_mean_[j][n]);
  return m;
}

std::size_t PrimeSumCache::count_up_to(double z) const {
  if (z < 2.0) return 0;
  const auto zi = static_cast<std::uint64_t>(std::floor(std::min(z, static_cast<double>(upto_))));
  return std::min(table_->count_up_to(zi), weight_.size());
}

double PrimeSumCache::frak_m_at(double z) const { return frak_m_prefix(count_up_to(z)); }

StatBundle PrimeSumCache::bundle(const PolyQ& q, double z) const {
  if (q.num_vars() != gs_.size()) {
    throw DomainError("StatBundle: Q has " + std::to_string(q.num_vars()) +
                      " variables but " + std::to_string(gs_.size()) +
                      " functions were given");
  }
  if (z > static_cast<double>(upto_) + 0.5) {
    throw CapabilityError("StatBundle: z beyond cached primes");
  }
  const std::size_t n = count_up_to(z);
  const std::size_t l = gs_.size();
  StatBundle b;
  b.z = z;
  b.window_size = n;
  b.means.resize(l);
  b.kappa = SymMatrix(l);
  for (std::size_t i = 0; i < l; ++i) {
    b.means[i] = mean(i, n);
    for (std::size_t j = i; j < l; ++j) b.kappa.set(i, j, kappa(i, j, n));
  }
  b.mu_one = mu_one(n);
  b.frak_m = *std::max_element(b.means.begin(), b.means.end());
  b.frak_k = b.kappa(0, 0);
  for (std::size_t i = 1; i < l; ++i) b.frak_k = std::max(b.frak_k, b.kappa(i, i));
  b.a_q = a_q(q, b.means);
  b.b_q = b_q(q, b.means, b.kappa);
  return b;
}

double choose_z(double x, const PrimeSumCache& cache) {
  if (!(x >= 16.0)) throw DomainError("choose_z: x must be >= 16");
  if (static_cast<double>(cache.upto()) < std::floor(x)) {
    throw CapabilityError("choose_z: primes cached only up to " +
                          std::to_string(cache.upto()));
  }
  const double log_x = std::log(x);
  const auto exponent = [&](double z) {
    return std::max(1.0, std::cbrt(cache.frak_m_at(z)));
  };
  if (exponent(x) <= 1.0) return x;
  const auto satisfied = [&](double z) { return exponent(z) * std::log(z) >= log_x; };

  double lo = 1.0;  // never satisfies: log 1 = 0 < log x
  double hi = x;
  while (hi - lo > 1e-6 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (satisfied(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double eta_slope(const PrimeSumCache& cache) {
  std::vector<double> xs;
  std::vector<double> ys;
  const double top = static_cast<double>(cache.upto());
  for (double t = 100.0; t <= top; t *= 1.5) {
    xs.push_back(std::log(std::log(t)));
    ys.push_back(cache.mu_one(cache.count_up_to(t)));
  }
  if (xs.size() < 2) return 0.0;
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace ekac
