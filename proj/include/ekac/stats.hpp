#pragma once

// Theoretical quantities over a finite prime set P: means mu^P(g),
// covariances kappa^P(g_i, g_j), the maxima frak M / frak K, A_Q(P), B_Q(P),
// and the truncation point z.

#include <cstddef>
#include <span>
#include <vector>

#include "ekac/additive.hpp"
#include "ekac/input_model.hpp"
#include "ekac/poly.hpp"
#include "ekac/rational.hpp"

namespace ekac {

/// Dense symmetric matrix, row-major.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}
  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    data_[i * n_ + j] = v;
    data_[j * n_ + i] = v;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// sum over p in P of g(p) h(p)/p (compensated).
double mean_mu(const StronglyAdditive& g, const PrimeWindow& window,
               const DensityModel& model);
/// Exact rational version, for small windows.
Rational mean_mu_exact(const StronglyAdditive& g, const PrimeWindow& window,
                       const DensityModel& model);

/// sum over p in P of g1(p) g2(p) (h(p)/p)(1 - h(p)/p) (compensated).
double covariance_kappa(const StronglyAdditive& g1, const StronglyAdditive& g2,
                        const PrimeWindow& window, const DensityModel& model);
Rational covariance_kappa_exact(const StronglyAdditive& g1,
                                const StronglyAdditive& g2,
                                const PrimeWindow& window,
                                const DensityModel& model);

struct FrakBounds {
  double frak_m = 0.0;  ///< max mean
  double frak_k = 0.0;  ///< max variance
};

/// Throws DomainError when gs is empty.
FrakBounds frak_bounds(std::span<const StronglyAdditive> gs,
                       const PrimeWindow& window, const DensityModel& model);

/// A_Q = Q(mu_1, ..., mu_l).
double a_q(const PolyQ& q, std::span<const double> means);

/// B_Q^2 = sum_ij Q_i(mu) Q_j(mu) kappa_ij (the radicand, unclamped).
double b_q_squared(const PolyQ& q, std::span<const double> means,
                   const SymMatrix& kappa);

/// sqrt of b_q_squared. A radicand in [-1e-9, 0) is treated as 0; below
/// that DomainError is thrown.
double b_q(const PolyQ& q, std::span<const double> means, const SymMatrix& kappa);

struct StatBundle {
  double z = 0.0;
  std::size_t window_size = 0;
  std::vector<double> means;
  SymMatrix kappa;
  double mu_one = 0.0;  ///< mu^P(1) = sum h(p)/p
  double frak_m = 0.0;
  double frak_k = 0.0;
  double a_q = 0.0;
  double b_q = 0.0;
};

/// Per-prime arrays g_j(p), h(p)/p and (h/p)(1 - h/p) for every tabulated
/// prime up to `upto`, plus cumulative means. Bundles for any z <= upto are
/// cut from the same arrays, so P(z) and P(x) statistics share one pass.
class PrimeSumCache {
 public:
  PrimeSumCache(std::vector<StronglyAdditive> gs, DensityModel model,
                PrimeTablePtr table, std::uint64_t upto);

  std::size_t num_functions() const { return gs_.size(); }
  std::size_t num_primes() const { return weight_.size(); }
  const PrimeTablePtr& table() const { return table_; }
  const std::vector<StronglyAdditive>& functions() const { return gs_; }
  const DensityModel& model() const { return model_; }
  std::uint64_t upto() const { return upto_; }

  /// Means and covariances over the first n primes, through the SIMD kernels.
  double mean(std::size_t j, std::size_t n) const;
  double kappa(std::size_t i, std::size_t j, std::size_t n) const;
  double mu_one(std::size_t n) const;

  /// frak M over the first n primes from the cumulative arrays (O(l)).
  double frak_m_prefix(std::size_t n) const;
  /// frak M over P(z).
  double frak_m_at(double z) const;
  std::size_t count_up_to(double z) const;

  StatBundle bundle(const PolyQ& q, double z) const;

 private:
  std::vector<StronglyAdditive> gs_;
  DensityModel model_;
  PrimeTablePtr table_;
  std::uint64_t upto_;
  std::vector<std::vector<double>> g_;  // g_[j][k] = g_j(p_k)
  std::vector<double> weight_;          // h(p)/p
  std::vector<double> var_weight_;      // (h/p)(1 - h/p)
  std::vector<std::vector<double>> prefix_mean_;  // cumulative sums of g_j w
};

/// Smallest z with z^{max(1, frakM(z)^{1/3})} >= x, frakM over P(z), by
/// bisection to relative tolerance 1e-6 (rounded toward the upper end, which
/// satisfies the inequality). Returns x when frakM(x) <= 1. Requires x >= 16
/// (DomainError) and cache.upto() >= x (CapabilityError).
double choose_z(double x, const PrimeSumCache& cache);

/// Least-squares slope of mu^{P(t)}(1) against log log t over a geometric
/// grid of t in [100, upto]. Diagnostic only.
double eta_slope(const PrimeSumCache& cache);

}  // namespace ekac
