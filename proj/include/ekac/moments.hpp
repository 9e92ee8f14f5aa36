#pragma once

// Streaming moments M_m = sum over a in A of (Q(g^P(a)) - A_Q)^m and their
// comparison against C_m #A B_Q^m.

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "ekac/additive.hpp"
#include "ekac/poly.hpp"
#include "ekac/sieve.hpp"
#include "ekac/stats.hpp"

namespace ekac {

/// m!/(2^{m/2}(m/2)!) for even m, 0 for odd m.
double gaussian_moment_C(unsigned m);
/// Exact integer form, (m-1)!! for even m.
mpz_class gaussian_moment_C_exact(unsigned m);

/// Q(g_1^P(a), ..., g_l^P(a)) for factored records. With `truncate` false the
/// window is ignored and every prime factor counts (full g).
class QEvaluator {
 public:
  QEvaluator(PolyQ q, std::vector<StronglyAdditive> gs, PrimeWindow window,
             bool truncate = true);

  double operator()(std::span<const std::uint64_t> factors) const;
  double operator()(const FactorRecord& r) const { return (*this)(r.primes); }

  const PolyQ& q() const { return q_; }
  const PrimeWindow& window() const { return window_; }
  bool truncated() const { return truncate_; }

 private:
  PolyQ q_;
  std::vector<StronglyAdditive> gs_;
  PrimeWindow window_;
  bool truncate_;
};

class MomentAccumulator {
 public:
  /// m_max must be even and >= 2 (DomainError). `fingerprint` identifies the
  /// (Q, g, window) configuration; merge refuses mismatches.
  explicit MomentAccumulator(unsigned m_max = 8, double a_q = 0.0,
                             std::string fingerprint = {});

  unsigned m_max() const { return m_max_; }
  double a_q() const { return a_q_; }
  const std::string& fingerprint() const { return fingerprint_; }
  std::uint64_t count() const { return count_ + pending_.size(); }

  /// Adds (value - a_q)^m for m = 1..m_max, where value = Q(g^P(a)).
  void accumulate(double value);
  void accumulate_batch(std::span<const double> values);

  /// Throws ConfigMismatchError unless m_max, a_q and fingerprint agree.
  void merge(const MomentAccumulator& other);

  /// M_m; M_0 is the exact count.
  double power_sum(unsigned m) const;
  std::vector<double> power_sums() const;

 private:
  void flush();

  unsigned m_max_;
  double a_q_;
  std::string fingerprint_;
  std::uint64_t count_ = 0;
  std::vector<double> sums_;
  std::vector<double> comps_;
  std::vector<double> pending_;
};

/// Feeds one record: Q(g^P(a)) through the evaluator.
inline void accumulate(MomentAccumulator& acc, const FactorRecord& r,
                       const QEvaluator& eval) {
  acc.accumulate(eval(r));
}

struct MomentRow {
  unsigned m = 0;
  double moment = 0.0;     ///< M_m
  double c_m = 0.0;        ///< C_m
  double ratio = 0.0;      ///< M_m / (#A B_Q^m)
  double predicted = 0.0;  ///< C_m (0 for odd m)
};

struct MomentReport {
  std::uint64_t count = 0;
  double a_q = 0.0;
  double b_q = 0.0;
  std::vector<MomentRow> rows;

  /// Columns m, M_m, C_m, ratio, predicted; %.17g.
  std::string to_csv() const;
};

/// Throws ZeroVarianceError when bundle.b_q is not positive.
MomentReport report(const MomentAccumulator& acc, const StatBundle& bundle);

}  // namespace ekac
