#pragma once

// The input multiset A, its sieve density model (h, X) and the empirical
// remainders E_d = #A_d - (h(d)/d) X.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "ekac/rational.hpp"
#include "ekac/sieve.hpp"

namespace ekac {

struct AllIntegers {
  std::uint64_t x;
};

/// {p - shift : p prime, shift < p <= x}.
struct ShiftedPrimes {
  std::uint64_t x;
  std::int64_t shift;
};

// Friable (smooth) integers would be a third alternative here: a variant
// member, its enumeration filter, and its h. Not provided.
class InputSet {
 public:
  static InputSet all_integers(std::uint64_t x);
  /// Throws DomainError for shift == 0 or when no prime exceeds the shift.
  static InputSet shifted_primes(std::uint64_t x, std::int64_t shift);

  bool is_shifted() const { return std::holds_alternative<ShiftedPrimes>(kind_); }
  std::uint64_t x() const;
  std::int64_t shift() const;  ///< 0 for AllIntegers

  /// Inclusive bounds on element values (used to size the sieve).
  std::uint64_t min_value() const;
  std::uint64_t max_value() const;

  std::string describe() const;

 private:
  explicit InputSet(std::variant<AllIntegers, ShiftedPrimes> kind)
      : kind_(kind) {}
  std::variant<AllIntegers, ShiftedPrimes> kind_;
};

/// Multiplicative h given by its prime values. kUnit: h = 1 (all integers).
/// kShiftedPrime: h(p) = p/(p-1) if p does not divide the shift, else 0.
class DensityModel {
 public:
  enum class Kind { kUnit, kShiftedPrime };

  static DensityModel unit() { return DensityModel(Kind::kUnit, 0); }
  static DensityModel shifted_prime(std::int64_t shift);
  static DensityModel for_set(const InputSet& set);

  Kind kind() const { return kind_; }
  std::int64_t shift() const { return shift_; }

  Rational h_prime(std::uint64_t p) const;
  /// h(p)/p, exact.
  Rational h_over_p_exact(std::uint64_t p) const;
  /// h(p)/p in floating point.
  double h_over_p(std::uint64_t p) const;

 private:
  DensityModel(Kind kind, std::int64_t shift) : kind_(kind), shift_(shift) {}
  Kind kind_;
  std::int64_t shift_;
};

/// h(d) for squarefree d as the product of h(p) over p | d. Throws
/// DomainError when d is not squarefree (or d == 0).
Rational density_h(const DensityModel& model, std::uint64_t d);

/// li(x) = integral of dt / log t over [2, x]; 0 for x <= 2.
double log_integral(double x);

/// X: x for AllIntegers, li(x) for ShiftedPrimes.
double big_x(const InputSet& set);

/// Streams every element of A with its distinct prime factorization.
class ElementStream {
 public:
  /// For ShiftedPrimes the table must reach x (CapabilityError otherwise).
  ElementStream(const InputSet& set, PrimeTablePtr primes,
                std::uint64_t segment_len = kDefaultSegmentLen);

  std::size_t segment_count() const { return raw_.segment_count(); }
  FactorSegment segment(std::size_t k) const;
  const InputSet& set() const { return set_; }

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t k = 0; k < segment_count(); ++k) {
      const FactorSegment seg = segment(k);
      for (std::size_t i = 0; i < seg.size(); ++i) fn(seg[i]);
    }
  }

  /// Like parallel_segments, over filtered segments.
  void parallel(unsigned workers,
                const std::function<void(std::size_t, const FactorSegment&)>&
                    fn) const;
  std::size_t partitions(unsigned workers) const;

 private:
  void filter(FactorSegment& seg) const;

  InputSet set_;
  PrimeTablePtr primes_;
  FactorStream raw_;
};

/// Convenience wrapper matching the stream contract.
inline ElementStream enumerate(const InputSet& set, PrimeTablePtr primes) {
  return ElementStream(set, std::move(primes));
}

/// #A_d: number of elements divisible by d.
std::uint64_t count_multiples(const InputSet& set, std::uint64_t d,
                              const PrimeTable& primes);

struct Remainder {
  std::uint64_t d = 1;
  std::uint64_t count = 0;       ///< #A_d
  std::optional<Rational> exact;  ///< set when X is rational (AllIntegers)
  double value = 0.0;             ///< E_d in floating point
};

/// E_d = #A_d - (h(d)/d) X. Exact for AllIntegers.
Remainder empirical_remainder(const InputSet& set, const DensityModel& model,
                              std::uint64_t d, const PrimeTable& primes);

}  // namespace ekac
