#pragma once

// Prime enumeration and streamed distinct-prime factorizations.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace ekac {

/// Largest input accepted anywhere in the library (64-bit signed range).
inline constexpr std::uint64_t kMaxInput = (std::uint64_t{1} << 63) - 1;

/// Default entries per sieve segment (keeps the spf array in L2).
inline constexpr std::uint64_t kDefaultSegmentLen = std::uint64_t{1} << 18;

/// All primes <= limit, ascending. Immutable after construction; share it
/// through `PrimeTablePtr`.
class PrimeTable {
 public:
  PrimeTable(std::uint64_t limit, std::vector<std::uint64_t> primes,
             std::vector<std::uint32_t> spf = {});

  std::uint64_t limit() const { return limit_; }
  std::span<const std::uint64_t> primes() const { return primes_; }
  std::size_t size() const { return primes_.size(); }
  std::uint64_t operator[](std::size_t i) const { return primes_[i]; }

  /// Number of primes <= z (also the index one past the last such prime).
  std::size_t count_up_to(std::uint64_t z) const;
  /// Membership for n <= limit().
  bool contains(std::uint64_t n) const;

  /// Smallest-prime-factor lookup, available when built with `with_spf`.
  bool has_spf() const { return !spf_.empty(); }
  std::uint32_t spf(std::uint64_t n) const { return spf_[n]; }

 private:
  std::uint64_t limit_;
  std::vector<std::uint64_t> primes_;
  std::vector<std::uint32_t> spf_;
};

using PrimeTablePtr = std::shared_ptr<const PrimeTable>;

/// Segmented sieve of Eratosthenes. Throws EmptyRangeError when limit < 2.
/// With `with_spf` the table also stores a smallest-prime-factor array
/// (limit must then be < 2^32).
PrimeTablePtr primes_up_to(std::uint64_t limit, bool with_spf = false);

/// Deterministic Miller-Rabin for 64-bit n.
bool is_prime_u64(std::uint64_t n);

/// Smallest prime factor of every n in [base, base + spf.size()). Entries
/// with no sieving prime factor are prime and store n itself; n = 1 stores 1.
struct SpfSegment {
  std::uint64_t base = 0;
  std::vector<std::uint64_t> spf;
};

SpfSegment spf_segment(std::uint64_t base, std::uint64_t len,
                       const PrimeTable& sieving);

/// One element of the input together with its distinct prime factors.
struct FactorRecord {
  std::uint64_t a;
  std::span<const std::uint64_t> primes;
};

/// Distinct factorizations for a contiguous block of integers, stored as a
/// compressed row table. `keep_if` can later drop records (e.g. to keep only
/// shifted primes), after which values need not be contiguous.
class FactorSegment {
 public:
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  FactorRecord operator[](std::size_t i) const {
    return {values_[i], std::span<const std::uint64_t>(
                            primes_.data() + offsets_[i],
                            offsets_[i + 1] - offsets_[i])};
  }
  std::span<const std::uint64_t> values() const { return values_; }

  void keep_if(const std::function<bool(std::uint64_t)>& pred);

  friend FactorSegment factor_segment(std::uint64_t base, std::uint64_t len,
                                      const PrimeTable& sieving);

 private:
  std::vector<std::uint64_t> values_;
  std::vector<std::uint32_t> offsets_{0};
  std::vector<std::uint64_t> primes_;
};

/// Factor every integer in [base, base + len). Requires the sieving table to
/// reach sqrt(base + len - 1); throws CapabilityError otherwise.
FactorSegment factor_segment(std::uint64_t base, std::uint64_t len,
                             const PrimeTable& sieving);

/// Streams (a, distinct primes of a) for a in [lo, hi], in order, one
/// segment at a time.
class FactorStream {
 public:
  /// Throws EmptyRangeError if lo > hi or lo == 0, DomainError if
  /// segment_len == 0 or hi > kMaxInput. A sieving table reaching sqrt(hi)
  /// is built when none is supplied.
  FactorStream(std::uint64_t lo, std::uint64_t hi,
               std::uint64_t segment_len = kDefaultSegmentLen,
               PrimeTablePtr sieving = nullptr);

  std::uint64_t lo() const { return lo_; }
  std::uint64_t hi() const { return hi_; }
  std::uint64_t segment_len() const { return segment_len_; }
  std::size_t segment_count() const;
  const PrimeTablePtr& sieving_primes() const { return sieving_; }

  /// The k-th segment, independent of every other segment.
  FactorSegment segment(std::size_t k) const;

  /// Fills `out` with the next segment; false once the range is exhausted.
  bool next(FactorSegment& out);

  template <class Fn>
  void for_each(Fn&& fn) {
    FactorSegment seg;
    while (next(seg)) {
      for (std::size_t i = 0; i < seg.size(); ++i) fn(seg[i]);
    }
  }

 private:
  std::uint64_t lo_;
  std::uint64_t hi_;
  std::uint64_t segment_len_;
  PrimeTablePtr sieving_;
  std::size_t cursor_ = 0;
};

/// Exact set of primes dividing n, ascending. Uses the table's spf array when
/// n <= limit, otherwise trial division by tabulated primes with one residual
/// prime cofactor. Throws CapabilityError if limit < n and limit^2 < n.
std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n,
                                                  const PrimeTable& table);

/// Integer square root (floor).
std::uint64_t isqrt(std::uint64_t n);

/// Runs `fn(partition, segment)` over the segments of `stream` using up to
/// `workers` threads. Partition p receives a contiguous block of segments in
/// ascending order; partitions are numbered by position in the range.
void parallel_segments(
    const FactorStream& stream, unsigned workers,
    const std::function<void(std::size_t, const FactorSegment&)>& fn);

/// Number of partitions parallel_segments will use.
std::size_t partition_count(const FactorStream& stream, unsigned workers);

}  // namespace ekac
