#pragma once

// Empirical distribution of normalized values against the standard normal.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ekac {

/// Standard normal CDF.
double phi(double u);

/// Sorted sample. Throws DomainError when empty.
class Ecdf {
 public:
  explicit Ecdf(std::vector<double> values);
  std::span<const double> values() const { return values_; }
  std::size_t n() const { return values_.size(); }
  /// Fraction of values <= u.
  double operator()(double u) const;

 private:
  std::vector<double> values_;
};

/// max over i of max(|i/n - phi(v_i)|, |(i-1)/n - phi(v_i)|), v sorted.
double ks_distance(const Ecdf& ecdf);

/// Equal-width bins on [lo, hi]; values outside go to the end bins.
class Histogram {
 public:
  Histogram(double lo = -5.0, double hi = 5.0, std::size_t bins = 101);
  void add(double v);
  void merge(const Histogram& other);
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  std::size_t bins() const { return counts_.size(); }
  double bin_lo(std::size_t i) const;
  double bin_hi(std::size_t i) const;
  const std::vector<std::uint64_t>& counts() const { return counts_; }
  std::uint64_t total() const;
  std::size_t index(double v) const;

 private:
  double lo_;
  double hi_;
  std::vector<std::uint64_t> counts_;
};

struct FitReport {
  std::uint64_t n = 0;
  double ks_distance = 0.0;
  bool approximate = false;  ///< KS computed on the binned sketch
  Histogram histogram;
  std::array<double, 4> sample_moments{};  ///< raw moments 1..4

  std::string histogram_csv() const;
};

/// Collects normalized values (v - center) / scale. Values are kept exactly
/// up to `exact_limit`; past that they are folded into a fine binned sketch
/// and the KS distance is flagged approximate. One accumulator per partition;
/// merge is associative.
class FitAccumulator {
 public:
  static constexpr std::uint64_t kDefaultExactLimit = 10'000'000;

  FitAccumulator(double center, double scale,
                 std::uint64_t exact_limit = kDefaultExactLimit);

  void add(double raw_value);
  void merge(FitAccumulator&& other);
  std::uint64_t count() const { return n_; }
  bool approximate() const { return !sketch_.empty(); }

  /// Throws DomainError when no value was added.
  FitReport finish() &&;

 private:
  void to_sketch();
  void add_normalized(double v);

  double center_;
  double scale_;
  std::uint64_t exact_limit_;
  std::uint64_t n_ = 0;
  std::vector<double> values_;
  std::vector<std::uint64_t> sketch_;  // kSketchBins + under/overflow
  Histogram hist_;
  std::array<double, 4> sums_{};
  std::array<double, 4> comps_{};
};

}  // namespace ekac
