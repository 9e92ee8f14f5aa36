#pragma once

// Strongly additive functions: g(n) = sum of g(p) over the distinct primes
// p | n, with 0 <= g(p) <= G.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ekac/input_model.hpp"
#include "ekac/sieve.hpp"

namespace ekac {

/// P(z): the tabulated primes p <= z.
class PrimeWindow {
 public:
  /// Throws CapabilityError when the table stops short of z.
  PrimeWindow(PrimeTablePtr table, double z);

  double z() const { return z_; }
  std::span<const std::uint64_t> primes() const {
    return table_->primes().first(count_);
  }
  std::size_t size() const { return count_; }
  bool contains(std::uint64_t p) const { return static_cast<double>(p) <= z_; }
  const PrimeTablePtr& table() const { return table_; }

 private:
  PrimeTablePtr table_;
  double z_;
  std::size_t count_;
};

/// Residue-class rule: g(p) = value when p mod modulus is in residues.
struct ResidueRule {
  std::uint64_t modulus = 1;
  std::vector<std::uint64_t> residues;
  double value = 1.0;

  bool matches(std::uint64_t p) const;
};

class StronglyAdditive {
 public:
  using ValueFn = std::function<double(std::uint64_t)>;

  /// omega(n): g(p) = 1, G = 1.
  static StronglyAdditive omega();
  /// g(p) = 1 if pred(p) else 0, G = 1.
  static StronglyAdditive omega_class(std::string label,
                                      std::function<bool(std::uint64_t)> pred);
  /// omega restricted to primes p = r (mod modulus) for r in residues.
  static StronglyAdditive residue_class(std::uint64_t modulus,
                                        std::vector<std::uint64_t> residues);
  /// g(p) = c for every prime.
  static StronglyAdditive constant(double c);
  /// Explicit prime values, then residue rules (first match wins), then
  /// `fallback`. Throws DomainError on a negative value or one above bound.
  static StronglyAdditive from_table(std::string name, double bound,
                                     std::map<std::uint64_t, double> values,
                                     std::vector<ResidueRule> rules = {},
                                     double fallback = 0.0);
  /// Arbitrary callback, memoized per prime. Values are range-checked on
  /// first use.
  static StronglyAdditive from_callback(std::string name, double bound,
                                        ValueFn fn);
  /// JSON text: {"name", "bound", "default", "primes": {"p": v},
  /// "classes": [{"modulus", "residues", "value"}]}. Throws ParseError.
  static StronglyAdditive from_json_text(const std::string& text);
  static StronglyAdditive load_file(const std::string& path);

  const std::string& name() const;
  double bound() const;

  /// g(p). Throws DomainError if the value falls outside [0, G].
  double at(std::uint64_t p) const;

  /// Sum of g(p) over the given distinct primes.
  double eval_full(std::span<const std::uint64_t> factors) const;
  /// g^P(a): only primes inside the window contribute.
  double eval_truncated(std::span<const std::uint64_t> factors,
                        const PrimeWindow& window) const;

  struct Impl;  // opaque

 private:
  explicit StronglyAdditive(std::shared_ptr<const Impl> impl)
      : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// F^P_g(a) = g^P(a) - mu^P(g), with the mean supplied by the caller.
double centered_F(const StronglyAdditive& g,
                  std::span<const std::uint64_t> a_factors,
                  const PrimeWindow& window, double mean);

/// The same quantity summed prime by prime: sum over p in P of g(p) f_p(a),
/// where f_p(a) = 1 - h(p)/p if p | a and -h(p)/p otherwise.
double centered_F_expanded(const StronglyAdditive& g,
                           std::span<const std::uint64_t> a_factors,
                           const PrimeWindow& window,
                           const DensityModel& model);

}  // namespace ekac
