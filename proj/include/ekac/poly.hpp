#pragma once

// Sparse multivariate polynomials with nonnegative coefficients, and the
// expansion of R_m(x, y) = (Q(x + y) - Q(y))^m into monomials.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ekac/rational.hpp"

namespace ekac {

/// Exponent of each variable, length = number of variables.
using Exponents = std::vector<unsigned>;

class Polynomial {
 public:
  Polynomial() = default;
  /// Zero coefficients are dropped. Throws DomainError on a negative or
  /// non-finite coefficient or an exponent vector of the wrong length.
  Polynomial(std::size_t num_vars, std::map<Exponents, double> terms);

  std::size_t num_vars() const { return num_vars_; }
  const std::map<Exponents, double>& terms() const { return terms_; }
  /// Maximum total degree over nonzero terms; 0 for constants and zero.
  unsigned degree() const;

  /// Throws DomainError when point.size() != num_vars().
  double eval(std::span<const double> point) const;
  Rational eval_exact(std::span<const Rational> point) const;

  /// d/dT_j with j 0-based. Throws DomainError if j >= num_vars().
  Polynomial partial(std::size_t j) const;

  /// Literal form, e.g. "T1^2*T2 + 3*T1".
  std::string to_string() const;

 private:
  std::size_t num_vars_ = 0;
  std::map<Exponents, double> terms_;
};

/// The polynomial Q of the normal law: nonnegative coefficients, degree >= 1.
class PolyQ {
 public:
  /// Throws DomainError when the degree is 0.
  explicit PolyQ(Polynomial p);
  PolyQ(std::size_t num_vars, std::map<Exponents, double> terms)
      : PolyQ(Polynomial(num_vars, std::move(terms))) {}

  /// Grammar: sum of products of nonnegative numbers and variables T<k>
  /// (k >= 1, "T" alone means T1) with optional integer powers. Only '+',
  /// '*' and '^' are accepted. The variable count is the largest index used,
  /// or `num_vars` when that is larger. Throws ParseError with the column.
  static PolyQ parse(std::string_view literal, std::size_t num_vars = 0);

  const Polynomial& poly() const { return poly_; }
  std::size_t num_vars() const { return poly_.num_vars(); }
  unsigned degree() const { return poly_.degree(); }
  double eval(std::span<const double> point) const { return poly_.eval(point); }
  Rational eval_exact(std::span<const Rational> point) const {
    return poly_.eval_exact(point);
  }
  Polynomial partial(std::size_t j) const { return poly_.partial(j); }
  std::string to_string() const { return poly_.to_string(); }

 private:
  Polynomial poly_;
};

/// One monomial r * prod x_v * prod y_w of R_m, with the variable multisets
/// sorted ascending (0-based indices).
struct RmMonomial {
  Rational coeff;
  std::vector<unsigned> x_vars;
  std::vector<unsigned> y_vars;

  std::size_t x_degree() const { return x_vars.size(); }
  std::size_t y_degree() const { return y_vars.size(); }
};

struct RmExpansion {
  unsigned m = 0;
  std::size_t num_vars = 0;
  unsigned q_degree = 0;
  /// Ordered lexicographically by (x_vars, y_vars).
  std::vector<RmMonomial> monomials;

  Rational eval_exact(std::span<const Rational> x,
                      std::span<const Rational> y) const;
  double eval(std::span<const double> x, std::span<const double> y) const;
};

/// Substitute T_i <- x_i + y_i, subtract Q(y), raise to the m-th power and
/// collect like monomials, all in exact arithmetic. Throws DomainError if
/// m == 0.
RmExpansion expand_R_m(const PolyQ& q, unsigned m);

}  // namespace ekac
