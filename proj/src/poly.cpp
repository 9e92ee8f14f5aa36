#include "ekac/poly.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "ekac/error.hpp"

namespace ekac {

Polynomial::Polynomial(std::size_t num_vars, std::map<Exponents, double> terms)
    : num_vars_(num_vars) {
  for (auto& [exps, c] : terms) {
    if (exps.size() != num_vars) {
      throw DomainError("polynomial term has " + std::to_string(exps.size()) +
                        " exponents, expected " + std::to_string(num_vars));
    }
    if (!std::isfinite(c) || c < 0.0) {
      throw DomainError("polynomial coefficients must be finite and >= 0");
    }
    if (c != 0.0) terms_.emplace(exps, c);
  }
}

unsigned Polynomial::degree() const {
  unsigned deg = 0;
  for (const auto& [exps, c] : terms_) {
    unsigned total = 0;
    for (unsigned e : exps) total += e;
    deg = std::max(deg, total);
  }
  return deg;
}

namespace {

void check_arity(std::size_t got, std::size_t want) {
  if (got != want) {
    throw DomainError("polynomial evaluated at a point of length " +
                      std::to_string(got) + ", expected " +
                      std::to_string(want));
  }
}

double ipow(double b, unsigned e) {
  double r = 1.0;
  while (e != 0) {
    if (e & 1u) r *= b;
    e >>= 1;
    if (e != 0) b *= b;
  }
  return r;
}

}  // namespace

double Polynomial::eval(std::span<const double> point) const {
  check_arity(point.size(), num_vars_);
  double total = 0.0;
  for (const auto& [exps, c] : terms_) {
    double term = c;
    for (std::size_t i = 0; i < num_vars_; ++i) {
      if (exps[i] != 0) term *= ipow(point[i], exps[i]);
    }
    total += term;
  }
  return total;
}

Rational Polynomial::eval_exact(std::span<const Rational> point) const {
  check_arity(point.size(), num_vars_);
  Rational total(0);
  for (const auto& [exps, c] : terms_) {
    Rational term = rational_from_double(c);
    for (std::size_t i = 0; i < num_vars_; ++i) {
      if (exps[i] != 0) term *= ekac::pow(point[i], exps[i]);
    }
    total += term;
  }
  return total;
}

Polynomial Polynomial::partial(std::size_t j) const {
  if (j >= num_vars_) {
    throw DomainError("partial: variable index " + std::to_string(j) +
                      " out of range for " + std::to_string(num_vars_) +
                      " variables");
  }
  std::map<Exponents, double> out;
  for (const auto& [exps, c] : terms_) {
    if (exps[j] == 0) continue;
    Exponents e = exps;
    const unsigned k = e[j]--;
    out[e] += c * static_cast<double>(k);
  }
  return Polynomial(num_vars_, std::move(out));
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  // Highest exponent vectors first.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [exps, c] = *it;
    if (!out.empty()) out += " + ";
    std::string factors;
    for (std::size_t i = 0; i < num_vars_; ++i) {
      if (exps[i] == 0) continue;
      if (!factors.empty()) factors += "*";
      factors += "T" + std::to_string(i + 1);
      if (exps[i] > 1) factors += "^" + std::to_string(exps[i]);
    }
    if (c != 1.0 || factors.empty()) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", c);
      out += buf;
      if (!factors.empty()) out += "*";
    }
    out += factors;
  }
  return out;
}

PolyQ::PolyQ(Polynomial p) : poly_(std::move(p)) {
  if (poly_.degree() == 0) {
    throw DomainError("Q must have degree >= 1 (constant polynomials rejected)");
  }
}

namespace {

class LiteralParser {
 public:
  explicit LiteralParser(std::string_view text) : text_(text) {}

  std::vector<std::pair<double, std::map<std::size_t, unsigned>>> parse() {
    std::vector<std::pair<double, std::map<std::size_t, unsigned>>> terms;
    skip_ws();
    if (at_end()) fail("empty polynomial literal");
    terms.push_back(term());
    while (true) {
      skip_ws();
      if (at_end()) break;
      const char c = text_[pos_];
      if (c == '+') {
        ++pos_;
        terms.push_back(term());
      } else if (c == '-') {
        fail("negative coefficients are not allowed ('-')");
      } else {
        fail(std::string("unexpected character '") + c + "'");
      }
    }
    return terms;
  }

  std::size_t max_var() const { return max_var_; }

 private:
  std::pair<double, std::map<std::size_t, unsigned>> term() {
    double coeff = 1.0;
    std::map<std::size_t, unsigned> exps;
    factor(coeff, exps);
    while (true) {
      skip_ws();
      if (!at_end() && text_[pos_] == '*') {
        ++pos_;
        factor(coeff, exps);
      } else {
        break;
      }
    }
    return {coeff, exps};
  }

  void factor(double& coeff, std::map<std::size_t, unsigned>& exps) {
    skip_ws();
    if (at_end()) fail("expected a number or variable");
    const char c = text_[pos_];
    if (c == '-') fail("negative coefficients are not allowed ('-')");
    if (c == 'T' || c == 't') {
      ++pos_;
      std::size_t index = 1;
      if (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        index = static_cast<std::size_t>(integer());
        if (index == 0) fail("variable indices start at T1");
      }
      max_var_ = std::max(max_var_, index);
      unsigned power = 1;
      skip_ws();
      if (!at_end() && text_[pos_] == '^') {
        ++pos_;
        skip_ws();
        if (at_end() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
          fail("expected a nonnegative integer exponent");
        power = static_cast<unsigned>(integer());
      }
      exps[index - 1] += power;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      coeff *= number();
      return;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  double number() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
                         text_[pos_] == '.'))
      ++pos_;
    if (!at_end() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      if (!at_end() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
    }
    const std::string token(text_.substr(start, pos_ - start));
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size() || !std::isfinite(v)) {
      pos_ = start;
      fail("malformed number '" + token + "'");
    }
    return v;
  }

  unsigned long long integer() {
    const std::size_t start = pos_;
    unsigned long long v = 0;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + static_cast<unsigned>(text_[pos_] - '0');
      if (v > 1000000) {
        pos_ = start;
        fail("integer too large");
      }
      ++pos_;
    }
    return v;
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("polynomial literal: " + what, 1,
                     static_cast<int>(pos_) + 1);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t max_var_ = 0;
};

}  // namespace

PolyQ PolyQ::parse(std::string_view literal, std::size_t num_vars) {
  LiteralParser parser(literal);
  const auto raw = parser.parse();
  const std::size_t n = std::max(num_vars, parser.max_var());
  if (n == 0) throw ParseError("polynomial literal has no variables", 1, 1);
  std::map<Exponents, double> terms;
  for (const auto& [c, exps] : raw) {
    Exponents e(n, 0);
    for (const auto& [i, p] : exps) e[i] = p;
    terms[e] += c;
  }
  try {
    return PolyQ(Polynomial(n, std::move(terms)));
  } catch (const DomainError& e) {
    throw ParseError(std::string("polynomial literal: ") + e.what(), 1, 1);
  }
}

namespace {

// Exponent vector over 2l variables: x_0..x_{l-1}, y_0..y_{l-1}.
using BigPoly = std::map<std::vector<unsigned>, Rational>;

BigPoly multiply(const BigPoly& a, const BigPoly& b) {
  BigPoly out;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      std::vector<unsigned> e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out[e] += ca * cb;
    }
  }
  for (auto it = out.begin(); it != out.end();) {
    it = (sgn(it->second) == 0) ? out.erase(it) : std::next(it);
  }
  return out;
}

Rational binomial(unsigned n, unsigned k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return Rational(r);
}

}  // namespace

RmExpansion expand_R_m(const PolyQ& q, unsigned m) {
  if (m == 0) throw DomainError("expand_R_m: m must be >= 1");
  const std::size_t l = q.num_vars();

  // D(x, y) = Q(x + y) - Q(y): binomially expand every term and drop the
  // pure-y part, which is exactly Q(y).
  BigPoly diff;
  for (const auto& [exps, c] : q.poly().terms()) {
    BigPoly term{{std::vector<unsigned>(2 * l, 0), rational_from_double(c)}};
    for (std::size_t i = 0; i < l; ++i) {
      if (exps[i] == 0) continue;
      BigPoly factor;
      for (unsigned a = 0; a <= exps[i]; ++a) {
        std::vector<unsigned> e(2 * l, 0);
        e[i] = a;
        e[l + i] = exps[i] - a;
        factor[e] = binomial(exps[i], a);
      }
      term = multiply(term, factor);
    }
    for (auto& [e, coeff] : term) {
      bool has_x = false;
      for (std::size_t i = 0; i < l; ++i) has_x = has_x || e[i] != 0;
      if (has_x) diff[e] += coeff;
    }
  }

  BigPoly power = diff;
  for (unsigned k = 1; k < m; ++k) power = multiply(power, diff);

  RmExpansion out;
  out.m = m;
  out.num_vars = l;
  out.q_degree = q.degree();
  out.monomials.reserve(power.size());
  for (auto& [e, coeff] : power) {
    RmMonomial mono;
    mono.coeff = coeff;
    for (std::size_t i = 0; i < l; ++i) {
      mono.x_vars.insert(mono.x_vars.end(), e[i], static_cast<unsigned>(i));
      mono.y_vars.insert(mono.y_vars.end(), e[l + i], static_cast<unsigned>(i));
    }
    out.monomials.push_back(std::move(mono));
  }
  std::sort(out.monomials.begin(), out.monomials.end(),
            [](const RmMonomial& a, const RmMonomial& b) {
              if (a.x_vars != b.x_vars) return a.x_vars < b.x_vars;
              return a.y_vars < b.y_vars;
            });
  return out;
}

Rational RmExpansion::eval_exact(std::span<const Rational> x,
                                 std::span<const Rational> y) const {
  check_arity(x.size(), num_vars);
  check_arity(y.size(), num_vars);
  Rational total(0);
  for (const auto& mono : monomials) {
    Rational term = mono.coeff;
    for (unsigned v : mono.x_vars) term *= x[v];
    for (unsigned w : mono.y_vars) term *= y[w];
    total += term;
  }
  return total;
}

double RmExpansion::eval(std::span<const double> x,
                         std::span<const double> y) const {
  check_arity(x.size(), num_vars);
  check_arity(y.size(), num_vars);
  double total = 0.0;
  for (const auto& mono : monomials) {
    double term = to_double(mono.coeff);
    for (unsigned v : mono.x_vars) term *= x[v];
    for (unsigned w : mono.y_vars) term *= y[w];
    total += term;
  }
  return total;
}

}  // namespace ekac
