#include "ekac/input_model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "ekac/error.hpp"

namespace ekac {

InputSet InputSet::all_integers(std::uint64_t x) {
  if (x < 1) throw EmptyRangeError("AllIntegers: x must be >= 1");
  if (x > kMaxInput) throw DomainError("AllIntegers: x exceeds 2^63-1");
  return InputSet(AllIntegers{x});
}

InputSet InputSet::shifted_primes(std::uint64_t x, std::int64_t shift) {
  if (shift == 0) throw DomainError("ShiftedPrimes: shift must be nonzero");
  if (x < 2) throw EmptyRangeError("ShiftedPrimes: x must be >= 2");
  if (x > kMaxInput / 2) throw DomainError("ShiftedPrimes: x too large");
  if (shift > 0 && static_cast<std::uint64_t>(shift) >= x)
    throw EmptyRangeError("ShiftedPrimes: no prime p with shift < p <= x");
  return InputSet(ShiftedPrimes{x, shift});
}

std::uint64_t InputSet::x() const {
  return std::visit([](const auto& k) { return k.x; }, kind_);
}

std::int64_t InputSet::shift() const {
  if (const auto* s = std::get_if<ShiftedPrimes>(&kind_)) return s->shift;
  return 0;
}

std::uint64_t InputSet::min_value() const {
  const std::int64_t a = shift();
  if (a < 0) return 2 + static_cast<std::uint64_t>(-a);
  return 1;
}

std::uint64_t InputSet::max_value() const {
  const std::int64_t a = shift();
  if (a >= 0) return x() - static_cast<std::uint64_t>(a);
  return x() + static_cast<std::uint64_t>(-a);
}

std::string InputSet::describe() const {
  if (is_shifted()) {
    return "shifted_primes(x=" + std::to_string(x()) +
           ", shift=" + std::to_string(shift()) + ")";
  }
  return "all_integers(x=" + std::to_string(x()) + ")";
}

DensityModel DensityModel::shifted_prime(std::int64_t shift) {
  if (shift == 0) throw DomainError("shifted-prime density needs shift != 0");
  return DensityModel(Kind::kShiftedPrime, shift);
}

DensityModel DensityModel::for_set(const InputSet& set) {
  return set.is_shifted() ? shifted_prime(set.shift()) : unit();
}

namespace {

bool divides_shift(std::uint64_t p, std::int64_t shift) {
  const std::uint64_t mag = shift < 0 ? static_cast<std::uint64_t>(-shift)
                                      : static_cast<std::uint64_t>(shift);
  return mag % p == 0;
}

}  // namespace

Rational DensityModel::h_prime(std::uint64_t p) const {
  if (kind_ == Kind::kUnit) return Rational(1);
  if (divides_shift(p, shift_)) return Rational(0);
  return make_rational_u(p, p - 1);
}

Rational DensityModel::h_over_p_exact(std::uint64_t p) const {
  if (kind_ == Kind::kUnit) return make_rational_u(1, p);
  if (divides_shift(p, shift_)) return Rational(0);
  return make_rational_u(1, p - 1);
}

double DensityModel::h_over_p(std::uint64_t p) const {
  if (kind_ == Kind::kUnit) return 1.0 / static_cast<double>(p);
  if (divides_shift(p, shift_)) return 0.0;
  return 1.0 / static_cast<double>(p - 1);
}

Rational density_h(const DensityModel& model, std::uint64_t d) {
  if (d == 0) throw DomainError("density_h: d must be positive");
  Rational out(1);
  std::uint64_t n = d;
  for (std::uint64_t p = 2; p <= n / p; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) {
      throw DomainError("density_h: d = " + std::to_string(d) +
                        " is not squarefree");
    }
    out *= model.h_prime(p);
  }
  if (n > 1) out *= model.h_prime(n);
  return out;
}

namespace {

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double log_integral(double x) {
  if (x <= 2.0) return 0.0;
  const auto f = [](double t) { return 1.0 / std::log(t); };
  // Split geometrically so each piece is well resolved before adapting.
  double total = 0.0;
  double a = 2.0;
  const int pieces = std::max(1, static_cast<int>(std::ceil(std::log2(x / 2.0))));
  const double ratio = std::pow(x / 2.0, 1.0 / pieces);
  const double tol = 1e-10 / pieces;
  for (int k = 0; k < pieces; ++k) {
    const double b = (k + 1 == pieces) ? x : a * ratio;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    total += adaptive_simpson(f, a, b, fa, fm, fb, simpson(a, b, fa, fm, fb),
                              tol, 50);
    a = b;
  }
  return total;
}

double big_x(const InputSet& set) {
  if (set.is_shifted()) return log_integral(static_cast<double>(set.x()));
  return static_cast<double>(set.x());
}

ElementStream::ElementStream(const InputSet& set, PrimeTablePtr primes,
                             std::uint64_t segment_len)
    : set_(set),
      primes_(std::move(primes)),
      raw_(set.min_value(), set.max_value(), segment_len,
           primes_ ? primes_ : nullptr) {
  if (set_.is_shifted() && (!primes_ || primes_->limit() < set_.x())) {
    throw CapabilityError("ShiftedPrimes enumeration needs primes up to x = " +
                          std::to_string(set_.x()));
  }
}

FactorSegment ElementStream::segment(std::size_t k) const {
  FactorSegment seg = raw_.segment(k);
  filter(seg);
  return seg;
}

void ElementStream::filter(FactorSegment& seg) const {
  if (!set_.is_shifted() || seg.empty()) return;
  // Keep v exactly when v + shift is a prime p with shift < p <= x.
  const std::int64_t a = set_.shift();
  const std::uint64_t base = seg[0].a;
  const std::uint64_t top = seg[seg.size() - 1].a;
  const std::uint64_t p_lo = static_cast<std::uint64_t>(static_cast<std::int64_t>(base) + a);
  const std::uint64_t p_hi = static_cast<std::uint64_t>(static_cast<std::int64_t>(top) + a);
  std::vector<char> keep(top - base + 1, 0);
  const auto ps = primes_->primes();
  for (auto it = std::lower_bound(ps.begin(), ps.end(), p_lo);
       it != ps.end() && *it <= p_hi && *it <= set_.x(); ++it) {
    keep[*it - p_lo] = 1;
  }
  seg.keep_if([&](std::uint64_t v) { return keep[v - base] != 0; });
}

std::size_t ElementStream::partitions(unsigned workers) const {
  return partition_count(raw_, workers);
}

void ElementStream::parallel(
    unsigned workers,
    const std::function<void(std::size_t, const FactorSegment&)>& fn) const {
  if (!set_.is_shifted()) {
    parallel_segments(raw_, workers, fn);
    return;
  }
  parallel_segments(raw_, workers,
                    [&](std::size_t part, const FactorSegment& raw_seg) {
                      FactorSegment seg = raw_seg;
                      filter(seg);
                      fn(part, seg);
                    });
}

std::uint64_t count_multiples(const InputSet& set, std::uint64_t d,
                              const PrimeTable& primes) {
  if (d == 0) throw DomainError("count_multiples: d must be positive");
  if (!set.is_shifted()) return set.x() / d;
  if (primes.limit() < set.x())
    throw CapabilityError("count_multiples: prime table below x");
  const std::int64_t a = set.shift();
  std::uint64_t count = 0;
  for (const std::uint64_t p : primes.primes()) {
    if (p > set.x()) break;
    if (static_cast<std::int64_t>(p) <= a) continue;
    const std::uint64_t v =
        static_cast<std::uint64_t>(static_cast<std::int64_t>(p) - a);
    if (v % d == 0) ++count;
  }
  return count;
}

Remainder empirical_remainder(const InputSet& set, const DensityModel& model,
                              std::uint64_t d, const PrimeTable& primes) {
  Remainder r;
  r.d = d;
  r.count = count_multiples(set, d, primes);
  const Rational hd = density_h(model, d);
  if (!set.is_shifted()) {
    Rational e = make_rational_u(r.count) -
                 hd * make_rational_u(set.x()) / make_rational_u(d);
    e.canonicalize();
    r.value = to_double(e);
    r.exact = std::move(e);
  } else {
    r.value = static_cast<double>(r.count) -
              to_double(hd) / static_cast<double>(d) * big_x(set);
  }
  return r;
}

}  // namespace ekac
