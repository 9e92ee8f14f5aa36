#include "ekac/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "ekac/error.hpp"

namespace ekac {

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && (r > n / r)) --r;
  while ((r + 1) <= n / (r + 1)) ++r;
  return r;
}

PrimeTable::PrimeTable(std::uint64_t limit, std::vector<std::uint64_t> primes,
                       std::vector<std::uint32_t> spf)
    : limit_(limit), primes_(std::move(primes)), spf_(std::move(spf)) {}

std::size_t PrimeTable::count_up_to(std::uint64_t z) const {
  return static_cast<std::size_t>(
      std::upper_bound(primes_.begin(), primes_.end(), z) - primes_.begin());
}

bool PrimeTable::contains(std::uint64_t n) const {
  return std::binary_search(primes_.begin(), primes_.end(), n);
}

namespace {

std::vector<std::uint64_t> small_primes(std::uint64_t limit) {
  std::vector<char> composite(limit + 1, 0);
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
  }
  return out;
}

std::vector<std::uint32_t> spf_table(std::uint64_t limit,
                                     std::span<const std::uint64_t> primes) {
  std::vector<std::uint32_t> spf(limit + 1, 0);
  if (limit >= 1) spf[1] = 1;
  // Descending so the smallest prime writes last.
  const std::uint64_t root = isqrt(limit);
  for (auto it = primes.rbegin(); it != primes.rend(); ++it) {
    const std::uint64_t p = *it;
    if (p > root) {
      spf[p] = static_cast<std::uint32_t>(p);
      continue;
    }
    for (std::uint64_t j = p; j <= limit; j += p)
      spf[j] = static_cast<std::uint32_t>(p);
  }
  return spf;
}

}  // namespace

PrimeTablePtr primes_up_to(std::uint64_t limit, bool with_spf) {
  if (limit < 2) {
    throw EmptyRangeError("primes_up_to: limit " + std::to_string(limit) +
                          " < 2");
  }
  if (limit > kMaxInput) throw DomainError("primes_up_to: limit exceeds 2^63-1");
  if (with_spf && limit >= (std::uint64_t{1} << 32))
    throw CapabilityError("primes_up_to: spf table limited to 2^32");

  const std::uint64_t root = isqrt(limit);
  const std::vector<std::uint64_t> base = small_primes(root);

  std::vector<std::uint64_t> primes;
  if (limit > 100) {
    const double l = static_cast<double>(limit);
    primes.reserve(static_cast<std::size_t>(1.26 * l / std::log(l)) + 16);
  }
  primes.push_back(2);

  // Odd numbers only: index i in a segment stands for lo + 2i.
  const std::uint64_t seg_odds = kDefaultSegmentLen;
  std::vector<char> composite(seg_odds);
  for (std::uint64_t lo = 3; lo <= limit; lo += 2 * seg_odds) {
    const std::uint64_t hi = std::min(limit, lo + 2 * seg_odds - 1);
    const std::uint64_t n_odds = (hi - lo) / 2 + 1;
    std::fill(composite.begin(), composite.begin() + n_odds, 0);
    for (std::size_t k = 1; k < base.size(); ++k) {
      const std::uint64_t p = base[k];
      if (p * p > hi) break;
      std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
      if (start % 2 == 0) start += p;
      for (std::uint64_t j = (start - lo) / 2; j < n_odds; j += p)
        composite[j] = 1;
    }
    for (std::uint64_t j = 0; j < n_odds; ++j) {
      if (!composite[j]) primes.push_back(lo + 2 * j);
    }
  }

  std::vector<std::uint32_t> spf;
  if (with_spf) spf = spf_table(limit, primes);
  return std::make_shared<const PrimeTable>(limit, std::move(primes),
                                            std::move(spf));
}

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

namespace {

void require_sieving(const PrimeTable& sieving, std::uint64_t hi) {
  const std::uint64_t root = isqrt(hi);
  if (sieving.limit() < root) {
    throw CapabilityError("sieving table limit " +
                          std::to_string(sieving.limit()) + " < sqrt(" +
                          std::to_string(hi) + ")");
  }
}

}  // namespace

SpfSegment spf_segment(std::uint64_t base, std::uint64_t len,
                       const PrimeTable& sieving) {
  if (base == 0 || len == 0) throw EmptyRangeError("spf_segment: empty range");
  const std::uint64_t hi = base + len - 1;
  require_sieving(sieving, hi);
  SpfSegment seg{base, std::vector<std::uint64_t>(len, 0)};
  for (const std::uint64_t p : sieving.primes()) {
    if (p * p > hi) break;
    for (std::uint64_t n = (base + p - 1) / p * p; n <= hi; n += p) {
      auto& slot = seg.spf[n - base];
      if (slot == 0) slot = p;
    }
  }
  for (std::uint64_t i = 0; i < len; ++i) {
    if (seg.spf[i] == 0) seg.spf[i] = base + i;
  }
  return seg;
}

FactorSegment factor_segment(std::uint64_t base, std::uint64_t len,
                             const PrimeTable& sieving) {
  if (base == 0 || len == 0)
    throw EmptyRangeError("factor_segment: empty range");
  const std::uint64_t hi = base + len - 1;
  require_sieving(sieving, hi);

  FactorSegment seg;
  seg.values_.resize(len);
  std::vector<std::uint64_t> rem(len);
  std::vector<std::uint32_t> count(len, 0);
  for (std::uint64_t i = 0; i < len; ++i) seg.values_[i] = rem[i] = base + i;

  const std::size_t n_sieve = sieving.count_up_to(isqrt(hi));
  const auto sieve_primes = sieving.primes().first(n_sieve);

  // Pass 1: count sieving-prime factors and strip them off.
  for (const std::uint64_t p : sieve_primes) {
    for (std::uint64_t n = (base + p - 1) / p * p; n <= hi; n += p) {
      const std::uint64_t i = n - base;
      ++count[i];
      std::uint64_t r = rem[i] / p;
      while (r % p == 0) r /= p;
      rem[i] = r;
    }
  }

  seg.offsets_.assign(len + 1, 0);
  for (std::uint64_t i = 0; i < len; ++i) {
    seg.offsets_[i + 1] =
        seg.offsets_[i] + count[i] + (rem[i] > 1 ? 1u : 0u);
  }
  seg.primes_.resize(seg.offsets_[len]);

  // Pass 2: fill in ascending prime order; the residual cofactor (a prime
  // above sqrt(hi)) goes last.
  std::vector<std::uint32_t> fill(seg.offsets_.begin(), seg.offsets_.end() - 1);
  for (const std::uint64_t p : sieve_primes) {
    for (std::uint64_t n = (base + p - 1) / p * p; n <= hi; n += p) {
      seg.primes_[fill[n - base]++] = p;
    }
  }
  for (std::uint64_t i = 0; i < len; ++i) {
    if (rem[i] > 1) seg.primes_[fill[i]] = rem[i];
  }
  return seg;
}

void FactorSegment::keep_if(const std::function<bool(std::uint64_t)>& pred) {
  std::size_t out = 0;
  std::uint32_t write = 0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!pred(values_[i])) continue;
    const std::uint32_t b = offsets_[i];
    const std::uint32_t e = offsets_[i + 1];
    values_[out] = values_[i];
    offsets_[out] = write;
    for (std::uint32_t k = b; k < e; ++k) primes_[write++] = primes_[k];
    ++out;
  }
  offsets_[out] = write;
  values_.resize(out);
  offsets_.resize(out + 1);
  primes_.resize(write);
}

FactorStream::FactorStream(std::uint64_t lo, std::uint64_t hi,
                           std::uint64_t segment_len, PrimeTablePtr sieving)
    : lo_(lo), hi_(hi), segment_len_(segment_len), sieving_(std::move(sieving)) {
  if (lo == 0 || lo > hi) {
    throw EmptyRangeError("factor_stream: empty range [" + std::to_string(lo) +
                          ", " + std::to_string(hi) + "]");
  }
  if (segment_len == 0) throw DomainError("factor_stream: segment_len == 0");
  if (hi > kMaxInput) throw DomainError("factor_stream: hi exceeds 2^63-1");
  const std::uint64_t root = isqrt(hi);
  if (!sieving_ || sieving_->limit() < root) {
    sieving_ = primes_up_to(std::max<std::uint64_t>(root, 2));
  }
}

std::size_t FactorStream::segment_count() const {
  return static_cast<std::size_t>((hi_ - lo_) / segment_len_ + 1);
}

FactorSegment FactorStream::segment(std::size_t k) const {
  const std::uint64_t base = lo_ + static_cast<std::uint64_t>(k) * segment_len_;
  const std::uint64_t len = std::min(segment_len_, hi_ - base + 1);
  return factor_segment(base, len, *sieving_);
}

bool FactorStream::next(FactorSegment& out) {
  if (cursor_ >= segment_count()) return false;
  out = segment(cursor_++);
  return true;
}

std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n,
                                                  const PrimeTable& table) {
  std::vector<std::uint64_t> out;
  if (n == 0) throw DomainError("distinct_prime_factors: n must be >= 1");
  if (n == 1) return out;
  if (table.has_spf() && n <= table.limit()) {
    while (n > 1) {
      const std::uint64_t p = table.spf(n);
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
    return out;
  }
  const std::uint64_t lim = table.limit();
  if (lim < n && lim < isqrt(n)) {
    throw CapabilityError("distinct_prime_factors: table limit " +
                          std::to_string(lim) + " too small for " +
                          std::to_string(n));
  }
  for (const std::uint64_t p : table.primes()) {
    if (p > n / p) break;
    if (n % p == 0) {
      out.push_back(p);
      do n /= p;
      while (n % p == 0);
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::size_t partition_count(const FactorStream& stream, unsigned workers) {
  return std::max<std::size_t>(
      1, std::min<std::size_t>(std::max(1u, workers), stream.segment_count()));
}

void parallel_segments(
    const FactorStream& stream, unsigned workers,
    const std::function<void(std::size_t, const FactorSegment&)>& fn) {
  const std::size_t n_seg = stream.segment_count();
  const std::size_t parts = partition_count(stream, workers);
  auto run_part = [&](std::size_t part) {
    const std::size_t b = n_seg * part / parts;
    const std::size_t e = n_seg * (part + 1) / parts;
    for (std::size_t k = b; k < e; ++k) fn(part, stream.segment(k));
  };
  if (parts == 1) {
    run_part(0);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(parts);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (std::size_t p = 0; p < parts; ++p) {
    threads.emplace_back([&, p] {
      try {
        run_part(p);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace ekac
