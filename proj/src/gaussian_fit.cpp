#include "ekac/gaussian_fit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "ekac/error.hpp"
#include "ekac/kernels.hpp"

namespace ekac {

namespace {

constexpr double kSketchLo = -12.0;
constexpr double kSketchHi = 12.0;
constexpr std::size_t kSketchBins = 1 << 18;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double phi(double u) { return 0.5 * std::erfc(-u / std::sqrt(2.0)); }

Ecdf::Ecdf(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw DomainError("Ecdf: empty sample");
  std::sort(values_.begin(), values_.end());
}

double Ecdf::operator()(double u) const {
  const auto it = std::upper_bound(values_.begin(), values_.end(), u);
  return static_cast<double>(it - values_.begin()) / static_cast<double>(n());
}

double ks_distance(const Ecdf& ecdf) {
  const auto v = ecdf.values();
  const double n = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double f = phi(v[i]);
    const double hi = static_cast<double>(i + 1) / n;
    const double lo = static_cast<double>(i) / n;
    d = std::max({d, std::abs(hi - f), std::abs(lo - f)});
  }
  return d;
}

Histogram::Histogram(double lo, double hi, std::size_t bins)
    : lo_(lo), hi_(hi), counts_(bins, 0) {
  if (bins == 0 || !(hi > lo)) throw DomainError("Histogram: bad range");
}

std::size_t Histogram::index(double v) const {
  if (!(v > lo_)) return 0;  // also NaN
  if (v >= hi_) return counts_.size() - 1;
  const auto i = static_cast<std::size_t>((v - lo_) / (hi_ - lo_) *
                                          static_cast<double>(counts_.size()));
  return std::min(i, counts_.size() - 1);
}

void Histogram::add(double v) { ++counts_[index(v)]; }

void Histogram::merge(const Histogram& other) {
  if (other.counts_.size() != counts_.size() || other.lo_ != lo_ || other.hi_ != hi_) {
    throw ConfigMismatchError("Histogram: different binning");
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
}

double Histogram::bin_lo(std::size_t i) const {
  return lo_ + (hi_ - lo_) * static_cast<double>(i) / static_cast<double>(counts_.size());
}

double Histogram::bin_hi(std::size_t i) const { return bin_lo(i + 1); }

std::uint64_t Histogram::total() const {
  std::uint64_t t = 0;
  for (const auto c : counts_) t += c;
  return t;
}

std::string FitReport::histogram_csv() const {
  std::ostringstream out;
  out << "bin,lo,hi,count\n";
  for (std::size_t i = 0; i < histogram.bins(); ++i) {
    out << i << ',' << fmt17(histogram.bin_lo(i)) << ','
        << fmt17(histogram.bin_hi(i)) << ',' << histogram.counts()[i] << '\n';
  }
  return out.str();
}

FitAccumulator::FitAccumulator(double center, double scale,
                               std::uint64_t exact_limit)
    : center_(center), scale_(scale), exact_limit_(exact_limit) {
  if (!(scale > 0.0)) throw ZeroVarianceError("FitAccumulator: scale must be positive");
}

void FitAccumulator::add_normalized(double v) {
  ++n_;
  hist_.add(v);
  double p = 1.0;
  for (std::size_t k = 0; k < 4; ++k) {
    p *= v;
    kernels::CompensatedSum s{sums_[k], comps_[k]};
    s.add(p);
    sums_[k] = s.sum;
    comps_[k] = s.comp;
  }
  if (sketch_.empty()) {
    values_.push_back(v);
    if (values_.size() > exact_limit_) to_sketch();
  } else {
    double pos = (v - kSketchLo) / (kSketchHi - kSketchLo) * kSketchBins;
    std::size_t i = pos < 0 ? 0 : (pos >= kSketchBins ? kSketchBins + 1
                                                      : static_cast<std::size_t>(pos) + 1);
    ++sketch_[i];
  }
}

void FitAccumulator::add(double raw_value) {
  add_normalized((raw_value - center_) / scale_);
}

void FitAccumulator::to_sketch() {
  sketch_.assign(kSketchBins + 2, 0);
  for (const double v : values_) {
    double pos = (v - kSketchLo) / (kSketchHi - kSketchLo) * kSketchBins;
    std::size_t i = pos < 0 ? 0 : (pos >= kSketchBins ? kSketchBins + 1
                                                      : static_cast<std::size_t>(pos) + 1);
    ++sketch_[i];
  }
  values_.clear();
  values_.shrink_to_fit();
}

void FitAccumulator::merge(FitAccumulator&& other) {
  if (other.center_ != center_ || other.scale_ != scale_) {
    throw ConfigMismatchError("FitAccumulator: different normalization");
  }
  n_ += other.n_;
  hist_.merge(other.hist_);
  for (std::size_t k = 0; k < 4; ++k) {
    kernels::CompensatedSum s{sums_[k], comps_[k]};
    s.merge({other.sums_[k], other.comps_[k]});
    sums_[k] = s.sum;
    comps_[k] = s.comp;
  }
  if (!other.sketch_.empty() && sketch_.empty()) to_sketch();
  if (sketch_.empty()) {
    values_.insert(values_.end(), other.values_.begin(), other.values_.end());
    if (values_.size() > exact_limit_) to_sketch();
  } else {
    if (other.sketch_.empty()) other.to_sketch();
    for (std::size_t i = 0; i < sketch_.size(); ++i) sketch_[i] += other.sketch_[i];
  }
}

FitReport FitAccumulator::finish() && {
  if (n_ == 0) throw DomainError("FitAccumulator: no values");
  FitReport rep;
  rep.n = n_;
  rep.histogram = hist_;
  for (std::size_t k = 0; k < 4; ++k) {
    rep.sample_moments[k] = (sums_[k] + comps_[k]) / static_cast<double>(n_);
  }
  if (sketch_.empty()) {
    rep.ks_distance = ks_distance(Ecdf(std::move(values_)));
    return rep;
  }
  rep.approximate = true;
  const double n = static_cast<double>(n_);
  const double width = (kSketchHi - kSketchLo) / kSketchBins;
  std::uint64_t before = 0;
  double d = 0.0;
  for (std::size_t i = 0; i < sketch_.size(); ++i) {
    if (sketch_[i] == 0) continue;
    double at;
    if (i == 0) {
      at = kSketchLo;
    } else if (i == sketch_.size() - 1) {
      at = kSketchHi;
    } else {
      at = kSketchLo + (static_cast<double>(i - 1) + 0.5) * width;
    }
    const double f = phi(at);
    const std::uint64_t after = before + sketch_[i];
    d = std::max({d, std::abs(static_cast<double>(before) / n - f),
                  std::abs(static_cast<double>(after) / n - f)});
    before = after;
  }
  rep.ks_distance = d;
  return rep;
}

}  // namespace ekac
