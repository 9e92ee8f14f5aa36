#include "ekac/moments.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "ekac/error.hpp"
#include "ekac/kernels.hpp"

namespace ekac {

namespace {

constexpr std::size_t kBatch = 1024;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

mpz_class gaussian_moment_C_exact(unsigned m) {
  if (m % 2 != 0) return 0;
  mpz_class out = 1;
  for (unsigned k = m; k > 1; k -= 2) out *= (k - 1);
  return out;
}

double gaussian_moment_C(unsigned m) {
  if (m % 2 != 0) return 0.0;
  double out = 1.0;
  for (unsigned k = m; k > 1; k -= 2) out *= static_cast<double>(k - 1);
  return out;
}

QEvaluator::QEvaluator(PolyQ q, std::vector<StronglyAdditive> gs,
                       PrimeWindow window, bool truncate)
    : q_(std::move(q)),
      gs_(std::move(gs)),
      window_(std::move(window)),
      truncate_(truncate) {
  if (q_.num_vars() != gs_.size()) {
    throw DomainError("QEvaluator: Q has " + std::to_string(q_.num_vars()) +
                      " variables but " + std::to_string(gs_.size()) +
                      " functions were given");
  }
}

double QEvaluator::operator()(std::span<const std::uint64_t> factors) const {
  double vals[16];
  std::vector<double> heap;
  double* v = vals;
  if (gs_.size() > 16) {
    heap.resize(gs_.size());
    v = heap.data();
  }
  for (std::size_t j = 0; j < gs_.size(); ++j) {
    v[j] = truncate_ ? gs_[j].eval_truncated(factors, window_)
                     : gs_[j].eval_full(factors);
  }
  return q_.eval(std::span<const double>(v, gs_.size()));
}

MomentAccumulator::MomentAccumulator(unsigned m_max, double a_q,
                                     std::string fingerprint)
    : m_max_(m_max), a_q_(a_q), fingerprint_(std::move(fingerprint)) {
  if (m_max < 2 || m_max % 2 != 0) {
    throw DomainError("MomentAccumulator: m_max must be even and >= 2");
  }
  if (m_max > 64) throw DomainError("MomentAccumulator: m_max above 64");
  sums_.assign(m_max + 1, 0.0);
  comps_.assign(m_max + 1, 0.0);
  pending_.reserve(kBatch);
}

void MomentAccumulator::flush() {
  if (pending_.empty()) return;
  kernels::dispatch().power_sums(pending_, sums_, comps_);
  count_ += pending_.size();
  pending_.clear();
}

void MomentAccumulator::accumulate(double value) {
  pending_.push_back(value - a_q_);
  if (pending_.size() == kBatch) flush();
}

void MomentAccumulator::accumulate_batch(std::span<const double> values) {
  for (const double v : values) accumulate(v);
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
  if (other.m_max_ != m_max_ || other.a_q_ != a_q_ ||
      other.fingerprint_ != fingerprint_) {
    throw ConfigMismatchError("MomentAccumulator: cannot merge accumulators "
                              "built for different configurations");
  }
  flush();
  MomentAccumulator copy = other;
  copy.flush();
  count_ += copy.count_;
  for (unsigned m = 1; m <= m_max_; ++m) {
    kernels::CompensatedSum s{sums_[m], comps_[m]};
    s.merge({copy.sums_[m], copy.comps_[m]});
    sums_[m] = s.sum;
    comps_[m] = s.comp;
  }
}

double MomentAccumulator::power_sum(unsigned m) const {
  if (m > m_max_) throw DomainError("MomentAccumulator: m above m_max");
  if (m == 0) return static_cast<double>(count());
  if (pending_.empty()) return sums_[m] + comps_[m];
  std::vector<double> s = sums_;
  std::vector<double> c = comps_;
  kernels::dispatch().power_sums(pending_, s, c);
  return s[m] + c[m];
}

std::vector<double> MomentAccumulator::power_sums() const {
  std::vector<double> s = sums_;
  std::vector<double> c = comps_;
  if (!pending_.empty()) kernels::dispatch().power_sums(pending_, s, c);
  std::vector<double> out(m_max_ + 1);
  out[0] = static_cast<double>(count());
  for (unsigned m = 1; m <= m_max_; ++m) out[m] = s[m] + c[m];
  return out;
}

MomentReport report(const MomentAccumulator& acc, const StatBundle& bundle) {
  if (!(bundle.b_q > 0.0)) {
    throw ZeroVarianceError("moments report: B_Q is zero");
  }
  MomentReport rep;
  rep.count = acc.count();
  rep.a_q = bundle.a_q;
  rep.b_q = bundle.b_q;
  const std::vector<double> sums = acc.power_sums();
  const double n = static_cast<double>(rep.count);
  for (unsigned m = 0; m <= acc.m_max(); ++m) {
    MomentRow row;
    row.m = m;
    row.moment = sums[m];
    row.c_m = gaussian_moment_C(m);
    row.ratio = m == 0 ? 1.0 : sums[m] / (n * std::pow(bundle.b_q, m));
    row.predicted = row.c_m;
    rep.rows.push_back(row);
  }
  return rep;
}

std::string MomentReport::to_csv() const {
  std::ostringstream out;
  out << "m,M_m,C_m,ratio,predicted\n";
  for (const MomentRow& r : rows) {
    out << r.m << ',' << fmt17(r.moment) << ',' << fmt17(r.c_m) << ','
        << fmt17(r.ratio) << ',' << fmt17(r.predicted) << '\n';
  }
  return out.str();
}

}  // namespace ekac
