#include "ekac/additive.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <unordered_map>

#include "ekac/error.hpp"
#include "json.hpp"

namespace ekac {

PrimeWindow::PrimeWindow(PrimeTablePtr table, double z)
    : table_(std::move(table)), z_(z), count_(0) {
  if (!table_) throw CapabilityError("PrimeWindow: no prime table");
  if (z >= 2.0 && static_cast<double>(table_->limit()) < std::floor(z)) {
    throw CapabilityError("PrimeWindow: table limit " +
                          std::to_string(table_->limit()) + " below z = " +
                          std::to_string(z));
  }
  if (z >= 2.0) {
    count_ = table_->count_up_to(static_cast<std::uint64_t>(std::floor(z)));
  }
}

bool ResidueRule::matches(std::uint64_t p) const {
  const std::uint64_t r = p % modulus;
  return std::find(residues.begin(), residues.end(), r) != residues.end();
}

struct StronglyAdditive::Impl {
  std::string name;
  double bound = 1.0;
  ValueFn fn;
  bool memoize = false;

  mutable std::shared_mutex memo_mutex;
  mutable std::unordered_map<std::uint64_t, double> memo;

  double compute(std::uint64_t p) const {
    const double v = fn(p);
    if (!(v >= 0.0) || v > bound) {
      throw DomainError("additive function '" + name + "': g(" +
                        std::to_string(p) + ") = " + std::to_string(v) +
                        " outside [0, " + std::to_string(bound) + "]");
    }
    return v;
  }

  double at(std::uint64_t p) const {
    if (!memoize) return compute(p);
    {
      std::shared_lock lock(memo_mutex);
      if (auto it = memo.find(p); it != memo.end()) return it->second;
    }
    const double v = compute(p);
    std::unique_lock lock(memo_mutex);
    return memo.emplace(p, v).first->second;  // first insert wins
  }
};

namespace {

std::shared_ptr<StronglyAdditive::Impl> make_impl(std::string name,
                                                  double bound,
                                                  StronglyAdditive::ValueFn fn,
                                                  bool memoize) {
  if (!(bound >= 0.0)) throw DomainError("additive function bound must be >= 0");
  auto impl = std::make_shared<StronglyAdditive::Impl>();
  impl->name = std::move(name);
  impl->bound = bound;
  impl->fn = std::move(fn);
  impl->memoize = memoize;
  return impl;
}

std::string format_value(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

StronglyAdditive StronglyAdditive::omega() {
  return StronglyAdditive(
      make_impl("omega", 1.0, [](std::uint64_t) { return 1.0; }, false));
}

StronglyAdditive StronglyAdditive::omega_class(
    std::string label, std::function<bool(std::uint64_t)> pred) {
  return StronglyAdditive(make_impl(
      std::move(label), 1.0,
      [pred = std::move(pred)](std::uint64_t p) { return pred(p) ? 1.0 : 0.0; },
      false));
}

StronglyAdditive StronglyAdditive::residue_class(
    std::uint64_t modulus, std::vector<std::uint64_t> residues) {
  if (modulus == 0) throw DomainError("residue_class: modulus must be positive");
  std::string label = "omega[p%" + std::to_string(modulus) + " in {";
  for (std::size_t i = 0; i < residues.size(); ++i) {
    residues[i] %= modulus;
    label += (i ? "," : "") + std::to_string(residues[i]);
  }
  label += "}]";
  ResidueRule rule{modulus, std::move(residues), 1.0};
  return omega_class(std::move(label), [rule = std::move(rule)](std::uint64_t p) {
    return rule.matches(p);
  });
}

StronglyAdditive StronglyAdditive::constant(double c) {
  if (!(c >= 0.0)) throw DomainError("constant additive function must be >= 0");
  return StronglyAdditive(make_impl("const(" + format_value(c) + ")", c,
                                    [c](std::uint64_t) { return c; }, false));
}

StronglyAdditive StronglyAdditive::from_table(
    std::string name, double bound, std::map<std::uint64_t, double> values,
    std::vector<ResidueRule> rules, double fallback) {
  auto check = [&](double v, const std::string& where) {
    if (!(v >= 0.0)) {
      throw DomainError("additive function '" + name + "': negative value " +
                        format_value(v) + " at " + where);
    }
    if (v > bound) {
      throw DomainError("additive function '" + name + "': value " +
                        format_value(v) + " at " + where + " exceeds bound " +
                        format_value(bound));
    }
  };
  for (const auto& [p, v] : values) check(v, "p=" + std::to_string(p));
  for (const auto& r : rules) {
    if (r.modulus == 0) throw DomainError("residue rule with modulus 0");
    check(r.value, "class mod " + std::to_string(r.modulus));
  }
  check(fallback, "default");
  auto fn = [values = std::move(values), rules = std::move(rules),
             fallback](std::uint64_t p) {
    if (auto it = values.find(p); it != values.end()) return it->second;
    for (const auto& r : rules) {
      if (r.matches(p)) return r.value;
    }
    return fallback;
  };
  return StronglyAdditive(make_impl(std::move(name), bound, std::move(fn), false));
}

StronglyAdditive StronglyAdditive::from_callback(std::string name, double bound,
                                                 ValueFn fn) {
  return StronglyAdditive(make_impl(std::move(name), bound, std::move(fn), true));
}

StronglyAdditive StronglyAdditive::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("additive function file: ") + e.what());
  }
  try {
    const std::string name = j.value("name", std::string("custom"));
    const double bound = j.at("bound").get<double>();
    const double fallback = j.value("default", 0.0);
    std::map<std::uint64_t, double> values;
    if (j.contains("primes")) {
      for (const auto& [key, val] : j.at("primes").items()) {
        values[std::stoull(key)] = val.get<double>();
      }
    }
    std::vector<ResidueRule> rules;
    if (j.contains("classes")) {
      for (const auto& c : j.at("classes")) {
        ResidueRule r;
        r.modulus = c.at("modulus").get<std::uint64_t>();
        r.residues = c.at("residues").get<std::vector<std::uint64_t>>();
        r.value = c.value("value", 1.0);
        rules.push_back(std::move(r));
      }
    }
    return from_table(name, bound, std::move(values), std::move(rules), fallback);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("additive function file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("additive function file: bad prime key"));
  }
}

StronglyAdditive StronglyAdditive::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open additive function file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

const std::string& StronglyAdditive::name() const { return impl_->name; }
double StronglyAdditive::bound() const { return impl_->bound; }
double StronglyAdditive::at(std::uint64_t p) const { return impl_->at(p); }

double StronglyAdditive::eval_full(std::span<const std::uint64_t> factors) const {
  double total = 0.0;
  for (const std::uint64_t p : factors) total += at(p);
  return total;
}

double StronglyAdditive::eval_truncated(std::span<const std::uint64_t> factors,
                                        const PrimeWindow& window) const {
  double total = 0.0;
  for (const std::uint64_t p : factors) {
    if (window.contains(p)) total += at(p);
  }
  return total;
}

double centered_F(const StronglyAdditive& g,
                  std::span<const std::uint64_t> a_factors,
                  const PrimeWindow& window, double mean) {
  return g.eval_truncated(a_factors, window) - mean;
}

double centered_F_expanded(const StronglyAdditive& g,
                           std::span<const std::uint64_t> a_factors,
                           const PrimeWindow& window,
                           const DensityModel& model) {
  double total = 0.0;
  for (const std::uint64_t p : window.primes()) {
    const bool divides =
        std::find(a_factors.begin(), a_factors.end(), p) != a_factors.end();
    const double hp = model.h_over_p(p);
    total += g.at(p) * (divides ? 1.0 - hp : -hp);
  }
  return total;
}

}  // namespace ekac
