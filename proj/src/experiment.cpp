#include "ekac/experiment.hpp"

#include <chrono>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "ekac/error.hpp"
#include "ekac/kernels.hpp"

namespace ekac {

namespace {

using nlohmann::json;

std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1;
  int col = 1;
  const std::size_t end = std::min(byte == 0 ? 0 : byte - 1, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

const char* z_policy_name(ZPolicy p) {
  switch (p) {
    case ZPolicy::kAuto:
      return "auto";
    case ZPolicy::kExplicit:
      return "explicit";
    case ZPolicy::kFull:
      return "full";
  }
  return "auto";
}

json function_to_json(const FunctionSpec& f) {
  json j;
  j["kind"] = f.kind;
  if (f.kind == "residue_class") {
    j["modulus"] = f.modulus;
    j["residues"] = f.residues;
  } else if (f.kind == "constant") {
    j["value"] = f.value;
  } else if (f.kind == "file") {
    j["path"] = f.path;
  }
  return j;
}

FunctionSpec function_from_json(const json& j) {
  FunctionSpec f;
  f.kind = j.at("kind").get<std::string>();
  if (f.kind == "omega") {
  } else if (f.kind == "residue_class") {
    f.modulus = j.at("modulus").get<std::uint64_t>();
    f.residues = j.at("residues").get<std::vector<std::uint64_t>>();
    if (f.modulus == 0) throw ConfigError("residue_class: modulus must be positive");
  } else if (f.kind == "constant") {
    f.value = j.at("value").get<double>();
  } else if (f.kind == "file") {
    f.path = j.at("path").get<std::string>();
  } else {
    throw ConfigError("unknown function kind '" + f.kind + "'");
  }
  return f;
}

StronglyAdditive build_function(const FunctionSpec& f) {
  if (f.kind == "omega") return StronglyAdditive::omega();
  if (f.kind == "residue_class") return StronglyAdditive::residue_class(f.modulus, f.residues);
  if (f.kind == "constant") return StronglyAdditive::constant(f.value);
  return StronglyAdditive::load_file(f.path);
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json bundle_json(const StatBundle& b) {
  json k = json::array();
  for (std::size_t i = 0; i < b.kappa.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < b.kappa.size(); ++j) row.push_back(b.kappa(i, j));
    k.push_back(row);
  }
  return {{"z", b.z},           {"primes", b.window_size}, {"mu", b.means},
          {"kappa", k},         {"mu_one", b.mu_one},      {"frak_M", b.frak_m},
          {"frak_K", b.frak_k}, {"A_Q", b.a_q},            {"B_Q", b.b_q}};
}

json provenance(const ExperimentContext& ctx) {
  return {{"config_hash", config_hash(ctx.config())},
          {"seed", ctx.config().seed},
          {"name", ctx.config().name}};
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    throw ParseError("config: " + std::string(e.what()), line, col);
  }
  ExperimentConfig c;
  try {
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    c.name = j.value("name", c.name);
    const json& in = j.at("input");
    const std::string kind = in.at("kind").get<std::string>();
    if (kind == "all_integers") {
      c.shifted = false;
    } else if (kind == "shifted_primes") {
      c.shifted = true;
      c.shift = in.at("shift").get<std::int64_t>();
    } else {
      throw ConfigError("config: unknown input kind '" + kind + "'");
    }
    c.x = in.at("x").get<std::uint64_t>();
    c.polynomial = j.value("polynomial", c.polynomial);
    if (j.contains("functions")) {
      c.functions.clear();
      for (const json& f : j.at("functions")) c.functions.push_back(function_from_json(f));
    }
    if (j.contains("z")) {
      const json& z = j.at("z");
      const std::string policy = z.at("policy").get<std::string>();
      if (policy == "auto") {
        c.z_policy = ZPolicy::kAuto;
      } else if (policy == "full") {
        c.z_policy = ZPolicy::kFull;
      } else if (policy == "explicit") {
        c.z_policy = ZPolicy::kExplicit;
        c.z_value = z.at("value").get<double>();
      } else {
        throw ConfigError("config: unknown z policy '" + policy + "'");
      }
    }
    c.m_max = j.value("m_max", c.m_max);
    c.seed = j.value("seed", c.seed);
    c.segment_len = j.value("segment_len", c.segment_len);
    if (j.contains("outputs")) {
      const json& o = j.at("outputs");
      c.moments_csv = o.value("moments", c.moments_csv);
      c.fit_json = o.value("fit", c.fit_json);
      c.histogram_csv = o.value("histogram", c.histogram_csv);
      c.stats_json = o.value("stats", c.stats_json);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (c.x < 16) throw ConfigError("config: x must be at least 16");
  if (c.m_max < 2 || c.m_max % 2 != 0) throw ConfigError("config: m_max must be even and >= 2");
  if (c.functions.empty()) throw ConfigError("config: no functions");
  if (c.shifted && c.shift == 0) throw ConfigError("config: shift must be nonzero");
  if (c.z_policy == ZPolicy::kExplicit && !(c.z_value >= 2.0 && c.z_value <= static_cast<double>(c.x))) {
    throw ConfigError("config: explicit z must lie in [2, x]");
  }
  if (c.segment_len == 0) throw ConfigError("config: segment_len must be positive");
  try {
    const PolyQ q = PolyQ::parse(c.polynomial, c.functions.size());
    if (q.num_vars() != c.functions.size()) {
      throw ConfigError("config: polynomial uses " + std::to_string(q.num_vars()) +
                        " variables but " + std::to_string(c.functions.size()) +
                        " functions are given");
    }
  } catch (const ParseError& e) {
    throw ConfigError(std::string("config: polynomial: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("config: polynomial: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  json in = {{"kind", c.shifted ? "shifted_primes" : "all_integers"}, {"x", c.x}};
  if (c.shifted) in["shift"] = c.shift;
  j["input"] = in;
  j["polynomial"] = c.polynomial;
  json fs = json::array();
  for (const FunctionSpec& f : c.functions) fs.push_back(function_to_json(f));
  j["functions"] = fs;
  json z = {{"policy", z_policy_name(c.z_policy)}};
  if (c.z_policy == ZPolicy::kExplicit) z["value"] = c.z_value;
  j["z"] = z;
  j["m_max"] = c.m_max;
  j["seed"] = c.seed;
  j["segment_len"] = c.segment_len;
  j["outputs"] = {{"moments", c.moments_csv},
                  {"fit", c.fit_json},
                  {"histogram", c.histogram_csv},
                  {"stats", c.stats_json}};
  return j.dump(2) + "\n";
}

std::string config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : serialize_config(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::string> preset_names() {
  return {"classical-omega",        "cor1-omega-square",     "cor1-omega-cube",
          "ex2-product-classes",    "ex3-linear-combination", "thm15-shifted"};
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  const FunctionSpec mod4{"residue_class", 4, {1}, 1.0, ""};
  const FunctionSpec mod3{"residue_class", 3, {1}, 1.0, ""};
  if (name == "classical-omega") {
    c.polynomial = "T";
  } else if (name == "cor1-omega-square") {
    c.polynomial = "T^2";
  } else if (name == "cor1-omega-cube") {
    c.polynomial = "T^3";
  } else if (name == "ex2-product-classes") {
    c.polynomial = "T1*T2";
    c.functions = {mod4, mod3};
  } else if (name == "ex3-linear-combination") {
    c.polynomial = "2*T1^2 + 3*T2^2";
    c.functions = {mod4, mod3};
  } else if (name == "thm15-shifted") {
    c.shifted = true;
    c.shift = 1;
    c.polynomial = "T";
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  return c;
}

unsigned resolve_workers(unsigned flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("EKAC_WORKERS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ExperimentContext::ExperimentContext(const ExperimentConfig& config)
    : config_(config),
      set_(config.shifted ? InputSet::shifted_primes(config.x, config.shift)
                          : InputSet::all_integers(config.x)),
      model_(DensityModel::for_set(set_)),
      table_(primes_up_to(config.x)),
      q_(PolyQ::parse(config.polynomial, config.functions.size())) {
  for (const FunctionSpec& f : config.functions) gs_.push_back(build_function(f));
  cache_ = std::make_shared<PrimeSumCache>(gs_, model_, table_, config.x);
  const double x = static_cast<double>(config.x);
  switch (config.z_policy) {
    case ZPolicy::kAuto:
      z_ = choose_z(x, *cache_);
      break;
    case ZPolicy::kExplicit:
      z_ = config.z_value;
      break;
    case ZPolicy::kFull:
      z_ = x;
      break;
  }
  big_x_ = ekac::big_x(set_);
  bundle_z_ = cache_->bundle(q_, z_);
  bundle_x_ = cache_->bundle(q_, x);
}

std::string ExperimentContext::fingerprint() const {
  return config_hash(config_) + "@" + fmt17(z_);
}

ExperimentResult run_experiment(const ExperimentContext& ctx, unsigned workers) {
  const auto start = std::chrono::steady_clock::now();
  const ExperimentConfig& cfg = ctx.config();
  ElementStream stream(ctx.set(), ctx.table(), cfg.segment_len);
  const QEvaluator truncated(ctx.q(), ctx.functions(), PrimeWindow(ctx.table(), ctx.z()));
  const QEvaluator full(ctx.q(), ctx.functions(),
                        PrimeWindow(ctx.table(), static_cast<double>(cfg.x)), false);
  const StatBundle& bz = ctx.bundle_z();
  const StatBundle& bx = ctx.bundle_x();
  if (!(bx.b_q > 0.0)) throw ZeroVarianceError("experiment: B_Q(P(x)) is zero");

  const std::size_t parts = stream.partitions(workers);
  std::vector<MomentAccumulator> moments(
      parts, MomentAccumulator(cfg.m_max, bz.a_q, ctx.fingerprint()));
  std::vector<FitAccumulator> fits(parts, FitAccumulator(bx.a_q, bx.b_q));
  std::vector<kernels::CompensatedSum> full_sums(parts);

  stream.parallel(workers, [&](std::size_t part, const FactorSegment& seg) {
    MomentAccumulator& m = moments[part];
    FitAccumulator& f = fits[part];
    kernels::CompensatedSum& s = full_sums[part];
    for (std::size_t i = 0; i < seg.size(); ++i) {
      const FactorRecord r = seg[i];
      m.accumulate(truncated(r));
      const double v = full(r);
      f.add(v);
      s.add(v);
    }
  });

  ExperimentResult res;
  res.workers = workers;
  res.moments = moments[0];
  kernels::CompensatedSum total = full_sums[0];
  for (std::size_t p = 1; p < parts; ++p) {
    res.moments.merge(moments[p]);
    fits[0].merge(std::move(fits[p]));
    total.merge(full_sums[p]);
  }
  res.count = res.moments.count();
  if (res.count == 0) throw EmptyRangeError("experiment: input set is empty");
  res.sample_mean_full = total.value() / static_cast<double>(res.count);
  if (bz.b_q > 0.0) res.moment_report = report(res.moments, bz);
  res.fit = std::move(fits[0]).finish();
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

double remainder_ratio_k1(const ExperimentContext& ctx, unsigned workers) {
  const PrimeWindow window(ctx.table(), ctx.z());
  const auto primes = window.primes();
  std::vector<std::uint64_t> counts(primes.size(), 0);
  std::uint64_t total = 0;
  if (!ctx.set().is_shifted()) {
    total = ctx.config().x;
    for (std::size_t i = 0; i < primes.size(); ++i) counts[i] = ctx.config().x / primes[i];
  } else {
    ElementStream stream(ctx.set(), ctx.table(), ctx.config().segment_len);
    const std::size_t parts = stream.partitions(workers);
    std::vector<std::vector<std::uint64_t>> local(parts, std::vector<std::uint64_t>(primes.size(), 0));
    std::vector<std::uint64_t> local_total(parts, 0);
    stream.parallel(workers, [&](std::size_t part, const FactorSegment& seg) {
      local_total[part] += seg.size();
      for (std::size_t i = 0; i < seg.size(); ++i) {
        for (const std::uint64_t p : seg[i].primes) {
          if (!window.contains(p)) continue;
          const auto it = std::lower_bound(primes.begin(), primes.end(), p);
          ++local[part][static_cast<std::size_t>(it - primes.begin())];
        }
      }
    });
    for (std::size_t part = 0; part < parts; ++part) {
      total += local_total[part];
      for (std::size_t i = 0; i < primes.size(); ++i) counts[i] += local[part][i];
    }
  }
  const double x = ctx.big_x();
  kernels::CompensatedSum sum;
  sum.add(std::abs(static_cast<double>(total) - x));
  for (std::size_t i = 0; i < primes.size(); ++i) {
    sum.add(std::abs(static_cast<double>(counts[i]) - ctx.model().h_over_p(primes[i]) * x));
  }
  const StatBundle& b = ctx.bundle_z();
  return b.mu_one * sum.value() / (x / std::sqrt(b.frak_k));
}

std::string stats_json(const ExperimentContext& ctx, double eta,
                       std::optional<double> remainder_ratio) {
  json j = provenance(ctx);
  j["input"] = ctx.set().describe();
  j["polynomial"] = ctx.q().to_string();
  j["X"] = ctx.big_x();
  j["z"] = ctx.z();
  j["window_z"] = bundle_json(ctx.bundle_z());
  j["window_x"] = bundle_json(ctx.bundle_x());
  j["diagnostics"] = {{"eta_slope", eta}};
  if (remainder_ratio) j["diagnostics"]["remainder_ratio_k1"] = *remainder_ratio;
  j["kernel_isa"] = std::string(kernels::isa_name(kernels::active_isa()));
  return j.dump(2) + "\n";
}

std::string fit_json(const ExperimentContext& ctx, const ExperimentResult& r) {
  json j = provenance(ctx);
  j["n"] = r.fit.n;
  j["ks_distance"] = r.fit.ks_distance;
  j["approximate"] = r.fit.approximate;
  j["center"] = ctx.bundle_x().a_q;
  j["scale"] = ctx.bundle_x().b_q;
  j["sample_moments"] = r.fit.sample_moments;
  j["sample_mean_full"] = r.sample_mean_full;
  j["workers"] = r.workers;
  return j.dump(2) + "\n";
}

std::string moments_csv(const ExperimentContext& ctx, const ExperimentResult& r) {
  return "# config_hash=" + config_hash(ctx.config()) +
         " seed=" + std::to_string(ctx.config().seed) + " z=" + fmt17(ctx.z()) + "\n" +
         r.moment_report.to_csv();
}

std::string histogram_csv(const ExperimentContext& ctx, const ExperimentResult& r) {
  return "# config_hash=" + config_hash(ctx.config()) +
         " seed=" + std::to_string(ctx.config().seed) + "\n" + r.fit.histogram_csv();
}

}  // namespace ekac
