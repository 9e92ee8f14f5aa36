#pragma once

// Experiment configuration, presets, and the single-pass runner shared by the
// CLI and the acceptance suite.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ekac/additive.hpp"
#include "ekac/gaussian_fit.hpp"
#include "ekac/input_model.hpp"
#include "ekac/moments.hpp"
#include "ekac/poly.hpp"
#include "ekac/stats.hpp"

namespace ekac {

struct FunctionSpec {
  /// "omega", "residue_class", "constant" or "file".
  std::string kind = "omega";
  std::uint64_t modulus = 1;
  std::vector<std::uint64_t> residues;
  double value = 1.0;
  std::string path;

  bool operator==(const FunctionSpec&) const = default;
};

enum class ZPolicy { kAuto, kExplicit, kFull };

struct ExperimentConfig {
  std::string name = "experiment";
  bool shifted = false;
  std::uint64_t x = 1'000'000;
  std::int64_t shift = 0;
  std::string polynomial = "T";
  std::vector<FunctionSpec> functions{FunctionSpec{}};
  ZPolicy z_policy = ZPolicy::kAuto;
  double z_value = 0.0;
  unsigned m_max = 8;
  std::uint64_t seed = 1;
  std::uint64_t segment_len = kDefaultSegmentLen;
  std::string moments_csv = "moments.csv";
  std::string fit_json = "fit.json";
  std::string histogram_csv = "histogram.csv";
  std::string stats_json = "stats.json";

  bool operator==(const ExperimentConfig&) const = default;
};

/// Throws ParseError (with line/column) on malformed text and ConfigError on
/// invalid content.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& config);
/// FNV-1a 64 of the canonical serialization, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

std::vector<std::string> preset_names();
/// Throws ConfigError for an unknown name.
ExperimentConfig preset(const std::string& name);

/// Flag value if nonzero, else EKAC_WORKERS, else hardware concurrency.
unsigned resolve_workers(unsigned flag);

/// Everything derived from a config before the pass over A.
class ExperimentContext {
 public:
  explicit ExperimentContext(const ExperimentConfig& config);

  const ExperimentConfig& config() const { return config_; }
  const InputSet& set() const { return set_; }
  const DensityModel& model() const { return model_; }
  const PrimeTablePtr& table() const { return table_; }
  const PolyQ& q() const { return q_; }
  const std::vector<StronglyAdditive>& functions() const { return gs_; }
  const PrimeSumCache& cache() const { return *cache_; }
  double z() const { return z_; }
  double big_x() const { return big_x_; }
  /// Statistics over P(z) (moments) and P(x) (normalization).
  const StatBundle& bundle_z() const { return bundle_z_; }
  const StatBundle& bundle_x() const { return bundle_x_; }
  std::string fingerprint() const;

 private:
  ExperimentConfig config_;
  InputSet set_;
  DensityModel model_;
  PrimeTablePtr table_;
  PolyQ q_;
  std::vector<StronglyAdditive> gs_;
  std::shared_ptr<PrimeSumCache> cache_;
  double z_ = 0.0;
  double big_x_ = 0.0;
  StatBundle bundle_z_;
  StatBundle bundle_x_;
};

struct ExperimentResult {
  std::uint64_t count = 0;
  MomentAccumulator moments;
  MomentReport moment_report;
  FitReport fit;
  double sample_mean_full = 0.0;  ///< mean of Q(g(a)) with full g
  unsigned workers = 1;
  double seconds = 0.0;
};

/// One pass over A: truncated moments about A_Q(P(z)) and the normalized
/// distribution of full-g values against P(x) statistics. Partition results
/// merge in partition order, so output depends only on the worker count.
ExperimentResult run_experiment(const ExperimentContext& ctx, unsigned workers);

/// Measured ratio mu(1) * sum over d in D_1(P(z)) of |E_d| / (X K^{-1/2}).
/// Diagnostic only.
double remainder_ratio_k1(const ExperimentContext& ctx, unsigned workers);

std::string stats_json(const ExperimentContext& ctx, double eta,
                       std::optional<double> remainder_ratio);
std::string fit_json(const ExperimentContext& ctx, const ExperimentResult& r);
/// CSV with a provenance comment line carrying the config hash and seed.
std::string moments_csv(const ExperimentContext& ctx, const ExperimentResult& r);
std::string histogram_csv(const ExperimentContext& ctx, const ExperimentResult& r);

}  // namespace ekac
