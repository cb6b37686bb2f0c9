// Declarative, seeded experiment orchestration: config parsing, artifact
// writing, activation-count sweeps, L-curve and spectrum exports.
#pragma once

#include "memrx/analysis.hpp"
#include "memrx/sensing.hpp"
#include "memrx/solvers.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace memrx {

inline constexpr const char* kToolkitVersion = "0.1.0";

struct SensingSection {
  ActivationScheme scheme = ActivationScheme::Deterministic;
  int m = 0;
  std::optional<std::uint64_t> seed;  // derived from the master seed if absent
  bool noise_before_compression = true;
};

struct SweepSection {
  std::vector<int> m_values;
  std::vector<ActivationScheme> schemes;
};

struct ExperimentConfig {
  GeometryConfig geometry;
  PhantomKind phantom = PhantomKind::Tumor;
  double noise_snr_db = 80.0;
  std::optional<SensingSection> sensing;
  SolverMethod method = SolverMethod::DouglasRachford;
  SolverConfig solver;
  std::optional<SweepSection> sweep;
  std::vector<double> mu_grid;  // for the lcurve verb; default log grid if empty
  std::string output_dir = "out";
  std::uint64_t master_seed = 1;

  // Derived per-stage seeds (fixed documented offsets).
  std::uint64_t noise_seed() const { return master_seed + 1; }
  std::uint64_t activation_seed() const { return master_seed + 2; }
  std::uint64_t post_compression_noise_seed() const { return master_seed + 3; }
};

struct RunOptions {
  std::optional<std::string> out_override;
  std::optional<std::uint64_t> seed_override;
  bool quiet = false;
};

ExperimentConfig parse_config_json(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

// Stable hash of everything the lead field depends on.
std::uint64_t geometry_hash(const GeometryConfig& config);

// Assembles the lead field, or reloads it from the on-disk cache under
// `cache_dir` when a matching geometry hash is present.
LeadField obtain_lead_field(const GeometryConfig& config,
                            const std::filesystem::path& cache_dir, bool quiet);

// Full pipeline; writes phantom, data, activation, reconstruction, trace,
// metrics and a manifest into the output directory.
void run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

// One metrics row per (m, scheme); per-point failures are flagged in the
// output table and the sweep continues.
void run_sweep(const ExperimentConfig& config, const RunOptions& options = {});

void run_lcurve(const ExperimentConfig& config, const RunOptions& options = {});
void run_spectrum(const ExperimentConfig& config, const RunOptions& options = {});
void run_leadfield_only(const ExperimentConfig& config, const RunOptions& options = {});

}  // namespace memrx
