// Run configuration: one flat key = value namespace covering the sampler,
// truncation policy, grid/window sizes, and the tolerance ladder, with three
// ingestion layers in increasing precedence:
//
//   built-in defaults  <  environment (QPENT_<KEY>)  <  config file
//
// and command-line flags applied on top by the CLI. Unknown keys and
// malformed values raise ConfigError naming the offending key.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qpent/identities.hpp"
#include "qpent/sampler.hpp"
#include "qpent/types.hpp"

namespace qpent {

struct RunConfig {
  // Sampling.
  std::uint64_t rng_seed = 42;
  std::vector<double> q_values = {0.2, 0.35, 0.5};
  int charge_range = 3;
  double modulus_band_lo = 0.97;  // factors on q^{1/6}
  double modulus_band_hi = 1.02;
  double pole_margin = 0.05;

  // Identity checks.
  int n_instances = 200;
  int grid_n = 256;
  int m_max = 24;
  int max_terms = 300;
  double target_tail = 1e-15;
  double tolerance = 1e-8;
  double agreement_tolerance = 1e-9;
  double safety_factor = 4.0;
  bool tail_acceleration = true;

  // Bailey lemma checks.
  int bailey_pairs = 20;
  double bailey_q = 0.15;
  int bailey_grid_n = 128;
  int bailey_m_max = 16;
  double bailey_tolerance = 1e-6;
  int bailey_charge_range = 2;
  double bailey_s_lo = 0.60, bailey_s_hi = 0.75;
  double bailey_t_lo = 0.60, bailey_t_hi = 0.75;
  double bailey_u_lo = 0.55, bailey_u_hi = 0.75;
  double bailey_w_lo = 0.80, bailey_w_hi = 1.25;
  double bailey_compound_cap = 0.85;
  // Setting any of bailey_n_t / bailey_n_s / bailey_n_u pins all three
  // (unset ones stay 0); the triple must sum to zero.
  bool bailey_force_charges = false;
  long bailey_n_t = 0, bailey_n_s = 0, bailey_n_u = 0;

  SamplerConfig sampler_config() const;
  BaileySamplerConfig bailey_sampler_config() const;
  CheckOptions check_options() const;
  TruncationPolicy truncation_policy() const;
};

// Defaults, then QPENT_* environment overrides, then the file (empty path
// skips the file layer). Validates the result; throws ConfigError.
RunConfig load_config(const std::string& path);

// Applies one key = value assignment; throws ConfigError on unknown keys or
// unparseable values.
void apply_config_key(RunConfig& cfg, const std::string& key,
                      const std::string& value);

// Cross-field consistency checks; throws ConfigError.
void validate_config(const RunConfig& cfg);

// The full effective configuration as sorted key = value lines; hashing this
// ties every report to the exact parameter set that produced it.
std::string canonical_config(const RunConfig& cfg);

// FNV-1a over bytes.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace qpent
