// Rejection sampling of balanced identity instances and admissible Bailey
// parameter sets, with portable deterministic seeding: all randomness comes
// from the raw mt19937_64 stream (never from distribution adapters, whose
// mappings vary across standard libraries), so a (config, seed) pair yields
// the same draws on every platform.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qpent/bailey.hpp"
#include "qpent/identities.hpp"
#include "qpent/types.hpp"

namespace qpent {

// Configuration for balanced six-fugacity instances. The five free moduli
// are drawn from the band (lo * q^{1/6}, hi * q^{1/6}): the sixth fugacity
// is q divided by the product of the five, so its log-modulus is centered
// near q^{1/6} exactly when the band is; the factors are relative so one
// band serves every q in q_values.
struct ModulusBand {
  double lo = 0.97;
  double hi = 1.02;
};

struct SamplerConfig {
  std::uint64_t rng_seed = 42;
  std::vector<double> q_values = {0.2, 0.35, 0.5};
  int charge_range = 3;  // five free charges drawn from [-C, C]
  ModulusBand modulus_band{};
  double pole_margin = 0.05;  // minimum contour-to-pole distance
  int max_rejections = 10000;
};

// Configuration for Bailey parameter draws. The compound constraint
// |q/(s^2 t^2 u)| < 1 forces |s^2 t^2 u| > |q|, so the moduli bands must sit
// well above q^{1/4}-ish scales; the defaults below are feasible at q = 0.15
// with a comfortable acceptance rate. compound_cap tightens that constraint
// below the margin requirement because it controls the dominant pole of the
// route integrands.
struct BaileyBand {
  double s_lo = 0.60, s_hi = 0.75;
  double t_lo = 0.60, t_hi = 0.75;
  double u_lo = 0.55, u_hi = 0.75;
  double w_lo = 0.80, w_hi = 1.25;
};

struct BaileySamplerConfig {
  double q = 0.15;
  BaileyBand band{};
  int charge_range = 2;  // n_t, n_s from [-C, C]; n_u balances
  double compound_cap = 0.85;
  double pole_margin = 0.05;
  int max_rejections = 10000;
  // When set, the drawn charges are replaced by the fixed triple below
  // (which must balance to zero).
  bool force_charges = false;
  long n_t = 0, n_s = 0, n_u = 0;
};

// Stateful sampler owning the RNG stream. Main-identity draws cycle through
// q_values round-robin; counters expose the rejection behaviour for
// acceptance-rate audits.
class Sampler {
 public:
  explicit Sampler(const SamplerConfig& cfg);
  Sampler(const SamplerConfig& cfg, const BaileySamplerConfig& bcfg);

  // Next balanced instance at the next q in the round-robin order.
  MainIdentityInstance sample_main_instance();
  // Next balanced instance at the given q.
  MainIdentityInstance sample_main_instance(double q);

  BaileyParams sample_bailey_params();

  // A random test sequence for lemma checks: one Laurent monomial component
  // with index in {-1, 0, 1}, z-power in {-1, 0, 1}, and a random phase
  // coefficient.
  TestSequence sample_alpha();

  std::uint64_t attempts() const { return attempts_; }
  std::uint64_t accepts() const { return accepts_; }

 private:
  double uniform();  // [0, 1), 53-bit, straight from the generator's bits
  long uniform_int(long lo, long hi);

  SamplerConfig cfg_;
  BaileySamplerConfig bcfg_;
  std::mt19937_64 rng_;
  std::size_t q_cursor_ = 0;
  std::uint64_t attempts_ = 0;
  std::uint64_t accepts_ = 0;
};

}  // namespace qpent
