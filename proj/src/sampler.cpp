#include "qpent/sampler.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace qpent {

namespace {

cplx from_polar(double modulus, double angle) {
  return cplx(modulus * std::cos(angle), modulus * std::sin(angle));
}

}  // namespace

Sampler::Sampler(const SamplerConfig& cfg) : Sampler(cfg, BaileySamplerConfig{}) {}

Sampler::Sampler(const SamplerConfig& cfg, const BaileySamplerConfig& bcfg)
    : cfg_(cfg), bcfg_(bcfg), rng_(cfg.rng_seed) {
  if (cfg_.q_values.empty()) {
    throw ConfigError("sampler needs at least one q value");
  }
  for (const double q : cfg_.q_values) {
    if (!(q > 0.0 && q < 1.0)) {
      throw ConfigError("sampled q must lie in (0, 1), got " +
                        std::to_string(q));
    }
  }
  if (!(cfg_.modulus_band.lo > 0.0 &&
        cfg_.modulus_band.lo < cfg_.modulus_band.hi)) {
    throw ConfigError("modulus band must satisfy 0 < lo < hi");
  }
  if (!(cfg_.pole_margin > 0.0)) {
    throw ConfigError("pole margin must be positive");
  }
}

double Sampler::uniform() {
  // Top 53 bits of the 64-bit draw; identical on every conforming platform.
  return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

long Sampler::uniform_int(long lo, long hi) {
  const long span = hi - lo + 1;
  long k = static_cast<long>(uniform() * static_cast<double>(span));
  if (k >= span) k = span - 1;
  return lo + k;
}

MainIdentityInstance Sampler::sample_main_instance() {
  const double q = cfg_.q_values[q_cursor_ % cfg_.q_values.size()];
  ++q_cursor_;
  return sample_main_instance(q);
}

MainIdentityInstance Sampler::sample_main_instance(double q) {
  const double center = std::pow(q, 1.0 / 6.0);
  const double lo = cfg_.modulus_band.lo * center;
  const double hi = cfg_.modulus_band.hi * center;
  if (!(hi < 1.0)) {
    throw ConfigError("modulus band reaches the unit circle at q = " +
                      std::to_string(q));
  }
  const double margin = cfg_.pole_margin;

  for (int attempt = 0; attempt < cfg_.max_rejections; ++attempt) {
    ++attempts_;
    std::array<cplx, 3> a;
    std::array<cplx, 3> b;
    cplx prod(1.0, 0.0);
    // Fixed draw order: (modulus, phase) for a1, a2, a3, b1, b2.
    for (int i = 0; i < 5; ++i) {
      const double mod = lo + uniform() * (hi - lo);
      const double ang = 2.0 * std::numbers::pi * uniform();
      const cplx f = from_polar(mod, ang);
      if (i < 3) {
        a[i] = f;
      } else {
        b[i - 3] = f;
      }
      prod *= f;
    }
    b[2] = cplx(q, 0.0) / prod;

    if (std::abs(b[2]) < lo || std::abs(b[2]) > hi) continue;

    // Pole separation on the unit contour: integrand poles sit at moduli
    // <= |b_i| (inside) and >= 1/|a_i| (outside); cross products feed
    // denominators on the right-hand side.
    bool ok = true;
    for (int i = 0; i < 3 && ok; ++i) {
      if (std::abs(b[i]) > 1.0 - margin) ok = false;
      if (std::abs(a[i]) > 1.0 / (1.0 + margin)) ok = false;
    }
    for (int i = 0; i < 3 && ok; ++i) {
      for (int j = 0; j < 3 && ok; ++j) {
        if (std::abs(a[i] * b[j]) > 1.0 - margin) ok = false;
      }
    }
    if (!ok) continue;

    const long c = cfg_.charge_range;
    std::array<ChargedFugacity, 3> ca, cb;
    long sum = 0;
    for (int i = 0; i < 3; ++i) {
      ca[i] = {a[i], uniform_int(-c, c)};
      sum += ca[i].charge;
    }
    for (int i = 0; i < 2; ++i) {
      cb[i] = {b[i], uniform_int(-c, c)};
      sum += cb[i].charge;
    }
    cb[2] = {b[2], -sum};

    ++accepts_;
    return MainIdentityInstance(ca, cb, Nome(cplx(q, 0.0)));
  }
  std::ostringstream os;
  os << "no admissible balanced instance in " << cfg_.max_rejections
     << " draws at q = " << q << "; widen the modulus band or shrink the "
     << "pole margin";
  throw ExhaustedResampling(os.str());
}

BaileyParams Sampler::sample_bailey_params() {
  const double q = bcfg_.q;
  const Nome nome(cplx(q, 0.0));
  const double margin = bcfg_.pole_margin;
  const BaileyBand& band = bcfg_.band;

  for (int attempt = 0; attempt < bcfg_.max_rejections; ++attempt) {
    ++attempts_;
    // Fixed draw order: (modulus, phase) for t, s, u, w.
    const double at = band.t_lo + uniform() * (band.t_hi - band.t_lo);
    const double pt = 2.0 * std::numbers::pi * uniform();
    const double as = band.s_lo + uniform() * (band.s_hi - band.s_lo);
    const double ps = 2.0 * std::numbers::pi * uniform();
    const double au = band.u_lo + uniform() * (band.u_hi - band.u_lo);
    const double pu = 2.0 * std::numbers::pi * uniform();
    const double aw = band.w_lo + uniform() * (band.w_hi - band.w_lo);
    const double pw = 2.0 * std::numbers::pi * uniform();

    const double cap = 1.0 - margin;
    const double compound = q / (as * as * at * at * au);
    const bool ok = at * aw <= cap && at / aw <= cap && as * aw <= cap &&
                    as / aw <= cap && au <= cap && as * at * aw <= cap &&
                    as * at / aw <= cap && at * au <= cap &&
                    as * as * at * au <= cap &&
                    compound <= std::min(bcfg_.compound_cap, cap);
    if (!ok) continue;

    long n_t, n_s, n_u;
    if (bcfg_.force_charges) {
      n_t = bcfg_.n_t;
      n_s = bcfg_.n_s;
      n_u = bcfg_.n_u;
    } else {
      n_t = uniform_int(-bcfg_.charge_range, bcfg_.charge_range);
      n_s = uniform_int(-bcfg_.charge_range, bcfg_.charge_range);
      n_u = -n_t - n_s;
    }

    ++accepts_;
    return BaileyParams(from_polar(at, pt), from_polar(as, ps),
                        from_polar(au, pu), from_polar(aw, pw), n_t, n_s, n_u,
                        nome);
  }
  std::ostringstream os;
  os << "no admissible Bailey parameter set in " << bcfg_.max_rejections
     << " draws at q = " << q << "; the moduli band cannot satisfy the "
     << "pole-separation system";
  throw ExhaustedResampling(os.str());
}

TestSequence Sampler::sample_alpha() {
  const long n = uniform_int(-1, 1);
  const long power = uniform_int(-1, 1);
  const double ang = 2.0 * std::numbers::pi * uniform();
  return TestSequence::monomial(n, power, from_polar(1.0, ang));
}

}  // namespace qpent
