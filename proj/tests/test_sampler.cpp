// Rejection sampling: determinism of the draw stream, constraint audits for
// both instance families, acceptance-rate sanity, round-robin nome cycling,
// and the failure modes for infeasible configurations.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "qpent/sampler.hpp"
#include "test_support.hpp"

using namespace qpent;

TEST_CASE("identical seeds reproduce the draw stream") {
  SamplerConfig cfg;
  Sampler s1(cfg), s2(cfg);
  for (int i = 0; i < 5; ++i) {
    const auto a = s1.sample_main_instance();
    const auto b = s2.sample_main_instance();
    for (int k = 0; k < 3; ++k) {
      CHECK(a.a[k].fugacity == b.a[k].fugacity);
      CHECK(a.a[k].charge == b.a[k].charge);
      CHECK(a.b[k].fugacity == b.b[k].fugacity);
      CHECK(a.b[k].charge == b.b[k].charge);
    }
    CHECK(a.nome.q() == b.nome.q());
  }
  SamplerConfig other = cfg;
  other.rng_seed = 43;
  Sampler s3(other);
  CHECK(s3.sample_main_instance().a[0].fugacity !=
        s1.sample_main_instance().a[0].fugacity);
}

TEST_CASE("balanced instances satisfy every constraint") {
  SamplerConfig cfg;
  cfg.rng_seed = 9;
  Sampler smp(cfg);
  const double q = 0.35;
  const double center = std::pow(q, 1.0 / 6.0);
  const double lo = cfg.modulus_band.lo * center;
  const double hi = cfg.modulus_band.hi * center;
  for (int i = 0; i < 1000; ++i) {
    const auto inst = smp.sample_main_instance(q);
    CHECK(std::abs(inst.fugacity_product() - cplx(q, 0.0)) <= 1e-14);
    CHECK(inst.charge_sum() == 0);
    for (int k = 0; k < 3; ++k) {
      const double ma = std::abs(inst.a[k].fugacity);
      const double mb = std::abs(inst.b[k].fugacity);
      CHECK(ma >= lo * (1.0 - 1e-12));
      CHECK(ma <= hi * (1.0 + 1e-12));
      CHECK(mb >= lo * (1.0 - 1e-12));
      CHECK(mb <= hi * (1.0 + 1e-12));
      CHECK(std::labs(inst.a[k].charge) <= 3);
      // The five free charges lie in [-3, 3]; the balancing sixth (n_3) may
      // reach 15 in magnitude but must still balance, covered above.
      CHECK(mb <= 1.0 - cfg.pole_margin + 1e-12);
      CHECK(ma <= 1.0 / (1.0 + cfg.pole_margin) + 1e-12);
      for (int l = 0; l < 3; ++l) {
        CHECK(std::abs(inst.a[k].fugacity * inst.b[l].fugacity) <=
              1.0 - cfg.pole_margin + 1e-12);
      }
    }
  }
  // The default band is tuned for a healthy acceptance rate.
  CHECK(smp.accepts() == 1000);
  CHECK(static_cast<double>(smp.accepts()) /
            static_cast<double>(smp.attempts()) >
        0.01);
}

TEST_CASE("round-robin cycles the configured nomes") {
  SamplerConfig cfg;
  Sampler smp(cfg);
  for (int round = 0; round < 2; ++round) {
    for (const double q : cfg.q_values) {
      CHECK(smp.sample_main_instance().nome.q() == cplx(q, 0.0));
    }
  }
}

TEST_CASE("a symmetric relative band with zero charges") {
  SamplerConfig cfg;
  cfg.modulus_band = ModulusBand{0.9, 1.1};
  cfg.charge_range = 0;
  cfg.q_values = {0.3};
  Sampler smp(cfg);
  const double center = std::pow(0.3, 1.0 / 6.0);
  for (int i = 0; i < 50; ++i) {
    const auto inst = smp.sample_main_instance();
    CHECK(inst.charge_sum() == 0);
    for (int k = 0; k < 3; ++k) {
      CHECK(inst.a[k].charge == 0);
      CHECK(inst.b[k].charge == 0);
      CHECK(std::abs(inst.a[k].fugacity) >= 0.9 * center * (1 - 1e-12));
      CHECK(std::abs(inst.a[k].fugacity) <= 1.1 * center * (1 + 1e-12));
    }
  }
}

TEST_CASE("an infeasible band exhausts its retry budget") {
  SamplerConfig cfg;
  // The sixth modulus is the product complement; a band this thin cannot
  // contain it.
  cfg.modulus_band = ModulusBand{0.999, 1.0};
  cfg.max_rejections = 200;
  Sampler smp(cfg);
  CHECK_THROWS_AS(smp.sample_main_instance(), ExhaustedResampling);
}

TEST_CASE("configuration validation") {
  SamplerConfig cfg;
  cfg.q_values = {1.2};
  CHECK_THROWS_AS(Sampler{cfg}, ConfigError);
  cfg = SamplerConfig{};
  cfg.q_values.clear();
  CHECK_THROWS_AS(Sampler{cfg}, ConfigError);
  cfg = SamplerConfig{};
  cfg.modulus_band = ModulusBand{1.02, 0.97};
  CHECK_THROWS_AS(Sampler{cfg}, ConfigError);
  cfg = SamplerConfig{};
  cfg.pole_margin = 0.0;
  CHECK_THROWS_AS(Sampler{cfg}, ConfigError);
}

TEST_CASE("Bailey draws satisfy the constraint system") {
  SamplerConfig scfg;
  scfg.rng_seed = 5;
  BaileySamplerConfig bcfg;
  Sampler smp(scfg, bcfg);
  std::set<long> seen_charges;
  for (int i = 0; i < 300; ++i) {
    const auto p = smp.sample_bailey_params();
    CHECK(p.n_u() + p.n_s() + p.n_t() == 0);
    seen_charges.insert(p.n_t());
    const double cap = 1.0 - bcfg.pole_margin;
    const double at = std::abs(p.t()), as = std::abs(p.s()), au = std::abs(p.u()),
                 aw = std::abs(p.w());
    const double aq = p.nome().abs_q();
    for (const double v : {at * aw, at / aw, as * aw, as / aw, au, as * at * aw,
                           as * at / aw, at * au, as * as * at * au}) {
      CHECK(v <= cap + 1e-12);
    }
    CHECK(aq / (as * as * at * at * au) <=
          std::min(bcfg.compound_cap, cap) + 1e-12);
  }
  CHECK(seen_charges.size() > 1);  // the charge draw is actually varying

  // Forced charges pin the triple.
  BaileySamplerConfig forced = bcfg;
  forced.force_charges = true;
  forced.n_t = 2;
  forced.n_s = -1;
  forced.n_u = -1;
  Sampler fsmp(scfg, forced);
  for (int i = 0; i < 10; ++i) {
    const auto p = fsmp.sample_bailey_params();
    CHECK(p.n_t() == 2);
    CHECK(p.n_s() == -1);
    CHECK(p.n_u() == -1);
  }
}

TEST_CASE("Bailey draws are deterministic per seed") {
  SamplerConfig scfg;
  BaileySamplerConfig bcfg;
  Sampler s1(scfg, bcfg), s2(scfg, bcfg);
  for (int i = 0; i < 5; ++i) {
    const auto p1 = s1.sample_bailey_params();
    const auto p2 = s2.sample_bailey_params();
    CHECK(p1.t() == p2.t());
    CHECK(p1.s() == p2.s());
    CHECK(p1.u() == p2.u());
    CHECK(p1.w() == p2.w());
    CHECK(p1.n_t() == p2.n_t());
  }
}

TEST_CASE("an infeasible Bailey band exhausts its retry budget") {
  SamplerConfig scfg;
  BaileySamplerConfig bcfg;
  bcfg.band.s_lo = bcfg.band.s_hi = 0.10;
  bcfg.band.t_lo = bcfg.band.t_hi = 0.10;
  bcfg.band.u_lo = bcfg.band.u_hi = 0.10;  // compound modulus ~ 1.5e4
  bcfg.max_rejections = 200;
  Sampler smp(scfg, bcfg);
  CHECK_THROWS_AS(smp.sample_bailey_params(), ExhaustedResampling);
}

TEST_CASE("sampled test sequences are single Laurent monomials") {
  SamplerConfig scfg;
  Sampler smp(scfg, BaileySamplerConfig{});
  for (int i = 0; i < 50; ++i) {
    const auto alpha = smp.sample_alpha();
    const auto supp = alpha.support();
    REQUIRE(supp.size() == 1);
    CHECK(std::labs(supp[0]) <= 1);
    CHECK(alpha.degree_bound() <= 1);
    // Unit-modulus coefficient: evaluate the single monomial at z = 1.
    CHECK(std::abs(std::abs(alpha.eval(supp[0], cplx(1.0, 0.0))) - 1.0) <=
          1e-12);
  }
}
