#include "qpent/identities.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "qpent/qkernel.hpp"

namespace qpent {

namespace {

struct RootSet {
  std::array<cplx, 3> ra;
  std::array<cplx, 3> rb;
};

// Principal roots, optionally re-correlated so prod ra_i rb_i = -q^{1/2}.
// The six roots square to the fugacities either way; only the sign class of
// the product changes.
RootSet pick_roots(const MainIdentityInstance& inst, RootCorrelation corr) {
  RootSet r;
  cplx prod(1.0, 0.0);
  for (int i = 0; i < 3; ++i) {
    r.ra[i] = std::sqrt(inst.a[i].fugacity);
    r.rb[i] = std::sqrt(inst.b[i].fugacity);
    prod *= r.ra[i] * r.rb[i];
  }
  if (corr == RootCorrelation::coherent) {
    const cplx sigma = prod / inst.nome.q_half();
    if (std::abs(sigma - 1.0) < std::abs(sigma + 1.0)) {
      r.rb[2] = -r.rb[2];
    }
  }
  return r;
}

// Two-geometric charge-tail extrapolation. Beyond the largest charge the
// shell prefactor is exactly geometric with ratio q (for the coherent root
// class), and the leading integrand corrections are odd in z and integrate
// away, leaving T_m = A q^m + B q^{2m} + O(q^{3m}) per side. Fit (A, B) to
// the outermost two shells and sum the model tail; report the difference
// against the single-geometric model as the leftover estimate.
struct TailAcceleration {
  cplx correction{};
  double leftover = 0.0;
  bool applied = false;
};

TailAcceleration accelerate_tail(const std::vector<cplx>& shells, int m_max,
                                 cplx q) {
  TailAcceleration out;
  if (m_max < 2) return out;
  cplx corr2(0.0, 0.0), corr1(0.0, 0.0);
  for (int sgn : {+1, -1}) {
    const cplx t1 = shells[m_max + sgn * (m_max - 1)];
    const cplx t2 = shells[m_max + sgn * m_max];
    if (!(std::abs(t2) < std::abs(t1))) continue;  // not in the decaying regime
    const cplx be = (t2 - q * t1) / (q * q - q);
    const cplx al = t1 - be;
    corr2 += al * q * q / (1.0 - q) + be * pow_int(q, 4) / (1.0 - q * q);
    corr1 += t2 * q / (1.0 - q);
    out.applied = true;
  }
  out.correction = corr2;
  out.leftover = std::abs(corr2 - corr1);
  return out;
}

ResidualReport finish(cplx lhs, cplx rhs, double quad_est, double tail_est,
                      double tail_corr, double tolerance,
                      double safety_factor) {
  ResidualReport rep;
  rep.lhs = lhs;
  rep.rhs = rhs;
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  const double inv = scale > 0.0 ? 1.0 / scale : 0.0;
  rep.relative_residual = std::abs(lhs - rhs) * inv;
  rep.quadrature_error_estimate = quad_est * inv;
  rep.charge_tail_estimate = tail_est * inv;
  rep.tail_correction = tail_corr * inv;
  rep.error_budget = rep.quadrature_error_estimate + rep.charge_tail_estimate;
  rep.tolerance = tolerance;
  rep.safety_factor = safety_factor;
  rep.passed = rep.relative_residual <=
               std::max(tolerance, safety_factor * rep.error_budget);
  return rep;
}

}  // namespace

MainIdentityInstance::MainIdentityInstance(
    const std::array<ChargedFugacity, 3>& a_in,
    const std::array<ChargedFugacity, 3>& b_in, const Nome& nome_in)
    : a(a_in), b(b_in), nome(nome_in) {
  if (charge_sum() != 0) {
    throw std::invalid_argument("instance charges must sum to zero, got " +
                                std::to_string(charge_sum()));
  }
  const cplx prod = fugacity_product();
  const double err = std::abs(prod - nome.q());
  if (err > 1e-12 * std::max(1.0, std::abs(nome.q()))) {
    std::ostringstream os;
    os << "fugacity product differs from the nome by " << err;
    throw std::invalid_argument(os.str());
  }
  for (int i = 0; i < 3; ++i) {
    if (std::abs(a[i].fugacity) >= 1.0 || std::abs(b[i].fugacity) >= 1.0) {
      throw std::invalid_argument("fugacity moduli must be < 1");
    }
  }
}

long MainIdentityInstance::charge_sum() const {
  long s = 0;
  for (int i = 0; i < 3; ++i) s += a[i].charge + b[i].charge;
  return s;
}

cplx MainIdentityInstance::fugacity_product() const {
  cplx p(1.0, 0.0);
  for (int i = 0; i < 3; ++i) p *= a[i].fugacity * b[i].fugacity;
  return p;
}

ResidualReport main_identity_check(const MainIdentityInstance& inst,
                                   const CheckOptions& opts) {
  const Nome& nm = inst.nome;
  const RootSet roots = pick_roots(inst, opts.root_correlation);
  const CircleGrid grid = make_circle_grid(opts.grid_n);

  long cached_m = std::numeric_limits<long>::min();
  cplx pref;
  long zpow = 0;
  std::array<long, 3> am{}, bn{};
  const auto term = [&](long m, int, cplx z) -> cplx {
    if (m != cached_m) {
      cached_m = m;
      long e = 0, p = 0;
      pref = cplx(1.0, 0.0);
      for (int i = 0; i < 3; ++i) {
        am[i] = std::labs(inst.a[i].charge + m);
        bn[i] = std::labs(inst.b[i].charge - m);
        e += am[i] + bn[i];
        p += bn[i] - am[i];
        pref *= pow_int(roots.ra[i], -am[i]) * pow_int(roots.rb[i], -bn[i]);
      }
      pref *= pow_int(-nm.q_half(), e / 2);
      zpow = p / 2;
    }
    cplx v = pref * pow_int(z, zpow);
    for (int i = 0; i < 3; ++i) {
      v *= ratio_abs(inst.a[i].fugacity * z, am[i], nm, opts.policy).value *
           ratio_abs(inst.b[i].fugacity / z, bn[i], nm, opts.policy).value;
    }
    return v;
  };

  const SumIntegralResult S =
      charge_sum_integral(term, ChargeWindow{opts.m_max}, grid);

  cplx lhs = S.value;
  double tail_est = S.charge_tail_estimate;
  double tail_corr = 0.0;
  if (opts.tail_acceleration) {
    const TailAcceleration acc =
        accelerate_tail(S.shell_values, opts.m_max, nm.q());
    if (acc.applied) {
      lhs += acc.correction;
      tail_corr = std::abs(acc.correction);
      tail_est = acc.leftover;
    }
  }

  cplx rhs(1.0, 0.0);
  long f = 0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const long c = std::labs(inst.a[i].charge + inst.b[j].charge);
      f += c;
      rhs *= pow_int(roots.ra[i] * roots.rb[j], -c) *
             ratio_abs(inst.a[i].fugacity * inst.b[j].fugacity, c, nm,
                       opts.policy)
                 .value;
    }
  }
  rhs *= pow_int(-nm.q_half(), f / 2);

  return finish(lhs, rhs, S.quadrature_error_estimate, tail_est, tail_corr,
                opts.tolerance, opts.safety_factor);
}

ResidualReport no_abs_identity_check(const MainIdentityInstance& inst,
                                     const CheckOptions& opts) {
  const Nome& nm = inst.nome;
  const CircleGrid grid = make_circle_grid(opts.grid_n);

  cplx A(1.0, 0.0);
  long nb = 0;
  for (int i = 0; i < 3; ++i) {
    A *= inst.a[i].fugacity;
    nb += inst.b[i].charge;
  }
  const cplx W = -nm.q_half() / A;

  const auto term = [&](long m, int, cplx z) -> cplx {
    cplx v = pow_int(W, m) * pow_int(z, nb - 3 * m);
    for (int i = 0; i < 3; ++i) {
      v *= charged_ratio(inst.a[i].fugacity * z, inst.a[i].charge + m, nm,
                         opts.policy)
               .value *
           charged_ratio(inst.b[i].fugacity / z, inst.b[i].charge - m, nm,
                         opts.policy)
               .value;
    }
    return v;
  };

  const SumIntegralResult S =
      charge_sum_integral(term, ChargeWindow{opts.m_max}, grid);

  cplx lhs = S.value;
  double tail_est = S.charge_tail_estimate;
  double tail_corr = 0.0;
  if (opts.tail_acceleration) {
    const TailAcceleration acc =
        accelerate_tail(S.shell_values, opts.m_max, nm.q());
    if (acc.applied) {
      lhs += acc.correction;
      tail_corr = std::abs(acc.correction);
      tail_est = acc.leftover;
    }
  }

  cplx rhs = pow_int(W, nb);
  for (int i = 0; i < 3; ++i) {
    rhs *= pow_int(inst.a[i].fugacity, -inst.a[i].charge) *
           pow_int(inst.b[i].fugacity, -inst.b[i].charge);
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      rhs *= charged_ratio(inst.a[i].fugacity * inst.b[j].fugacity,
                           inst.a[i].charge + inst.b[j].charge, nm, opts.policy)
                 .value;
    }
  }

  return finish(lhs, rhs, S.quadrature_error_estimate, tail_est, tail_corr,
                opts.tolerance, opts.safety_factor);
}

ResidualReport pentagon_check(const MainIdentityInstance& inst,
                              const CheckOptions& opts) {
  const Nome& nm = inst.nome;
  const RootSet roots = pick_roots(inst, opts.root_correlation);
  const CircleGrid grid = make_circle_grid(opts.grid_n);

  // z-free cross-ratio denominators of the three LHS kernels.
  std::array<cplx, 3> cross;
  std::array<long, 3> ct{};
  for (int i = 0; i < 3; ++i) {
    ct[i] = inst.b[i].charge + inst.a[i].charge;  // n_i + m_i
    cross[i] = ratio_abs(inst.a[i].fugacity * inst.b[i].fugacity, ct[i], nm,
                         opts.policy)
                   .value;
  }

  long cached_m = std::numeric_limits<long>::min();
  cplx pref;
  long zpow = 0;
  std::array<long, 3> nc{}, mc{};
  const auto term = [&](long m, int, cplx z) -> cplx {
    if (m != cached_m) {
      cached_m = m;
      long p = 0;
      pref = cplx(1.0, 0.0);
      for (int i = 0; i < 3; ++i) {
        nc[i] = std::labs(inst.b[i].charge + m);   // |n_i + m|
        mc[i] = std::labs(inst.a[i].charge - m);   // |m_i - m|
        const long e = (nc[i] + mc[i] - std::labs(ct[i])) / 2;
        p += mc[i] - nc[i];
        pref *= pow_int(-nm.q_half(), e) * pow_int(roots.ra[i], -nc[i]) *
                pow_int(roots.rb[i], -mc[i]) *
                pow_int(roots.ra[i] * roots.rb[i], std::labs(ct[i])) /
                cross[i];
      }
      zpow = p / 2;
    }
    cplx v = pref * pow_int(z, zpow);
    for (int i = 0; i < 3; ++i) {
      v *= ratio_abs(inst.a[i].fugacity * z, nc[i], nm, opts.policy).value *
           ratio_abs(inst.b[i].fugacity / z, mc[i], nm, opts.policy).value;
    }
    return v;
  };

  const SumIntegralResult S =
      charge_sum_integral(term, ChargeWindow{opts.m_max}, grid);

  cplx lhs = S.value;
  double tail_est = S.charge_tail_estimate;
  double tail_corr = 0.0;
  if (opts.tail_acceleration) {
    const TailAcceleration acc =
        accelerate_tail(S.shell_values, opts.m_max, nm.q());
    if (acc.applied) {
      lhs += acc.correction;
      tail_corr = std::abs(acc.correction);
      tail_est = acc.leftover;
    }
  }

  const auto& a = inst.a;
  const auto& b = inst.b;
  const cplx rhs =
      b_kernel_rooted(a[0].fugacity * b[1].fugacity, roots.ra[0] * roots.rb[1],
                      b[0].charge + a[1].charge, a[2].fugacity * b[0].fugacity,
                      roots.ra[2] * roots.rb[0], b[2].charge + a[0].charge, nm,
                      opts.policy)
          .value *
      b_kernel_rooted(a[1].fugacity * b[0].fugacity, roots.ra[1] * roots.rb[0],
                      b[1].charge + a[0].charge, a[2].fugacity * b[1].fugacity,
                      roots.ra[2] * roots.rb[1], b[2].charge + a[1].charge, nm,
                      opts.policy)
          .value;

  return finish(lhs, rhs, S.quadrature_error_estimate, tail_est, tail_corr,
                opts.tolerance, opts.safety_factor);
}

ResidualReport elimination_agreement_check(const MainIdentityInstance& inst,
                                           const CheckOptions& opts,
                                           double agreement_tolerance) {
  const Nome& nm = inst.nome;
  const RootSet roots = pick_roots(inst, opts.root_correlation);
  const CircleGrid grid = make_circle_grid(opts.grid_n);

  // Plain absolute-charge LHS over the window (no tail acceleration: the
  // mapping is exact shell by shell, so both sides keep the same truncation).
  long cached_m = std::numeric_limits<long>::min();
  cplx pref;
  long zpow = 0;
  std::array<long, 3> am{}, bn{};
  const auto abs_term = [&](long m, int, cplx z) -> cplx {
    if (m != cached_m) {
      cached_m = m;
      long e = 0, p = 0;
      pref = cplx(1.0, 0.0);
      for (int i = 0; i < 3; ++i) {
        am[i] = std::labs(inst.a[i].charge + m);
        bn[i] = std::labs(inst.b[i].charge - m);
        e += am[i] + bn[i];
        p += bn[i] - am[i];
        pref *= pow_int(roots.ra[i], -am[i]) * pow_int(roots.rb[i], -bn[i]);
      }
      pref *= pow_int(-nm.q_half(), e / 2);
      zpow = p / 2;
    }
    cplx v = pref * pow_int(z, zpow);
    for (int i = 0; i < 3; ++i) {
      v *= ratio_abs(inst.a[i].fugacity * z, am[i], nm, opts.policy).value *
           ratio_abs(inst.b[i].fugacity / z, bn[i], nm, opts.policy).value;
    }
    return v;
  };
  const SumIntegralResult abs_sum =
      charge_sum_integral(abs_term, ChargeWindow{opts.m_max}, grid);

  // Signed-family side with weight omega and the root-monomial prefactor.
  cplx omega(1.0, 0.0), p1(1.0, 0.0);
  long nb = 0;
  for (int i = 0; i < 3; ++i) {
    omega *= roots.rb[i] / roots.ra[i];
    p1 *= pow_int(roots.ra[i], -inst.a[i].charge) *
          pow_int(roots.rb[i], -inst.b[i].charge);
    nb += inst.b[i].charge;
  }
  const auto fam_term = [&](long m, int, cplx z) -> cplx {
    cplx v = pow_int(omega, m) * pow_int(z, nb - 3 * m);
    for (int i = 0; i < 3; ++i) {
      v *= charged_ratio(inst.a[i].fugacity * z, inst.a[i].charge + m, nm,
                         opts.policy)
               .value *
           charged_ratio(inst.b[i].fugacity / z, inst.b[i].charge - m, nm,
                         opts.policy)
               .value;
    }
    return v;
  };
  const SumIntegralResult fam_sum =
      charge_sum_integral(fam_term, ChargeWindow{opts.m_max}, grid);

  // The mapping is exact term by term, so both truncations share the same
  // tail and the comparison needs no acceleration.
  return finish(abs_sum.value, p1 * fam_sum.value,
                abs_sum.quadrature_error_estimate +
                    fam_sum.quadrature_error_estimate,
                0.0, 0.0, agreement_tolerance, opts.safety_factor);
}

}  // namespace qpent
