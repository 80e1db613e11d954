#include "qpent/bailey.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include "qpent/qkernel.hpp"

namespace qpent {

// ---------------------------------------------------------------------------
// TestSequence
// ---------------------------------------------------------------------------

TestSequence TestSequence::monomial(long n, long power, cplx coeff) {
  TestSequence seq;
  seq.add_term(n, power, coeff);
  return seq;
}

void TestSequence::add_term(long n, long power, cplx coeff) {
  components_[n][power] += coeff;
}

cplx TestSequence::eval(long n, cplx z) const {
  const auto it = components_.find(n);
  if (it == components_.end()) return cplx(0.0, 0.0);
  cplx acc(0.0, 0.0);
  for (const auto& [power, coeff] : it->second) {
    acc += coeff * pow_int(z, power);
  }
  return acc;
}

std::vector<long> TestSequence::support() const {
  std::vector<long> out;
  out.reserve(components_.size());
  for (const auto& [n, comp] : components_) out.push_back(n);
  return out;
}

long TestSequence::degree_bound() const {
  long bound = 0;
  for (const auto& [n, comp] : components_) {
    for (const auto& [power, coeff] : comp) {
      bound = std::max(bound, std::labs(power));
    }
  }
  return bound;
}

TestSequence TestSequence::scaled(cplx c) const {
  TestSequence out = *this;
  for (auto& [n, comp] : out.components_) {
    for (auto& [power, coeff] : comp) coeff *= c;
  }
  return out;
}

// ---------------------------------------------------------------------------
// BaileyParams
// ---------------------------------------------------------------------------

BaileyParams::BaileyParams(cplx t, cplx s, cplx u, cplx w, long n_t, long n_s,
                           long n_u, const Nome& nome)
    : t_(t),
      s_(s),
      u_(u),
      w_(w),
      n_t_(n_t),
      n_s_(n_s),
      n_u_(n_u),
      nome_(nome),
      root_t_(std::sqrt(t)),
      root_s_(std::sqrt(s)),
      root_u_(std::sqrt(u)),
      root_w_(std::sqrt(w)) {
  if (n_u_ + n_s_ + n_t_ != 0) {
    throw std::invalid_argument(
        "Bailey charges must satisfy n_u + n_s + n_t = 0, got " +
        std::to_string(n_u_ + n_s_ + n_t_));
  }
  const double at = std::abs(t_);
  const double as = std::abs(s_);
  const double au = std::abs(u_);
  const double aw = std::abs(w_);
  const double aq = nome_.abs_q();
  const struct {
    const char* label;
    double value;
  } constraints[] = {
      {"|t*w|", at * aw},
      {"|t/w|", at / aw},
      {"|s*w|", as * aw},
      {"|s/w|", as / aw},
      {"|u|", au},
      {"|q/(s^2 t^2 u)|", aq / (as * as * at * at * au)},
      {"|s*t*w|", as * at * aw},
      {"|s*t/w|", as * at / aw},
      {"|t*u|", at * au},
      {"|s^2*t*u|", as * as * at * au},
  };
  for (const auto& c : constraints) {
    if (!(c.value < 1.0)) {
      std::ostringstream os;
      os << "Bailey parameter constraint " << c.label
         << " < 1 violated: value = " << c.value;
      throw std::invalid_argument(os.str());
    }
  }
}

// ---------------------------------------------------------------------------
// Kernel action and the beta table
// ---------------------------------------------------------------------------

cplx kernel_action_at(const TestSequence& alpha, cplx t, cplx root_t, long n_t,
                      const Nome& nome, long m, cplx w, cplx root_w,
                      const CircleGrid& grid, const TruncationPolicy& policy) {
  const auto supp = alpha.support();
  if (supp.empty()) return cplx(0.0, 0.0);
  cplx acc(0.0, 0.0);
  for (int l = 0; l < grid.n_points; ++l) {
    const cplx z = grid.points[l];
    const cplx hz = grid.half_points[l];
    cplx v(0.0, 0.0);
    for (const long n : supp) {
      const cplx av = alpha.eval(n, z);
      if (av == cplx(0.0, 0.0)) continue;
      v += b_kernel_rooted(t * w / z, root_t * root_w / hz, m - n + n_t,
                           t * z / w, root_t * hz / root_w, -m + n + n_t, nome,
                           policy)
               .value *
           av;
    }
    acc += v;
  }
  return acc / static_cast<double>(grid.n_points);
}

cplx kernel_action_rooted(const TestSequence& alpha, const BaileyParams& params,
                          long m, cplx w, cplx root_w, const CircleGrid& grid,
                          const TruncationPolicy& policy) {
  return kernel_action_at(alpha, params.t(), params.root_t(), params.n_t(),
                          params.nome(), m, w, root_w, grid, policy);
}

cplx kernel_action(const TestSequence& alpha, const BaileyParams& params,
                   long m, cplx w, const CircleGrid& grid, const ChargeWindow&,
                   const TruncationPolicy& policy) {
  return kernel_action_rooted(alpha, params, m, w, std::sqrt(w), grid, policy);
}

BetaFunction tabulate_beta(const TestSequence& alpha,
                           const BaileyParams& params, const CircleGrid& grid,
                           const ChargeWindow& window,
                           const TruncationPolicy& policy) {
  const int N = grid.n_points;
  const int M = window.m_max;
  BetaFunction bf;
  bf.m_max = M;
  bf.full.assign(2 * M + 1, std::vector<cplx>(N, cplx(0.0, 0.0)));
  bf.half = bf.full;
  const auto supp = alpha.support();
  if (supp.empty()) return bf;

  std::vector<std::vector<cplx>> avals(supp.size(), std::vector<cplx>(N));
  for (std::size_t si = 0; si < supp.size(); ++si) {
    for (int l = 0; l < N; ++l) {
      avals[si][l] = alpha.eval(supp[si], grid.points[l]);
    }
  }

  // With evaluation point and integration variable on the same grid, the
  // kernel depends only on the signed index difference d = j - l (through
  // x/z = e^{2 pi i d / N} and its continuous root e^{i pi d / N}) and on
  // k = m - n. Caching rows over d turns the table from O(M N^2) kernel
  // evaluations into O(M N).
  const Nome& nm = params.nome();
  const cplx t = params.t();
  const cplx rt = params.root_t();
  std::map<long, std::vector<cplx>> rows;
  const auto row_for = [&](long k) -> const std::vector<cplx>& {
    const auto it = rows.find(k);
    if (it != rows.end()) return it->second;
    std::vector<cplx> row(2 * N - 1);
    for (int d = -(N - 1); d <= N - 1; ++d) {
      const double th = std::numbers::pi * static_cast<double>(d) /
                        static_cast<double>(N);
      const cplx zr(std::cos(th), std::sin(th));
      const cplx zf = zr * zr;
      row[d + N - 1] =
          b_kernel_rooted(t * zf, rt * zr, k + params.n_t(), t / zf, rt / zr,
                          -k + params.n_t(), nm, policy)
              .value;
    }
    return rows.emplace(k, std::move(row)).first->second;
  };

  const bool can_halve = (N % 2 == 0) && N >= 2;
  std::vector<const std::vector<cplx>*> row_ptr(supp.size());
  for (int m = -M; m <= M; ++m) {
    for (std::size_t si = 0; si < supp.size(); ++si) {
      row_ptr[si] = &row_for(m - supp[si]);
    }
    for (int j = 0; j < N; ++j) {
      cplx accf(0.0, 0.0);
      cplx acch(0.0, 0.0);
      for (int l = 0; l < N; ++l) {
        cplx v(0.0, 0.0);
        for (std::size_t si = 0; si < supp.size(); ++si) {
          v += (*row_ptr[si])[j - l + N - 1] * avals[si][l];
        }
        accf += v;
        if (can_halve && (l % 2 == 0)) acch += v;
      }
      bf.full[m + M][j] = accf / static_cast<double>(N);
      bf.half[m + M][j] =
          can_halve ? acch / static_cast<double>(N / 2) : bf.full[m + M][j];
    }
  }
  return bf;
}

// ---------------------------------------------------------------------------
// Primed pair
// ---------------------------------------------------------------------------

cplx primed_alpha_rooted(const TestSequence& alpha, const BaileyParams& params,
                         long n, cplx w, cplx root_w,
                         const TruncationPolicy& policy) {
  const cplx av = alpha.eval(n, w);
  if (av == cplx(0.0, 0.0)) return av;
  const cplx rs2 = params.root_s() * params.root_s();
  const cplx mult =
      b_kernel_rooted(params.t() * params.u() * w,
                      params.root_t() * params.root_u() * root_w,
                      n + params.n_u() + params.n_t(), params.s() * params.s(),
                      rs2, 2 * params.n_s(), params.nome(), policy)
          .value;
  return mult * av;
}

cplx primed_alpha(const TestSequence& alpha, const BaileyParams& params, long n,
                  cplx w, const TruncationPolicy& policy) {
  return primed_alpha_rooted(alpha, params, n, w, std::sqrt(w), policy);
}

namespace {

struct ChainEval {
  cplx value{};
  double quad_abs = 0.0;  // outer x-halving + inner z-halving, absolute
  double tail_abs = 0.0;  // charge-window tail, absolute
};

ChainEval chain_eval(const BaileyParams& params, const BetaFunction& beta,
                     long n, cplx w, cplx root_w, const CircleGrid& grid,
                     const ChargeWindow& window,
                     const TruncationPolicy& policy) {
  if (beta.m_max != window.m_max) {
    throw std::invalid_argument(
        "beta table window does not match the requested charge window");
  }
  const Nome& nm = params.nome();
  const int N = grid.n_points;
  const int M = window.m_max;

  const cplx f2 = params.s() * params.t() * params.t() * params.u() * w;
  const cplx r2 = params.root_s() * params.root_t() * params.root_t() *
                  params.root_u() * root_w;
  const long c2 = n + 2 * params.n_t() + params.n_u() + params.n_s();

  std::vector<std::vector<cplx>> weight(2 * M + 1,
                                        std::vector<cplx>(N, cplx(0.0, 0.0)));
  for (int m = -M; m <= M; ++m) {
    for (int j = 0; j < N; ++j) {
      const cplx x = grid.points[j];
      const cplx hx = grid.half_points[j];
      const cplx k1 =
          b_kernel_rooted(params.s() * w / x, params.root_s() * root_w / hx,
                          -m + n + params.n_s(), params.u() * x,
                          params.root_u() * hx, params.n_u() + m, nm, policy)
              .value;
      const cplx k2 =
          b_kernel_rooted(f2, r2, c2, params.s() * x / w,
                          params.root_s() * hx / root_w, -n + m + params.n_s(),
                          nm, policy)
              .value;
      weight[m + M][j] = k1 * k2;
    }
  }

  const auto term_full = [&](long m, int j, cplx) -> cplx {
    return weight[m + M][j] * beta.full[m + M][j];
  };
  const SumIntegralResult s_full =
      charge_sum_integral(term_full, window, grid);

  // Inner-resolution estimate: the same outer sum against the beta table
  // built from the half-density z-sample.
  cplx v_half(0.0, 0.0);
  for (int m = -M; m <= M; ++m) {
    cplx shell(0.0, 0.0);
    for (int j = 0; j < N; ++j) shell += weight[m + M][j] * beta.half[m + M][j];
    v_half += shell / static_cast<double>(N);
  }

  ChainEval out;
  out.value = s_full.value;
  out.quad_abs =
      s_full.quadrature_error_estimate + std::abs(s_full.value - v_half);
  out.tail_abs = s_full.charge_tail_estimate;
  return out;
}

struct DirectEval {
  cplx value{};
  double quad_abs = 0.0;
};

DirectEval direct_eval(const TestSequence& alpha, const BaileyParams& params,
                       long n, cplx w, cplx root_w, const CircleGrid& grid,
                       const TruncationPolicy& policy) {
  const Nome& nm = params.nome();
  const int N = grid.n_points;
  const cplx st = params.s() * params.t();
  const cplx rst = params.root_s() * params.root_t();
  const auto supp = alpha.support();

  cplx acc(0.0, 0.0);
  cplx acc_even(0.0, 0.0);
  const bool can_halve = (N % 2 == 0) && N >= 2;
  for (int j = 0; j < N; ++j) {
    const cplx y = grid.points[j];
    const cplx hy = grid.half_points[j];
    cplx v(0.0, 0.0);
    for (const long p : supp) {
      const cplx ap = primed_alpha_rooted(alpha, params, p, y, hy, policy);
      if (ap == cplx(0.0, 0.0)) continue;
      v += b_kernel_rooted(st * w / y, rst * root_w / hy,
                           n - p + params.n_s() + params.n_t(), st * y / w,
                           rst * hy / root_w, -n + p + params.n_s() + params.n_t(),
                           nm, policy)
               .value *
           ap;
    }
    acc += v;
    if (can_halve && (j % 2 == 0)) acc_even += v;
  }

  DirectEval out;
  out.value = acc / static_cast<double>(N);
  if (can_halve) {
    out.quad_abs =
        std::abs(out.value - acc_even / static_cast<double>(N / 2));
  }
  return out;
}

}  // namespace

cplx primed_beta_via_chain(const TestSequence& alpha,
                           const BaileyParams& params, const BetaFunction& beta,
                           long n, cplx w, cplx root_w, const CircleGrid& grid,
                           const ChargeWindow& window,
                           const TruncationPolicy& policy) {
  (void)alpha;
  return chain_eval(params, beta, n, w, root_w, grid, window, policy).value;
}

cplx primed_beta_via_chain(const TestSequence& alpha,
                           const BaileyParams& params, long n, cplx w,
                           const CircleGrid& grid, const ChargeWindow& window,
                           const TruncationPolicy& policy) {
  const BetaFunction beta = tabulate_beta(alpha, params, grid, window, policy);
  return chain_eval(params, beta, n, w, std::sqrt(w), grid, window, policy)
      .value;
}

cplx primed_beta_direct_rooted(const TestSequence& alpha,
                               const BaileyParams& params, long n, cplx w,
                               cplx root_w, const CircleGrid& grid,
                               const TruncationPolicy& policy) {
  return direct_eval(alpha, params, n, w, root_w, grid, policy).value;
}

cplx primed_beta_direct(const TestSequence& alpha, const BaileyParams& params,
                        long n, cplx w, const CircleGrid& grid,
                        const ChargeWindow&, const TruncationPolicy& policy) {
  return direct_eval(alpha, params, n, w, std::sqrt(w), grid, policy).value;
}

std::vector<LemmaProbe> default_probes() {
  std::vector<LemmaProbe> probes;
  for (const long n : {-1L, 0L, 1L}) {
    probes.push_back({n, cplx(1.0, 0.0)});
    probes.push_back({n, cplx(0.0, 1.0)});
  }
  return probes;
}

std::vector<ProbeResult> lemma_probe_results(
    const TestSequence& alpha, const BaileyParams& params,
    const std::vector<LemmaProbe>& probes, const CircleGrid& grid,
    const ChargeWindow& window, const TruncationPolicy& policy,
    double tolerance, double safety_factor) {
  const BetaFunction beta = tabulate_beta(alpha, params, grid, window, policy);
  std::vector<ProbeResult> out;
  out.reserve(probes.size());
  for (const LemmaProbe& probe : probes) {
    const cplx root_w = std::sqrt(probe.w);
    const ChainEval ce = chain_eval(params, beta, probe.n, probe.w, root_w,
                                    grid, window, policy);
    const DirectEval de =
        direct_eval(alpha, params, probe.n, probe.w, root_w, grid, policy);
    ProbeResult pr;
    pr.probe = probe;
    pr.chain = ce.value;
    pr.direct = de.value;
    const double scale = std::max(std::abs(ce.value), std::abs(de.value));
    const double inv = scale > 0.0 ? 1.0 / scale : 0.0;
    pr.relative_difference = std::abs(ce.value - de.value) * inv;
    pr.error_budget = (ce.quad_abs + de.quad_abs + ce.tail_abs) * inv;
    pr.passed = pr.relative_difference <=
                std::max(tolerance, safety_factor * pr.error_budget);
    out.push_back(pr);
  }
  return out;
}

ResidualReport lemma_check(const TestSequence& alpha,
                           const BaileyParams& params,
                           const std::vector<LemmaProbe>& probes,
                           const CircleGrid& grid, const ChargeWindow& window,
                           const TruncationPolicy& policy, double tolerance,
                           double safety_factor) {
  const std::vector<ProbeResult> results = lemma_probe_results(
      alpha, params, probes, grid, window, policy, tolerance, safety_factor);

  ResidualReport rep;
  rep.tolerance = tolerance;
  rep.safety_factor = safety_factor;
  rep.passed = true;

  double worst = -1.0;
  for (const ProbeResult& pr : results) {
    if (!pr.passed) rep.passed = false;
    if (pr.relative_difference > worst) {
      worst = pr.relative_difference;
      rep.lhs = pr.chain;
      rep.rhs = pr.direct;
      rep.relative_residual = pr.relative_difference;
      rep.quadrature_error_estimate = pr.error_budget;
      rep.error_budget = pr.error_budget;
    }
  }
  return rep;
}

}  // namespace qpent
