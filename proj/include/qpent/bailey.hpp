// Integral Bailey pairs: finitely-supported test sequences of Laurent
// polynomials, the B-kernel action producing the partner sequence, and the
// one-step lemma that maps a pair for parameter t to a pair for parameter
// s t — verified by comparing two independent evaluation routes.
//
// All contour integrals use the Haar measure dz/(2 pi i z) on |z| = 1.
#pragma once

#include <map>
#include <vector>

#include "qpent/identities.hpp"
#include "qpent/quadrature.hpp"
#include "qpent/types.hpp"

namespace qpent {

// A sequence {alpha_n(z)} with finitely many nonzero components, each a
// Laurent polynomial in z. Components are addressed by the integer index n;
// evaluation outside the support returns 0.
class TestSequence {
 public:
  // z-power -> coefficient.
  using Component = std::map<long, cplx>;

  TestSequence() = default;

  // The sequence whose only nonzero component is alpha_n(z) = coeff * z^k.
  static TestSequence monomial(long n, long power, cplx coeff = cplx(1.0, 0.0));

  // Adds coeff * z^power to component n (creating it if absent).
  void add_term(long n, long power, cplx coeff);

  cplx eval(long n, cplx z) const;

  // Sorted list of indices with a stored component.
  std::vector<long> support() const;

  // Largest |z-power| across all components; 0 for the zero sequence.
  long degree_bound() const;

  bool empty() const { return components_.empty(); }

  // The sequence {c * alpha_n(z)}.
  TestSequence scaled(cplx c) const;

 private:
  std::map<long, Component> components_;
};

// The lemma's parameter set: fugacities t, s, u, w with charges n_t, n_s,
// n_u over a fixed nome. The constructor enforces
//
//   n_u + n_s + n_t = 0,
//
// and the pole-separation system that keeps every kernel denominator
// fugacity inside the unit disc:
//
//   |t w|, |t / w|, |s w|, |s / w|, |u|, |q / (s^2 t^2 u)|,
//   |s t w|, |s t / w|, |t u|, |s^2 t u|  all < 1.
//
// Violations throw std::invalid_argument naming the offending constraint.
// Principal square roots of the four fugacities are fixed at construction;
// every half-integer power in the kernels below is assembled from these four
// roots and the contour's continuous root, so both evaluation routes share
// one coherent branch system.
class BaileyParams {
 public:
  BaileyParams(cplx t, cplx s, cplx u, cplx w, long n_t, long n_s, long n_u,
               const Nome& nome);

  cplx t() const { return t_; }
  cplx s() const { return s_; }
  cplx u() const { return u_; }
  cplx w() const { return w_; }
  long n_t() const { return n_t_; }
  long n_s() const { return n_s_; }
  long n_u() const { return n_u_; }
  const Nome& nome() const { return nome_; }

  cplx root_t() const { return root_t_; }
  cplx root_s() const { return root_s_; }
  cplx root_u() const { return root_u_; }
  cplx root_w() const { return root_w_; }

 private:
  cplx t_, s_, u_, w_;
  long n_t_, n_s_, n_u_;
  Nome nome_;
  cplx root_t_, root_s_, root_u_, root_w_;
};

// The kernel action defining the partner sequence:
//
//   beta_m(w) = sum_{n in support} ∮ dz/(2 pi i z)
//                 B[t w / z, m - n + n_t; t z / w, -m + n + n_t] alpha_n(z).
//
// root_w fixes sqrt(w); the z-roots run continuously along the grid. The
// unrooted overload uses the principal sqrt(w).
//
// kernel_action_at is the definition-level entry point: the action depends
// only on (t, n_t) and the nome. The overloads taking BaileyParams delegate
// to it; they additionally carry the lemma's constraint system, which a
// stand-alone kernel-action evaluation does not need.
cplx kernel_action_at(const TestSequence& alpha, cplx t, cplx root_t, long n_t,
                      const Nome& nome, long m, cplx w, cplx root_w,
                      const CircleGrid& grid,
                      const TruncationPolicy& policy = {});
cplx kernel_action_rooted(const TestSequence& alpha, const BaileyParams& params,
                          long m, cplx w, cplx root_w, const CircleGrid& grid,
                          const TruncationPolicy& policy = {});
cplx kernel_action(const TestSequence& alpha, const BaileyParams& params,
                   long m, cplx w, const CircleGrid& grid, const ChargeWindow&,
                   const TruncationPolicy& policy = {});

// beta_m tabulated on the quadrature grid for m in [-m_max, m_max], as
// needed by the chain route. `full` holds the N-point values; `half` holds
// the same construction from the even z-subsample, giving the chain route a
// free inner-resolution error estimate.
struct BetaFunction {
  int m_max = 0;
  std::vector<std::vector<cplx>> full;  // [m + m_max][grid index]
  std::vector<std::vector<cplx>> half;
};

BetaFunction tabulate_beta(const TestSequence& alpha,
                           const BaileyParams& params, const CircleGrid& grid,
                           const ChargeWindow& window,
                           const TruncationPolicy& policy = {});

// Pointwise value of the primed sequence:
//
//   alpha'_n(w) = B[t u w, n + n_u + n_t; s^2, 2 n_s] * alpha_n(w),
//
// the new pair's alpha for parameter s t.
cplx primed_alpha_rooted(const TestSequence& alpha, const BaileyParams& params,
                         long n, cplx w, cplx root_w,
                         const TruncationPolicy& policy = {});
cplx primed_alpha(const TestSequence& alpha, const BaileyParams& params,
                  long n, cplx w, const TruncationPolicy& policy = {});

// Route 1 — the chain: the new beta from the old beta,
//
//   beta'_n(w) = sum_m ∮ dx/(2 pi i x)
//                  B[s w / x, -m + n + n_s; u x, n_u + m]
//                * B[s t^2 u w, n + 2 n_t + n_u + n_s; s x / w, -n + m + n_s]
//                * beta_m(x),
//
// with beta_m(x) given by the kernel action above. The overload taking a
// BetaFunction reuses a precomputed table across probes; the plain overload
// tabulates internally.
cplx primed_beta_via_chain(const TestSequence& alpha,
                           const BaileyParams& params, const BetaFunction& beta,
                           long n, cplx w, cplx root_w, const CircleGrid& grid,
                           const ChargeWindow& window,
                           const TruncationPolicy& policy = {});
cplx primed_beta_via_chain(const TestSequence& alpha,
                           const BaileyParams& params, long n, cplx w,
                           const CircleGrid& grid, const ChargeWindow& window,
                           const TruncationPolicy& policy = {});

// Route 2 — direct: the new beta as the s t kernel action on the primed
// alpha,
//
//   beta'_n(w) = sum_{p in support} ∮ dy/(2 pi i y)
//                  B[s t w / y, n - p + n_s + n_t; s t y / w, -n + p + n_s + n_t]
//                * alpha'_p(y).
cplx primed_beta_direct_rooted(const TestSequence& alpha,
                               const BaileyParams& params, long n, cplx w,
                               cplx root_w, const CircleGrid& grid,
                               const TruncationPolicy& policy = {});
cplx primed_beta_direct(const TestSequence& alpha, const BaileyParams& params,
                        long n, cplx w, const CircleGrid& grid,
                        const ChargeWindow&,
                        const TruncationPolicy& policy = {});

// An evaluation point for the route comparison: component index n and a
// point w on the unit circle.
struct LemmaProbe {
  long n = 0;
  cplx w{1.0, 0.0};
};

// n in {-1, 0, 1} crossed with w in {1, i}.
std::vector<LemmaProbe> default_probes();

// Both route values at one probe. error_budget combines the outer-grid
// halving estimates of both routes, the chain's inner-resolution estimate
// from the half-sample beta table, and the chain's charge-tail estimate,
// all relative to max(|chain|, |direct|).
struct ProbeResult {
  LemmaProbe probe;
  cplx chain{};
  cplx direct{};
  double relative_difference = 0.0;
  double error_budget = 0.0;
  bool passed = false;
};

// Evaluates both routes at every probe against one shared beta table.
std::vector<ProbeResult> lemma_probe_results(
    const TestSequence& alpha, const BaileyParams& params,
    const std::vector<LemmaProbe>& probes, const CircleGrid& grid,
    const ChargeWindow& window, const TruncationPolicy& policy = {},
    double tolerance = 1e-6, double safety_factor = 4.0);

// Folds the probe results into one report: the worst relative difference,
// with lhs/rhs holding the chain/direct values at that probe; passed only if
// every probe passes.
ResidualReport lemma_check(const TestSequence& alpha,
                           const BaileyParams& params,
                           const std::vector<LemmaProbe>& probes,
                           const CircleGrid& grid, const ChargeWindow& window,
                           const TruncationPolicy& policy = {},
                           double tolerance = 1e-6,
                           double safety_factor = 4.0);

}  // namespace qpent
