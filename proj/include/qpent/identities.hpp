// Verification of the balanced sum/integral identities on the unit circle:
// the absolute-charge form, its signed-charge (root-free) variant, the
// pentagon form built from B-kernels, and the exact factor mapping between
// the absolute and signed left-hand sides.
//
// All four share one instance type: three "a" fugacities with charges m_i,
// three "b" fugacities with charges n_i, subject to the balancing conditions
// prod_i a_i b_i = q and sum_i (m_i + n_i) = 0.
#pragma once

#include <array>

#include "qpent/quadrature.hpp"
#include "qpent/types.hpp"

namespace qpent {

struct MainIdentityInstance {
  std::array<ChargedFugacity, 3> a;  // fugacity a_i, charge m_i
  std::array<ChargedFugacity, 3> b;  // fugacity b_i, charge n_i
  Nome nome;

  // Validates the balancing conditions (product to 1e-12 relative, charge
  // sum exactly zero) and |fugacity| < 1; throws std::invalid_argument.
  MainIdentityInstance(const std::array<ChargedFugacity, 3>& a_in,
                       const std::array<ChargedFugacity, 3>& b_in,
                       const Nome& nome_in);

  long charge_sum() const;
  cplx fugacity_product() const;
};

// How square roots of the six fugacities are correlated when an identity
// needs half-integer powers. `coherent` starts from principal roots and, if
// necessary, flips the root of b_3 so that prod_i sqrt(a_i) sqrt(b_i) equals
// -q^{1/2} exactly; the absolute-charge and pentagon equalities hold for
// exactly this correlation class. `principal` keeps all six principal roots
// unconditionally (useful for demonstrating the sign sensitivity).
enum class RootCorrelation { coherent, principal };

struct CheckOptions {
  int grid_n = 256;
  int m_max = 24;
  double tolerance = 1e-8;
  double safety_factor = 4.0;
  TruncationPolicy policy{};
  // Two-geometric extrapolation of the charge tail beyond the window; the
  // applied correction and the post-correction leftover estimate are reported
  // separately. Disable to inspect the plain truncated sums.
  bool tail_acceleration = true;
  RootCorrelation root_correlation = RootCorrelation::coherent;
};

// All error fields share the scale of relative_residual: absolute estimates
// are divided by max(|lhs|, |rhs|) so the pass rule compares like with like.
struct ResidualReport {
  cplx lhs{};
  cplx rhs{};
  double relative_residual = 0.0;  // |lhs - rhs| / max(|lhs|, |rhs|)
  double quadrature_error_estimate = 0.0;
  double charge_tail_estimate = 0.0;  // leftover after any applied correction
  double tail_correction = 0.0;       // magnitude of the applied correction
  double error_budget = 0.0;          // quadrature + leftover tail
  double tolerance = 0.0;
  double safety_factor = 0.0;
  // relative_residual <= max(tolerance, safety_factor * error_budget):
  // above-tolerance results within the budget are resolution artifacts, not
  // counterexamples.
  bool passed = false;
};

// Absolute-charge identity:
//   sum_m ∮ dz/(2 pi i z) (-q^{1/2})^E prod_i sqrt(a_i)^{-|m_i+m|}
//       sqrt(b_i)^{-|n_i-m|} z^P R(a_i z, |m_i+m|) R(b_i / z, |n_i-m|)
//     = (-q^{1/2})^F prod_{ij} sqrt(a_i b_j)^{-|m_i+n_j|} R(a_i b_j, |m_i+n_j|),
// with E = sum_i (|m_i+m| + |n_i-m|), P = sum_i (|n_i-m| - |m_i+m|)/2,
// F = sum_{ij} |m_i+n_j| (E and F are even, P is an integer).
ResidualReport main_identity_check(const MainIdentityInstance& inst,
                                   const CheckOptions& opts);

// Signed-charge (root-free) variant:
//   sum_m W^m ∮ dz/(2 pi i z) z^{Nb - 3m}
//       prod_i R(a_i z, m_i + m) R(b_i / z, n_i - m)
//     = W^{Nb} prod_i a_i^{-m_i} b_i^{-n_i} prod_{ij} R(a_i b_j, m_i + n_j),
// with W = -q^{1/2} / (a_1 a_2 a_3) and Nb = sum_i n_i.
ResidualReport no_abs_identity_check(const MainIdentityInstance& inst,
                                     const CheckOptions& opts);

// Pentagon form:
//   sum_m ∮ dz/(2 pi i z) prod_i B[a_i z, n_i + m; b_i / z, m_i - m]
//     = B[a_1 b_2, n_1 + m_2; a_3 b_1, n_3 + m_1]
//       * B[a_2 b_1, n_2 + m_1; a_3 b_2, n_3 + m_2],
// with the contour roots taken continuously along the grid and the same
// root-correlation class as the absolute-charge form.
ResidualReport pentagon_check(const MainIdentityInstance& inst,
                              const CheckOptions& opts);

// Exact bridge between the two left-hand sides: the absolute-charge LHS
// equals
//   prod_i sqrt(a_i)^{-m_i} sqrt(b_i)^{-n_i}
//     * sum_m omega^m ∮ dz/(2 pi i z) z^{Nb - 3m}
//           prod_i R(a_i z, m_i + m) R(b_i / z, n_i - m),
// with omega = prod_i sqrt(b_i) / prod_i sqrt(a_i), for any coherent root
// set. Both sides are evaluated as plain truncated sums over the same window,
// so the comparison isolates the elimination mapping itself.
ResidualReport elimination_agreement_check(const MainIdentityInstance& inst,
                                           const CheckOptions& opts,
                                           double agreement_tolerance = 1e-9);

}  // namespace qpent
