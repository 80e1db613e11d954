// q-series building blocks: the q-Pochhammer infinite product, charged
// fugacity ratios (signed-charge and absolute-charge conventions), the factor
// connecting the two conventions, and the two-slot B-kernel used by the
// pentagon identity and the Bailey lemma.
#pragma once

#include "qpent/types.hpp"

namespace qpent {

// (z; q)_infinity = prod_{k>=0} (1 - z q^k), truncated after K factors with
//
//   tail_bound >= sum_{k>=K} |z||q|^k / (1 - |z||q|^k),
//
// which dominates |log| of the dropped factors and hence the relative
// truncation error. K is the smallest count that drives the bound below
// policy.target_tail, capped at policy.max_terms. Throws NonconvergentTail
// when even the capped truncation cannot be certified (|z||q|^K >= 1).
KernelValue qpochhammer(cplx z, const Nome& nome,
                        const TruncationPolicy& policy = {});

// Signed-charge ratio of shifted q-Pochhammer symbols:
//
//   R(z, c) = (q^{1+c/2} / z; q)_inf / (q^{c/2} z; q)_inf ,
//
// with q^{c/2} = nome.q_half()^c. For odd c the value depends on the chosen
// square root of q; the Nome fixes that branch once per evaluation context.
// Throws PoleHit if the denominator product vanishes.
KernelValue charged_ratio(cplx z, long charge, const Nome& nome,
                          const TruncationPolicy& policy = {});

// Absolute-charge convention: R(z, |c|).
KernelValue ratio_abs(cplx z, long charge, const Nome& nome,
                      const TruncationPolicy& policy = {});

// The exact factor relating the two conventions,
//
//   R(z, |m|) = (-q^{-1/2} z)^{(|m| - m)/2} * R(z, m).
//
// The exponent (|m| - m)/2 is a non-negative integer, so the factor is
// root-free in z.
cplx elimination_factor(cplx z, long m, const Nome& nome);

// Two-slot kernel
//
//   B[a, n; b, m] = (-q^{1/2})^{e} * ra^{-|n|} rb^{-|m|} (ra rb)^{|n+m|}
//                   * R(a, |n|) R(b, |m|) / R(a b, |n+m|),
//   e = (|n| + |m| - |n+m|) / 2,
//
// where ra, rb are square roots of the slot fugacities and e is always a
// non-negative integer. The default roots are principal; callers assembling
// contour integrands pass explicit roots so that the root varies continuously
// along the integration circle (see CircleGrid::half_points).
// B is symmetric under swapping the slot pairs and invariant under negating
// both charges.
KernelValue b_kernel(cplx a, long n, cplx b, long m, const Nome& nome,
                     const TruncationPolicy& policy = {});
KernelValue b_kernel_rooted(cplx a, cplx root_a, long n, cplx b, cplx root_b,
                            long m, const Nome& nome,
                            const TruncationPolicy& policy = {});

}  // namespace qpent
