// Unit-circle quadrature and the truncated charge-sum / contour-integral
// combination that every identity checker is built on.
//
// Integrals are taken with the Haar measure dz/(2 pi i z) on |z| = 1, which
// the N-point trapezoid rule turns into a plain average over the N-th roots
// of unity. For integrands analytic in an annulus around the circle the rule
// converges geometrically: the error is the sum of the aliased Laurent
// coefficients c_{kN}, of size (pole modulus)^N.
#pragma once

#include <functional>
#include <vector>

#include "qpent/types.hpp"

namespace qpent {

// The N-th roots of unity together with a continuous choice of square root
// along the contour: half_points[j] = exp(i pi j / N) squares to points[j]
// and advances by a half-step angle per node, so root-carrying integrands
// never jump branches between adjacent nodes.
struct CircleGrid {
  int n_points = 0;
  std::vector<cplx> points;
  std::vector<cplx> half_points;
};

CircleGrid make_circle_grid(int n_points);

// (1/N) sum_j f(j, z_j): the trapezoid rule for the Haar integral of f.
cplx circle_integral(const std::function<cplx(int j, cplx z)>& f,
                     const CircleGrid& grid);

// Symmetric truncation of an infinite charge sum: m in [-m_max, m_max].
struct ChargeWindow {
  int m_max = 0;
};

struct SumIntegralResult {
  // Plain truncated sum of per-charge contour integrals (no acceleration).
  cplx value{};
  // A-posteriori grid estimate: |value(N) - value(N/2)| using the even
  // subsample of the same evaluations.
  double quadrature_error_estimate = 0.0;
  // Geometric extrapolation of the dropped charge tail from the decay of the
  // last three shells on each side of the window.
  double charge_tail_estimate = 0.0;
  // Shell integrals T_m indexed by m + m_max; kept for diagnostics and for
  // tail acceleration layered on top by callers.
  std::vector<cplx> shell_values;
};

// Evaluates sum_{m=-M}^{M} (1/N) sum_j term(m, j, z_j).
//
// Throws DecayViolation when the final three shell magnitudes on either side
// of the window are non-decreasing (the tail estimate would be meaningless).
SumIntegralResult charge_sum_integral(
    const std::function<cplx(long m, int j, cplx z)>& term,
    const ChargeWindow& window, const CircleGrid& grid);

}  // namespace qpent
