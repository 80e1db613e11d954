#include "qpent/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace qpent {

CircleGrid make_circle_grid(int n_points) {
  if (n_points < 1) {
    throw std::invalid_argument("circle grid needs at least one point");
  }
  CircleGrid g;
  g.n_points = n_points;
  g.points.resize(n_points);
  g.half_points.resize(n_points);
  for (int j = 0; j < n_points; ++j) {
    const double th = std::numbers::pi * static_cast<double>(j) /
                      static_cast<double>(n_points);
    g.half_points[j] = cplx(std::cos(th), std::sin(th));
    g.points[j] = g.half_points[j] * g.half_points[j];
  }
  return g;
}

cplx circle_integral(const std::function<cplx(int j, cplx z)>& f,
                     const CircleGrid& grid) {
  cplx acc(0.0, 0.0);
  for (int j = 0; j < grid.n_points; ++j) {
    acc += f(j, grid.points[j]);
  }
  return acc / static_cast<double>(grid.n_points);
}

namespace {

// One-sided geometric tail estimate from the outermost three shell
// magnitudes u0 = |T_{M-2}|, u1 = |T_{M-1}|, u2 = |T_M|.
double side_tail(double u0, double u1, double u2, bool* violated) {
  if (u2 == 0.0) return 0.0;
  if (u0 <= u1 && u1 <= u2) {
    *violated = true;
    return u2;
  }
  if (u0 == 0.0) return u2;
  const double r = std::sqrt(u2 / u0);  // per-shell decay ratio
  if (r >= 1.0) return std::max(u1, u2);
  return u2 * r / (1.0 - r);
}

}  // namespace

SumIntegralResult charge_sum_integral(
    const std::function<cplx(long m, int j, cplx z)>& term,
    const ChargeWindow& window, const CircleGrid& grid) {
  const int M = window.m_max;
  const int N = grid.n_points;
  SumIntegralResult res;
  res.shell_values.resize(2 * M + 1);

  cplx full(0.0, 0.0);
  cplx half(0.0, 0.0);
  const bool can_halve = (N % 2 == 0) && N >= 2;
  for (int m = -M; m <= M; ++m) {
    cplx shell(0.0, 0.0);
    cplx shell_half(0.0, 0.0);
    for (int j = 0; j < N; ++j) {
      const cplx v = term(m, j, grid.points[j]);
      shell += v;
      if (can_halve && (j % 2 == 0)) shell_half += v;
    }
    shell /= static_cast<double>(N);
    res.shell_values[m + M] = shell;
    full += shell;
    if (can_halve) half += shell_half / static_cast<double>(N / 2);
  }
  res.value = full;
  res.quadrature_error_estimate = can_halve ? std::abs(full - half) : 0.0;

  if (M >= 3) {
    bool violated = false;
    const auto mag = [&](int m) { return std::abs(res.shell_values[m + M]); };
    const double top =
        side_tail(mag(M - 2), mag(M - 1), mag(M), &violated);
    const double bot =
        side_tail(mag(-(M - 2)), mag(-(M - 1)), mag(-M), &violated);
    if (violated) {
      std::ostringstream os;
      os << "charge shells stopped decaying at the window edge (|T| = "
         << mag(M - 2) << ", " << mag(M - 1) << ", " << mag(M) << " / "
         << mag(-(M - 2)) << ", " << mag(-(M - 1)) << ", " << mag(-M)
         << "); enlarge m_max";
      throw DecayViolation(os.str());
    }
    res.charge_tail_estimate = top + bot;
  }
  return res;
}

}  // namespace qpent
