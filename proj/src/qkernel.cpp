#include "qpent/qkernel.hpp"

#include <cmath>
#include <sstream>
#include <tuple>
#include <utility>

namespace qpent {

namespace {

std::string describe(cplx z) {
  std::ostringstream os;
  os << "(" << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i)";
  return os.str();
}

}  // namespace

Nome::Nome(cplx q) : q_(q), q_half_(std::sqrt(q)) {
  if (std::abs(q) >= 1.0) {
    throw InvalidNome("nome modulus must be < 1, got |q| = " +
                      std::to_string(std::abs(q)));
  }
}

Nome::Nome(cplx q, cplx q_half) : q_(q), q_half_(q_half) {
  if (std::abs(q) >= 1.0) {
    throw InvalidNome("nome modulus must be < 1, got |q| = " +
                      std::to_string(std::abs(q)));
  }
  const double err = std::abs(q_half * q_half - q);
  if (err > 1e-12 * std::max(1.0, std::abs(q))) {
    throw InvalidNome("q_half^2 differs from q by " + std::to_string(err));
  }
}

cplx Nome::half_pow(long c) const { return pow_int(q_half_, c); }

cplx pow_int(cplx base, long e) {
  if (e == 0) return cplx(1.0, 0.0);
  unsigned long n = e < 0 ? static_cast<unsigned long>(-(e + 1)) + 1UL
                          : static_cast<unsigned long>(e);
  cplx acc(1.0, 0.0);
  cplx b = base;
  while (n != 0) {
    if (n & 1UL) acc *= b;
    b *= b;
    n >>= 1;
  }
  return e < 0 ? cplx(1.0, 0.0) / acc : acc;
}

KernelValue qpochhammer(cplx z, const Nome& nome,
                        const TruncationPolicy& policy) {
  const double r = nome.abs_q();
  cplx prod(1.0, 0.0);
  cplx w = z;  // z q^k
  int k = 0;
  for (; k < policy.max_terms; ++k) {
    const double aw = std::abs(w);
    if (aw < 1.0) {
      // Geometric bound on the remaining log-tail:
      //   sum_{j>=0} |w| r^j / (1 - |w| r^j)  <=  |w| / ((1 - |w|)(1 - r)).
      const double bound = aw / ((1.0 - aw) * (1.0 - r));
      if (bound <= policy.target_tail) {
        return {prod, bound};
      }
    }
    prod *= (1.0 - w);
    w *= nome.q();
  }
  const double aw = std::abs(w);
  if (aw >= 1.0) {
    throw NonconvergentTail("q-Pochhammer tail not certifiable: |z q^K| = " +
                            std::to_string(aw) + " at K = " +
                            std::to_string(policy.max_terms) + " for z = " +
                            describe(z));
  }
  return {prod, aw / ((1.0 - aw) * (1.0 - r))};
}

KernelValue charged_ratio(cplx z, long charge, const Nome& nome,
                          const TruncationPolicy& policy) {
  const cplx f = nome.half_pow(charge);
  const KernelValue num = qpochhammer(nome.q() * f / z, nome, policy);
  const KernelValue den = qpochhammer(f * z, nome, policy);
  if (std::abs(den.value) == 0.0) {
    throw PoleHit("charged ratio denominator vanished at z = " + describe(z) +
                  ", charge = " + std::to_string(charge));
  }
  // Relative bounds compose multiplicatively; keep the first-order sum plus
  // the cross term.
  const double bound =
      num.tail_bound + den.tail_bound + num.tail_bound * den.tail_bound;
  return {num.value / den.value, bound};
}

KernelValue ratio_abs(cplx z, long charge, const Nome& nome,
                      const TruncationPolicy& policy) {
  return charged_ratio(z, std::labs(charge), nome, policy);
}

cplx elimination_factor(cplx z, long m, const Nome& nome) {
  const long e = (std::labs(m) - m) / 2;
  return pow_int(-z / nome.q_half(), e);
}

KernelValue b_kernel_rooted(cplx a, cplx root_a, long n, cplx b, cplx root_b,
                            long m, const Nome& nome,
                            const TruncationPolicy& policy) {
  // The kernel is symmetric under exchanging the slot pairs; evaluating in a
  // canonical slot order makes the symmetry exact to the last bit, not just
  // to rounding.
  const auto key = [](cplx f, long charge) {
    return std::tuple<double, double, long>(f.real(), f.imag(), charge);
  };
  if (key(b, m) < key(a, n)) {
    std::swap(a, b);
    std::swap(root_a, root_b);
    std::swap(n, m);
  }
  const long c = n + m;
  const long an = std::labs(n);
  const long am = std::labs(m);
  const long ac = std::labs(c);
  const long e = (an + am - ac) / 2;  // always a non-negative integer

  const KernelValue ra = ratio_abs(a, n, nome, policy);
  const KernelValue rb = ratio_abs(b, m, nome, policy);
  const KernelValue rab = ratio_abs(a * b, c, nome, policy);
  if (std::abs(rab.value) == 0.0) {
    throw PoleHit("B-kernel cross-ratio vanished for slots " + describe(a) +
                  ", " + describe(b));
  }
  const cplx pref = pow_int(-nome.q_half(), e) * pow_int(root_a, -an) *
                    pow_int(root_b, -am) * pow_int(root_a * root_b, ac);
  const double bound = ra.tail_bound + rb.tail_bound + rab.tail_bound +
                       ra.tail_bound * rb.tail_bound;
  return {pref * ra.value * rb.value / rab.value, bound};
}

KernelValue b_kernel(cplx a, long n, cplx b, long m, const Nome& nome,
                     const TruncationPolicy& policy) {
  return b_kernel_rooted(a, std::sqrt(a), n, b, std::sqrt(b), m, nome, policy);
}

}  // namespace qpent
