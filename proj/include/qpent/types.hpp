// Core value types shared across the library: the nome with its fixed square
// root, charged fugacities, truncation policies, and the error taxonomy.
#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qpent {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Errors. Everything derives from std::runtime_error so callers can catch the
// whole family at once; the concrete types let tests pin specific failures.
// ---------------------------------------------------------------------------

// |q| >= 1, or a supplied square root that does not square to q.
struct InvalidNome : std::runtime_error {
  explicit InvalidNome(const std::string& msg) : std::runtime_error(msg) {}
};

// An infinite-product truncation whose tail cannot be certified below the
// requested target within the configured maximum number of terms.
struct NonconvergentTail : std::runtime_error {
  explicit NonconvergentTail(const std::string& msg) : std::runtime_error(msg) {}
};

// A kernel denominator vanished (or numerically vanished) at an evaluation
// point: the requested value sits on a pole.
struct PoleHit : std::runtime_error {
  explicit PoleHit(const std::string& msg) : std::runtime_error(msg) {}
};

// The charge-window terms stopped decaying where geometric decay is required
// for a meaningful truncation-tail estimate.
struct DecayViolation : std::runtime_error {
  explicit DecayViolation(const std::string& msg) : std::runtime_error(msg) {}
};

// A rejection sampler exceeded its retry budget: the configured constraint
// region is (near-)infeasible.
struct ExhaustedResampling : std::runtime_error {
  explicit ExhaustedResampling(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or inconsistent run configuration (file, environment, or flags).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// ---------------------------------------------------------------------------
// Nome: the series base q with |q| < 1, together with a fixed choice of its
// square root. Every half-integer power q^{c/2} in the library is taken as
// q_half^c with this one root, so all branch decisions are made in a single
// place and remain coherent within an evaluation.
// ---------------------------------------------------------------------------
class Nome {
 public:
  // Principal square root.
  explicit Nome(cplx q);
  // Explicit root; must satisfy q_half^2 == q to ~1e-12 relative.
  Nome(cplx q, cplx q_half);

  cplx q() const { return q_; }
  cplx q_half() const { return q_half_; }
  double abs_q() const { return std::abs(q_); }

  // q^{c/2} = q_half^c for any (possibly negative) integer charge c.
  cplx half_pow(long c) const;

 private:
  cplx q_;
  cplx q_half_;
};

// Integer power of a complex number by binary exponentiation; exact for the
// exponent arithmetic and deterministic across platforms.
cplx pow_int(cplx base, long e);

// A fugacity paired with its integer charge.
struct ChargedFugacity {
  cplx fugacity{};
  long charge = 0;
};

// Truncation control for infinite q-products: hard cap on factors plus the
// tail size at which iteration may stop early.
struct TruncationPolicy {
  int max_terms = 300;
  double target_tail = 1e-15;
};

// A kernel evaluation together with a certified relative tail bound for the
// truncated infinite products it contains.
struct KernelValue {
  cplx value{};
  double tail_bound = 0.0;
};

}  // namespace qpent
