#pragma once

#include "eisen/types.hpp"

namespace eisen::specfun {

// Principal-branch log Gamma. Lanczos rational approximation, reflection for
// Re s < 1/2. Non-positive integer inputs raise PoleError.
cplx log_gamma(cplx s);

// Gamma via exp(log_gamma).
cplx gamma(cplx s);

// d/ds log Gamma(s).
cplx digamma(cplx s);

// Riemann zeta by Euler-Maclaurin with an explicit remainder bound.
// Valid at least on Re s > -1; s = 1 raises PoleError.
SfResult zeta(cplx s, const PrecisionConfig& cfg = {});

// zeta'(s), same Euler-Maclaurin sum differentiated term by term.
SfResult zeta_deriv(cplx s, const PrecisionConfig& cfg = {});

// zeta'(s)/zeta(s). Raises ConditioningError when |zeta(s)| is tiny.
SfResult zeta_log_deriv(cplx s, const PrecisionConfig& cfg = {});

// K_{it}(y) for real t, y > 0 (real-valued).
SfResult bessel_k_imag_order(double t, double y, const PrecisionConfig& cfg = {});

// Modified Bessel K of general complex order (power series below the
// oscillatory threshold, cosh-integral trapezoid above it).
SfResult bessel_k_complex_order(cplx nu, double y, const PrecisionConfig& cfg = {});

// Whittaker W_{kappa,mu}(z), z > 0. Integer kappa: seeds at 0 and 1 from
// K-Bessel, three-term recurrence upward with a cancellation monitor, direct
// Laplace-integral quadrature for kappa <= -1. Non-integer kappa <= 1/2 uses
// the Laplace integral directly.
SfResult whittaker_w(double kappa, cplx mu, double z, const PrecisionConfig& cfg = {});

}  // namespace eisen::specfun
