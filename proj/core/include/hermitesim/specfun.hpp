#pragma once

#include <stdexcept>

// Special functions and derived normalization constants for Hermite
// processes of order p with memory parameter beta in (1 - 1/p, 1).
// All gamma-ratio constants are assembled in log space: for p >= 3 the
// individual gamma factors overflow double well inside the valid
// parameter range.

namespace hermite {

// Thrown when a computation cannot be completed at working precision
// (non-realizable covariance, failed factorization, ...).  The CLI maps
// this to exit code 3.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when an input exceeds a hard implementation limit (grid sizes,
// chaos order caps).  The CLI maps this to exit code 2.
struct CapacityError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// log Gamma(x) for x > 0, Lanczos approximation (g = 7, 9 terms).
// Relative error is below 1e-13 for x in [1e-3, 1e3].
double log_gamma(double x);

// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a)
// for a > 0, x >= 0.  Series expansion for x < a + 1, Lentz continued
// fraction otherwise; absolute error below 1e-12.
double reg_lower_inc_gamma(double a, double x);

// Probabilists' Hermite polynomial He_p, He_0 = 1, He_1 = x,
// He_p(x) = x He_{p-1}(x) - (p-1) He_{p-2}(x).
double hermite_poly(int p, double x);

// n! as a double; n in [0, 170].
double factorial(int n);

// Parameters derived from (beta, p).  hurst is the self-similarity
// index of the limiting process; beta_p = (beta - 1) p + 1 is the decay
// exponent of the p-fold correlation product, and beta_p + 1 = 2 hurst.
struct HermiteParams {
    int p = 1;
    double beta = 0.0;
    double beta_p = 0.0;
    double hurst = 0.0;
    double a_const = 0.0;  // time-domain kernel normalization
    double b_const = 0.0;  // spectral kernel normalization
    double c_const = 0.0;  // local-time / chaos normalization, horizon 1
};

// Validates beta strictly inside (1 - 1/p, 1) and p >= 1, then fills in
// the derived constants.  Throws std::domain_error naming the valid
// range on violation.
HermiteParams derive_params(double beta, int p);

// Horizon rescaling of c_const: T^{p (1 - beta) / 2} * c_const.
// The shift law on [0, T] carries total mass T^{1-beta} relative to the
// unit horizon, and the chaos weight absorbs its square root per factor.
double scale_const_T(const HermiteParams& params, double T);

}  // namespace hermite
