#pragma once

#include <random>

#include "hermitesim/interval_set.hpp"

// Random covering construction: Poisson open intervals (y, y + z) on
// [0, window] with intensity (1 - beta) dy z^{-2} dz on {z >= eps}, and
// the closed set of points they leave uncovered.  The uncovered set is
// a discrete regenerative skeleton whose renewal density approaches
// x^{beta-1} / Gamma(beta) as eps -> 0; all closed forms below are the
// finite-eps quantities used to normalize that limit.

namespace hermite {

struct CoveringSample {
    double beta = 0.0;
    double eps = 0.0;
    double window = 0.0;
    IntervalSet uncovered;
};

// One covering sample on [0, window]: N ~ Poisson((1-beta) window / eps)
// intervals with y ~ U[0, window] and z = eps / U (inverse-CDF of the
// normalized z-marginal eps z^{-2} on [eps, inf), untruncated).  Draw
// order per interval is (y, then z).
CoveringSample sample_covering(double beta, double eps, double window,
                               std::mt19937_64& rng);

// P(x uncovered) = exp((beta-1) x / eps)              for 0 <= x <= eps
//                = (eps/e)^{1-beta} x^{beta-1}        for x > eps
// and 0 for x < 0.  Continuous at x = eps (both branches equal
// e^{beta-1} there).
double hitting_prob(double beta, double eps, double x);

// Rescaled hitting probability f_eps(x) = (eps/e)^{beta-1} p_eps(x); for
// x > eps this equals x^{beta-1} independently of eps, and as eps -> 0
// it increases pointwise to the limit x^{beta-1} 1{x > 0}.  eps = 0
// returns that limit directly (0 at x = 0 by the indicator convention).
double f_eps(double beta, double eps, double x);

// Laplace-normalized drift d_eps = int_0^inf e^{-x} p_eps(x) dx, in
// closed form:
//   (1 - e^{-(eps+1-beta)}) / (1 + (1-beta)/eps)
//     + (eps/e)^{1-beta} Gamma(beta) (1 - P(beta, eps))
// with P the regularized lower incomplete gamma.  d_eps ~
// Gamma(beta) (eps/e)^{1-beta} as eps -> 0.
double drift_d_eps(double beta, double eps);

// Quantile of the stationary shift law on [0, T]: CDF T^{beta-1} v^{1-beta},
// so v = T u^{1/(1-beta)} for u in [0, 1].
double shift_quantile(double beta, double T, double u);

// One shift draw V = shift_quantile(beta, T, U), U ~ U[0,1).
double sample_shift_V(double beta, double T, std::mt19937_64& rng);

// A covering sample together with an independent shift: the building
// block of the atoms route.  shifted = uncovered translated by shift and
// clipped back into [0, window].
struct ShiftedAtom {
    CoveringSample cover;
    double shift = 0.0;
    IntervalSet set;
};

// Draws the covering first, then the shift, from the same generator.
// Requires window >= T so the shifted set still covers [0, T].
ShiftedAtom make_atom(double beta, double eps, double T, double window,
                      std::mt19937_64& rng);

}  // namespace hermite
