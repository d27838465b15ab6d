#pragma once

#include <span>
#include <vector>

#include "hermitesim/covering.hpp"
#include "hermitesim/specfun.hpp"

// Approximate local time of intersected shifted covering sets, the
// Kingman-type sausage estimator, and the moment oracles used to
// validate both.

namespace hermite {

// (eps/e)^{beta_p - 1} / Gamma(beta_p): the scaling that turns Lebesgue
// measure of the p-fold intersection into an approximate local time.
double local_time_prefactor(const HermiteParams& params, double eps);

// L_t = prefactor * lambda{ x in [0, t] : x in every shifted set }.
// Requires exactly params.p atoms, all sampled at the same eps on a
// common window >= t.
double approx_local_time(std::span<const ShiftedAtom> atoms,
                         const HermiteParams& params, double eps, double t);

// Same quantity at several increasing times in one sweep of the
// intersection; this is what the atoms route calls per index tuple.
std::vector<double> approx_local_time_grid(std::span<const ShiftedAtom> atoms,
                                           const HermiteParams& params, double eps,
                                           std::span<const double> t_grid);

// Level-n sausage estimates lambda(F' + [-1/(2n), 1/(2n)]) / l(n) for
// F' = F intersect [0, t] and l(n) = n^{beta_loc - 1} / Gamma(2 - beta_loc).
// The sausage is measured on the whole real line (not clipped to the
// window): a full interval [0, t] at level n gives
// Gamma(2 - beta_loc) n^{1 - beta_loc} (t + 1/n), a single point gives
// Gamma(2 - beta_loc) n^{-beta_loc}.
std::vector<double> kingman_local_time(const IntervalSet& F, double beta_loc,
                                       double t, std::span<const long> levels);

// r-th moment of the limiting local time at time t (eps -> 0, unit
// horizon shifts):
//   r! Gamma(2-beta)^p Gamma(beta)^p t^{(r-1) beta_p + 1}
//     / ( Gamma((r-1) beta_p + 2) Gamma(beta_p) )
// Assembled in log space; r = 0 returns 1.
double moment_oracle_closed(const HermiteParams& params, int r, double t);

// The same moment evaluated by nested adaptive quadrature of the
// simplex integral
//   r!/Gamma(beta_p)^r int_{0<x_1<...<x_r<t}
//     ( int_0^1 (1-beta) v^{-beta} (x_1 - v)_+^{beta-1} dv )^p
//     prod_{j>=2} (x_j - x_{j-1})^{beta_p - 1} dx,
// with every integrable power singularity removed by an exact
// reparameterization (v = w^{1/(1-beta)} | v = x_1 - u^{1/beta} for the
// shift integral, x_j = x_{j-1} + u^{1/beta_p} between simplex levels)
// before a Gauss-Kronrod rule sees the integrand.  Supports r <= 3;
// absolute accuracy ~1e-7.  Never uses the beta-gamma reduction the
// closed form is derived from, so agreement between the two oracles is
// an independent check of the closed form's t-exponent.
double moment_oracle_numeric(const HermiteParams& params, int r, double t);

namespace detail {

// Prefix measures of the intersection of up to three canonical part
// lists, evaluated at increasing checkpoints; allocation-free.  out[k]
// receives lambda(intersection of sets[0..n) on [0, t_grid[k]]) * pref.
void tuple_measure_grid(const std::vector<Interval>* const* lists, int n_lists,
                        double pref, std::span<const double> t_grid,
                        std::span<double> out);

}  // namespace detail

}  // namespace hermite
