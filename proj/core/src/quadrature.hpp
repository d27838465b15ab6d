#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

// Internal adaptive quadrature wrapper.  Callers are responsible for
// reparameterizing away integrable endpoint singularities first; plain
// adaptive subdivision stalls on x^{alpha-1}-type integrands.

namespace hermite::detail {

template <class F>
double integrate(const F& f, double a, double b, double tol = 1e-11) {
    if (!(b > a)) return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 15, tol);
}

}  // namespace hermite::detail
