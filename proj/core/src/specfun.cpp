#include "hermitesim/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace hermite {

namespace {

// Lanczos coefficients, g = 7, n = 9 (Godfrey's set).  Gives ~1e-14
// relative error on Gamma over the range we care about.
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

double log_gamma_lanczos(double x) {
    // Valid for x >= 0.5.  Works on z = x - 1.
    const double z = x - 1.0;
    double acc = kLanczos[0];
    for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (z + i);
    const double t = z + 7.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(acc);
}

// Series for P(a, x), reliable for x < a + 1.
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 500; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-17) break;
    }
    return sum * std::exp(a * std::log(x) - x - log_gamma(a));
}

// Continued fraction for Q(a, x) = 1 - P(a, x), reliable for x >= a + 1.
// Modified Lentz iteration.
double gamma_q_contfrac(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(a * std::log(x) - x - log_gamma(a));
}

}  // namespace

double log_gamma(double x) {
    if (!(x > 0.0)) {
        std::ostringstream msg;
        msg << "log_gamma requires x > 0 (got " << x << ")";
        throw std::domain_error(msg.str());
    }
    if (x < 0.5) {
        // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
        return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma_lanczos(1.0 - x);
    }
    return log_gamma_lanczos(x);
}

double reg_lower_inc_gamma(double a, double x) {
    if (!(a > 0.0)) {
        std::ostringstream msg;
        msg << "reg_lower_inc_gamma requires a > 0 (got " << a << ")";
        throw std::domain_error(msg.str());
    }
    if (x < 0.0) {
        std::ostringstream msg;
        msg << "reg_lower_inc_gamma requires x >= 0 (got " << x << ")";
        throw std::domain_error(msg.str());
    }
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_contfrac(a, x);
}

double hermite_poly(int p, double x) {
    if (p < 0) throw std::domain_error("hermite_poly requires p >= 0");
    if (p == 0) return 1.0;
    double hm1 = 1.0;  // He_0
    double h = x;      // He_1
    for (int n = 2; n <= p; ++n) {
        const double hn = x * h - (n - 1) * hm1;
        hm1 = h;
        h = hn;
    }
    return h;
}

double factorial(int n) {
    if (n < 0 || n > 170) {
        std::ostringstream msg;
        msg << "factorial requires 0 <= n <= 170 (got " << n << ")";
        throw std::domain_error(msg.str());
    }
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

HermiteParams derive_params(double beta, int p) {
    if (p < 1) {
        std::ostringstream msg;
        msg << "order p must be a positive integer (got " << p << ")";
        throw std::domain_error(msg.str());
    }
    const double lo = 1.0 - 1.0 / p;
    if (!(beta > lo && beta < 1.0)) {
        std::ostringstream msg;
        msg << "beta must lie in the open interval (" << lo << ", 1) for p = " << p
            << " (got " << beta << ")";
        throw std::domain_error(msg.str());
    }

    HermiteParams out;
    out.p = p;
    out.beta = beta;
    out.beta_p = (beta - 1.0) * p + 1.0;
    out.hurst = 1.0 - p * (1.0 - beta) / 2.0;

    const double log_fact_p = log_gamma(p + 1.0);

    // c = sqrt( Gamma(beta_p) Gamma(beta_p + 2)
    //           / (2 p! Gamma(beta)^p Gamma(2 - beta)^p) )
    {
        const double log_num = log_gamma(out.beta_p) + log_gamma(out.beta_p + 2.0);
        const double log_den = std::log(2.0) + log_fact_p
                               + p * (log_gamma(beta) + log_gamma(2.0 - beta));
        out.c_const = std::exp(0.5 * (log_num - log_den));
    }

    // Both kernel constants share the numerator hurst * beta_p:
    //   1 - p (1 - beta) / 2 = hurst,   1 - p (1 - beta) = beta_p.
    const double log_hb = std::log(out.hurst) + std::log(out.beta_p);

    // a = sqrt( hurst * beta_p / (p! B(beta/2, 1 - beta)^p) )
    {
        const double log_beta_fn = log_gamma(beta / 2.0) + log_gamma(1.0 - beta)
                                   - log_gamma(1.0 - beta / 2.0);
        out.a_const = std::exp(0.5 * (log_hb - log_fact_p - p * log_beta_fn));
    }

    // b = sqrt( hurst * beta_p / (p! (Gamma(1-beta) sin(beta pi / 2))^p) )
    {
        const double log_spectral = log_gamma(1.0 - beta)
                                    + std::log(std::sin(beta * std::numbers::pi / 2.0));
        out.b_const = std::exp(0.5 * (log_hb - log_fact_p - p * log_spectral));
    }

    return out;
}

double scale_const_T(const HermiteParams& params, double T) {
    if (!(T > 0.0)) {
        std::ostringstream msg;
        msg << "horizon T must be positive (got " << T << ")";
        throw std::domain_error(msg.str());
    }
    return std::pow(T, params.p * (1.0 - params.beta) / 2.0) * params.c_const;
}

}  // namespace hermite
