#include "hermitesim/covering.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "hermitesim/specfun.hpp"

namespace hermite {

namespace {

void require_beta_unit(double beta, const char* who) {
    if (!(beta > 0.0 && beta < 1.0)) {
        std::ostringstream msg;
        msg << who << " requires beta in the open interval (0, 1) (got " << beta << ")";
        throw std::domain_error(msg.str());
    }
}

void require_positive(double v, const char* name, const char* who) {
    if (!(v > 0.0)) {
        std::ostringstream msg;
        msg << who << " requires " << name << " > 0 (got " << v << ")";
        throw std::domain_error(msg.str());
    }
}

}  // namespace

CoveringSample sample_covering(double beta, double eps, double window,
                               std::mt19937_64& rng) {
    require_beta_unit(beta, "sample_covering");
    require_positive(eps, "eps", "sample_covering");
    require_positive(window, "window", "sample_covering");

    const double lambda = (1.0 - beta) * window / eps;
    std::poisson_distribution<long> count(lambda);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const long n = count(rng);
    std::vector<std::pair<double, double>> cover;
    cover.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        const double y = window * unit(rng);
        double u = unit(rng);
        while (u == 0.0) u = unit(rng);  // z = eps/u must stay finite
        cover.emplace_back(y, eps / u);
    }

    CoveringSample out;
    out.beta = beta;
    out.eps = eps;
    out.window = window;
    out.uncovered = complement_of_open_cover(window, cover);
    return out;
}

double hitting_prob(double beta, double eps, double x) {
    require_beta_unit(beta, "hitting_prob");
    require_positive(eps, "eps", "hitting_prob");
    if (x < 0.0) return 0.0;
    if (x <= eps) return std::exp((beta - 1.0) * x / eps);
    return std::pow(eps / std::numbers::e, 1.0 - beta) * std::pow(x, beta - 1.0);
}

double f_eps(double beta, double eps, double x) {
    require_beta_unit(beta, "f_eps");
    if (eps < 0.0) {
        std::ostringstream msg;
        msg << "f_eps requires eps >= 0 (got " << eps << ")";
        throw std::domain_error(msg.str());
    }
    if (x < 0.0) return 0.0;
    if (eps == 0.0) return x > 0.0 ? std::pow(x, beta - 1.0) : 0.0;
    // Exact rescaling of the hitting probability, so the identity
    // f_eps = (eps/e)^{beta-1} p_eps holds bit-for-bit.
    return std::pow(eps / std::numbers::e, beta - 1.0) * hitting_prob(beta, eps, x);
}

double drift_d_eps(double beta, double eps) {
    require_beta_unit(beta, "drift_d_eps");
    require_positive(eps, "eps", "drift_d_eps");
    // int_0^eps e^{-x(1 + (1-beta)/eps)} dx
    const double inner = (1.0 - std::exp(-(eps + 1.0 - beta))) / (1.0 + (1.0 - beta) / eps);
    // (eps/e)^{1-beta} int_eps^inf e^{-x} x^{beta-1} dx
    const double tail = std::pow(eps / std::numbers::e, 1.0 - beta)
                        * std::exp(log_gamma(beta))
                        * (1.0 - reg_lower_inc_gamma(beta, eps));
    return inner + tail;
}

double shift_quantile(double beta, double T, double u) {
    require_beta_unit(beta, "shift_quantile");
    require_positive(T, "T", "shift_quantile");
    if (!(u >= 0.0 && u <= 1.0)) {
        std::ostringstream msg;
        msg << "shift_quantile requires u in [0, 1] (got " << u << ")";
        throw std::domain_error(msg.str());
    }
    return T * std::pow(u, 1.0 / (1.0 - beta));
}

double sample_shift_V(double beta, double T, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    return shift_quantile(beta, T, unit(rng));
}

ShiftedAtom make_atom(double beta, double eps, double T, double window,
                      std::mt19937_64& rng) {
    require_positive(T, "T", "make_atom");
    if (window < T) {
        std::ostringstream msg;
        msg << "make_atom requires window >= T so the shifted set covers the "
               "evaluation horizon (got window=" << window << ", T=" << T << ")";
        throw std::invalid_argument(msg.str());
    }
    ShiftedAtom atom;
    atom.cover = sample_covering(beta, eps, window, rng);
    atom.shift = sample_shift_V(beta, T, rng);
    atom.set = atom.cover.uncovered.shift_clip(atom.shift);
    return atom;
}

}  // namespace hermite
