#include "hermitesim/local_time.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "quadrature.hpp"

namespace hermite {

double local_time_prefactor(const HermiteParams& params, double eps) {
    if (!(eps > 0.0)) {
        std::ostringstream msg;
        msg << "local_time_prefactor requires eps > 0 (got " << eps << ")";
        throw std::domain_error(msg.str());
    }
    return std::exp((params.beta_p - 1.0) * (std::log(eps) - 1.0) - log_gamma(params.beta_p));
}

namespace detail {

void tuple_measure_grid(const std::vector<Interval>* const* lists, int n_lists,
                        double pref, std::span<const double> t_grid,
                        std::span<double> out) {
    std::size_t idx[3] = {0, 0, 0};
    std::size_t k = 0;
    double acc = 0.0;

    auto flush_below = [&](double bound) {
        // Checkpoints strictly below the next overlap start see only acc.
        while (k < t_grid.size() && t_grid[k] < bound) out[k++] = acc;
    };

    while (k < t_grid.size()) {
        double lo = 0.0;
        double hi = std::numeric_limits<double>::infinity();
        bool exhausted = false;
        for (int j = 0; j < n_lists; ++j) {
            if (idx[j] >= lists[j]->size()) {
                exhausted = true;
                break;
            }
            const Interval& iv = (*lists[j])[idx[j]];
            lo = std::max(lo, iv.lo);
            hi = std::min(hi, iv.hi);
        }
        if (exhausted) break;

        if (lo <= hi) {
            // [lo, hi] lies in the intersection.
            flush_below(lo);
            while (k < t_grid.size() && t_grid[k] <= hi) {
                out[k] = acc + (t_grid[k] - lo);
                ++k;
            }
            acc += hi - lo;
        }
        // Advance every list whose current part ends first.
        double min_hi = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n_lists; ++j) min_hi = std::min(min_hi, (*lists[j])[idx[j]].hi);
        for (int j = 0; j < n_lists; ++j) {
            if ((*lists[j])[idx[j]].hi == min_hi) ++idx[j];
        }
    }
    while (k < t_grid.size()) out[k++] = acc;
    for (double& v : out) v *= pref;
}

}  // namespace detail

namespace {

void check_atoms(std::span<const ShiftedAtom> atoms, const HermiteParams& params,
                 double eps, double t_max) {
    if (static_cast<int>(atoms.size()) != params.p) {
        std::ostringstream msg;
        msg << "approx_local_time requires exactly p = " << params.p
            << " atoms (got " << atoms.size() << ")";
        throw std::invalid_argument(msg.str());
    }
    for (const ShiftedAtom& a : atoms) {
        if (a.cover.eps != eps) {
            std::ostringstream msg;
            msg << "atom sampled at eps = " << a.cover.eps
                << " does not match requested eps = " << eps;
            throw std::invalid_argument(msg.str());
        }
        if (a.set.window() < t_max) {
            std::ostringstream msg;
            msg << "atom window " << a.set.window() << " is smaller than the "
                << "largest evaluation time " << t_max;
            throw std::invalid_argument(msg.str());
        }
    }
}

}  // namespace

std::vector<double> approx_local_time_grid(std::span<const ShiftedAtom> atoms,
                                           const HermiteParams& params, double eps,
                                           std::span<const double> t_grid) {
    if (t_grid.empty()) return {};
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (t_grid[i] < 0.0 || (i > 0 && t_grid[i] <= t_grid[i - 1])) {
            throw std::invalid_argument("t_grid must be increasing and nonnegative");
        }
    }
    check_atoms(atoms, params, eps, t_grid.back());

    const std::vector<Interval>* lists[3];
    for (std::size_t i = 0; i < atoms.size(); ++i) lists[i] = &atoms[i].set.parts();
    std::vector<double> out(t_grid.size());
    detail::tuple_measure_grid(lists, static_cast<int>(atoms.size()),
                               local_time_prefactor(params, eps), t_grid, out);
    return out;
}

double approx_local_time(std::span<const ShiftedAtom> atoms,
                         const HermiteParams& params, double eps, double t) {
    const double ts[1] = {t};
    return approx_local_time_grid(atoms, params, eps, ts)[0];
}

std::vector<double> kingman_local_time(const IntervalSet& F, double beta_loc,
                                       double t, std::span<const long> levels) {
    if (!(beta_loc > 0.0 && beta_loc < 1.0)) {
        std::ostringstream msg;
        msg << "kingman_local_time requires beta in (0, 1) (got " << beta_loc << ")";
        throw std::domain_error(msg.str());
    }
    if (!(t >= 0.0 && t <= F.window())) {
        std::ostringstream msg;
        msg << "kingman_local_time requires 0 <= t <= window (got t=" << t
            << ", window=" << F.window() << ")";
        throw std::invalid_argument(msg.str());
    }
    const IntervalSet restricted = F.intersect(IntervalSet(F.window(), {{0.0, t}}));
    const double log_norm = log_gamma(2.0 - beta_loc);

    std::vector<double> out;
    out.reserve(levels.size());
    for (long n : levels) {
        if (n < 1) throw std::invalid_argument("kingman levels must be positive integers");
        const double half = 0.5 / static_cast<double>(n);
        // Merged length of the sausage F' + [-half, half] over the whole
        // line; intentionally not clipped to the window.
        double len = 0.0;
        double cur_lo = 0.0, cur_hi = 0.0;
        bool open = false;
        for (const Interval& iv : restricted.parts()) {
            const double lo = iv.lo - half;
            const double hi = iv.hi + half;
            if (open && lo <= cur_hi) {
                cur_hi = std::max(cur_hi, hi);
            } else {
                if (open) len += cur_hi - cur_lo;
                cur_lo = lo;
                cur_hi = hi;
                open = true;
            }
        }
        if (open) len += cur_hi - cur_lo;
        out.push_back(len * std::exp(log_norm + (1.0 - beta_loc) * std::log(static_cast<double>(n))));
    }
    return out;
}

double moment_oracle_closed(const HermiteParams& params, int r, double t) {
    if (r < 0) throw std::domain_error("moment order r must be >= 0");
    if (t < 0.0) throw std::domain_error("moment_oracle_closed requires t >= 0");
    if (r == 0) return 1.0;
    const double bp = params.beta_p;
    const double log_coeff = log_gamma(r + 1.0)
                             + params.p * (log_gamma(2.0 - params.beta) + log_gamma(params.beta))
                             - log_gamma((r - 1.0) * bp + 2.0)
                             - log_gamma(bp);
    return std::exp(log_coeff) * std::pow(t, (r - 1.0) * bp + 1.0);
}

namespace {

// int_0^{min(x1,1)} v^{-beta} (x1 - v)^{beta-1} dv, singularities at
// both ends removed by exact power substitutions.
double shift_weight_integral(double beta, double x1) {
    if (x1 <= 0.0) return 0.0;
    const double m = std::min(x1, 1.0);
    const double split = m / 2.0;

    // v in [0, split]: v = w^{1/(1-beta)} flattens v^{-beta} dv to dw/(1-beta).
    const double wmax = std::pow(split, 1.0 - beta);
    const double left = detail::integrate(
                            [beta, x1](double w) {
                                const double v = std::pow(w, 1.0 / (1.0 - beta));
                                return std::pow(x1 - v, beta - 1.0);
                            },
                            0.0, wmax)
                        / (1.0 - beta);

    // v in [split, m]: u = (x1 - v)^beta flattens (x1-v)^{beta-1} dv to du/beta.
    const double u_lo = std::pow(x1 - m, beta);
    const double u_hi = std::pow(x1 - split, beta);
    const double right = detail::integrate(
                             [beta, x1](double u) {
                                 const double v = x1 - std::pow(u, 1.0 / beta);
                                 return std::pow(v, -beta);
                             },
                             u_lo, u_hi)
                         / beta;

    return left + right;
}

}  // namespace

double moment_oracle_numeric(const HermiteParams& params, int r, double t) {
    if (r < 0) throw std::domain_error("moment order r must be >= 0");
    if (r > 3) {
        std::ostringstream msg;
        msg << "moment_oracle_numeric supports r <= 3 (got " << r << ")";
        throw CapacityError(msg.str());
    }
    if (!(t > 0.0)) throw std::domain_error("moment_oracle_numeric requires t > 0");
    if (r == 0) return 1.0;

    const double beta = params.beta;
    const double bp = params.beta_p;
    const int p = params.p;

    auto g = [beta, p](double x1) {
        return std::pow((1.0 - beta) * shift_weight_integral(beta, x1), p);
    };

    // Innermost simplex levels, outside in.  Each gap integral uses
    // u = (x_j - x_{j-1})^{beta_p}, turning the (x_j - x_{j-1})^{beta_p-1}
    // weight into a constant du/beta_p.
    auto level1 = [&](double x_prev) {  // int_{x_prev}^t (x - x_prev)^{bp-1} dx
        const double umax = std::pow(t - x_prev, bp);
        return detail::integrate([](double) { return 1.0; }, 0.0, umax) / bp;
    };
    auto level2 = [&](double x_prev) {
        const double umax = std::pow(t - x_prev, bp);
        return detail::integrate(
                   [&](double u) { return level1(x_prev + std::pow(u, 1.0 / bp)); },
                   0.0, umax)
               / bp;
    };

    double simplex = 0.0;
    switch (r) {
        case 1:
            simplex = detail::integrate(g, 0.0, t, 1e-10);
            break;
        case 2:
            simplex = detail::integrate([&](double x1) { return g(x1) * level1(x1); },
                                        0.0, t, 1e-10);
            break;
        case 3:
            simplex = detail::integrate([&](double x1) { return g(x1) * level2(x1); },
                                        0.0, t, 1e-9);
            break;
        default:
            break;
    }

    return std::exp(log_gamma(r + 1.0) - r * log_gamma(bp)) * simplex;
}

}  // namespace hermite
