#include "hermitesim/hermite_paths.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <utility>

#include <nlohmann/json.hpp>

#include "hermitesim/covering.hpp"
#include "hermitesim/gaussian_field.hpp"
#include "hermitesim/interval_set.hpp"
#include "hermitesim/local_time.hpp"
#include "hermitesim/rng.hpp"

namespace hermite {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr int kMaxChaosCells = 1 << 22;
constexpr long kMaxTimedomainCells = 8L * 1000 * 1000;
constexpr int kMaxAtomsForTuples = 4096;

void validate_common(const SimConfig& cfg) {
    if (cfg.replicates < 1) throw std::invalid_argument("replicate count must be at least 1");
    if (!(cfg.horizon > 0.0)) throw std::domain_error("horizon must be positive");
    if (cfg.t_grid.empty()) throw std::invalid_argument("output time grid is empty");
    double prev = -1.0;
    for (double t : cfg.t_grid) {
        if (!(t >= 0.0) || t > cfg.horizon)
            throw std::invalid_argument("output times must lie in [0, horizon]");
        if (!(t > prev))
            throw std::invalid_argument("output times must be strictly increasing");
        prev = t;
    }
}

PathEnsemble make_skeleton(const SimConfig& cfg) {
    PathEnsemble ens;
    ens.t_grid = cfg.t_grid;
    ens.values.assign(static_cast<std::size_t>(cfg.replicates),
                      std::vector<double>(cfg.t_grid.size(), 0.0));
    ens.meta.config = cfg;
    return ens;
}

// Rescales every path so the sample variance at t = 1 is exactly 1.
void apply_empirical_norm(PathEnsemble& ens) {
    std::size_t idx = ens.t_grid.size();
    for (std::size_t k = 0; k < ens.t_grid.size(); ++k) {
        if (std::abs(ens.t_grid[k] - 1.0) <= 1e-12) {
            idx = k;
            break;
        }
    }
    if (idx == ens.t_grid.size())
        throw std::invalid_argument("empirical normalization requires t = 1 on the output grid");
    const std::size_t n = ens.values.size();
    if (n < 2)
        throw std::invalid_argument("empirical normalization needs at least 2 replicates");
    double mean = 0.0;
    for (const auto& row : ens.values) mean += row[idx];
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (const auto& row : ens.values) {
        const double d = row[idx] - mean;
        ss += d * d;
    }
    const double var = ss / static_cast<double>(n - 1);
    if (!(var > 0.0)) throw NumericalError("ensemble variance at t = 1 is degenerate");
    const double scale = 1.0 / std::sqrt(var);
    for (auto& row : ens.values)
        for (double& v : row) v *= scale;
    ens.meta.norm_scale = scale;
}

void finalize(PathEnsemble& ens, Clock::time_point t0) {
    if (ens.meta.config.empirical_norm) apply_empirical_norm(ens);
    ens.meta.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
}

// Number of grid-cell midpoints (j + 1/2) delta strictly below t, capped at n.
std::size_t midpoints_below(double t, double delta, std::size_t n) {
    const double q = t / delta - 0.5;
    if (q <= 0.0) return 0;
    const auto cnt = static_cast<std::size_t>(std::ceil(q - 1e-12));
    return std::min(cnt, n);
}

}  // namespace

Route route_from_string(const std::string& name) {
    if (name == "chaos") return Route::chaos;
    if (name == "atoms") return Route::atoms;
    if (name == "timedomain") return Route::timedomain;
    if (name == "fbm_exact") return Route::fbm_exact;
    throw std::invalid_argument("unknown route '" + name +
                                "' (expected chaos|atoms|timedomain|fbm_exact)");
}

std::string route_to_string(Route route) {
    switch (route) {
        case Route::chaos: return "chaos";
        case Route::atoms: return "atoms";
        case Route::timedomain: return "timedomain";
        case Route::fbm_exact: return "fbm_exact";
    }
    throw std::invalid_argument("unknown route value");
}

NormMode norm_mode_from_string(const std::string& name) {
    if (name == "asymptotic") return NormMode::asymptotic;
    if (name == "exact_drift") return NormMode::exact_drift;
    throw std::invalid_argument("unknown normalization mode '" + name +
                                "' (expected asymptotic|exact_drift)");
}

std::string norm_mode_to_string(NormMode mode) {
    return mode == NormMode::asymptotic ? "asymptotic" : "exact_drift";
}

double chaos_kappa(const HermiteParams& params, double eps, NormMode mode) {
    if (!(eps > 0.0)) throw std::domain_error("eps must be positive");
    const double log_ee = std::log(eps) - 1.0;  // ln(eps/e)
    if (mode == NormMode::asymptotic) {
        // (Gamma(beta) Gamma(2-beta))^{p/2} / Gamma(beta_p) * (eps/e)^{p(beta-1)/2}
        return std::exp(0.5 * params.p * (log_gamma(params.beta) + log_gamma(2.0 - params.beta)) -
                        log_gamma(params.beta_p) +
                        0.5 * params.p * (params.beta - 1.0) * log_ee);
    }
    // (eps/e)^{beta_p - 1} (d_eps Gamma(2-beta))^{p/2} / Gamma(beta_p)
    const double drift = drift_d_eps(params.beta, eps);
    return std::exp((params.beta_p - 1.0) * log_ee - log_gamma(params.beta_p) +
                    0.5 * params.p * (std::log(drift) + log_gamma(2.0 - params.beta)));
}

double timedomain_h(double beta, double t, double x) {
    if (!(beta > 0.0) || !(beta < 1.0)) throw std::domain_error("beta must lie in (0, 1)");
    if (x >= t) return 0.0;
    const double half = 0.5 * beta;
    const double grown = std::pow(t - x, half);
    const double base = x < 0.0 ? std::pow(-x, half) : 0.0;
    return (grown - base) * (2.0 / beta);
}

PathEnsemble simulate_chaos(const SimConfig& cfg) {
    const auto t0 = Clock::now();
    validate_common(cfg);
    if (!(cfg.eps > 0.0)) throw std::domain_error("eps must be positive");
    if (!(cfg.delta > 0.0)) throw std::domain_error("delta must be positive");
    if (cfg.delta > cfg.eps)
        throw std::invalid_argument("chaos route requires delta <= eps");

    const auto n_cells_real = std::ceil(cfg.horizon / cfg.delta - 1e-9);
    if (n_cells_real > kMaxChaosCells)
        throw CapacityError("chaos grid exceeds the cell capacity; increase delta");
    const auto n_cells = static_cast<std::size_t>(n_cells_real);
    if (n_cells < 2)
        throw std::invalid_argument("delta is too coarse for the horizon (need >= 2 cells)");

    PathEnsemble ens = make_skeleton(cfg);
    if (cfg.delta > cfg.eps / 4.0)
        ens.meta.warnings.push_back(
            "delta exceeds eps/4: the covariance kink at eps is under-resolved");

    const HermiteParams& pr = cfg.params;
    std::vector<std::size_t> cut(cfg.t_grid.size());
    for (std::size_t k = 0; k < cut.size(); ++k)
        cut[k] = midpoints_below(cfg.t_grid[k], cfg.delta, n_cells);

    const CovarianceGrid cov =
        cov_grid_p_eps(pr.beta, cfg.eps, cfg.delta, static_cast<int>(n_cells));
    const StationarySampler sampler(cov);
    const double pref = pr.c_const * chaos_kappa(pr, cfg.eps, cfg.norm_mode) * cfg.delta;

    parallel_for(ens.values.size(), cfg.workers, [&](std::size_t i) {
        auto rng = replicate_rng(cfg.seed, i);
        std::vector<double> field(n_cells);
        sampler.sample(rng, field);
        auto& row = ens.values[i];
        double acc = 0.0;
        std::size_t j = 0;
        for (std::size_t k = 0; k < cut.size(); ++k) {
            while (j < cut[k]) {
                acc += hermite_poly(pr.p, field[j]);
                ++j;
            }
            row[k] = pref * acc;
        }
    });
    finalize(ens, t0);
    return ens;
}

PathEnsemble simulate_atoms(const SimConfig& cfg) {
    const auto t0 = Clock::now();
    validate_common(cfg);
    const HermiteParams& pr = cfg.params;
    if (pr.p > 3)
        throw CapacityError("atoms route supports order p <= 3 (tuple enumeration cost)");
    if (cfg.atom_count < 4 * pr.p)
        throw std::invalid_argument("atom count must be at least 4p");
    if (cfg.atom_count > kMaxAtomsForTuples)
        throw CapacityError("atom count exceeds the tuple-enumeration capacity");
    if (!(cfg.eps > 0.0)) throw std::domain_error("eps must be positive");

    PathEnsemble ens = make_skeleton(cfg);
    const int m_atoms = cfg.atom_count;
    const std::size_t tg_n = cfg.t_grid.size();
    const double t_last = cfg.t_grid.back();
    const double pref = local_time_prefactor(pr, cfg.eps);
    const double scale = scale_const_T(pr, cfg.horizon) * factorial(pr.p) *
                         std::exp(-0.5 * pr.p * std::log(static_cast<double>(m_atoms)));

    parallel_for(ens.values.size(), cfg.workers, [&](std::size_t i) {
        auto rng = replicate_rng(cfg.seed, i);
        std::normal_distribution<double> normal(0.0, 1.0);
        std::vector<ShiftedAtom> atoms;
        atoms.reserve(static_cast<std::size_t>(m_atoms));
        std::vector<double> weight(static_cast<std::size_t>(m_atoms));
        for (int j = 0; j < m_atoms; ++j) {
            atoms.push_back(make_atom(pr.beta, cfg.eps, cfg.horizon, cfg.horizon, rng));
            weight[static_cast<std::size_t>(j)] = normal(rng);
        }

        std::vector<double> acc(tg_n, 0.0);
        std::vector<double> tmp(tg_n, 0.0);
        const std::vector<Interval>* lists[3] = {nullptr, nullptr, nullptr};
        auto add_tuple = [&](int n_lists, double gw) {
            detail::tuple_measure_grid(lists, n_lists, pref, cfg.t_grid, tmp);
            for (std::size_t k = 0; k < tg_n; ++k) acc[k] += tmp[k] * gw;
        };
        // A shifted set starts at its shift, so tuples whose largest shift
        // reaches past the last output time contribute nothing.
        if (pr.p == 1) {
            for (int a = 0; a < m_atoms; ++a) {
                if (atoms[a].shift >= t_last) continue;
                lists[0] = &atoms[a].set.parts();
                add_tuple(1, weight[a]);
            }
        } else if (pr.p == 2) {
            for (int a = 0; a < m_atoms; ++a) {
                if (atoms[a].shift >= t_last) continue;
                lists[0] = &atoms[a].set.parts();
                for (int b = a + 1; b < m_atoms; ++b) {
                    if (atoms[b].shift >= t_last) continue;
                    lists[1] = &atoms[b].set.parts();
                    add_tuple(2, weight[a] * weight[b]);
                }
            }
        } else {
            for (int a = 0; a < m_atoms; ++a) {
                if (atoms[a].shift >= t_last) continue;
                lists[0] = &atoms[a].set.parts();
                for (int b = a + 1; b < m_atoms; ++b) {
                    if (atoms[b].shift >= t_last) continue;
                    lists[1] = &atoms[b].set.parts();
                    for (int c = b + 1; c < m_atoms; ++c) {
                        if (atoms[c].shift >= t_last) continue;
                        lists[2] = &atoms[c].set.parts();
                        add_tuple(3, weight[a] * weight[b] * weight[c]);
                    }
                }
            }
        }
        auto& row = ens.values[i];
        for (std::size_t k = 0; k < tg_n; ++k) row[k] = scale * acc[k];
    });
    finalize(ens, t0);
    return ens;
}

PathEnsemble simulate_timedomain(const SimConfig& cfg) {
    const auto t0 = Clock::now();
    validate_common(cfg);
    const HermiteParams& pr = cfg.params;
    if (pr.p > 2)
        throw CapacityError("time-domain route supports order p <= 2 (cost grows as grid^p)");
    if (!(cfg.x_cut > 0.0)) throw std::domain_error("x_cut must be positive");
    if (!(cfg.delta > 0.0)) throw std::domain_error("delta must be positive");

    const double delta = cfg.delta;
    const long off = std::lround(std::ceil(cfg.x_cut / delta - 1e-9));
    const long n_s = std::lround(std::ceil(cfg.horizon / delta - 1e-9));
    const long cells = off + n_s;
    if (cells > kMaxTimedomainCells)
        throw CapacityError("time-domain lattice exceeds the cell capacity; increase delta");
    const double x_left = static_cast<double>(off) * delta;  // realized truncation

    PathEnsemble ens = make_skeleton(cfg);
    const double beta = pr.beta;
    {
        // Relative variance omitted left of -X: the one-dimensional bound
        // t^2 X^{beta-1}/(1-beta) against the full kernel energy
        // t^{beta+1} 2 B(beta/2, 1-beta) / (beta (beta+1)), times p.
        const double t_ref = std::max(cfg.t_grid.back(), 0.5 * cfg.horizon);
        const double log_b =
            log_gamma(0.5 * beta) + log_gamma(1.0 - beta) - log_gamma(1.0 - 0.5 * beta);
        const double energy = std::exp((beta + 1.0) * std::log(t_ref) + log_b) * 2.0 /
                              (beta * (beta + 1.0));
        const double omitted =
            t_ref * t_ref * std::pow(x_left, beta - 1.0) / (1.0 - beta);
        const double fraction = pr.p * omitted / energy;
        if (fraction > 0.01) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "x_cut omits up to %.2f%% of the kernel variance; increase x_cut",
                          100.0 * fraction);
            ens.meta.warnings.emplace_back(buf);
        }
    }

    const std::size_t tg_n = cfg.t_grid.size();
    const std::size_t k_cells = static_cast<std::size_t>(cells);
    const double sqrt_delta = std::sqrt(delta);
    const double a_const = pr.a_const;

    if (pr.p == 1) {
        // Exact kernel values at cell midpoints, shared across replicates.
        std::vector<double> kernel(tg_n * k_cells);
        for (std::size_t k = 0; k < tg_n; ++k) {
            const double t = cfg.t_grid[k];
            double* row = kernel.data() + k * k_cells;
            for (std::size_t i = 0; i < k_cells; ++i) {
                const double x = -x_left + (static_cast<double>(i) + 0.5) * delta;
                row[i] = timedomain_h(beta, t, x);
            }
        }
        parallel_for(ens.values.size(), cfg.workers, [&](std::size_t i) {
            auto rng = replicate_rng(cfg.seed, i);
            std::normal_distribution<double> normal(0.0, 1.0);
            std::vector<double> noise(k_cells);
            for (double& x : noise) x = sqrt_delta * normal(rng);
            auto& row = ens.values[i];
            for (std::size_t k = 0; k < tg_n; ++k) {
                const double* h = kernel.data() + k * k_cells;
                double acc = 0.0;
                for (std::size_t u = 0; u < k_cells; ++u) acc += h[u] * noise[u];
                row[k] = a_const * acc;
            }
        });
        finalize(ens, t0);
        return ens;
    }

    // Order 2: Z(t) = a * sum_{s-cells <= t} (S(s)^2 - Q(s)) * delta where
    // S(s) = sum_i (s - x_i)_+^{beta/2-1} xi_i and Q is the same sum with
    // squared factors and squared noise; subtracting Q removes the diagonal
    // exactly.  The s-lattice sits at cell edges, the x-lattice at midpoints,
    // so every factor is a lattice power ((m + 1/2) delta)^{beta/2-1}.
    std::vector<double> pow_tab(k_cells);
    std::vector<double> pow_tab2(k_cells);
    for (std::size_t m = 0; m < k_cells; ++m) {
        const double v = std::pow((static_cast<double>(m) + 0.5) * delta, 0.5 * beta - 1.0);
        pow_tab[m] = v;
        pow_tab2[m] = v * v;
    }
    // s-cells counted per output time: m(t) = floor(t/delta), capped at n_s.
    std::vector<long> s_count(tg_n);
    for (std::size_t k = 0; k < tg_n; ++k)
        s_count[k] = std::min(n_s, static_cast<long>(std::floor(cfg.t_grid[k] / delta + 1e-9)));

    parallel_for(ens.values.size(), cfg.workers, [&](std::size_t i) {
        auto rng = replicate_rng(cfg.seed, i);
        std::normal_distribution<double> normal(0.0, 1.0);
        std::vector<double> noise_rev(k_cells);
        std::vector<double> noise2_rev(k_cells);
        for (std::size_t u = 0; u < k_cells; ++u) {
            const double x = sqrt_delta * normal(rng);
            noise_rev[k_cells - 1 - u] = x;
            noise2_rev[k_cells - 1 - u] = x * x;
        }
        auto& row = ens.values[i];
        std::size_t kt = 0;
        while (kt < tg_n && s_count[kt] == 0) row[kt++] = 0.0;
        double acc = 0.0;
        for (long k = 1; k <= n_s && kt < tg_n; ++k) {
            const std::size_t base = static_cast<std::size_t>(n_s - k);
            const std::size_t len = static_cast<std::size_t>(k + off);
            const double* xr = noise_rev.data() + base;
            const double* x2r = noise2_rev.data() + base;
            double s_val = 0.0;
            double q_val = 0.0;
            for (std::size_t u = 0; u < len; ++u) {
                s_val += pow_tab[u] * xr[u];
                q_val += pow_tab2[u] * x2r[u];
            }
            acc += s_val * s_val - q_val;
            while (kt < tg_n && s_count[kt] == k) row[kt++] = a_const * delta * acc;
        }
        while (kt < tg_n) row[kt++] = a_const * delta * acc;
    });
    finalize(ens, t0);
    return ens;
}

PathEnsemble simulate_fbm_exact(const SimConfig& cfg) {
    const auto t0 = Clock::now();
    validate_common(cfg);
    PathEnsemble ens = make_skeleton(cfg);
    const FbmSampler sampler(cfg.params.hurst, cfg.t_grid);
    parallel_for(ens.values.size(), cfg.workers, [&](std::size_t i) {
        auto rng = replicate_rng(cfg.seed, i);
        sampler.sample(rng, ens.values[i]);
    });
    finalize(ens, t0);
    return ens;
}

PathEnsemble simulate(const SimConfig& cfg) {
    switch (cfg.route) {
        case Route::chaos: return simulate_chaos(cfg);
        case Route::atoms: return simulate_atoms(cfg);
        case Route::timedomain: return simulate_timedomain(cfg);
        case Route::fbm_exact: return simulate_fbm_exact(cfg);
    }
    throw std::invalid_argument("unknown route value");
}

std::string dump_atom_sets_json(const SimConfig& cfg, int replicate) {
    validate_common(cfg);
    if (!(cfg.eps > 0.0)) throw std::domain_error("eps must be positive");
    if (replicate < 0 || replicate >= cfg.replicates)
        throw std::invalid_argument("replicate index out of range");
    auto rng = replicate_rng(cfg.seed, static_cast<std::uint64_t>(replicate));
    std::normal_distribution<double> normal(0.0, 1.0);
    json out;
    out["replicate"] = replicate;
    out["beta"] = cfg.params.beta;
    out["eps"] = cfg.eps;
    out["horizon"] = cfg.horizon;
    json arr = json::array();
    for (int j = 0; j < cfg.atom_count; ++j) {
        const ShiftedAtom atom =
            make_atom(cfg.params.beta, cfg.eps, cfg.horizon, cfg.horizon, rng);
        (void)normal(rng);  // keep the stream aligned with the weight draw
        json parts = json::array();
        for (const auto& iv : atom.set.parts()) parts.push_back(json::array({iv.lo, iv.hi}));
        arr.push_back(json{{"shift", atom.shift}, {"set", std::move(parts)}});
    }
    out["atoms"] = std::move(arr);
    return out.dump(2) + "\n";
}

std::string ensemble_to_csv(const PathEnsemble& ens) {
    std::string out = "replicate,t,value\n";
    char buf[96];
    for (std::size_t i = 0; i < ens.values.size(); ++i) {
        for (std::size_t k = 0; k < ens.t_grid.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g\n",
                          static_cast<unsigned long long>(i), ens.t_grid[k],
                          ens.values[i][k]);
            out += buf;
        }
    }
    return out;
}

namespace {

json meta_to_json(const EnsembleMeta& meta) {
    const SimConfig& cfg = meta.config;
    // Execution knobs (workers) and wall clock stay out: serialized bytes
    // must depend on the model parameters and seed alone.
    return json{{"route", route_to_string(cfg.route)},
                {"beta", cfg.params.beta},
                {"p", cfg.params.p},
                {"eps", cfg.eps},
                {"delta", cfg.delta},
                {"atom_count", cfg.atom_count},
                {"x_cut", cfg.x_cut},
                {"horizon", cfg.horizon},
                {"replicates", cfg.replicates},
                {"seed", cfg.seed},
                {"norm_mode", norm_mode_to_string(cfg.norm_mode)},
                {"empirical_norm", cfg.empirical_norm},
                {"norm_scale", meta.norm_scale},
                {"generator", meta.generator},
                {"warnings", meta.warnings}};
}

}  // namespace

std::string ensemble_to_json(const PathEnsemble& ens) {
    json j;
    j["schema"] = "hermite-path-ensemble/1";
    j["t_grid"] = ens.t_grid;
    j["values"] = ens.values;
    j["meta"] = meta_to_json(ens.meta);
    return j.dump(2) + "\n";
}

PathEnsemble ensemble_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        PathEnsemble ens;
        ens.t_grid = j.at("t_grid").get<std::vector<double>>();
        ens.values = j.at("values").get<std::vector<std::vector<double>>>();
        for (const auto& row : ens.values)
            if (row.size() != ens.t_grid.size())
                throw std::invalid_argument("ensemble JSON has inconsistent row lengths");
        const json& m = j.at("meta");
        SimConfig cfg;
        cfg.params = derive_params(m.at("beta").get<double>(), m.at("p").get<int>());
        cfg.route = route_from_string(m.at("route").get<std::string>());
        cfg.eps = m.at("eps").get<double>();
        cfg.delta = m.at("delta").get<double>();
        cfg.atom_count = m.at("atom_count").get<int>();
        cfg.x_cut = m.at("x_cut").get<double>();
        cfg.horizon = m.at("horizon").get<double>();
        cfg.replicates = m.at("replicates").get<int>();
        cfg.seed = m.at("seed").get<std::uint64_t>();
        cfg.norm_mode = norm_mode_from_string(m.at("norm_mode").get<std::string>());
        cfg.empirical_norm = m.at("empirical_norm").get<bool>();
        cfg.t_grid = ens.t_grid;
        ens.meta.config = std::move(cfg);
        ens.meta.norm_scale = m.at("norm_scale").get<double>();
        ens.meta.generator = m.at("generator").get<std::string>();
        ens.meta.warnings = m.at("warnings").get<std::vector<std::string>>();
        return ens;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed ensemble JSON: ") + e.what());
    }
}

}  // namespace hermite
