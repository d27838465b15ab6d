#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hermitesim/specfun.hpp"

namespace hermite {

// Synthesis routes:
//  chaos      — Hermite polynomial of a stationary Gaussian field on a grid,
//               normalized by the covering drift (kappa below).
//  atoms      — sum over distinct tuples of shifted covering sets weighted by
//               Gaussian factors and their joint approximate local time.
//  timedomain — moving-average representation driven by white noise with the
//               kernel integral of products of one-sided power factors.
//  fbm_exact  — exact fractional Brownian motion (order-1 reference law).
enum class Route { chaos, atoms, timedomain, fbm_exact };

Route route_from_string(const std::string& name);
std::string route_to_string(Route route);

// Normalization of the chaos route: `asymptotic` substitutes the small-eps
// limit of the drift, `exact_drift` keeps the closed-form drift at finite eps.
// The two agree up to O(eps^beta).
enum class NormMode { asymptotic, exact_drift };

NormMode norm_mode_from_string(const std::string& name);
std::string norm_mode_to_string(NormMode mode);

struct SimConfig {
    HermiteParams params;
    Route route = Route::chaos;
    double eps = 5e-3;                           // covering scale (chaos, atoms)
    double delta = 1e-3;                         // grid step (chaos, timedomain)
    int atom_count = 256;                        // M (atoms)
    double x_cut = 50.0;                         // left truncation X (timedomain)
    double horizon = 1.0;                        // T
    std::vector<double> t_grid = {0.25, 0.5, 1.0};  // output times within [0, T]
    int replicates = 100;
    std::uint64_t seed = 0;
    int workers = 1;
    NormMode norm_mode = NormMode::asymptotic;
    bool empirical_norm = false;                 // rescale so Var Z(1) = 1 exactly
};

struct EnsembleMeta {
    SimConfig config;
    std::string generator = "mt19937_64 seeded per replicate from (seed, index)";
    std::vector<std::string> warnings;
    double norm_scale = 1.0;   // multiplier applied by empirical normalization
    double wall_seconds = 0.0; // in-memory diagnostic; never serialized
};

struct PathEnsemble {
    std::vector<double> t_grid;
    std::vector<std::vector<double>> values;  // replicate-major: values[i][k] = Z_i(t_k)
    EnsembleMeta meta;
};

// Normalization factor kappa of the chaos route.
double chaos_kappa(const HermiteParams& params, double eps, NormMode mode);

// Closed-form kernel integral of the moving-average representation:
// integral over s in (0, t) of (s - x)_+^{beta/2 - 1}, i.e.
// ((t - x)_+^{beta/2} - (-x)_+^{beta/2}) * (2 / beta). Zero for x >= t.
double timedomain_h(double beta, double t, double x);

PathEnsemble simulate_chaos(const SimConfig& cfg);
PathEnsemble simulate_atoms(const SimConfig& cfg);
PathEnsemble simulate_timedomain(const SimConfig& cfg);
PathEnsemble simulate_fbm_exact(const SimConfig& cfg);

// Dispatch on cfg.route.
PathEnsemble simulate(const SimConfig& cfg);

// Interval sets (one JSON array per atom) underlying one atoms-route replicate,
// reproduced from the ensemble's deterministic per-replicate stream.
std::string dump_atom_sets_json(const SimConfig& cfg, int replicate);

// Serialization. CSV columns: replicate,t,value with 17 significant digits.
// JSON round-trips bit-exactly (shortest-round-trip doubles).
std::string ensemble_to_csv(const PathEnsemble& ens);
std::string ensemble_to_json(const PathEnsemble& ens);
PathEnsemble ensemble_from_json(const std::string& text);

}  // namespace hermite
