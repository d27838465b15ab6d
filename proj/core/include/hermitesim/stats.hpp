#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hermitesim/hermite_paths.hpp"

namespace hermite {

// One estimated quantity, optionally judged against a target.  The pass
// rule is two-legged: |z| <= 3 (Monte Carlo noise) OR relative error
// <= budget (discretization bias); both numbers stay visible so reports
// can separate the two error sources.  A zero target switches the budget
// leg to an absolute comparison.
struct MomentReport {
    std::string quantity;
    double t = 0.0;
    int order = 1;
    double estimate = 0.0;
    double std_error = 0.0;
    double target = 0.0;
    double z_score = 0.0;
    double budget = 0.0;
    bool has_target = false;
    bool pass = true;
};

// Index of t on the ensemble grid (tolerance 1e-12); throws
// std::invalid_argument when t is not a grid point.
std::size_t grid_index(const PathEnsemble& ens, double t);

// Column of replicate values at time t.
std::vector<double> values_at(const PathEnsemble& ens, double t);

// Raw r-th sample moment across replicates at time t; the standard error
// comes from the sample variance of the r-th powers (replicates are
// independent, so central-limit errors apply across them even though
// each path is long-range dependent in time).
MomentReport ensemble_moment(const PathEnsemble& ens, double t, int r);

// Unbiased sample variance across replicates at time t; standard error
// sqrt((m4 - var^2) / n) from the fourth central moment.
MomentReport ensemble_variance(const PathEnsemble& ens, double t);

// Fills target, z-score, and pass under the two-legged rule above.
void apply_target(MomentReport& report, double target, double budget);

struct CovPairReport {
    double t1 = 0.0;
    double t2 = 0.0;
    double estimate = 0.0;
    double target = 0.0;
};

struct CovarianceReport {
    std::vector<CovPairReport> pairs;
    double rmse = 0.0;
};

// Empirical Cov(Z(t1), Z(t2)) for each requested pair against the
// fractional Brownian target 0.5 (t1^{2H} + t2^{2H} - |t1 - t2|^{2H}),
// plus the aggregate root-mean-square error.
CovarianceReport covariance_vs_fbm(const PathEnsemble& ens, double hurst,
                                   std::span<const std::pair<double, double>> grid);

struct KsResult {
    double statistic = 0.0;
    double critical = 0.0;  // c(level) * sqrt((n1 + n2) / (n1 n2))
    double level = 0.01;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    bool pass = false;
};

// Two-sample Kolmogorov-Smirnov test with the asymptotic critical value
// c(level) = sqrt(-ln(level / 2) / 2).  Requires both samples to hold at
// least 100 points.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b,
                       double level = 0.01);

}  // namespace hermite
