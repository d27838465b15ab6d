#include "hermitesim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace hermite {
namespace {

double mean_of(std::span<const double> xs) {
    double acc = 0.0;
    for (double x : xs) acc += x;
    return acc / static_cast<double>(xs.size());
}

}  // namespace

std::size_t grid_index(const PathEnsemble& ens, double t) {
    for (std::size_t k = 0; k < ens.t_grid.size(); ++k)
        if (std::abs(ens.t_grid[k] - t) <= 1e-12) return k;
    char buf[64];
    std::snprintf(buf, sizeof buf, "t = %.17g is not on the ensemble grid", t);
    throw std::invalid_argument(buf);
}

std::vector<double> values_at(const PathEnsemble& ens, double t) {
    const std::size_t k = grid_index(ens, t);
    std::vector<double> out;
    out.reserve(ens.values.size());
    for (const auto& row : ens.values) out.push_back(row[k]);
    return out;
}

MomentReport ensemble_moment(const PathEnsemble& ens, double t, int r) {
    if (r < 1) throw std::invalid_argument("moment order must be at least 1");
    if (ens.values.empty()) throw std::invalid_argument("ensemble has no replicates");
    const std::size_t k = grid_index(ens, t);
    const std::size_t n = ens.values.size();
    double acc = 0.0;
    std::vector<double> powers;
    powers.reserve(n);
    for (const auto& row : ens.values) {
        double p = 1.0;
        for (int j = 0; j < r; ++j) p *= row[k];
        powers.push_back(p);
        acc += p;
    }
    MomentReport rep;
    rep.t = t;
    rep.order = r;
    rep.estimate = acc / static_cast<double>(n);
    if (n > 1) {
        double ss = 0.0;
        for (double p : powers) {
            const double d = p - rep.estimate;
            ss += d * d;
        }
        rep.std_error = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
    }
    return rep;
}

MomentReport ensemble_variance(const PathEnsemble& ens, double t) {
    if (ens.values.size() < 2)
        throw std::invalid_argument("variance needs at least 2 replicates");
    const std::size_t k = grid_index(ens, t);
    const std::size_t n = ens.values.size();
    double mean = 0.0;
    for (const auto& row : ens.values) mean += row[k];
    mean /= static_cast<double>(n);
    double m2 = 0.0;
    double m4 = 0.0;
    for (const auto& row : ens.values) {
        const double d = row[k] - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    MomentReport rep;
    rep.t = t;
    rep.order = 2;
    rep.estimate = m2 / static_cast<double>(n - 1);
    m2 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);
    rep.std_error = std::sqrt(std::max(0.0, m4 - m2 * m2) / static_cast<double>(n));
    return rep;
}

void apply_target(MomentReport& report, double target, double budget) {
    report.target = target;
    report.budget = budget;
    report.has_target = true;
    const double diff = report.estimate - target;
    report.z_score = report.std_error > 0.0
                         ? diff / report.std_error
                         : (diff == 0.0 ? 0.0 : std::copysign(HUGE_VAL, diff));
    const double scale = target != 0.0 ? std::abs(target) : 1.0;
    report.pass = std::abs(report.z_score) <= 3.0 || std::abs(diff) <= budget * scale;
}

CovarianceReport covariance_vs_fbm(const PathEnsemble& ens, double hurst,
                                   std::span<const std::pair<double, double>> grid) {
    if (ens.values.size() < 2)
        throw std::invalid_argument("covariance needs at least 2 replicates");
    const double two_h = 2.0 * hurst;
    CovarianceReport out;
    out.pairs.reserve(grid.size());
    double sq = 0.0;
    const auto n = static_cast<double>(ens.values.size());
    for (const auto& [t1, t2] : grid) {
        const std::size_t k1 = grid_index(ens, t1);
        const std::size_t k2 = grid_index(ens, t2);
        double m1 = 0.0;
        double m2 = 0.0;
        for (const auto& row : ens.values) {
            m1 += row[k1];
            m2 += row[k2];
        }
        m1 /= n;
        m2 /= n;
        double cov = 0.0;
        for (const auto& row : ens.values) cov += (row[k1] - m1) * (row[k2] - m2);
        cov /= n - 1.0;
        const double target = 0.5 * (std::pow(t1, two_h) + std::pow(t2, two_h) -
                                     std::pow(std::abs(t1 - t2), two_h));
        out.pairs.push_back({t1, t2, cov, target});
        sq += (cov - target) * (cov - target);
    }
    out.rmse = grid.empty() ? 0.0 : std::sqrt(sq / static_cast<double>(grid.size()));
    return out;
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b, double level) {
    if (a.size() < 100 || b.size() < 100)
        throw std::invalid_argument("two-sample KS needs at least 100 points per sample");
    if (!(level > 0.0) || !(level < 1.0))
        throw std::invalid_argument("KS level must lie in (0, 1)");
    std::vector<double> xs(a.begin(), a.end());
    std::vector<double> ys(b.begin(), b.end());
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    const double n1 = static_cast<double>(xs.size());
    const double n2 = static_cast<double>(ys.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double stat = 0.0;
    while (i < xs.size() && j < ys.size()) {
        const double v = std::min(xs[i], ys[j]);
        while (i < xs.size() && xs[i] == v) ++i;
        while (j < ys.size() && ys[j] == v) ++j;
        stat = std::max(stat, std::abs(static_cast<double>(i) / n1 -
                                       static_cast<double>(j) / n2));
    }
    // Remaining points only move both CDFs toward 1; the gap there is
    // bounded by one already seen at the last common value.
    KsResult res;
    res.statistic = stat;
    res.level = level;
    res.n1 = xs.size();
    res.n2 = ys.size();
    res.critical = std::sqrt(-0.5 * std::log(level / 2.0)) *
                   std::sqrt((n1 + n2) / (n1 * n2));
    res.pass = stat <= res.critical;
    return res;
}

}  // namespace hermite
