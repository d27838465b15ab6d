#include "hermitesim/gaussian_field.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "hermitesim/covering.hpp"

namespace hermite {
namespace {

constexpr double kEigTolRel = 1e-8;
constexpr std::size_t kFbmCapacity = 8192;

// Eigenvalues of the 2(n-1) circulant embedding of a symmetric covariance row.
std::vector<double> embedding_eigenvalues(const std::vector<double>& values) {
    const std::size_t n = values.size();
    const std::size_t m = 2 * (n - 1);
    std::vector<std::complex<double>> row(m);
    for (std::size_t k = 0; k < n; ++k) row[k] = values[k];
    for (std::size_t k = n; k < m; ++k) row[k] = values[m - k];
    std::vector<std::complex<double>> freq(m);
    Eigen::FFT<double> fft;
    fft.fwd(freq, row);
    std::vector<double> lambda(m);
    for (std::size_t k = 0; k < m; ++k) lambda[k] = freq[k].real();
    return lambda;
}

Eigen::MatrixXd toeplitz_matrix(const std::vector<double>& values) {
    const auto n = static_cast<Eigen::Index>(values.size());
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            a(i, j) = values[static_cast<std::size_t>(std::abs(i - j))];
    return a;
}

// Lower Cholesky factor as a row-major buffer, with one jitter retry.
std::vector<double> dense_factor(Eigen::MatrixXd a, const char* what) {
    const auto n = a.rows();
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) {
        Eigen::MatrixXd jittered = a;
        jittered.diagonal().array() += 1e-12 * a.diagonal().maxCoeff();
        llt.compute(jittered);
        if (llt.info() != Eigen::Success) {
            const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a)
                                       .eigenvalues()
                                       .minCoeff();
            std::ostringstream msg;
            msg << what << ": covariance matrix is not positive definite"
                << " (most negative eigenvalue " << min_eig << ")";
            throw NumericalError(msg.str());
        }
    }
    Eigen::MatrixXd l = llt.matrixL();
    std::vector<double> out(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j <= i; ++j)
            out[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                static_cast<std::size_t>(j)] = l(i, j);
    return out;
}

void lower_triangular_apply(const std::vector<double>& chol, std::span<const double> z,
                            std::span<double> out) {
    const std::size_t n = z.size();
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        const double* row = chol.data() + i * n;
        for (std::size_t j = 0; j <= i; ++j) acc += row[j] * z[j];
        out[i] = acc;
    }
}

}  // namespace

CovarianceGrid cov_grid_p_eps(double beta, double eps, double delta, int n) {
    if (!(delta > 0.0)) throw std::domain_error("covariance grid step must be positive");
    if (n < 2) throw std::invalid_argument("covariance grid needs at least two lags");
    CovarianceGrid grid;
    grid.delta = delta;
    grid.values.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        grid.values[static_cast<std::size_t>(k)] = hitting_prob(beta, eps, k * delta);
    return grid;
}

StationarySampler::StationarySampler(CovarianceGrid cov, FieldMethod method)
    : cov_(std::move(cov)) {
    const auto& r = cov_.values;
    if (r.empty()) throw std::invalid_argument("covariance grid is empty");
    if (!(r[0] > 0.0)) throw std::invalid_argument("covariance at lag zero must be positive");
    for (double v : r) {
        if (!std::isfinite(v) || std::abs(v) > r[0] * (1.0 + 1e-12))
            throw std::invalid_argument(
                "stationary covariance must satisfy |r(k)| <= r(0) with finite entries");
    }
    const std::size_t n = r.size();
    if (n == 1) {
        resolved_ = FieldMethod::dense;
        chol_ = {std::sqrt(r[0])};
        return;
    }

    const std::vector<double> lambda = embedding_eigenvalues(r);
    const double lam_max = *std::max_element(lambda.begin(), lambda.end());
    min_eig_ = *std::min_element(lambda.begin(), lambda.end());
    const bool embeddable = lam_max > 0.0 && min_eig_ >= -kEigTolRel * lam_max;

    if (method != FieldMethod::dense && embeddable) {
        resolved_ = FieldMethod::circulant;
        const std::size_t m = lambda.size();
        double sum = 0.0;
        std::vector<double> clamped(lambda);
        for (double& v : clamped) {
            if (v < 0.0) v = 0.0;
            sum += v;
        }
        // Clamping removes a little variance; rescale so the lag-0 value is exact.
        const double scale = r[0] * static_cast<double>(m) / sum;
        sqrt_lambda_.resize(m);
        for (std::size_t k = 0; k < m; ++k)
            sqrt_lambda_[k] = std::sqrt(clamped[k] * scale / static_cast<double>(m));
        return;
    }
    if (method == FieldMethod::circulant) {
        std::ostringstream msg;
        msg << "circulant embedding not realizable: most negative eigenvalue " << min_eig_
            << " against maximum " << lam_max;
        throw NumericalError(msg.str());
    }
    resolved_ = FieldMethod::dense;
    chol_ = dense_factor(toeplitz_matrix(r), "stationary sampler");
}

void StationarySampler::sample(std::mt19937_64& rng, std::span<double> out) const {
    const std::size_t n = cov_.values.size();
    if (out.size() != n)
        throw std::invalid_argument("output span does not match covariance grid length");
    std::normal_distribution<double> normal(0.0, 1.0);
    if (resolved_ == FieldMethod::circulant) {
        const std::size_t m = sqrt_lambda_.size();
        std::vector<std::complex<double>> v(m);
        for (std::size_t k = 0; k < m; ++k) {
            const double a = normal(rng);
            const double b = normal(rng);
            v[k] = std::complex<double>(a * sqrt_lambda_[k], b * sqrt_lambda_[k]);
        }
        std::vector<std::complex<double>> path(m);
        Eigen::FFT<double> fft;
        fft.fwd(path, v);
        // Real and imaginary parts are independent N(0, C) draws; the real part
        // alone keeps the per-replicate stream layout fixed.
        for (std::size_t j = 0; j < n; ++j) out[j] = path[j].real();
        return;
    }
    std::vector<double> z(n);
    for (double& zi : z) zi = normal(rng);
    lower_triangular_apply(chol_, z, out);
}

FbmSampler::FbmSampler(double hurst, std::vector<double> t_grid)
    : hurst_(hurst), t_grid_(std::move(t_grid)) {
    if (!(hurst > 0.0) || !(hurst < 1.0))
        throw std::domain_error("Hurst index must lie in (0, 1)");
    if (t_grid_.empty()) throw std::invalid_argument("time grid is empty");
    if (t_grid_.size() > kFbmCapacity)
        throw CapacityError("time grid too large for dense factorization (limit 8192 points)");
    if (t_grid_.front() < 0.0)
        throw std::invalid_argument("time grid must be nonnegative");
    for (std::size_t i = 1; i < t_grid_.size(); ++i)
        if (!(t_grid_[i] > t_grid_[i - 1]))
            throw std::invalid_argument("time grid must be strictly increasing");
    zeros_ = (t_grid_.front() == 0.0) ? 1 : 0;

    const std::size_t np = t_grid_.size() - zeros_;
    if (np == 0) return;
    const double two_h = 2.0 * hurst_;
    Eigen::MatrixXd a(static_cast<Eigen::Index>(np), static_cast<Eigen::Index>(np));
    for (std::size_t i = 0; i < np; ++i) {
        const double ti = t_grid_[zeros_ + i];
        for (std::size_t j = 0; j < np; ++j) {
            const double tj = t_grid_[zeros_ + j];
            a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                0.5 * (std::pow(ti, two_h) + std::pow(tj, two_h) -
                       std::pow(std::abs(ti - tj), two_h));
        }
    }
    chol_ = dense_factor(std::move(a), "fractional Brownian sampler");
}

void FbmSampler::sample(std::mt19937_64& rng, std::span<double> out) const {
    if (out.size() != t_grid_.size())
        throw std::invalid_argument("output span does not match time grid length");
    for (std::size_t i = 0; i < zeros_; ++i) out[i] = 0.0;
    const std::size_t np = t_grid_.size() - zeros_;
    if (np == 0) return;
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> z(np);
    for (double& zi : z) zi = normal(rng);
    lower_triangular_apply(chol_, z, out.subspan(zeros_));
}

std::vector<double> sample_fbm(double hurst, std::span<const double> t_grid,
                               std::mt19937_64& rng) {
    if (t_grid.empty() || t_grid.front() != 0.0)
        throw std::invalid_argument("time grid must start at 0");
    FbmSampler sampler(hurst, std::vector<double>(t_grid.begin(), t_grid.end()));
    std::vector<double> out(t_grid.size());
    sampler.sample(rng, out);
    return out;
}

}  // namespace hermite
