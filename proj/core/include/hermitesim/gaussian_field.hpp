#pragma once

#include <random>
#include <span>
#include <vector>

#include "hermitesim/specfun.hpp"

namespace hermite {

// Autocovariance sequence r(0), r(delta), ..., r((n-1)*delta) of a stationary
// process on a uniform grid.
struct CovarianceGrid {
    double delta = 0.0;
    std::vector<double> values;
};

// Covariance grid of the covering field: values[k] = hitting_prob(beta, eps, k*delta),
// so values[0] = 1 and the sequence decreases toward the power-law tail.
CovarianceGrid cov_grid_p_eps(double beta, double eps, double delta, int n);

// How a StationarySampler realizes the covariance.
//  automatic: circulant embedding when its eigenvalues allow, dense otherwise.
//  circulant: force the embedding; materially negative eigenvalues are an error.
//  dense:     force dense Cholesky of the n-by-n Toeplitz matrix.
enum class FieldMethod { automatic, circulant, dense };

// Samples zero-mean Gaussian paths with a prescribed stationary covariance.
// Factorization happens once at construction; sample() is const and thread-safe,
// so paths may be drawn concurrently from independent generator streams.
class StationarySampler {
  public:
    explicit StationarySampler(CovarianceGrid cov, FieldMethod method = FieldMethod::automatic);

    std::size_t size() const { return cov_.values.size(); }
    const CovarianceGrid& covariance() const { return cov_; }
    // Method actually in use (never `automatic` after construction).
    FieldMethod method() const { return resolved_; }
    // Smallest circulant-embedding eigenvalue (0 when no embedding was formed).
    double min_embedding_eigenvalue() const { return min_eig_; }

    // Fills out[0..size()) with one draw of N(0, C).
    void sample(std::mt19937_64& rng, std::span<double> out) const;

  private:
    CovarianceGrid cov_;
    FieldMethod resolved_ = FieldMethod::dense;
    std::vector<double> sqrt_lambda_;  // sqrt(lambda_k / m), length m = 2(n-1)
    std::vector<double> chol_;         // row-major lower factor, length n*n
    double min_eig_ = 0.0;
};

// Exact fractional Brownian motion on a fixed grid via dense Cholesky of the
// grid covariance 0.5*(s^{2H} + t^{2H} - |t-s|^{2H}). Grid must be
// nondecreasing, start at a value >= 0, and B(0) = 0 exactly.
class FbmSampler {
  public:
    FbmSampler(double hurst, std::vector<double> t_grid);

    double hurst() const { return hurst_; }
    const std::vector<double>& grid() const { return t_grid_; }

    void sample(std::mt19937_64& rng, std::span<double> out) const;

  private:
    double hurst_ = 0.5;
    std::vector<double> t_grid_;
    std::size_t zeros_ = 0;     // leading grid entries equal to 0
    std::vector<double> chol_;  // factor over the strictly positive times
};

// One-shot convenience: exact fBm path on t_grid (increasing, starting at 0).
std::vector<double> sample_fbm(double hurst, std::span<const double> t_grid,
                               std::mt19937_64& rng);

}  // namespace hermite
