#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "twirlcorr/circuit.h"

namespace twirlcorr {

// Symmetric PSD covariance of the Gaussian error angles (radians^2),
// qubit-major flat indexing. Validation runs at construction: symmetry to
// 1e-12 relative, min eigenvalue >= -1e-10 * max diagonal.
class CovMatrix {
   public:
    explicit CovMatrix(Eigen::MatrixXd entries, std::string descriptor = "custom");

    int dim() const {
        return static_cast<int>(m_.rows());
    }
    const Eigen::MatrixXd& entries() const {
        return m_;
    }
    const std::string& descriptor() const {
        return desc_;
    }
    Eigen::VectorXd diagonal() const {
        return m_.diagonal();
    }

   private:
    Eigen::MatrixXd m_;
    std::string desc_;
};

using SpatialKernel = std::function<double(int, int)>;

// Sigma^(a,a')_{j,j'} = delta_{aa'} sigma^2 exp(-|j-j'| t_g / tau_c); a
// spatial kernel replaces the delta when provided. Dimension n*l.
CovMatrix cov_exponential(int n, int l, double sigma, double tau_c, double t_g,
                          const SpatialKernel& spatial = nullptr);

// Diagonal covariance from per-site variances.
CovMatrix cov_min(const Eigen::VectorXd& variances);

// Rank-one sigma_vec sigma_vec^T with sigma_vec_k = signs_k * sigmas_k.
CovMatrix cov_max(const Eigen::VectorXd& sigmas, const std::vector<int>& signs);

// tau_c -> infinity: all entries sigma^2 within each qubit block; with
// maximal_spatial also across qubit blocks.
CovMatrix cov_quasistatic(int n, int l, double sigma, bool maximal_spatial = false);

// Exponential kernel over the sites of a circuit layout. Times come from the
// per-qubit two-qubit-gate clock by default; `global_clock` switches to the
// global layer clock.
CovMatrix cov_for_layout(const NoiseLayout& layout, double sigma, double tau_over_tg,
                         const SpatialKernel& spatial = nullptr, bool global_clock = false);

// Dense matrix from CSV (rows of comma-separated reals).
CovMatrix cov_from_csv(const std::string& path);

struct NoiseRealization {
    Eigen::VectorXd theta;  // radians, length = covariance dimension
};

// Correlated Gaussian sampler. Factorization is a symmetric
// eigendecomposition with eigenvalues clipped at max(0, lambda) so that
// rank-deficient extremal covariances work. Sample k depends only on
// (seed, first_index + k); workers and batching cannot change the stream.
class NoiseSampler {
   public:
    explicit NoiseSampler(const CovMatrix& cov);

    NoiseRealization sample(uint64_t seed, uint64_t index) const;
    std::vector<NoiseRealization> sample_batch(uint64_t seed, uint64_t first_index, int count) const;

   private:
    Eigen::MatrixXd factor_;  // theta = factor * standard_normals
    int dim_;
};

std::vector<NoiseRealization> sample(const CovMatrix& cov, uint64_t seed, int count);

}  // namespace twirlcorr
