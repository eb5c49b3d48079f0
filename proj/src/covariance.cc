#include "twirlcorr/covariance.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "twirlcorr/rng.h"

namespace twirlcorr {

CovMatrix::CovMatrix(Eigen::MatrixXd entries, std::string descriptor)
    : m_(std::move(entries)), desc_(std::move(descriptor)) {
    if (m_.rows() != m_.cols() || m_.rows() < 1) {
        throw std::invalid_argument("covariance matrix must be square and non-empty");
    }
    double scale = m_.cwiseAbs().maxCoeff();
    double asym = (m_ - m_.transpose()).cwiseAbs().maxCoeff();
    if (scale > 0 && asym > 1e-12 * scale) {
        throw std::invalid_argument("covariance matrix is not symmetric");
    }
    m_ = 0.5 * (m_ + m_.transpose().eval());
    double max_diag = m_.diagonal().maxCoeff();
    if (max_diag > 0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m_, Eigen::EigenvaluesOnly);
        double min_eig = es.eigenvalues().minCoeff();
        if (min_eig < -1e-10 * max_diag) {
            throw std::invalid_argument("covariance matrix is not positive semi-definite (min eigenvalue " +
                                        std::to_string(min_eig) + ")");
        }
    } else if (m_.diagonal().minCoeff() < 0) {
        throw std::invalid_argument("covariance matrix has a negative variance");
    }
}

CovMatrix cov_exponential(int n, int l, double sigma, double tau_c, double t_g, const SpatialKernel& spatial) {
    if (sigma < 0) {
        throw std::invalid_argument("sigma must be non-negative");
    }
    if (tau_c <= 0 || t_g <= 0) {
        throw std::invalid_argument("tau_c and t_g must be positive");
    }
    int dim = n * l;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    double s2 = sigma * sigma;
    for (int a = 0; a < n; a++) {
        for (int ap = 0; ap < n; ap++) {
            double w = (a == ap) ? 1.0 : (spatial ? spatial(a, ap) : 0.0);
            if (w == 0.0) {
                continue;
            }
            for (int j = 0; j < l; j++) {
                for (int jp = 0; jp < l; jp++) {
                    m(a * l + j, ap * l + jp) = w * s2 * std::exp(-std::abs(j - jp) * t_g / tau_c);
                }
            }
        }
    }
    return CovMatrix(std::move(m), "exponential");
}

CovMatrix cov_min(const Eigen::VectorXd& variances) {
    for (int i = 0; i < variances.size(); i++) {
        if (variances[i] < 0) {
            throw std::invalid_argument("variance entries must be non-negative");
        }
    }
    Eigen::MatrixXd m = variances.asDiagonal();
    return CovMatrix(std::move(m), "min");
}

CovMatrix cov_max(const Eigen::VectorXd& sigmas, const std::vector<int>& signs) {
    if (static_cast<int>(signs.size()) != sigmas.size()) {
        throw std::invalid_argument("sigmas and signs must have equal length");
    }
    Eigen::VectorXd v(sigmas.size());
    for (int i = 0; i < sigmas.size(); i++) {
        if (sigmas[i] < 0) {
            throw std::invalid_argument("sigma entries must be non-negative");
        }
        if (signs[i] != 1 && signs[i] != -1) {
            throw std::invalid_argument("signs must be +1 or -1");
        }
        v[i] = signs[i] * sigmas[i];
    }
    Eigen::MatrixXd m = v * v.transpose();
    return CovMatrix(std::move(m), "max");
}

CovMatrix cov_quasistatic(int n, int l, double sigma, bool maximal_spatial) {
    if (sigma < 0) {
        throw std::invalid_argument("sigma must be non-negative");
    }
    int dim = n * l;
    double s2 = sigma * sigma;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    if (maximal_spatial) {
        m.setConstant(s2);
    } else {
        for (int a = 0; a < n; a++) {
            m.block(a * l, a * l, l, l).setConstant(s2);
        }
    }
    return CovMatrix(std::move(m), maximal_spatial ? "quasistatic-maximal" : "quasistatic");
}

CovMatrix cov_for_layout(const NoiseLayout& layout, double sigma, double tau_over_tg, const SpatialKernel& spatial,
                         bool global_clock) {
    if (sigma < 0) {
        throw std::invalid_argument("sigma must be non-negative");
    }
    if (tau_over_tg <= 0) {
        throw std::invalid_argument("tau_over_tg must be positive");
    }
    int dim = static_cast<int>(layout.sites.size());
    if (dim == 0) {
        throw std::invalid_argument("circuit has no noise sites");
    }
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    double s2 = sigma * sigma;
    for (int i = 0; i < dim; i++) {
        for (int k = i; k < dim; k++) {
            const NoiseSite& a = layout.sites[i];
            const NoiseSite& b = layout.sites[k];
            double w = (a.qubit == b.qubit) ? 1.0 : (spatial ? spatial(a.qubit, b.qubit) : 0.0);
            if (w == 0.0) {
                continue;
            }
            int ta = global_clock ? a.time_global : a.time_q;
            int tb = global_clock ? b.time_global : b.time_q;
            double v = w * s2 * std::exp(-std::abs(ta - tb) / tau_over_tg);
            m(i, k) = v;
            m(k, i) = v;
        }
    }
    return CovMatrix(std::move(m), "exponential");
}

CovMatrix cov_from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open covariance file: " + path);
    }
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            row.push_back(std::stod(cell));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw std::runtime_error("covariance file is empty: " + path);
    }
    Eigen::MatrixXd m(rows.size(), rows[0].size());
    for (size_t r = 0; r < rows.size(); r++) {
        if (rows[r].size() != rows[0].size()) {
            throw std::runtime_error("ragged covariance file: " + path);
        }
        for (size_t c = 0; c < rows[r].size(); c++) {
            m(r, c) = rows[r][c];
        }
    }
    return CovMatrix(std::move(m), "file");
}

NoiseSampler::NoiseSampler(const CovMatrix& cov) : dim_(cov.dim()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov.entries());
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("eigendecomposition of covariance failed");
    }
    double max_diag = cov.entries().diagonal().maxCoeff();
    Eigen::VectorXd evals = es.eigenvalues();
    double top = evals.cwiseAbs().maxCoeff();
    for (int i = 0; i < evals.size(); i++) {
        if (evals[i] < -1e-10 * std::max(max_diag, 0.0)) {
            throw std::runtime_error("covariance is not PSD within tolerance; cannot sample");
        }
        // clip numerical-noise eigenvalues so rank-deficient extremal
        // covariances factor exactly
        evals[i] = (evals[i] < 1e-12 * top) ? 0.0 : evals[i];
    }
    factor_ = es.eigenvectors() * evals.cwiseSqrt().asDiagonal();
}

NoiseRealization NoiseSampler::sample(uint64_t seed, uint64_t index) const {
    Rng rng(seed, index, /*stream_tag=*/0x6e6f697365ULL);
    Eigen::VectorXd z(dim_);
    for (int i = 0; i < dim_; i++) {
        z[i] = rng.next_normal();
    }
    return NoiseRealization{factor_ * z};
}

std::vector<NoiseRealization> NoiseSampler::sample_batch(uint64_t seed, uint64_t first_index, int count) const {
    std::vector<NoiseRealization> out;
    out.reserve(count);
    for (int k = 0; k < count; k++) {
        out.push_back(sample(seed, first_index + k));
    }
    return out;
}

std::vector<NoiseRealization> sample(const CovMatrix& cov, uint64_t seed, int count) {
    return NoiseSampler(cov).sample_batch(seed, 0, count);
}

}  // namespace twirlcorr
