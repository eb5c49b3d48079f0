#include "twirlcorr/analytic.h"

#include <cmath>
#include <mutex>

#include "twirlcorr/rng.h"
#include "twirlcorr/threads.h"

namespace twirlcorr {

double eigenvalue_exact(const Eigen::VectorXd& theta, const CommutationMask& mask) {
    if (theta.size() != static_cast<Eigen::Index>(mask.bits.size())) {
        throw std::invalid_argument("theta length does not match mask length");
    }
    double v = 1.0;
    for (size_t i = 0; i < mask.bits.size(); i++) {
        if (mask.bits[i]) {
            v *= std::cos(2.0 * theta[i]);
        }
    }
    return v;
}

double eigenvalue_resummed(const Eigen::VectorXd& theta, const CommutationMask& mask) {
    if (theta.size() != static_cast<Eigen::Index>(mask.bits.size())) {
        throw std::invalid_argument("theta length does not match mask length");
    }
    double q = 0.0;
    for (size_t i = 0; i < mask.bits.size(); i++) {
        if (mask.bits[i]) {
            q += theta[i] * theta[i];
        }
    }
    return std::exp(-2.0 * q);
}

namespace {

// det(1 + 4 Sigma~)^{-1/2} over the masked principal submatrix, with
// scratch space reused across calls (hot loop of the exact Pauli sum).
class GaussianEigenvalueEvaluator {
   public:
    explicit GaussianEigenvalueEvaluator(const Eigen::MatrixXd& sigma) : four_sigma_(4.0 * sigma) {
        scratch_.resize(sigma.rows(), sigma.cols());
    }

    double eval(const std::vector<int>& idx) {
        int m = static_cast<int>(idx.size());
        if (m == 0) {
            return 1.0;
        }
        auto a = scratch_.topLeftCorner(m, m);
        for (int r = 0; r < m; r++) {
            for (int c = 0; c <= r; c++) {
                a(r, c) = four_sigma_(idx[r], idx[c]);
            }
            a(r, r) += 1.0;
        }
        // In-place Cholesky on the lower triangle; log-accumulate the
        // diagonal so deep circuits cannot underflow the determinant.
        double log_sum = 0.0;
        for (int k = 0; k < m; k++) {
            double d = a(k, k);
            for (int p = 0; p < k; p++) {
                d -= a(k, p) * a(k, p);
            }
            if (d <= 0.0) {
                throw std::runtime_error("covariance restricted to mask is not positive definite");
            }
            d = std::sqrt(d);
            a(k, k) = d;
            log_sum += std::log(d);
            double inv = 1.0 / d;
            for (int r = k + 1; r < m; r++) {
                double v = a(r, k);
                for (int p = 0; p < k; p++) {
                    v -= a(r, p) * a(k, p);
                }
                a(r, k) = v * inv;
            }
        }
        return std::exp(-log_sum);
    }

   private:
    Eigen::MatrixXd four_sigma_;
    Eigen::MatrixXd scratch_;
};

void check_cov_dim(const CovMatrix& cov, size_t sites) {
    if (cov.dim() != static_cast<int>(sites)) {
        throw std::invalid_argument("covariance dimension " + std::to_string(cov.dim()) +
                                    " does not match noise-site count " + std::to_string(sites));
    }
}

// Anticommutation test against precomputed axes, bit-packed per axis.
struct MaskBuilder {
    explicit MaskBuilder(const std::vector<PauliString>& axes) : axes_(axes) {}

    void fill_indices(const PauliString& q, std::vector<int>& out) const {
        out.clear();
        for (size_t i = 0; i < axes_.size(); i++) {
            if (!commutes(q, axes_[i])) {
                out.push_back(static_cast<int>(i));
            }
        }
    }

    const std::vector<PauliString>& axes_;
};

}  // namespace

double eigenvalue_gaussian(const CommutationMask& mask, const CovMatrix& cov) {
    check_cov_dim(cov, mask.bits.size());
    GaussianEigenvalueEvaluator ev(cov.entries());
    return ev.eval(mask.set_indices());
}

double eigenvalue_perturbative(const CommutationMask& mask, const CovMatrix& cov) {
    check_cov_dim(cov, mask.bits.size());
    std::vector<int> idx = mask.set_indices();
    const Eigen::MatrixXd& s = cov.entries();
    double tr_ms = 0.0;
    for (int i : idx) {
        tr_ms += s(i, i);
    }
    double tr_ms_sq = 0.0;
    for (int i : idx) {
        for (int k : idx) {
            tr_ms_sq += s(i, k) * s(k, i);
        }
    }
    return 1.0 - 2.0 * tr_ms + 2.0 * tr_ms * tr_ms + 4.0 * tr_ms_sq;
}

FidelityEstimate no_error_probability(const std::vector<PauliString>& axes, int n, const CovMatrix& cov,
                                      const PauliSumOptions& opts) {
    check_cov_dim(cov, axes.size());
    MaskBuilder masks(axes);
    FidelityEstimate est;
    est.n = n;
    est.cov_descriptor = cov.descriptor();

    if (opts.mode == PauliSumMode::Exact) {
        if (n > opts.exact_limit) {
            throw std::invalid_argument("exact Pauli sum refused for n = " + std::to_string(n) + " (limit " +
                                        std::to_string(opts.exact_limit) +
                                        "); use sampled mode with a budget instead");
        }
        uint64_t total = 1ULL << (2 * n);
        uint64_t chunk = 4096;
        uint64_t n_chunks = (total + chunk - 1) / chunk;
        std::vector<double> chunk_sums(n_chunks, 0.0);
        uint64_t qubit_mask = (1ULL << n) - 1;
        parallel_chunks(total, chunk, [&](uint64_t c, uint64_t begin, uint64_t end) {
            GaussianEigenvalueEvaluator ev(cov.entries());
            std::vector<int> idx;
            double acc = 0.0;
            for (uint64_t code = begin; code < end; code++) {
                PauliString q(n, code & qubit_mask, code >> n);
                masks.fill_indices(q, idx);
                acc += ev.eval(idx);
            }
            chunk_sums[c] = acc;
        });
        est.value = pairwise_sum(std::move(chunk_sums)) / static_cast<double>(total);
        est.std_error = 0.0;
        est.method = "exact-sum";
        return est;
    }

    if (opts.budget == 0) {
        throw std::invalid_argument("sampled mode requires a positive budget");
    }
    uint64_t total = opts.budget;
    uint64_t chunk = 1024;
    uint64_t n_chunks = (total + chunk - 1) / chunk;
    std::vector<double> sums(n_chunks, 0.0);
    std::vector<double> sq_sums(n_chunks, 0.0);
    parallel_chunks(total, chunk, [&](uint64_t c, uint64_t begin, uint64_t end) {
        GaussianEigenvalueEvaluator ev(cov.entries());
        std::vector<int> idx;
        double acc = 0.0, acc2 = 0.0;
        for (uint64_t k = begin; k < end; k++) {
            Rng rng(opts.seed, k, /*stream_tag=*/0x7061756c69ULL);
            uint64_t code = rng.next_below(1ULL << (2 * n));
            PauliString q(n, code & ((1ULL << n) - 1), code >> n);
            masks.fill_indices(q, idx);
            double v = ev.eval(idx);
            acc += v;
            acc2 += v * v;
        }
        sums[c] = acc;
        sq_sums[c] = acc2;
    });
    double mean = pairwise_sum(sums) / static_cast<double>(total);
    double mean_sq = pairwise_sum(sq_sums) / static_cast<double>(total);
    double var = std::max(0.0, mean_sq - mean * mean);
    est.value = mean;
    est.std_error = std::sqrt(var / static_cast<double>(total));
    est.method = "pauli-sampled";
    return est;
}

FidelityEstimate no_error_probability(const CliffordCircuit& circuit, const CovMatrix& cov,
                                      const PauliSumOptions& opts) {
    auto est = no_error_probability(propagate_noise_axes(circuit), circuit.n, cov, opts);
    return est;
}

FidelityEstimate no_error_probability(const GateCircuit& circuit, const CovMatrix& cov, const PauliSumOptions& opts) {
    NoiseLayout layout = make_layout(circuit);
    auto est = no_error_probability(propagate_noise_axes(circuit, layout), circuit.n, cov, opts);
    est.circuit_hash = circuit.hash();
    return est;
}

double fidelity_from_p(double p, int n) {
    if (p < -1e-12 || p > 1.0 + 1e-12) {
        throw std::invalid_argument("no-error probability out of [0, 1]: " + std::to_string(p));
    }
    double d = std::pow(2.0, n);
    return (d * p + 1.0) / (d + 1.0);
}

FidelityBounds fidelity_bounds(const std::vector<PauliString>& axes, int n, const CovMatrix& cov,
                               const PauliSumOptions& opts) {
    Eigen::VectorXd diag = cov.diagonal();
    CovMatrix lo = cov_min(diag);
    CovMatrix hi = cov_max(diag.cwiseSqrt(), std::vector<int>(diag.size(), 1));
    FidelityBounds out{no_error_probability(axes, n, lo, opts), no_error_probability(axes, n, hi, opts)};
    out.lower.value = fidelity_from_p(out.lower.value, n);
    out.upper.value = fidelity_from_p(out.upper.value, n);
    double scale = std::pow(2.0, n) / (std::pow(2.0, n) + 1.0);
    out.lower.std_error *= scale;
    out.upper.std_error *= scale;
    return out;
}

FidelityBounds fidelity_bounds(const CliffordCircuit& circuit, const CovMatrix& cov, const PauliSumOptions& opts) {
    return fidelity_bounds(propagate_noise_axes(circuit), circuit.n, cov, opts);
}

double error_prob_covariance(double sigma_entry) {
    return 2.0 * sigma_entry * sigma_entry;
}

double error_prob_covariance_exact(double v1, double v2, double c) {
    return std::exp(-2.0 * (v1 + v2)) * (std::cosh(4.0 * c) - 1.0) / 4.0;
}

double bare_free_induction_p(const CovMatrix& single_qubit_cov) {
    double s = single_qubit_cov.entries().sum();
    return 0.5 + 0.5 * std::exp(-2.0 * s);
}

}  // namespace twirlcorr
