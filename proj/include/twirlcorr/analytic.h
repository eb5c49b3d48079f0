#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "twirlcorr/circuit.h"
#include "twirlcorr/covariance.h"

namespace twirlcorr {

struct FidelityEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::string method;  // exact-sum | pauli-sampled | monte-carlo
    int n = 0;
    std::string cov_descriptor;
    uint64_t circuit_hash = 0;
};

// prod over set mask bits of cos(2 theta_k); the channel eigenvalue of a
// fixed noise realization.
double eigenvalue_exact(const Eigen::VectorXd& theta, const CommutationMask& mask);

// exp(-2 theta^T M theta): the cos -> exp resummation of the same eigenvalue.
double eigenvalue_resummed(const Eigen::VectorXd& theta, const CommutationMask& mask);

// Gaussian average of the resummed eigenvalue: det(1 + 4 M Sigma)^{-1/2}.
// Evaluated on the principal submatrix of Sigma over set mask bits via a
// Cholesky log-sum of (I + 4 Sigma~), which keeps rank-deficient extremal
// covariances and deep circuits away from LU pitfalls and underflow.
double eigenvalue_gaussian(const CommutationMask& mask, const CovMatrix& cov);

// Expansion of the Gaussian average around Sigma = 0:
// 1 - 2 tr[M S] + 2 tr[M S]^2 + 4 tr[(M S)^2].
double eigenvalue_perturbative(const CommutationMask& mask, const CovMatrix& cov);

enum class PauliSumMode { Exact, Sampled };

struct PauliSumOptions {
    PauliSumMode mode = PauliSumMode::Exact;
    uint64_t budget = 0;       // samples for Sampled mode
    uint64_t seed = 0;         // Sampled mode stream
    int exact_limit = 12;      // refuse exact sums above this qubit count
};

// No-error probability p_I = 4^{-n} sum_Q det(1 + 4 M_Q Sigma)^{-1/2}, either
// over all 4^n Paulis or over uniformly sampled ones with a reported standard
// error. The exact sum reduces chunk results pairwise in a fixed order, so it
// is bit-stable across worker counts.
FidelityEstimate no_error_probability(const std::vector<PauliString>& axes, int n, const CovMatrix& cov,
                                      const PauliSumOptions& opts = {});

FidelityEstimate no_error_probability(const CliffordCircuit& circuit, const CovMatrix& cov,
                                      const PauliSumOptions& opts = {});
FidelityEstimate no_error_probability(const GateCircuit& circuit, const CovMatrix& cov,
                                      const PauliSumOptions& opts = {});

// F = (2^n p + 1) / (2^n + 1).
double fidelity_from_p(double p, int n);

struct FidelityBounds {
    FidelityEstimate lower;   // at Sigma_min = diag(Sigma)
    FidelityEstimate upper;   // at Sigma_max = sqrt(diag) sqrt(diag)^T
};

// Fidelity at the extremal covariances sharing Sigma's diagonal. For the
// resummed model F(Sigma_min) <= F(Sigma) <= F(Sigma_max).
FidelityBounds fidelity_bounds(const std::vector<PauliString>& axes, int n, const CovMatrix& cov,
                               const PauliSumOptions& opts = {});
FidelityBounds fidelity_bounds(const CliffordCircuit& circuit, const CovMatrix& cov,
                               const PauliSumOptions& opts = {});

// Leading-order covariance between twirled error probabilities
// sin^2(theta_j), sin^2(theta_j'): 2 * Sigma_entry^2. (The halved decay time:
// an exponential kernel entry sigma^2 e^{-d/tau} gives 2 sigma^4 e^{-d/(tau/2)}.)
double error_prob_covariance(double sigma_entry);

// Exact covariance of sin^2 theta pairs for zero-mean Gaussians with
// variances v1, v2 and covariance c: e^{-2(v1+v2)} (cosh(4c) - 1) / 4.
double error_prob_covariance_exact(double v1, double v2, double c);

// Untwirled single-qubit free induction: p = 1/2 + 1/2 exp(-2 sum_{jk} Sigma_{jk}).
double bare_free_induction_p(const CovMatrix& single_qubit_cov);

}  // namespace twirlcorr
