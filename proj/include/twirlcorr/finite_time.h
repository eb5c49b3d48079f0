#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "twirlcorr/circuit.h"
#include "twirlcorr/covariance.h"

namespace twirlcorr {

// Piecewise-constant control: one Hermitian Hamiltonian per layer, applied
// for t_g each, plus the Hermitian noise operators A^(alpha) the stochastic
// angles couple to. exp(-i H_j t_g) must equal the layer's Clifford up to a
// global phase (validated to 1e-8 at construction).
struct ControlSchedule {
    int n = 0;
    double t_g = 1.0;
    std::vector<Eigen::MatrixXcd> layer_hamiltonians;
    std::vector<Eigen::MatrixXcd> noise_ops;  // one per qubit

    int depth() const {
        return static_cast<int>(layer_hamiltonians.size());
    }
};

ControlSchedule schedule_from_json(const std::string& text, const CliffordCircuit& circuit);
void validate_schedule(const ControlSchedule& schedule, const CliffordCircuit& circuit, double tol = 1e-8);

// Dense Hermitian matrix of a Pauli-coefficient list on n qubits.
Eigen::MatrixXcd pauli_operator(int n, const std::vector<std::pair<std::string, double>>& terms);
Eigen::MatrixXcd dense_pauli(const PauliString& p);

// Finite-duration commutation structure for one Pauli Q: a symmetric PSD
// (n*l) x (n*l) matrix, blocks indexed by qubit pairs and diagonal in the
// layer index. Channel eigenvalue for a noise draw: exp(-theta^T M theta / 2).
// In the instantaneous Z-noise limit M equals 4x the 0/1 mask, which makes
// det(1 + M Sigma)^{-1/2} coincide with the instantaneous formula
// det(1 + 4 M01 Sigma)^{-1/2} with no extra constant.
struct FtMask {
    int n = 0;
    int l = 0;
    Eigen::MatrixXd m;  // qubit-major flat index alpha*l + j
};

struct FtMaskOptions {
    int initial_grid = 16;       // midpoint cells per layer
    int max_grid = 4096;
    double convergence = 1e-8;   // max entry change between grid doublings
};

FtMask build_ft_mask(const ControlSchedule& schedule, const CliffordCircuit& circuit, const PauliString& q,
                     const FtMaskOptions& opts = {});

// det(1 + c M Sigma)^{-1/2} via the symmetric reduction
// det(1 + c sqrt(M) Sigma sqrt(M)) and a Cholesky log-sum. c exposes the
// overall normalization so alternative channel conventions stay reproducible;
// the default c = 1 pairs with the exp(-theta^T M theta / 2) convention above.
double ft_eigenvalue_gaussian(const FtMask& mask, const CovMatrix& cov, double c = 1.0);

struct FtBoundsReport {
    int checked = 0;
    int lower_violations = 0;
    int upper_violations = 0;
    double worst_lower_gap = 0.0;  // most negative (lambda - lambda_blockdiag)
    double worst_upper_gap = 0.0;  // most negative (lambda_rankone - lambda)
    std::vector<std::string> notes;
};

// For each covariance: lambda(Sigma_block-diagonal) <= lambda(Sigma) <=
// lambda(Sigma_rank-one), with the block-diagonal sharing Sigma's
// within-layer blocks and the rank-one sharing its diagonal (best sign
// assignment over +/- when the dimension allows enumeration). Violations are
// reported, not thrown.
FtBoundsReport ft_bounds_check(const FtMask& mask, const std::vector<CovMatrix>& covs, double tol = 1e-12);

}  // namespace twirlcorr
