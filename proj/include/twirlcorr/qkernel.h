#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "twirlcorr/finite_time.h"
#include "twirlcorr/pauli.h"

namespace twirlcorr {

// Column-stacking superoperator helpers: vec(A rho B) = (B^T kron A) vec(rho).
Eigen::MatrixXcd superop_left(const Eigen::MatrixXcd& a);                            // rho -> a rho
Eigen::MatrixXcd superop_right(const Eigen::MatrixXcd& b);                           // rho -> rho b
Eigen::MatrixXcd superop_sandwich(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);  // rho -> a rho b

// (1/4^n) sum over all n-qubit Paulis P of term(P), with P supplied dense.
Eigen::MatrixXcd pauli_average_superop(int n, const std::function<Eigen::MatrixXcd(const Eigen::MatrixXcd&)>& term);

// Bath correlator pieces: S_R even, S_I odd, chi(t) = 2 theta(t) S_I(t).
struct BathCorrelator {
    std::function<double(double)> s_r;
    std::function<double(double)> s_i;

    double chi(double t) const {
        return t >= 0 ? 2.0 * s_i(t) : 0.0;
    }
};

// Ohmic spectral density with an exponential cutoff, zero temperature:
// S(t) ∝ 1/(1 + i w_c t)^2, so S_R(t) = (1 - (w_c t)^2)/(1 + (w_c t)^2)^2 and
// S_I(t) = -2 w_c t / (1 + (w_c t)^2)^2 (unit coupling).
BathCorrelator ohmic_correlator(double cutoff);

struct KernelReport {
    std::vector<std::pair<double, double>> grid;  // (t1, t2) pairs
    double max_quantum_entry = 0.0;
    double max_classical_entry = 0.0;
};

// Pauli-averages the expanded quantum kernel
//   (1/2) sum_{a,a'} chi^(aa')(t1-t2) [A_a(t1), {A_a'(t2), .}]
// with every noise operator dressed as P A~ P, over all first-step Paulis P,
// for each ordered pair on the time grid; the classical double-commutator
// kernel is computed alongside as the non-degeneracy control. dressings[k]
// supplies the Clifford (or any unitary) frame at grid time k:
// A~(t_k) = dressings[k]^dag A dressings[k].
KernelReport verify_kernel_cancellation(int n, const std::vector<Eigen::MatrixXcd>& noise_ops,
                                        const std::vector<Eigen::MatrixXcd>& dressings,
                                        const std::vector<double>& times, const BathCorrelator& bath);

}  // namespace twirlcorr
