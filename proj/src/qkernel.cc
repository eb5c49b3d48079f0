#include "twirlcorr/qkernel.h"

#include <stdexcept>

namespace twirlcorr {

namespace {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); i++) {
        for (Eigen::Index j = 0; j < a.cols(); j++) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

}  // namespace

Eigen::MatrixXcd superop_left(const Eigen::MatrixXcd& a) {
    return kron(Eigen::MatrixXcd::Identity(a.rows(), a.cols()), a);
}

Eigen::MatrixXcd superop_right(const Eigen::MatrixXcd& b) {
    return kron(b.transpose(), Eigen::MatrixXcd::Identity(b.rows(), b.cols()));
}

Eigen::MatrixXcd superop_sandwich(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return kron(b.transpose(), a);
}

Eigen::MatrixXcd pauli_average_superop(int n,
                                       const std::function<Eigen::MatrixXcd(const Eigen::MatrixXcd&)>& term) {
    size_t d2 = size_t{1} << (2 * n);
    size_t d = size_t{1} << n;
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d * d, d * d);
    uint64_t qmask = (uint64_t{1} << n) - 1;
    for (uint64_t code = 0; code < d2; code++) {
        PauliString p(n, code & qmask, code >> n);
        acc += term(dense_pauli(p));
    }
    return acc / static_cast<double>(d2);
}

BathCorrelator ohmic_correlator(double cutoff) {
    BathCorrelator b;
    b.s_r = [cutoff](double t) {
        double u = cutoff * t;
        double den = (1.0 + u * u);
        return (1.0 - u * u) / (den * den);
    };
    b.s_i = [cutoff](double t) {
        double u = cutoff * t;
        double den = (1.0 + u * u);
        return -2.0 * u / (den * den);
    };
    return b;
}

KernelReport verify_kernel_cancellation(int n, const std::vector<Eigen::MatrixXcd>& noise_ops,
                                        const std::vector<Eigen::MatrixXcd>& dressings,
                                        const std::vector<double>& times, const BathCorrelator& bath) {
    if (n < 1 || n > 3) {
        throw std::invalid_argument("kernel verification runs dense superoperators; n must be 1..3");
    }
    if (dressings.size() != times.size()) {
        throw std::invalid_argument("one dressing unitary per grid time is required");
    }
    size_t d = size_t{1} << n;
    KernelReport report;
    report.max_quantum_entry = 0.0;
    report.max_classical_entry = 0.0;

    // frame the noise operators at each grid time
    std::vector<std::vector<Eigen::MatrixXcd>> framed(times.size());
    for (size_t k = 0; k < times.size(); k++) {
        framed[k].reserve(noise_ops.size());
        for (const auto& a : noise_ops) {
            framed[k].push_back(dressings[k].adjoint() * a * dressings[k]);
        }
    }

    for (size_t k1 = 0; k1 < times.size(); k1++) {
        for (size_t k2 = 0; k2 < k1; k2++) {
            report.grid.push_back({times[k1], times[k2]});
            Eigen::MatrixXcd kqu = Eigen::MatrixXcd::Zero(d * d, d * d);
            Eigen::MatrixXcd kcl = Eigen::MatrixXcd::Zero(d * d, d * d);
            for (size_t a = 0; a < noise_ops.size(); a++) {
                for (size_t ap = 0; ap < noise_ops.size(); ap++) {
                    double chi = bath.chi(times[k1] - times[k2]);
                    double sr = bath.s_r(times[k1] - times[k2]);
                    const Eigen::MatrixXcd& a1 = framed[k1][a];
                    const Eigen::MatrixXcd& a2 = framed[k2][ap];
                    // average over the Pauli of the initial step: both
                    // operators get the same dressing P . P
                    Eigen::MatrixXcd qu_avg = pauli_average_superop(n, [&](const Eigen::MatrixXcd& p) {
                        Eigen::MatrixXcd b1 = p * a1 * p;
                        Eigen::MatrixXcd b2 = p * a2 * p;
                        // [b1, {b2, rho}] expanded into four superoperator terms
                        return Eigen::MatrixXcd(superop_left(b1 * b2) - superop_right(b2 * b1) +
                                                superop_sandwich(b1, b2) - superop_sandwich(b2, b1));
                    });
                    Eigen::MatrixXcd cl_avg = pauli_average_superop(n, [&](const Eigen::MatrixXcd& p) {
                        Eigen::MatrixXcd b1 = p * a1 * p;
                        Eigen::MatrixXcd b2 = p * a2 * p;
                        // [b1, [b2, rho]]
                        return Eigen::MatrixXcd(superop_left(b1 * b2) + superop_right(b2 * b1) -
                                                superop_sandwich(b1, b2) - superop_sandwich(b2, b1));
                    });
                    kqu += 0.5 * chi * qu_avg;
                    kcl += sr * cl_avg;
                }
            }
            report.max_quantum_entry = std::max(report.max_quantum_entry, kqu.cwiseAbs().maxCoeff());
            report.max_classical_entry = std::max(report.max_classical_entry, kcl.cwiseAbs().maxCoeff());
        }
    }
    return report;
}

}  // namespace twirlcorr
