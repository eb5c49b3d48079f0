#include "twirlcorr/finite_time.h"

#include <bit>
#include <cmath>

#include "json.hpp"
#include "twirlcorr/statevector.h"

namespace twirlcorr {

namespace {

Eigen::MatrixXcd matrix_exp_herm(const Eigen::MatrixXcd& h, double scale) {
    // exp(-i * h * scale) for Hermitian h
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    Eigen::VectorXcd phases(es.eigenvalues().size());
    for (int i = 0; i < phases.size(); i++) {
        phases[i] = std::polar(1.0, -es.eigenvalues()[i] * scale);
    }
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::MatrixXcd dense_unitary_of_gates(const std::vector<Gate>& gates, int n) {
    size_t d = size_t{1} << n;
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(d, d);
    for (const auto& g : gates) {
        Eigen::MatrixXcd gu = Eigen::MatrixXcd::Zero(d, d);
        for (size_t col = 0; col < d; col++) {
            StateVector sv(n);
            sv.amplitudes().assign(d, cxd(0, 0));
            sv.amplitudes()[col] = 1.0;
            sv.apply_gate(g);
            for (size_t row = 0; row < d; row++) {
                gu(row, col) = sv.amplitudes()[row];
            }
        }
        u = gu * u;
    }
    return u;
}

}  // namespace

Eigen::MatrixXcd dense_pauli(const PauliString& p) {
    size_t d = size_t{1} << p.n;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    cxd yphase = std::pow(cxd(0, 1), std::popcount(p.x & p.z) % 4);
    for (size_t col = 0; col < d; col++) {
        int sgn = std::popcount(static_cast<uint64_t>(col) & p.z) & 1;
        m(col ^ p.x, col) = yphase * (sgn ? -1.0 : 1.0);
    }
    return m;
}

Eigen::MatrixXcd pauli_operator(int n, const std::vector<std::pair<std::string, double>>& terms) {
    size_t d = size_t{1} << n;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    for (const auto& [word, coeff] : terms) {
        m += coeff * dense_pauli(PauliString::from_str(word));
    }
    return m;
}

void validate_schedule(const ControlSchedule& schedule, const CliffordCircuit& circuit, double tol) {
    if (schedule.n != circuit.n) {
        throw std::invalid_argument("schedule and circuit disagree on qubit count");
    }
    if (schedule.depth() != circuit.depth()) {
        throw std::invalid_argument("schedule and circuit disagree on layer count");
    }
    if (static_cast<int>(schedule.noise_ops.size()) != schedule.n) {
        throw std::invalid_argument("one noise operator per qubit is required");
    }
    size_t d = size_t{1} << schedule.n;
    for (int j = 0; j < schedule.depth(); j++) {
        const auto& h = schedule.layer_hamiltonians[j];
        if (h.rows() != static_cast<Eigen::Index>(d) || h.cols() != static_cast<Eigen::Index>(d)) {
            throw std::invalid_argument("layer Hamiltonian has wrong dimension");
        }
        if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
            throw std::invalid_argument("layer Hamiltonian is not Hermitian");
        }
        if (h.cwiseAbs().maxCoeff() < 1e-14) {
            // idle window: the layer's Clifford fires instantaneously at the
            // window boundary (zero-duration limit), any tableau is legal
            continue;
        }
        Eigen::MatrixXcd u = matrix_exp_herm(h, schedule.t_g);
        Eigen::MatrixXcd v = dense_unitary_of_gates(circuit.layer_gates[j], schedule.n);
        cxd phase(0, 0);
        double vmax = 0;
        for (Eigen::Index r = 0; r < v.rows(); r++) {
            for (Eigen::Index c = 0; c < v.cols(); c++) {
                if (std::abs(v(r, c)) > vmax) {
                    vmax = std::abs(v(r, c));
                    phase = u(r, c) / v(r, c);
                }
            }
        }
        double err = (u - phase * v).cwiseAbs().maxCoeff();
        if (err > tol) {
            throw std::invalid_argument("layer " + std::to_string(j) +
                                        " Hamiltonian does not implement its Clifford (error " + std::to_string(err) +
                                        ")");
        }
    }
}

ControlSchedule schedule_from_json(const std::string& text, const CliffordCircuit& circuit) {
    nlohmann::json j = nlohmann::json::parse(text);
    ControlSchedule s;
    s.n = j.at("n").get<int>();
    s.t_g = j.value("t_g", 1.0);
    for (const auto& layer : j.at("layers")) {
        std::vector<std::pair<std::string, double>> terms;
        for (const auto& t : layer.at("hamiltonian")) {
            terms.push_back({t.at("pauli").get<std::string>(), t.at("coeff").get<double>()});
        }
        s.layer_hamiltonians.push_back(pauli_operator(s.n, terms));
    }
    if (j.contains("noise_ops")) {
        for (const auto& op : j.at("noise_ops")) {
            std::vector<std::pair<std::string, double>> terms;
            for (const auto& t : op) {
                terms.push_back({t.at("pauli").get<std::string>(), t.at("coeff").get<double>()});
            }
            s.noise_ops.push_back(pauli_operator(s.n, terms));
        }
    } else {
        for (int q = 0; q < s.n; q++) {
            s.noise_ops.push_back(dense_pauli(PauliString::single(s.n, q, 'Z')));
        }
    }
    validate_schedule(s, circuit);
    return s;
}

namespace {

// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre_01(int m, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.resize(m);
    weights.resize(m);
    for (int k = 0; k < m; k++) {
        double x = std::cos(3.141592653589793238462643383279502884 * (k + 0.75) / (m + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; it++) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= m; j++) {
                double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            pp = m * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                break;
            }
        }
        nodes[k] = 0.5 * (1.0 - x);  // map [-1,1] -> [0,1], ascending later
        weights[k] = 1.0 / ((1.0 - x * x) * pp * pp);
    }
}

// Interaction-frame noise operator A(t) = exp(iHt) A exp(-iHt) from a cached
// eigendecomposition of the layer Hamiltonian.
struct LayerFrame {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es;

    explicit LayerFrame(const Eigen::MatrixXcd& h) : es(h) {}

    Eigen::MatrixXcd at(const Eigen::MatrixXcd& a, double t) const {
        Eigen::VectorXcd ph(es.eigenvalues().size());
        for (int i = 0; i < ph.size(); i++) {
            ph[i] = std::polar(1.0, es.eigenvalues()[i] * t);
        }
        Eigen::MatrixXcd u = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
        return u * a * u.adjoint();
    }
};

// PTM-diagonal entry at Pauli `sq` of the twirled ordered-double-integral
// generator of one layer and one qubit pair (a, a'):
//   (1/t_g^2) int_0^{t_g} dt1 int_0^{t1} dt2 tr(sq [A_a(t1), [A_a'(t2), sq]]) / 2^n.
// Nested Gauss-Legendre: the integrand is smooth (products of e^{i w t}), so
// the rule converges spectrally and the doubling check is meaningful.
double pair_entry(const LayerFrame& frame, const Eigen::MatrixXcd& a_op, const Eigen::MatrixXcd& ap_op, double t_g,
                  const Eigen::MatrixXcd& sq, int n, int grid) {
    size_t d = size_t{1} << n;
    std::vector<double> nodes, weights;
    gauss_legendre_01(grid, nodes, weights);
    double acc = 0.0;
    for (int i = 0; i < grid; i++) {
        double t1 = t_g * nodes[i];
        Eigen::MatrixXcd inner = Eigen::MatrixXcd::Zero(d, d);
        for (int j = 0; j < grid; j++) {
            double t2 = t1 * nodes[j];
            Eigen::MatrixXcd a2 = frame.at(ap_op, t2);
            inner += (t1 * weights[j]) * (a2 * sq - sq * a2);
        }
        Eigen::MatrixXcd a1 = frame.at(a_op, t1);
        Eigen::MatrixXcd comm1 = a1 * inner - inner * a1;
        acc += (t_g * weights[i]) * (sq.adjoint() * comm1).trace().real();
    }
    return acc / (t_g * t_g * static_cast<double>(d));
}

}  // namespace

FtMask build_ft_mask(const ControlSchedule& schedule, const CliffordCircuit& circuit, const PauliString& q,
                     const FtMaskOptions& opts) {
    validate_schedule(schedule, circuit);
    if (schedule.n > 4) {
        throw std::invalid_argument("finite-time masks are dense-matrix machinery; n <= 4 only");
    }
    if (q.n != schedule.n) {
        throw std::invalid_argument("pauli dimension does not match schedule");
    }
    int n = schedule.n;
    int l = schedule.depth();

    // The mask entry for layer j is the twirled generator's PTM diagonal at
    // tail_j^{-1}(Q): equivalent to decomposing into coefficients k_{j,P} and
    // weighting by the signs of the circuit-propagated Pauli superoperators,
    // since the symplectic pairing is invariant under the tail conjugation.
    std::vector<PauliString> q_back(l, q);
    {
        std::vector<CliffordTableau> layer_inv;
        layer_inv.reserve(l);
        for (int j = 0; j < l; j++) {
            layer_inv.push_back(circuit.layers[j].inverse());
        }
        CliffordTableau inv_tail = CliffordTableau::identity(n);
        for (int j = l - 1; j >= 0; j--) {
            q_back[j] = inv_tail.conjugate(q);
            if (j > 0) {
                inv_tail = layer_inv[j].then_after(inv_tail);
            }
        }
    }

    auto assemble = [&](int grid) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n * l, n * l);
        for (int j = 0; j < l; j++) {
            LayerFrame frame(schedule.layer_hamiltonians[j]);
            Eigen::MatrixXcd sq = dense_pauli(q_back[j]);
            for (int a = 0; a < n; a++) {
                for (int ap = 0; ap < n; ap++) {
                    m(a * l + j, ap * l + j) +=
                        pair_entry(frame, schedule.noise_ops[a], schedule.noise_ops[ap], schedule.t_g, sq, n, grid);
                }
            }
        }
        // Exponent is -sum_{a,a'} theta_a theta_a' G^(a,a'); only the
        // symmetric part matters, and the exp(-theta^T M theta / 2) channel
        // convention doubles it.
        return Eigen::MatrixXd(m + m.transpose());
    };

    FtMask mask;
    mask.n = n;
    mask.l = l;
    int grid = opts.initial_grid;
    Eigen::MatrixXd prev = assemble(grid);
    for (;;) {
        if (grid * 2 > opts.max_grid) {
            throw std::runtime_error("finite-time quadrature did not converge to " + std::to_string(opts.convergence));
        }
        grid *= 2;
        Eigen::MatrixXd cur = assemble(grid);
        double change = (cur - prev).cwiseAbs().maxCoeff();
        prev = std::move(cur);
        if (change < opts.convergence) {
            break;
        }
    }
    mask.m = std::move(prev);
    return mask;
}

namespace {

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    double top = es.eigenvalues().cwiseAbs().maxCoeff();
    Eigen::VectorXd evals = es.eigenvalues();
    for (int i = 0; i < evals.size(); i++) {
        if (evals[i] < -1e-10 * std::max(top, 1.0)) {
            throw std::invalid_argument("finite-time mask is not PSD (eigenvalue " + std::to_string(evals[i]) + ")");
        }
        evals[i] = std::max(0.0, evals[i]);
    }
    return es.eigenvectors() * evals.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

double det_inv_sqrt(const Eigen::MatrixXd& root, const Eigen::MatrixXd& sigma, double c) {
    Eigen::MatrixXd b =
        Eigen::MatrixXd::Identity(root.rows(), root.cols()) + c * root * sigma * root;
    Eigen::LLT<Eigen::MatrixXd> llt(b);
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error("finite-time determinant: matrix not positive definite");
    }
    double log_sum = 0.0;
    for (int i = 0; i < b.rows(); i++) {
        log_sum += std::log(llt.matrixLLT()(i, i));
    }
    return std::exp(-log_sum);
}

}  // namespace

double ft_eigenvalue_gaussian(const FtMask& mask, const CovMatrix& cov, double c) {
    if (cov.dim() != mask.m.rows()) {
        throw std::invalid_argument("covariance dimension does not match finite-time mask");
    }
    return det_inv_sqrt(psd_sqrt(mask.m), cov.entries(), c);
}

FtBoundsReport ft_bounds_check(const FtMask& mask, const std::vector<CovMatrix>& covs, double tol) {
    FtBoundsReport report;
    int n = mask.n, l = mask.l;
    Eigen::MatrixXd root = psd_sqrt(mask.m);
    for (const auto& cov : covs) {
        report.checked++;
        double lam = det_inv_sqrt(root, cov.entries(), 1.0);

        // Fischer side: zero every block entry off-diagonal in the layer index
        Eigen::MatrixXd bd = Eigen::MatrixXd::Zero(cov.dim(), cov.dim());
        for (int a = 0; a < n; a++) {
            for (int ap = 0; ap < n; ap++) {
                for (int j = 0; j < l; j++) {
                    bd(a * l + j, ap * l + j) = cov.entries()(a * l + j, ap * l + j);
                }
            }
        }
        double lam_lower = det_inv_sqrt(root, bd, 1.0);
        if (lam - lam_lower < -tol) {
            report.lower_violations++;
            report.worst_lower_gap = std::min(report.worst_lower_gap, lam - lam_lower);
        }

        // rank-one side: same diagonal, det(1 + M v v^T) = 1 + v^T M v, best
        // sign assignment when enumerable
        Eigen::VectorXd sig = cov.diagonal().cwiseSqrt();
        int dim = cov.dim();
        double best_quad = sig.dot(mask.m * sig);
        if (dim <= 20) {
            for (uint64_t signs = 1; signs < (uint64_t{1} << (dim - 1)); signs++) {
                Eigen::VectorXd v = sig;
                for (int i = 1; i < dim; i++) {
                    if ((signs >> (i - 1)) & 1) {
                        v[i] = -v[i];
                    }
                }
                best_quad = std::min(best_quad, v.dot(mask.m * v));
            }
        }
        double lam_upper = 1.0 / std::sqrt(1.0 + std::max(0.0, best_quad));
        if (lam_upper - lam < -tol) {
            report.upper_violations++;
            report.worst_upper_gap = std::min(report.worst_upper_gap, lam_upper - lam);
        }
    }
    return report;
}

}  // namespace twirlcorr
