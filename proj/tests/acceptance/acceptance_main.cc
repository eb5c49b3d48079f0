// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Heavier statistical checks print their margins so a near-miss is
// diagnosable from the log. Run time is dominated by the two ensemble
// studies and the repetition code; `--long-run` additionally runs the
// full-scale benchmark endpoints (hours, off by default and not gating).

#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "twirlcorr/analytic.h"
#include "twirlcorr/circuit.h"
#include "twirlcorr/covariance.h"
#include "twirlcorr/finite_time.h"
#include "twirlcorr/montecarlo.h"
#include "twirlcorr/qasm.h"
#include "twirlcorr/qkernel.h"
#include "twirlcorr/repcode.h"
#include "twirlcorr/rng.h"
#include "twirlcorr/threads.h"

using namespace twirlcorr;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail, double seconds) {
    std::ostringstream os;
    os << (pass ? "PASS" : "FAIL") << " criterion " << id << ": " << name << " (" << detail << ") ["
       << static_cast<int>(seconds) << "s]";
    std::cout << os.str() << std::endl;
    if (!pass) {
        failures++;
    }
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

CliffordCircuit random_clifford_circuit(int n, int l, Rng& rng) {
    const char* names1[] = {"h", "s", "sx", "sdg", "x"};
    std::vector<std::vector<Gate>> layers(l);
    for (auto& layer : layers) {
        for (int q = 0; q < n; q++) {
            if (rng.next_double() < 0.5) {
                layer.push_back(Gate{names1[rng.next_below(5)], {q}, {}});
            }
        }
        if (n > 1) {
            int a = static_cast<int>(rng.next_below(n));
            int b = (a + 1) % n;
            layer.push_back(Gate{"cx", {a, b}, {}});
        }
    }
    return CliffordCircuit(n, layers);
}

Eigen::MatrixXd random_psd_with_diag(const Eigen::VectorXd& diag, Rng& rng) {
    int dim = static_cast<int>(diag.size());
    Eigen::MatrixXd a(dim, dim);
    for (int r = 0; r < dim; r++) {
        for (int c = 0; c < dim; c++) {
            a(r, c) = rng.next_normal();
        }
    }
    Eigen::MatrixXd g = a * a.transpose();
    Eigen::VectorXd d = g.diagonal().cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd corr = d.asDiagonal() * g * d.asDiagonal();
    Eigen::VectorXd root = diag.cwiseSqrt();
    return root.asDiagonal() * corr * root.asDiagonal();
}

std::string fixture_path(const std::string& name) {
    return std::string(TWIRLCORR_FIXTURE_DIR) + "/" + name;
}

// ---- criterion 1: analytic exact sum vs the exact-cos MC oracle ----------
void criterion_1() {
    Timer timer;
    Rng rng(101, 0);
    int n = 3, l = 6;
    int worst_id = -1;
    double worst_margin = 1e300;
    bool pass = true;
    const int n_samples = 100000;
    for (int ci = 0; ci < 50; ci++) {
        CliffordCircuit circuit = random_clifford_circuit(n, l, rng);
        auto axes = propagate_noise_axes(circuit);
        // precompute all 4^n masks once
        std::vector<CommutationMask> masks;
        for (uint64_t code = 0; code < 64; code++) {
            masks.push_back(build_mask(axes, PauliString(n, code & 7, code >> 3)));
        }
        for (double sigma : {0.05, 0.15}) {
            for (double tau : {0.1, 1.0, 10.0, 100.0}) {
                CovMatrix cov = cov_exponential(n, l, sigma, tau, 1.0);
                double analytic = no_error_probability(axes, n, cov).value;

                NoiseSampler sampler(cov);
                std::vector<double> sums((n_samples + 511) / 512, 0.0), sq((n_samples + 511) / 512, 0.0);
                std::vector<double> budget_sums(sums.size(), 0.0);
                parallel_chunks(n_samples, 512, [&](uint64_t c, uint64_t b, uint64_t e) {
                    double acc = 0, acc2 = 0, accb = 0;
                    for (uint64_t k = b; k < e; k++) {
                        Eigen::VectorXd theta = sampler.sample(1000 + ci, k).theta;
                        Eigen::VectorXd c2(theta.size());
                        for (int i = 0; i < theta.size(); i++) {
                            c2[i] = std::cos(2 * theta[i]);
                        }
                        double p = 0;
                        for (const auto& m : masks) {
                            double v = 1;
                            for (size_t i = 0; i < m.bits.size(); i++) {
                                if (m.bits[i]) {
                                    v *= c2[i];
                                }
                            }
                            p += v;
                        }
                        p /= 64.0;
                        acc += p;
                        acc2 += p * p;
                        accb += theta.cwiseProduct(theta).maxCoeff() * theta.squaredNorm();
                    }
                    sums[c] = acc;
                    sq[c] = acc2;
                    budget_sums[c] = accb;
                });
                double mean = pairwise_sum(sums) / n_samples;
                double mean_sq = pairwise_sum(sq) / n_samples;
                double se = std::sqrt(std::max(0.0, mean_sq - mean * mean) / n_samples);
                double budget = pairwise_sum(budget_sums) / n_samples;
                double tol = 3 * se + budget;
                double margin = tol - std::abs(analytic - mean);
                if (margin < worst_margin) {
                    worst_margin = margin;
                    worst_id = ci;
                }
                if (margin < 0) {
                    pass = false;
                }
            }
        }
    }
    std::ostringstream os;
    os << "worst margin " << worst_margin << " at circuit " << worst_id << ", 400 configs x " << n_samples
       << " samples";
    report(1, "analytic exact sum matches the exact-cos MC oracle", pass, os.str(), timer.seconds());
}

// ---- criterion 2: bound inequalities --------------------------------------
void criterion_2() {
    Timer timer;
    Rng rng(102, 0);
    int violations = 0;
    double worst = 0.0;
    int checked = 0;
    // saturation first
    bool saturation = true;
    {
        CliffordCircuit c = random_clifford_circuit(3, 4, rng);
        CovMatrix diag = cov_min(Eigen::VectorXd::Constant(12, 0.01));
        FidelityBounds fb = fidelity_bounds(c, diag);
        double f = fidelity_from_p(no_error_probability(c, diag).value, 3);
        saturation &= std::abs(fb.lower.value - f) < 1e-12;
        CovMatrix ro = cov_max(Eigen::VectorXd::Constant(12, 0.1), std::vector<int>(12, 1));
        FidelityBounds fb2 = fidelity_bounds(c, ro);
        double f2 = fidelity_from_p(no_error_probability(c, ro).value, 3);
        saturation &= std::abs(fb2.upper.value - f2) < 1e-12;
    }
    for (int trial = 0; trial < 200; trial++) {
        int n = 1 + static_cast<int>(rng.next_below(3));
        int l = 2 + static_cast<int>(rng.next_below(5));
        CliffordCircuit c = random_clifford_circuit(n, l, rng);
        Eigen::VectorXd diag = Eigen::VectorXd::Constant(n * l, 1e-4).array() +
                               0.02 * Eigen::VectorXd::Random(n * l).cwiseAbs2().array();
        CovMatrix cov(random_psd_with_diag(diag, rng));
        FidelityBounds b = fidelity_bounds(c, cov);
        double mid = fidelity_from_p(no_error_probability(c, cov).value, n);
        checked++;
        double lo_gap = mid - b.lower.value;
        double hi_gap = b.upper.value - mid;
        if (lo_gap < -1e-12 || hi_gap < -1e-12) {
            violations++;
            worst = std::min(worst, std::min(lo_gap, hi_gap));
        }
    }
    std::ostringstream os;
    os << checked << " random covariances, " << violations << " violations, saturation "
       << (saturation ? "exact" : "BROKEN") << ", worst gap " << worst;
    report(2, "extremal-covariance bound inequalities", violations == 0 && saturation, os.str(), timer.seconds());
}

// ---- criterion 3: limiting closed forms ------------------------------------
void criterion_3() {
    Timer timer;
    double s2 = 0.0225;
    int dim = 24;
    bool pass = true;
    double worst = 0.0;
    CovMatrix markov = cov_min(Eigen::VectorXd::Constant(dim, s2));
    CovMatrix quasi = cov_quasistatic(1, dim, std::sqrt(s2));
    for (int m = 0; m <= dim; m++) {
        CommutationMask mask;
        mask.bits.assign(dim, false);
        for (int i = 0; i < m; i++) {
            mask.bits[i] = true;
        }
        double exp_err = std::abs(eigenvalue_gaussian(mask, markov) - std::pow(1 + 4 * s2, -0.5 * m));
        double pow_err = std::abs(eigenvalue_gaussian(mask, quasi) - 1.0 / std::sqrt(1 + 4 * s2 * m));
        worst = std::max({worst, exp_err, pow_err});
        pass &= exp_err < 1e-12 && pow_err < 1e-12;
    }
    std::ostringstream os;
    os << "masks up to weight " << dim << ", worst error " << worst;
    report(3, "limiting closed forms of the Gaussian eigenvalue", pass, os.str(), timer.seconds());
}

// ---- criterion 4: correlation halving --------------------------------------
void criterion_4() {
    Timer timer;
    double sigma = 0.05, s2 = sigma * sigma, tau = 4.0;
    int l = 7;
    CovMatrix cov = cov_exponential(1, l, sigma, tau, 1.0);
    NoiseSampler sampler(cov);
    int n_samples = 1000000;
    // accumulate first and second moments of p_j = sin^2 theta_j
    Eigen::VectorXd sum_p = Eigen::VectorXd::Zero(l);
    Eigen::MatrixXd sum_pp = Eigen::MatrixXd::Zero(l, l);
    Eigen::MatrixXd sum_pp2 = Eigen::MatrixXd::Zero(l, l);
    for (int k = 0; k < n_samples; k++) {
        Eigen::VectorXd t = sampler.sample(104, k).theta;
        Eigen::VectorXd p(l);
        for (int i = 0; i < l; i++) {
            double s = std::sin(t[i]);
            p[i] = s * s;
        }
        sum_p += p;
        sum_pp += p * p.transpose();
        sum_pp2 += (p * p.transpose()).cwiseAbs2();
    }
    bool pass = true;
    double worst_pull = 0.0;
    // The twirled error-probability covariance at separation D follows
    // 2 sigma^4 exp(-D/(tau/2)): halved correlation time. (The leading
    // coefficient is fixed by the exact Gaussian moments; see
    // error_prob_covariance.)
    for (int delta = 1; delta <= 5; delta++) {
        double acc = 0, acc_var = 0;
        int pairs = 0;
        for (int j = 0; j + delta < l; j++) {
            double mean_j = sum_p[j] / n_samples;
            double mean_k = sum_p[j + delta] / n_samples;
            double cov_emp = sum_pp(j, j + delta) / n_samples - mean_j * mean_k;
            double var_prod = sum_pp2(j, j + delta) / n_samples -
                              std::pow(sum_pp(j, j + delta) / n_samples, 2);
            acc += cov_emp;
            acc_var += var_prod / n_samples;
            pairs++;
        }
        double emp = acc / pairs;
        double se = std::sqrt(acc_var) / pairs;
        double want = error_prob_covariance(s2 * std::exp(-delta / tau));
        double pull = std::abs(emp - want) / se;
        worst_pull = std::max(worst_pull, pull);
        if (pull > 5.0) {
            pass = false;
        }
    }
    std::ostringstream os;
    os << n_samples << " samples, worst pull " << worst_pull << " se (limit 5)";
    report(4, "twirled error-probability correlations decay with tau/2", pass, os.str(), timer.seconds());
}

// ---- criterion 5: reduced-scale circuit-to-circuit concentration -----------
void criterion_5(bool long_run) {
    Timer timer;
    EnsembleStudyOptions eo;
    eo.spec.kind = EnsembleKind::CliffordBrickwork;
    eo.spec.n = long_run ? 16 : 8;
    eo.spec.depth = long_run ? 16 : 8;
    eo.n_circuits = 20;
    eo.sigma = 0.15;
    eo.tau_grid = {0.1, 1.0, 10.0, 100.0};
    eo.mc.n_noise = 4000;
    eo.mc.seed = 105;
    eo.twirled_analytic = !long_run;  // exact sum up to n = 8; MC for the 16-qubit run
    if (long_run) {
        eo.mc.n_twirl = 1;
    }
    eo.circuit_seed = 105;
    EnsembleSummary s = circuit_ensemble_study(eo);
    bool concentrated = true, monotone = true;
    std::ostringstream os;
    for (size_t ti = 0; ti < s.tau.size(); ti++) {
        concentrated &= s.twirled_std[ti] < s.bare_std[ti];
        if (ti > 0) {
            monotone &= s.twirled_mean[ti] >= s.twirled_mean[ti - 1] - 1e-12;
        }
        os << "tau=" << s.tau[ti] << ": std " << s.twirled_std[ti] << " vs " << s.bare_std[ti] << "; ";
    }
    report(5, "twirled fidelities concentrate across circuits and grow with tau", concentrated && monotone, os.str(),
           timer.seconds());
}

// ---- criterion 6: uniform-Clifford ensemble keeps the mean -----------------
void criterion_6() {
    Timer timer;
    EnsembleStudyOptions eo;
    eo.spec.kind = EnsembleKind::UniformCliffordBrickwork;
    eo.spec.n = 4;
    eo.spec.depth = 8;
    eo.n_circuits = 100;
    eo.sigma = 0.035;
    eo.tau_grid = {100.0};
    eo.mc.n_noise = 3000;
    eo.mc.seed = 106;
    eo.twirled_analytic = true;
    eo.circuit_seed = 106;
    EnsembleSummary s = circuit_ensemble_study(eo);
    double diff = std::abs(s.twirled_mean[0] - s.bare_mean[0]);
    double combined_se = std::sqrt(s.twirled_mean_se[0] * s.twirled_mean_se[0] +
                                   s.bare_mean_se[0] * s.bare_mean_se[0]);
    bool means_agree = diff <= 2 * combined_se;
    bool var_reduced = s.twirled_std[0] < s.bare_std[0];
    std::ostringstream os;
    os << "mean diff " << diff << " vs 2se " << 2 * combined_se << ", twirled std " << s.twirled_std[0]
       << " < bare std " << s.bare_std[0];
    report(6, "uniform-Clifford ensemble: twirling keeps the mean, shrinks the variance", means_agree && var_reduced,
           os.str(), timer.seconds());
}

// ---- criterion 7: benchmark-circuit trend (smoke scale) ---------------------
void criterion_7(bool long_run) {
    Timer timer;
    GateCircuit circuit = lower(parse_qasm_file(fixture_path("sqrt_n10.qasm")));
    NoiseLayout layout = make_layout(circuit);
    double sigma = 0.035;
    McOptions mo;
    mo.twirled = true;
    mo.n_noise = 30000;
    mo.seed = 107;
    CovMatrix cov_short = cov_for_layout(layout, sigma, 1e-2);
    CovMatrix cov_long = cov_for_layout(layout, sigma, 1e4);
    FidelityEstimate f_short = average_fidelity_mc(circuit, cov_short, mo);
    FidelityEstimate f_long = average_fidelity_mc(circuit, cov_long, mo);
    // identical seeds pair the samples; the difference se is bounded by the
    // sum of the per-point ses and in practice far smaller
    double diff = f_long.value - f_short.value;
    double se = std::sqrt(f_long.std_error * f_long.std_error + f_short.std_error * f_short.std_error);
    bool pass = diff > 0;
    std::ostringstream os;
    os << "10-qubit smoke: F(" << 1e4 << ") - F(" << 1e-2 << ") = " << diff << " (se " << se << ")";
    report(7, "twirled benchmark fidelity rises with correlation time", pass, os.str(), timer.seconds());

    if (long_run) {
        Timer t2;
        for (const char* name : {"sqrt_n18.qasm", "qft_n18.qasm"}) {
            try {
                GateCircuit big = lower(parse_qasm_file(fixture_path(name)));
                McOptions big_mo;
                big_mo.twirled = true;
                big_mo.n_noise = 20000;
                big_mo.seed = 1007;
                NoiseLayout big_layout = make_layout(big);
                FidelityEstimate a = average_fidelity_mc(big, cov_for_layout(big_layout, sigma, 1e-2), big_mo);
                FidelityEstimate b = average_fidelity_mc(big, cov_for_layout(big_layout, sigma, 1e4), big_mo);
                std::cout << "  long-run " << name << ": F(1e-2)=" << a.value << " F(1e4)=" << b.value
                          << " (se " << a.std_error << ") [" << static_cast<int>(t2.seconds()) << "s]" << std::endl;
            } catch (const std::exception& e) {
                std::cout << "  long-run " << name << " skipped: " << e.what() << std::endl;
            }
        }
    }
}

// ---- criterion 8: quantum-kernel cancellation -------------------------------
void criterion_8() {
    Timer timer;
    Rng rng(108, 0);
    bool pass = true;
    double worst_qu = 0.0, worst_cl = 1e300;
    auto clifford_step = [](int n, Rng& r, Eigen::MatrixXcd& u) {
        size_t d = size_t{1} << n;
        const char* names[] = {"h", "s", "sx"};
        std::vector<Gate> gates;
        for (int q = 0; q < n; q++) {
            gates.push_back(Gate{names[r.next_below(3)], {q}, {}});
        }
        if (n > 1) {
            int a = static_cast<int>(r.next_below(n));
            gates.push_back(Gate{"cx", {a, (a + 1) % n}, {}});
        }
        Eigen::MatrixXcd step = Eigen::MatrixXcd::Identity(d, d);
        for (const auto& g : gates) {
            Eigen::MatrixXcd gd = Eigen::MatrixXcd::Zero(d, d);
            for (size_t c = 0; c < d; c++) {
                StateVector sv(n);
                sv.amplitudes().assign(d, cxd(0, 0));
                sv.amplitudes()[c] = 1.0;
                sv.apply_gate(g);
                for (size_t r2 = 0; r2 < d; r2++) {
                    gd(r2, c) = sv.amplitudes()[r2];
                }
            }
            step = gd * step;
        }
        u = step * u;
    };
    auto generic_unitary = [](int n, Rng& r) {
        size_t d = size_t{1} << n;
        Eigen::MatrixXcd a(d, d);
        for (size_t i = 0; i < d; i++) {
            for (size_t j = 0; j < d; j++) {
                a(i, j) = cxd(r.next_normal(), r.next_normal());
            }
        }
        Eigen::MatrixXcd h = 0.5 * (a + a.adjoint());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
        Eigen::VectorXcd ph(es.eigenvalues().size());
        for (int i = 0; i < ph.size(); i++) {
            ph[i] = std::polar(1.0, es.eigenvalues()[i]);
        }
        return Eigen::MatrixXcd(es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint());
    };
    for (int trial = 0; trial < 20; trial++) {
        int n = 1 + static_cast<int>(rng.next_below(3));
        std::vector<Eigen::MatrixXcd> noise_ops;
        for (int q = 0; q < n; q++) {
            noise_ops.push_back(dense_pauli(PauliString::single(n, q, 'Z')));
        }
        // grid spacings sit where S_R is order one, so the classical control
        // is held away from the correlator's zero crossing
        std::vector<double> times = {0.0, 0.35, 0.7, 1.05};
        // Clifford dressing sequence: the setting the cancellation claim is
        // stated in. Single-qubit Clifford frames can leave the dressed axes
        // orthogonal, where the twirled classical kernel vanishes too, so
        // the non-degeneracy control runs on generic unitary frames.
        std::vector<Eigen::MatrixXcd> cliff_dressings;
        Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(1 << n, 1 << n);
        for (size_t k = 0; k < times.size(); k++) {
            cliff_dressings.push_back(u);
            clifford_step(n, rng, u);
        }
        KernelReport cliff = verify_kernel_cancellation(n, noise_ops, cliff_dressings, times, ohmic_correlator(1.0));

        std::vector<Eigen::MatrixXcd> generic_dressings;
        for (size_t k = 0; k < times.size(); k++) {
            generic_dressings.push_back(generic_unitary(n, rng));
        }
        KernelReport generic =
            verify_kernel_cancellation(n, noise_ops, generic_dressings, times, ohmic_correlator(1.0));

        worst_qu = std::max({worst_qu, cliff.max_quantum_entry, generic.max_quantum_entry});
        worst_cl = std::min(worst_cl, generic.max_classical_entry);
        pass &= cliff.max_quantum_entry <= 1e-12 && generic.max_quantum_entry <= 1e-12 &&
                generic.max_classical_entry > 0.1;
    }
    std::ostringstream os;
    os << "20 configs, max quantum entry " << worst_qu << ", min classical control entry " << worst_cl;
    report(8, "Pauli-averaged quantum kernel vanishes; classical kernel survives", pass, os.str(), timer.seconds());
}

// ---- criterion 9: finite-time consistency and bounds ------------------------
void criterion_9() {
    Timer timer;
    // zero-duration limit: idle windows (H = 0) with the circuit's Cliffords
    // firing at the window boundaries; the mask must equal 4x the 0/1 mask
    CliffordCircuit circ(2, {{Gate{"h", {0}, {}}}, {Gate{"cx", {0, 1}, {}}}, {Gate{"sdg", {1}, {}}}});
    ControlSchedule idle;
    idle.n = 2;
    idle.t_g = 1.0;
    for (int j = 0; j < 3; j++) {
        idle.layer_hamiltonians.push_back(Eigen::MatrixXcd::Zero(4, 4));
    }
    for (int q = 0; q < 2; q++) {
        idle.noise_ops.push_back(dense_pauli(PauliString::single(2, q, 'Z')));
    }
    double reduction_err = 0.0;
    auto axes = propagate_noise_axes(circ);
    for (uint64_t code = 0; code < 16; code++) {
        PauliString q(2, code & 3, code >> 2);
        FtMask ft = build_ft_mask(idle, circ, q);
        CommutationMask m01 = build_mask(axes, q);
        for (int i = 0; i < 6; i++) {
            for (int k = 0; k < 6; k++) {
                double want = (i == k && m01.bits[i]) ? 4.0 : 0.0;
                reduction_err = std::max(reduction_err, std::abs(ft.m(i, k) - want));
            }
        }
    }
    bool reduction_ok = reduction_err < 1e-8;

    // Fischer / rank-one bound checks on 200 random covariances, with a
    // swap-generator layer so the mask carries cross-qubit structure
    constexpr double kPi = 3.141592653589793238462643383279502884;
    CliffordCircuit ent(2, {{Gate{"swap", {0, 1}, {}}}, {Gate{"h", {0}, {}}, Gate{"h", {1}, {}}}});
    ControlSchedule s;
    s.n = 2;
    s.t_g = 1.0;
    s.layer_hamiltonians.push_back(
        pauli_operator(2, {{"XX", kPi / 4}, {"YY", kPi / 4}, {"ZZ", kPi / 4}, {"__", -kPi / 4}}));
    double hc = kPi / (2 * std::sqrt(2.0));
    s.layer_hamiltonians.push_back(pauli_operator(2, {{"X_", hc}, {"Z_", hc}}) +
                                   pauli_operator(2, {{"_X", hc}, {"_Z", hc}}));
    s.noise_ops.push_back(dense_pauli(PauliString::from_str("Z_")));
    s.noise_ops.push_back(dense_pauli(PauliString::from_str("_Z")));
    FtMask mask = build_ft_mask(s, ent, PauliString::from_str("XZ"));
    Rng rng(109, 0);
    std::vector<CovMatrix> covs;
    for (int t = 0; t < 200; t++) {
        Eigen::MatrixXd a(4, 4);
        for (int r = 0; r < 4; r++) {
            for (int c = 0; c < 4; c++) {
                a(r, c) = rng.next_normal();
            }
        }
        covs.push_back(CovMatrix(0.01 * (a * a.transpose()) / 4));
    }
    FtBoundsReport rep = ft_bounds_check(mask, covs);
    bool bounds_ok = rep.lower_violations == 0 && rep.upper_violations == 0;
    std::ostringstream os;
    os << "instantaneous reduction err " << reduction_err << "; bounds: " << rep.checked << " checked, "
       << rep.lower_violations << "+" << rep.upper_violations << " violations";
    report(9, "finite-time mask reduces to the instantaneous mask; Fischer/rank-one bounds hold",
           reduction_ok && bounds_ok, os.str(), timer.seconds());
}

// ---- criterion 10: repetition-code trends -----------------------------------
void criterion_10() {
    Timer timer;
    std::vector<double> taus = {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 100.0};
    std::vector<double> tw_surv, tw_se, bare_surv, bare_se;
    for (double tau : taus) {
        RepCodeConfig c;
        c.rounds = 250;
        c.sigma = 0.05;
        c.tau_over_tg = tau;
        c.seed = 110;
        c.twirled = true;
        c.n_samples = 2000;
        RepCodeResult tw = run_repcode(c);
        tw_surv.push_back(tw.survival);
        tw_se.push_back(tw.std_error);
        // the bare interior extremum is a span-level feature; a larger bare
        // budget keeps its detection at 3 sigma while staying far inside the
        // runtime envelope
        c.twirled = false;
        c.n_samples = 12000;
        RepCodeResult bare = run_repcode(c);
        bare_surv.push_back(bare.survival);
        bare_se.push_back(bare.std_error);
    }
    // twirled: monotone non-decreasing within 3 sigma
    bool monotone = true;
    for (size_t i = 1; i < taus.size(); i++) {
        double diff = tw_surv[i] - tw_surv[i - 1];
        double se = std::sqrt(tw_se[i] * tw_se[i] + tw_se[i - 1] * tw_se[i - 1]);
        if (diff < -3 * se) {
            monotone = false;
        }
    }
    // bare: an interior extremum at 3 sigma significance. The dip develops
    // over several grid points, so compare each interior point against the
    // best earlier and later values rather than adjacent steps only.
    bool nonmono = false;
    for (size_t j = 1; j + 1 < taus.size(); j++) {
        double drop = 0, drop_se = 0, rise = 0, rise_se = 0;
        for (size_t i = 0; i < j; i++) {
            double d = bare_surv[i] - bare_surv[j];
            if (d > drop) {
                drop = d;
                drop_se = std::sqrt(bare_se[i] * bare_se[i] + bare_se[j] * bare_se[j]);
            }
        }
        for (size_t k = j + 1; k < taus.size(); k++) {
            double d = bare_surv[k] - bare_surv[j];
            if (d > rise) {
                rise = d;
                rise_se = std::sqrt(bare_se[k] * bare_se[k] + bare_se[j] * bare_se[j]);
            }
        }
        if (drop > 3 * drop_se && rise > 3 * rise_se && drop_se > 0 && rise_se > 0) {
            nonmono = true;
        }
    }
    std::ostringstream os;
    os << "twirled ";
    for (double v : tw_surv) {
        os << v << " ";
    }
    os << "| bare ";
    for (double v : bare_surv) {
        os << v << " ";
    }
    report(10, "repetition code: twirled survival monotone, bare non-monotonic", monotone && nonmono, os.str(),
           timer.seconds());
}

}  // namespace

int main(int argc, char** argv) {
    bool long_run = false;
    for (int i = 1; i < argc; i++) {
        if (std::strcmp(argv[i], "--long-run") == 0) {
            long_run = true;
        }
    }
    criterion_3();
    criterion_2();
    criterion_8();
    criterion_4();
    criterion_9();
    criterion_1();
    criterion_6();
    criterion_7(long_run);
    criterion_5(long_run);
    criterion_10();
    if (failures) {
        std::cout << failures << " criterion(s) FAILED" << std::endl;
        return 1;
    }
    std::cout << "all criteria passed" << std::endl;
    return 0;
}
