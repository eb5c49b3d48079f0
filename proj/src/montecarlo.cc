#include "twirlcorr/montecarlo.h"

#include <cmath>
#include <map>

#include "twirlcorr/threads.h"

namespace twirlcorr {

namespace {

// stream tags for the independent substreams of one MC sample
constexpr uint64_t kStreamTwirl = 0x747769726cULL;
constexpr uint64_t kStreamState = 0x7374617465ULL;

}  // namespace

TwirlSample draw_twirl_sample(const GateCircuit& circuit, Rng& rng) {
    TwirlSample s;
    s.inserted.reserve(circuit.twirl_units.size());
    s.compensating.reserve(circuit.twirl_units.size());
    for (const auto& unit : circuit.twirl_units) {
        uint64_t x = 0, z = 0;
        for (int q : unit.qubits) {
            if (rng.next_bool()) {
                x |= uint64_t{1} << q;
            }
            if (rng.next_bool()) {
                z |= uint64_t{1} << q;
            }
        }
        PauliString p(circuit.n, x, z);
        s.inserted.push_back(p);
        s.compensating.push_back(unit.tableau.conjugate(p));
    }
    return s;
}

void run_ideal_circuit(const GateCircuit& circuit, StateVector& state) {
    for (const auto& g : circuit.gates) {
        state.apply_gate(g);
    }
}

void run_noisy_circuit(const GateCircuit& circuit, const NoiseLayout& layout, const Eigen::VectorXd& theta,
                       const TwirlSample* twirl, StateVector& state) {
    if (theta.size() != static_cast<Eigen::Index>(layout.sites.size())) {
        throw std::invalid_argument("noise realization length does not match circuit sites");
    }
    // noise sites grouped by the gate they follow, in canonical layout order
    std::multimap<int, int> sites_by_gate;
    for (size_t pos = 0; pos < layout.sites.size(); pos++) {
        sites_by_gate.insert({layout.sites[pos].gate_index, static_cast<int>(pos)});
    }
    size_t unit_idx = 0;
    int gi = 0;
    int n_gates = static_cast<int>(circuit.gates.size());
    while (gi < n_gates) {
        bool in_unit = twirl != nullptr && unit_idx < circuit.twirl_units.size() &&
                       circuit.twirl_units[unit_idx].gate_begin == gi;
        int end = in_unit ? circuit.twirl_units[unit_idx].gate_end : gi + 1;
        if (in_unit) {
            state.apply_pauli(twirl->inserted[unit_idx]);
        }
        for (; gi < end; gi++) {
            state.apply_gate(circuit.gates[gi]);
            auto range = sites_by_gate.equal_range(gi);
            for (auto it = range.first; it != range.second; ++it) {
                const NoiseSite& site = layout.sites[it->second];
                state.apply_noise_rz(site.qubit, theta[it->second]);
            }
        }
        if (in_unit) {
            state.apply_pauli(twirl->compensating[unit_idx]);
            unit_idx++;
        } else if (unit_idx < circuit.twirl_units.size() && circuit.twirl_units[unit_idx].gate_end <= gi) {
            unit_idx++;
        }
    }
}

FidelityEstimate average_fidelity_mc(const GateCircuit& circuit, const CovMatrix& cov, const McOptions& opts) {
    if (circuit.n > 20) {
        throw std::invalid_argument("statevector fidelity refused above 20 qubits (memory bound); "
                                    "reduce the circuit or use the analytic engine");
    }
    NoiseLayout layout = make_layout(circuit);
    if (cov.dim() != static_cast<int>(layout.sites.size())) {
        throw std::invalid_argument("covariance dimension does not match circuit noise sites");
    }
    NoiseSampler sampler(cov);

    int n_noise = std::max(1, opts.n_noise);
    int inner = std::max(1, opts.n_twirl) * std::max(1, opts.n_states);
    std::vector<double> noise_means(n_noise, 0.0);

    parallel_chunks(n_noise, 16, [&](uint64_t, uint64_t begin, uint64_t end) {
        for (uint64_t i = begin; i < end; i++) {
            NoiseRealization noise = sampler.sample(opts.seed, i);
            double acc = 0.0;
            int n_twirl = opts.twirled ? std::max(1, opts.n_twirl) : 1;
            for (int j = 0; j < n_twirl; j++) {
                TwirlSample twirl;
                if (opts.twirled) {
                    Rng trng(opts.seed, i * 0x10001ULL + j, kStreamTwirl);
                    twirl = draw_twirl_sample(circuit, trng);
                }
                for (int k = 0; k < std::max(1, opts.n_states); k++) {
                    Rng srng(opts.seed, (i * 0x10001ULL + j) * 0x101ULL + k, kStreamState);
                    StateVector psi = random_stabilizer_state(circuit.n, srng);
                    StateVector ideal = psi;
                    run_ideal_circuit(circuit, ideal);
                    StateVector noisy = std::move(psi);
                    run_noisy_circuit(circuit, layout, noise.theta, opts.twirled ? &twirl : nullptr, noisy);
                    acc += std::norm(ideal.overlap(noisy));
                }
            }
            noise_means[i] = acc / (opts.twirled ? inner : std::max(1, opts.n_states));
        }
    });

    double mean = pairwise_sum(noise_means) / n_noise;
    double var = 0.0;
    for (double m : noise_means) {
        var += (m - mean) * (m - mean);
    }
    double se = n_noise > 1 ? std::sqrt(var / (static_cast<double>(n_noise) * (n_noise - 1))) : 0.0;

    FidelityEstimate est;
    est.value = mean;
    est.std_error = se;
    est.method = "monte-carlo";
    est.n = circuit.n;
    est.cov_descriptor = cov.descriptor();
    est.circuit_hash = circuit.hash();
    return est;
}

EnsembleSummary circuit_ensemble_study(const EnsembleStudyOptions& opts) {
    EnsembleSummary out;
    size_t n_tau = opts.tau_grid.size();
    out.tau = opts.tau_grid;
    out.bare_mean.assign(n_tau, 0.0);
    out.bare_std.assign(n_tau, 0.0);
    out.bare_mean_se.assign(n_tau, 0.0);
    out.twirled_mean.assign(n_tau, 0.0);
    out.twirled_std.assign(n_tau, 0.0);
    out.twirled_mean_se.assign(n_tau, 0.0);

    std::vector<std::vector<double>> bare(n_tau), twirled(n_tau);
    std::vector<std::vector<double>> bare_se(n_tau), twirled_se(n_tau);

    for (int ci = 0; ci < opts.n_circuits; ci++) {
        GateCircuit circuit = make_brickwork_circuit(opts.spec, opts.circuit_seed, ci);
        NoiseLayout layout = make_layout(circuit);
        std::vector<PauliString> axes;
        bool analytic_ok = opts.twirled_analytic && circuit.clifford;
        if (analytic_ok) {
            axes = propagate_noise_axes(circuit, layout);
        }
        for (size_t ti = 0; ti < n_tau; ti++) {
            CovMatrix cov = cov_for_layout(layout, opts.sigma, opts.tau_grid[ti]);
            McOptions bare_opts = opts.mc;
            bare_opts.twirled = false;
            FidelityEstimate fb = average_fidelity_mc(circuit, cov, bare_opts);
            EnsembleRow row;
            row.circuit_index = ci;
            row.tau_over_tg = opts.tau_grid[ti];
            row.bare = fb;
            if (analytic_ok) {
                FidelityEstimate p = no_error_probability(axes, circuit.n, cov, {});
                p.value = fidelity_from_p(p.value, circuit.n);
                p.circuit_hash = circuit.hash();
                row.twirled = p;
            } else {
                McOptions tw_opts = opts.mc;
                tw_opts.twirled = true;
                row.twirled = average_fidelity_mc(circuit, cov, tw_opts);
            }
            bare[ti].push_back(row.bare.value);
            bare_se[ti].push_back(row.bare.std_error);
            twirled[ti].push_back(row.twirled.value);
            twirled_se[ti].push_back(row.twirled.std_error);
            out.rows.push_back(std::move(row));
        }
    }

    auto summarize = [&](const std::vector<double>& vals, const std::vector<double>& ses, double& mean, double& std,
                         double& mean_se) {
        int m = static_cast<int>(vals.size());
        mean = 0.0;
        for (double v : vals) {
            mean += v;
        }
        mean /= m;
        double var = 0.0;
        for (double v : vals) {
            var += (v - mean) * (v - mean);
        }
        std = m > 1 ? std::sqrt(var / (m - 1)) : 0.0;
        double se2 = m > 1 ? var / (static_cast<double>(m) * (m - 1)) : 0.0;
        for (double s : ses) {
            se2 += (s * s) / (static_cast<double>(m) * m);
        }
        mean_se = std::sqrt(se2);
    };
    for (size_t ti = 0; ti < n_tau; ti++) {
        summarize(bare[ti], bare_se[ti], out.bare_mean[ti], out.bare_std[ti], out.bare_mean_se[ti]);
        summarize(twirled[ti], twirled_se[ti], out.twirled_mean[ti], out.twirled_std[ti], out.twirled_mean_se[ti]);
    }
    return out;
}

}  // namespace twirlcorr
