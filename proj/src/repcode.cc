#include "twirlcorr/repcode.h"

#include <cmath>

#include "twirlcorr/rng.h"
#include "twirlcorr/statevector.h"
#include "twirlcorr/threads.h"

namespace twirlcorr {

namespace {

constexpr int kData0 = 0, kData1 = 1, kData2 = 2, kAnc1 = 3, kAnc2 = 4;
constexpr int kQubits = 5;

// Exponential-kernel Gaussian sequence on a per-qubit clock: AR(1) with
// rho = exp(-1/tau), stationary, exactly matching sigma^2 rho^{|t-t'|}.
struct Ar1Stream {
    double sigma;
    double rho;
    double carry = 0.0;
    bool started = false;

    double next(Rng& rng) {
        if (!started) {
            carry = sigma * rng.next_normal();
            started = true;
        } else {
            carry = rho * carry + sigma * std::sqrt(std::max(0.0, 1.0 - rho * rho)) * rng.next_normal();
        }
        return carry;
    }
};

struct Trajectory {
    StateVector psi{kQubits};
    std::vector<Ar1Stream> noise;  // per qubit
    Rng noise_rng;
    Rng meas_rng;
    Rng twirl_rng;
    bool twirled;

    Trajectory(const RepCodeConfig& config, uint64_t traj_index)
        : noise_rng(config.seed, traj_index, /*stream_tag=*/0x726570636f64ULL),
          meas_rng(config.seed, traj_index, /*stream_tag=*/0x6d656173ULL),
          twirl_rng(config.seed, traj_index, /*stream_tag=*/0x7477697267ULL),
          twirled(config.twirled) {
        double rho = std::exp(-1.0 / config.tau_over_tg);
        noise.assign(kQubits, Ar1Stream{config.sigma, rho});
        // encode |0_L> = |+++>
        for (int q = 0; q < 3; q++) {
            psi.apply_gate(Gate{"h", {q}, {}});
        }
    }

    // CNOT with dephasing on both participants; optionally dressed by a
    // fresh random two-qubit Pauli and its CNOT-conjugate.
    void noisy_cx(int control, int target) {
        PauliString ins = PauliString::identity(kQubits);
        PauliString comp = ins;
        if (twirled) {
            uint64_t x = 0, z = 0;
            for (int q : {control, target}) {
                if (twirl_rng.next_bool()) {
                    x |= uint64_t{1} << q;
                }
                if (twirl_rng.next_bool()) {
                    z |= uint64_t{1} << q;
                }
            }
            ins = PauliString(kQubits, x, z);
            comp = CliffordTableau::for_gate(kQubits, "cx", {control, target}).conjugate(ins);
            psi.apply_pauli(ins);
        }
        psi.apply_cx(control, target);
        psi.apply_noise_rz(control, noise[control].next(noise_rng));
        psi.apply_noise_rz(target, noise[target].next(noise_rng));
        if (twirled) {
            psi.apply_pauli(comp);
        }
    }

    int measure_stabilizer(int ancilla, int data_a, int data_b) {
        psi.apply_gate(Gate{"h", {ancilla}, {}});
        noisy_cx(ancilla, data_a);
        noisy_cx(ancilla, data_b);
        psi.apply_gate(Gate{"h", {ancilla}, {}});
        int outcome = psi.measure_qubit(ancilla, meas_rng.next_double());
        if (outcome == 1) {
            psi.apply_gate(Gate{"x", {ancilla}, {}});  // reset
        }
        return outcome;
    }

    void round() {
        int s1 = measure_stabilizer(kAnc1, kData0, kData1);
        int s2 = measure_stabilizer(kAnc2, kData1, kData2);
        auto corr = syndrome_decode(s1, s2);
        if (corr) {
            psi.apply_gate(Gate{"z", {*corr}, {}});
        }
    }

    double survival() const {
        // overlap with |+++> on data, |00> on ancillas
        cxd amp(0.0, 0.0);
        const auto& a = psi.amplitudes();
        double w = 1.0 / std::sqrt(8.0);
        for (size_t i = 0; i < a.size(); i++) {
            if ((i >> kAnc1) & 1 || (i >> kAnc2) & 1) {
                continue;
            }
            amp += w * a[i];
        }
        return std::norm(amp);
    }
};

}  // namespace

std::optional<int> syndrome_decode(int s1, int s2) {
    if (s1 == 1 && s2 == 0) {
        return kData0;
    }
    if (s1 == 1 && s2 == 1) {
        return kData1;
    }
    if (s1 == 0 && s2 == 1) {
        return kData2;
    }
    return std::nullopt;
}

RepCodeResult run_repcode(const RepCodeConfig& config) {
    if (config.rounds < 1 || config.sigma < 0) {
        throw std::invalid_argument("bad repetition-code config");
    }
    int n = std::max(1, config.n_samples);
    std::vector<double> vals(n, 0.0);
    parallel_chunks(n, 8, [&](uint64_t, uint64_t begin, uint64_t end) {
        for (uint64_t t = begin; t < end; t++) {
            Trajectory traj(config, t);
            for (int r = 0; r < config.rounds; r++) {
                traj.round();
            }
            vals[t] = traj.survival();
        }
    });
    double mean = pairwise_sum(vals) / n;
    double var = 0.0;
    for (double v : vals) {
        var += (v - mean) * (v - mean);
    }
    RepCodeResult res;
    res.survival = mean;
    res.std_error = n > 1 ? std::sqrt(var / (static_cast<double>(n) * (n - 1))) : 0.0;
    res.n_samples = n;
    return res;
}

double repcode_inject_z(int inject_qubit, int inject_round, int rounds) {
    RepCodeConfig config;
    config.rounds = rounds;
    config.sigma = 0.0;
    config.n_samples = 1;
    Trajectory traj(config, 0);
    for (int r = 0; r < rounds; r++) {
        if (r == inject_round) {
            traj.psi.apply_gate(Gate{"z", {inject_qubit}, {}});
        }
        traj.round();
    }
    return traj.survival();
}

}  // namespace twirlcorr
