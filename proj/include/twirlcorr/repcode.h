#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "twirlcorr/analytic.h"

namespace twirlcorr {

// [[3,1,1]] phase-flip repetition code: data qubits 0..2 hold |0_L> = |+++>,
// stabilizers X0X1 and X1X2 measured through ancillas 3 and 4 (H, CX to both
// data qubits, H, Z-measure, reset). Correlated Z-angle noise follows every
// CNOT on both participants; per-qubit exponential kernel across all rounds.
struct RepCodeConfig {
    int rounds = 250;
    double sigma = 0.05;
    double tau_over_tg = 1.0;
    bool twirled = false;
    int n_samples = 2000;
    uint64_t seed = 0;
    bool keep_trajectories = false;
};

struct RepCodeResult {
    double survival = 0.0;   // mean |<0_L|psi_final>|^2 over trajectories
    double std_error = 0.0;
    int n_samples = 0;
    // per-trajectory survivals when keep_trajectories is set; trajectory k
    // always consumes the same random streams, so runs at different tau pair
    // up sample by sample
    std::vector<double> trajectories;
};

// Syndrome lookup of the distance-3 code: (0,0) -> none, (1,0) -> qubit 0,
// (1,1) -> qubit 1, (0,1) -> qubit 2.
std::optional<int> syndrome_decode(int s1, int s2);

RepCodeResult run_repcode(const RepCodeConfig& config);

// Deterministic single-trajectory run with an injected Z error on
// `inject_qubit` after round `inject_round` and zero stochastic noise;
// returns the final survival (used by the code-correctness checks).
double repcode_inject_z(int inject_qubit, int inject_round, int rounds);

}  // namespace twirlcorr
