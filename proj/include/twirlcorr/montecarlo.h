#pragma once

#include <cstdint>
#include <vector>

#include "twirlcorr/analytic.h"
#include "twirlcorr/circuit.h"
#include "twirlcorr/covariance.h"
#include "twirlcorr/statevector.h"

namespace twirlcorr {

struct McOptions {
    bool twirled = false;
    int n_noise = 1000;
    int n_twirl = 1;   // dressings per noise draw (twirled runs)
    int n_states = 1;  // input states per dressing
    uint64_t seed = 0;
};

// The random Pauli dressing of one noise draw: per twirl unit, the inserted
// Pauli and its compensation conj = G P G^{-1} (applied after the unit's noise).
struct TwirlSample {
    std::vector<PauliString> inserted;
    std::vector<PauliString> compensating;
};

TwirlSample draw_twirl_sample(const GateCircuit& circuit, Rng& rng);

// One noisy (optionally dressed) run applied to `state` in place.
void run_noisy_circuit(const GateCircuit& circuit, const NoiseLayout& layout, const Eigen::VectorXd& theta,
                       const TwirlSample* twirl, StateVector& state);

void run_ideal_circuit(const GateCircuit& circuit, StateVector& state);

// Average circuit fidelity by Monte Carlo: random stabilizer input states (a
// state 2-design) make the grand mean of |<psi| U_ideal^dag U_noisy |psi>|^2
// an unbiased estimator of (E|tr W|^2 + d) / (d(d+1)) = F_avg. Jackknife
// standard error over noise draws. Sample streams are keyed by
// (seed, sample index) only, so two runs with equal seeds pair up sample by
// sample (common random numbers across covariance grids).
FidelityEstimate average_fidelity_mc(const GateCircuit& circuit, const CovMatrix& cov, const McOptions& opts);

struct EnsembleRow {
    uint64_t circuit_index = 0;
    double tau_over_tg = 0.0;
    FidelityEstimate bare;
    FidelityEstimate twirled;
};

struct EnsembleStudyOptions {
    EnsembleSpec spec;
    std::vector<double> tau_grid = {0.1, 1.0, 10.0, 100.0};
    double sigma = 0.15;
    int n_circuits = 20;
    McOptions mc;                     // budgets for the bare (and MC-twirled) runs
    bool twirled_analytic = true;     // exact Pauli sum for the twirled value when Clifford
    uint64_t circuit_seed = 1;
};

struct EnsembleSummary {
    std::vector<EnsembleRow> rows;
    // per tau: mean and circuit-to-circuit std of each model
    std::vector<double> tau;
    std::vector<double> bare_mean, bare_std, bare_mean_se;
    std::vector<double> twirled_mean, twirled_std, twirled_mean_se;
};

EnsembleSummary circuit_ensemble_study(const EnsembleStudyOptions& opts);

}  // namespace twirlcorr
