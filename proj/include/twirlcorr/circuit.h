#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "twirlcorr/pauli.h"
#include "twirlcorr/rng.h"

namespace twirlcorr {

struct Gate {
    std::string name;
    std::vector<int> qubits;
    std::vector<double> params;

    bool operator==(const Gate& o) const {
        return name == o.name && qubits == o.qubits && params == o.params;
    }
};

bool gate_is_clifford(const Gate& g);
bool gate_is_two_qubit(const Gate& g);

// A dephasing error location: a Z-angle rotation on `qubit` right after
// gates[gate_index]. Two time coordinates are kept: the running count of
// two-qubit gates on that qubit (per-qubit clock, the default for covariance
// construction) and a global clock (layer index / global two-qubit counter).
struct NoiseSite {
    int qubit = 0;
    int time_q = 0;
    int time_global = 0;
    int gate_index = 0;
};

// A contiguous run of Clifford gates that is dressed by one random Pauli and
// its compensation when twirling. Noise attached to the unit's gates lands
// between the unit and the compensating Pauli.
struct TwirlUnit {
    int gate_begin = 0;
    int gate_end = 0;  // exclusive
    std::vector<int> qubits;
    CliffordTableau tableau = CliffordTableau::identity(1);
};

// Gate-list circuit with explicit noise sites; the common currency between
// the QASM frontend, the ensemble builders and both engines.
struct GateCircuit {
    int n = 0;
    std::vector<Gate> gates;
    std::vector<NoiseSite> sites;     // program order
    std::vector<TwirlUnit> twirl_units;
    bool clifford = true;

    int site_count() const {
        return static_cast<int>(sites.size());
    }
    uint64_t hash() const;
};

// Layered Clifford circuit: one tableau per layer plus the qubits that take a
// dephasing error after that layer. This is the instantaneous-gate model with
// flat noise index alpha*l + j (qubit-major).
struct CliffordCircuit {
    int n = 0;
    std::vector<std::vector<Gate>> layer_gates;
    std::vector<CliffordTableau> layers;
    std::vector<std::vector<int>> noise_qubits;  // per layer; empty vector in the ctor fills all qubits

    CliffordCircuit() = default;
    CliffordCircuit(int n, std::vector<std::vector<Gate>> layer_gate_lists,
                    std::vector<std::vector<int>> noise_qubits = {});

    int depth() const {
        return static_cast<int>(layers.size());
    }
    // Flattened gate-list form (sites after each layer's last gate).
    GateCircuit to_gate_circuit() const;
};

// Commutation mask over noise sites: bit i set iff Q anticommutes with the
// propagated axis of site i.
struct CommutationMask {
    std::vector<bool> bits;

    int weight() const;
    std::vector<int> set_indices() const;
};

// P_j^(alpha) for every (alpha, j) in [0,n) x [0,l): Z on qubit alpha
// conjugated through layers j+1..l. Flat index alpha*l + j.
std::vector<PauliString> propagate_noise_axes(const CliffordCircuit& circuit);

CommutationMask build_mask(const CliffordCircuit& circuit, const PauliString& q);

// Site-resolved analogue for GateCircuit. `layout_order[i]` gives, for the
// i-th position of the canonical qubit-major site ordering, the index into
// circuit.sites. `axes` is aligned with the canonical ordering.
struct NoiseLayout {
    std::vector<NoiseSite> sites;     // canonical order: sorted by (qubit, time_q, gate_index)
    std::vector<int> program_index;   // canonical position -> index into circuit.sites
    std::vector<int> canonical_index; // program position -> canonical position
};

NoiseLayout make_layout(const GateCircuit& circuit);

// Propagated axes for each canonical site of a Clifford GateCircuit.
std::vector<PauliString> propagate_noise_axes(const GateCircuit& circuit, const NoiseLayout& layout);

CommutationMask build_mask(const std::vector<PauliString>& axes, const PauliString& q);

// ---- circuit sources ---------------------------------------------------

enum class EnsembleKind {
    CliffordBrickwork,        // 1q layers: S or sqrt(X) w.p. p_single each qubit
    TDopedBrickwork,          // additionally a T gate w.p. p_t each qubit
    UniformCliffordBrickwork  // a uniform random 1q Clifford on every qubit
};

struct EnsembleSpec {
    EnsembleKind kind = EnsembleKind::CliffordBrickwork;
    int n = 16;
    int depth = 16;  // number of two-qubit gate layers
    double p_single = 0.3;
    double p_t = 0.5;
};

// Brickwork circuit `index` of the ensemble (deterministic in (spec, seed, index)).
GateCircuit make_brickwork_circuit(const EnsembleSpec& spec, uint64_t seed, uint64_t index);

// The 24 single-qubit Clifford tableaus as gate words over {h, s}.
const std::vector<std::vector<std::string>>& single_qubit_clifford_words();

// JSON circuit interchange (see docs/circuit_format.md).
CliffordCircuit clifford_circuit_from_json(const std::string& text);
std::string clifford_circuit_to_json(const CliffordCircuit& circuit);

}  // namespace twirlcorr
