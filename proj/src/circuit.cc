#include "twirlcorr/circuit.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace twirlcorr {

namespace {

const std::set<std::string>& clifford_gate_names() {
    static const std::set<std::string> names = {"i",  "id", "h",    "x",  "y",  "z",   "s",
                                                "sdg", "sx", "sxdg", "cx", "cz", "swap"};
    return names;
}

}  // namespace

bool gate_is_clifford(const Gate& g) {
    return clifford_gate_names().count(g.name) > 0;
}

bool gate_is_two_qubit(const Gate& g) {
    return g.name == "cx" || g.name == "cz" || g.name == "swap";
}

uint64_t GateCircuit::hash() const {
    uint64_t h = fnv1a64(&n, sizeof(n));
    for (const auto& g : gates) {
        h = fnv1a64(g.name.data(), g.name.size(), h);
        for (int q : g.qubits) {
            h = fnv1a64(&q, sizeof(q), h);
        }
        for (double p : g.params) {
            h = fnv1a64(&p, sizeof(p), h);
        }
    }
    for (const auto& s : sites) {
        h = fnv1a64(&s.qubit, sizeof(s.qubit), h);
        h = fnv1a64(&s.gate_index, sizeof(s.gate_index), h);
    }
    return h;
}

CliffordCircuit::CliffordCircuit(int n_, std::vector<std::vector<Gate>> layer_gate_lists,
                                 std::vector<std::vector<int>> noise)
    : n(n_), layer_gates(std::move(layer_gate_lists)) {
    layers.reserve(layer_gates.size());
    for (const auto& gates : layer_gates) {
        CliffordTableau t = CliffordTableau::identity(n);
        for (const auto& g : gates) {
            t = CliffordTableau::for_gate(n, g.name, g.qubits).then_after(t);
        }
        layers.push_back(std::move(t));
    }
    if (noise.empty()) {
        std::vector<int> all(n);
        std::iota(all.begin(), all.end(), 0);
        noise_qubits.assign(layers.size(), all);
    } else {
        if (noise.size() != layers.size()) {
            throw std::invalid_argument("noise_qubits must have one entry per layer");
        }
        for (const auto& qs : noise) {
            for (int q : qs) {
                if (q < 0 || q >= n) {
                    throw std::invalid_argument("noise qubit index out of range");
                }
            }
        }
        noise_qubits = std::move(noise);
    }
}

GateCircuit CliffordCircuit::to_gate_circuit() const {
    GateCircuit out;
    out.n = n;
    for (size_t j = 0; j < layers.size(); j++) {
        TwirlUnit unit;
        unit.gate_begin = static_cast<int>(out.gates.size());
        for (const auto& g : layer_gates[j]) {
            out.gates.push_back(g);
        }
        if (layer_gates[j].empty()) {
            // keep an explicit placeholder so sites have a gate to follow
            out.gates.push_back(Gate{"i", {0}, {}});
        }
        unit.gate_end = static_cast<int>(out.gates.size());
        unit.qubits.resize(n);
        std::iota(unit.qubits.begin(), unit.qubits.end(), 0);
        unit.tableau = layers[j];
        out.twirl_units.push_back(std::move(unit));
        for (int q : noise_qubits[j]) {
            NoiseSite s;
            s.qubit = q;
            s.time_q = static_cast<int>(j) + 1;
            s.time_global = static_cast<int>(j) + 1;
            s.gate_index = static_cast<int>(out.gates.size()) - 1;
            out.sites.push_back(s);
        }
    }
    out.clifford = true;
    return out;
}

int CommutationMask::weight() const {
    int w = 0;
    for (bool b : bits) {
        w += b ? 1 : 0;
    }
    return w;
}

std::vector<int> CommutationMask::set_indices() const {
    std::vector<int> idx;
    for (size_t i = 0; i < bits.size(); i++) {
        if (bits[i]) {
            idx.push_back(static_cast<int>(i));
        }
    }
    return idx;
}

std::vector<PauliString> propagate_noise_axes(const CliffordCircuit& circuit) {
    int n = circuit.n;
    int l = circuit.depth();
    std::vector<PauliString> axes(static_cast<size_t>(n) * l, PauliString::identity(n));
    // Walk layers from last to first, extending the tail conjugation
    // T_tail(j) = T_l ∘ ... ∘ T_{j+1} one layer at a time.
    CliffordTableau tail = CliffordTableau::identity(n);
    for (int j = l - 1; j >= 0; j--) {
        for (int alpha = 0; alpha < n; alpha++) {
            axes[static_cast<size_t>(alpha) * l + j] = tail.conjugate(PauliString::single(n, alpha, 'Z'));
        }
        if (j > 0) {
            tail = tail.then_after(circuit.layers[j]);
        }
    }
    return axes;
}

CommutationMask build_mask(const CliffordCircuit& circuit, const PauliString& q) {
    if (q.n != circuit.n) {
        throw std::invalid_argument("pauli dimension does not match circuit");
    }
    return build_mask(propagate_noise_axes(circuit), q);
}

NoiseLayout make_layout(const GateCircuit& circuit) {
    NoiseLayout layout;
    layout.sites = circuit.sites;
    layout.program_index.resize(circuit.sites.size());
    std::iota(layout.program_index.begin(), layout.program_index.end(), 0);
    std::stable_sort(layout.program_index.begin(), layout.program_index.end(), [&](int a, int b) {
        const NoiseSite& sa = circuit.sites[a];
        const NoiseSite& sb = circuit.sites[b];
        if (sa.qubit != sb.qubit) {
            return sa.qubit < sb.qubit;
        }
        if (sa.time_q != sb.time_q) {
            return sa.time_q < sb.time_q;
        }
        return sa.gate_index < sb.gate_index;
    });
    std::vector<NoiseSite> sorted;
    sorted.reserve(circuit.sites.size());
    layout.canonical_index.resize(circuit.sites.size());
    for (size_t pos = 0; pos < layout.program_index.size(); pos++) {
        sorted.push_back(circuit.sites[layout.program_index[pos]]);
        layout.canonical_index[layout.program_index[pos]] = static_cast<int>(pos);
    }
    layout.sites = std::move(sorted);
    return layout;
}

std::vector<PauliString> propagate_noise_axes(const GateCircuit& circuit, const NoiseLayout& layout) {
    if (!circuit.clifford) {
        throw std::invalid_argument(
            "circuit contains non-Clifford gates; propagated noise axes are only defined for "
            "Clifford circuits (use the Monte-Carlo engine instead)");
    }
    int n = circuit.n;
    // Tail tableau after each gate index, built back to front.
    size_t n_gates = circuit.gates.size();
    std::vector<int> site_order(layout.sites.size());
    std::iota(site_order.begin(), site_order.end(), 0);
    std::sort(site_order.begin(), site_order.end(), [&](int a, int b) {
        return layout.sites[a].gate_index > layout.sites[b].gate_index;
    });
    std::vector<PauliString> axes(layout.sites.size(), PauliString::identity(n));
    CliffordTableau tail = CliffordTableau::identity(n);
    int next_gate = static_cast<int>(n_gates) - 1;
    for (int idx : site_order) {
        const NoiseSite& site = layout.sites[idx];
        while (next_gate > site.gate_index) {
            tail = tail.then_after(CliffordTableau::for_gate(n, circuit.gates[next_gate].name,
                                                             circuit.gates[next_gate].qubits));
            next_gate--;
        }
        axes[idx] = tail.conjugate(PauliString::single(n, site.qubit, 'Z'));
    }
    return axes;
}

CommutationMask build_mask(const std::vector<PauliString>& axes, const PauliString& q) {
    CommutationMask mask;
    mask.bits.resize(axes.size());
    for (size_t i = 0; i < axes.size(); i++) {
        mask.bits[i] = !commutes(q, axes[i]);
    }
    return mask;
}

const std::vector<std::vector<std::string>>& single_qubit_clifford_words() {
    // BFS over tableau compositions of {h, s} starting from the identity.
    static const std::vector<std::vector<std::string>> words = [] {
        std::vector<std::vector<std::string>> out;
        std::vector<CliffordTableau> seen;
        std::vector<std::vector<std::string>> frontier = {{}};
        seen.push_back(CliffordTableau::identity(1));
        out.push_back({});
        while (!frontier.empty()) {
            std::vector<std::vector<std::string>> next;
            for (const auto& word : frontier) {
                for (const std::string gate : {"h", "s"}) {
                    CliffordTableau t = CliffordTableau::identity(1);
                    for (const auto& g : word) {
                        t = CliffordTableau::for_gate(1, g, {0}).then_after(t);
                    }
                    t = CliffordTableau::for_gate(1, gate, {0}).then_after(t);
                    bool known = false;
                    for (const auto& s : seen) {
                        if (s == t) {
                            known = true;
                            break;
                        }
                    }
                    if (!known) {
                        auto w = word;
                        w.push_back(gate);
                        seen.push_back(t);
                        out.push_back(w);
                        next.push_back(std::move(w));
                    }
                }
            }
            frontier = std::move(next);
        }
        if (out.size() != 24) {
            throw std::logic_error("single-qubit Clifford enumeration failed");
        }
        return out;
    }();
    return words;
}

GateCircuit make_brickwork_circuit(const EnsembleSpec& spec, uint64_t seed, uint64_t index) {
    if (spec.n < 2) {
        throw std::invalid_argument("brickwork ensembles need at least 2 qubits");
    }
    GateCircuit c;
    c.n = spec.n;
    Rng rng(seed, index, /*stream_tag=*/0x656e73656d626cULL);
    const auto& cliff_words = single_qubit_clifford_words();
    for (int d = 0; d < spec.depth; d++) {
        // single-qubit layer
        for (int q = 0; q < spec.n; q++) {
            switch (spec.kind) {
                case EnsembleKind::CliffordBrickwork:
                case EnsembleKind::TDopedBrickwork:
                    if (rng.next_double() < spec.p_single) {
                        c.gates.push_back(Gate{rng.next_bool() ? "s" : "sx", {q}, {}});
                    }
                    if (spec.kind == EnsembleKind::TDopedBrickwork && rng.next_double() < spec.p_t) {
                        c.gates.push_back(Gate{"t", {q}, {}});
                        c.clifford = false;
                    }
                    break;
                case EnsembleKind::UniformCliffordBrickwork: {
                    const auto& word = cliff_words[rng.next_below(cliff_words.size())];
                    for (const auto& gname : word) {
                        c.gates.push_back(Gate{gname, {q}, {}});
                    }
                    break;
                }
            }
        }
        // nearest-neighbor CNOT layer (even/odd brick pattern), dephasing on
        // both participants of every CNOT, dressed as one twirl unit per gate
        int start = (d % 2 == 0) ? 0 : 1;
        for (int q = start; q + 1 < spec.n; q += 2) {
            TwirlUnit unit;
            unit.gate_begin = static_cast<int>(c.gates.size());
            c.gates.push_back(Gate{"cx", {q, q + 1}, {}});
            unit.gate_end = static_cast<int>(c.gates.size());
            unit.qubits = {q, q + 1};
            unit.tableau = CliffordTableau::for_gate(spec.n, "cx", {q, q + 1});
            c.twirl_units.push_back(std::move(unit));
        }
    }
    // Fill noise sites in one pass so per-qubit and global clocks agree with
    // the gate order.
    std::vector<int> per_qubit_count(spec.n, 0);
    int global_count = 0;
    c.sites.clear();
    for (size_t gi = 0; gi < c.gates.size(); gi++) {
        if (!gate_is_two_qubit(c.gates[gi])) {
            continue;
        }
        global_count++;
        for (int q : c.gates[gi].qubits) {
            per_qubit_count[q]++;
            NoiseSite s;
            s.qubit = q;
            s.time_q = per_qubit_count[q];
            s.time_global = global_count;
            s.gate_index = static_cast<int>(gi);
            c.sites.push_back(s);
        }
    }
    return c;
}

// ---- JSON interchange ----------------------------------------------------

CliffordCircuit clifford_circuit_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    int n = j.at("n").get<int>();
    std::vector<std::vector<Gate>> layer_gates;
    std::vector<std::vector<int>> noise;
    bool any_noise = false;
    for (const auto& layer : j.at("layers")) {
        std::vector<Gate> gates;
        for (const auto& g : layer.at("gates")) {
            Gate gate;
            gate.name = g.at("name").get<std::string>();
            gate.qubits = g.at("qubits").get<std::vector<int>>();
            if (g.contains("params")) {
                gate.params = g.at("params").get<std::vector<double>>();
            }
            gates.push_back(std::move(gate));
        }
        layer_gates.push_back(std::move(gates));
        if (layer.contains("noise")) {
            noise.push_back(layer.at("noise").get<std::vector<int>>());
            any_noise = true;
        } else {
            std::vector<int> all(n);
            std::iota(all.begin(), all.end(), 0);
            noise.push_back(all);
        }
    }
    return CliffordCircuit(n, std::move(layer_gates), any_noise ? noise : std::vector<std::vector<int>>{});
}

std::string clifford_circuit_to_json(const CliffordCircuit& circuit) {
    nlohmann::json j;
    j["n"] = circuit.n;
    j["layers"] = nlohmann::json::array();
    for (size_t i = 0; i < circuit.layer_gates.size(); i++) {
        nlohmann::json layer;
        layer["gates"] = nlohmann::json::array();
        for (const auto& g : circuit.layer_gates[i]) {
            nlohmann::json gj;
            gj["name"] = g.name;
            gj["qubits"] = g.qubits;
            if (!g.params.empty()) {
                gj["params"] = g.params;
            }
            layer["gates"].push_back(gj);
        }
        layer["noise"] = circuit.noise_qubits[i];
        j["layers"].push_back(layer);
    }
    return j.dump(2);
}

}  // namespace twirlcorr
