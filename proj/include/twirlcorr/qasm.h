#pragma once

#include <map>
#include <string>
#include <vector>

#include "twirlcorr/circuit.h"

namespace twirlcorr {

struct QasmError : std::runtime_error {
    QasmError(const std::string& msg, int line, int col)
        : std::runtime_error("qasm:" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
          line(line),
          col(col) {}
    int line;
    int col;
};

struct QasmStatement {
    enum class Kind { GateCall, Barrier, Measure } kind = Kind::GateCall;
    std::string gate;                 // for GateCall
    std::vector<double> params;
    std::vector<int> qubits;          // resolved flat indices
    std::vector<int> creg_bits;       // for Measure
    int line = 0;
};

struct QasmProgram {
    std::string version;              // must be "2.0"
    std::map<std::string, int> qregs; // name -> size
    std::map<std::string, int> cregs;
    std::vector<std::string> qreg_order;
    int n_qubits = 0;
    std::vector<QasmStatement> statements;  // gate calls fully macro-expanded
    int measured_count = 0;
    bool has_include = false;
};

// Parses the supported OpenQASM 2 subset. `include "qelib1.inc"` resolves
// against a built-in gate table; no filesystem access happens.
QasmProgram parse_qasm(const std::string& text);
QasmProgram parse_qasm_file(const std::string& path);

// Lowers a parsed program: gates in program order, one dephasing site per
// participating qubit after every two-qubit gate, per-qubit two-qubit-gate
// clocks. Measurements are recorded but take no part in fidelity runs.
GateCircuit lower(const QasmProgram& program);

}  // namespace twirlcorr
