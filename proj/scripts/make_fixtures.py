#!/usr/bin/env python3
"""Regenerates the bundled test-fixture circuits (deterministic output).

The 10-qubit fixtures are desk-scale stand-ins for the 18-qubit QASMBench
verification circuits, transpiled to the {h, x, cx, rz, t, tdg} gate set:
  qft_n10.qasm   - quantum Fourier transform with controlled phases
                   decomposed into cx + rz and final swaps
  sqrt_n10.qasm  - amplitude-amplification iterations with a Toffoli-ladder
                   oracle over 6 data + 4 ancilla qubits
Run from the repository root:  python3 scripts/make_fixtures.py
"""

import math
import os

OUT_DIR = os.path.join(os.path.dirname(__file__), "..", "tests", "fixtures")


def qft(n):
    lines = [
        "OPENQASM 2.0;",
        'include "qelib1.inc";',
        f"qreg q[{n}];",
        f"creg c[{n}];",
    ]

    def cp(lam, a, b):
        lines.append(f"rz({lam / 2:.17g}) q[{a}];")
        lines.append(f"cx q[{a}],q[{b}];")
        lines.append(f"rz({-lam / 2:.17g}) q[{b}];")
        lines.append(f"cx q[{a}],q[{b}];")
        lines.append(f"rz({lam / 2:.17g}) q[{b}];")

    for i in range(n):
        lines.append(f"h q[{i}];")
        for j in range(i + 1, n):
            cp(math.pi / 2 ** (j - i), j, i)
    for i in range(n // 2):
        a, b = i, n - 1 - i
        lines.append(f"cx q[{a}],q[{b}];")
        lines.append(f"cx q[{b}],q[{a}];")
        lines.append(f"cx q[{a}],q[{b}];")
    for i in range(n):
        lines.append(f"measure q[{i}] -> c[{i}];")
    return "\n".join(lines) + "\n"


def sqrt_aa(n_data=6, n_anc=4, iterations=2):
    n = n_data + n_anc
    lines = [
        "OPENQASM 2.0;",
        'include "qelib1.inc";',
        f"qreg q[{n}];",
        f"creg c[{n_data}];",
    ]

    def toffoli(a, b, c):
        # standard 6-cx decomposition
        lines.append(f"h q[{c}];")
        lines.append(f"cx q[{b}],q[{c}];")
        lines.append(f"tdg q[{c}];")
        lines.append(f"cx q[{a}],q[{c}];")
        lines.append(f"t q[{c}];")
        lines.append(f"cx q[{b}],q[{c}];")
        lines.append(f"tdg q[{c}];")
        lines.append(f"cx q[{a}],q[{c}];")
        lines.append(f"t q[{b}];")
        lines.append(f"t q[{c}];")
        lines.append(f"h q[{c}];")
        lines.append(f"cx q[{a}],q[{b}];")
        lines.append(f"t q[{a}];")
        lines.append(f"tdg q[{b}];")
        lines.append(f"cx q[{a}],q[{b}];")

    def mcz():
        # Z on the all-ones data subspace via an AND ladder into the ancillas
        anc = list(range(n_data, n))
        toffoli(0, 1, anc[0])
        toffoli(2, 3, anc[1])
        toffoli(4, 5, anc[2])
        toffoli(anc[0], anc[1], anc[3])
        # controlled-Z between the two partial products
        lines.append(f"h q[{anc[2]}];")
        lines.append(f"cx q[{anc[3]}],q[{anc[2]}];")
        lines.append(f"h q[{anc[2]}];")
        # uncompute
        toffoli(anc[0], anc[1], anc[3])
        toffoli(4, 5, anc[2])
        toffoli(2, 3, anc[1])
        toffoli(0, 1, anc[0])

    for q in range(n_data):
        lines.append(f"h q[{q}];")
    for _ in range(iterations):
        mcz()  # oracle marks |1...1>
        for q in range(n_data):
            lines.append(f"h q[{q}];")
            lines.append(f"x q[{q}];")
        mcz()  # diffusion reflection about the mean
        for q in range(n_data):
            lines.append(f"x q[{q}];")
            lines.append(f"h q[{q}];")
    for q in range(n_data):
        lines.append(f"measure q[{q}] -> c[{q}];")
    return "\n".join(lines) + "\n"


def main():
    os.makedirs(OUT_DIR, exist_ok=True)
    with open(os.path.join(OUT_DIR, "qft_n10.qasm"), "w") as f:
        f.write(qft(10))
    with open(os.path.join(OUT_DIR, "sqrt_n10.qasm"), "w") as f:
        f.write(sqrt_aa())
    print("fixtures written to", os.path.abspath(OUT_DIR))


if __name__ == "__main__":
    main()
