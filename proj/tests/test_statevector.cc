#include "twirlcorr/statevector.h"

#include <cmath>
#include <map>

#include "doctest.h"
#include "oracles.h"

using namespace twirlcorr;

TEST_CASE("basic gate action") {
    StateVector s(1);
    s.apply_noise_rz(0, 0.0);
    CHECK(std::abs(s.amplitudes()[0] - cxd(1, 0)) < 1e-15);

    s.apply_gate(Gate{"h", {0}, {}});
    CHECK(std::abs(s.amplitudes()[0] - cxd(1 / std::sqrt(2.0), 0)) < 1e-12);
    CHECK(std::abs(s.amplitudes()[1] - cxd(1 / std::sqrt(2.0), 0)) < 1e-12);

    // R_Z(pi/2) on |+>: <X> = cos(2 theta) = -1
    s.apply_noise_rz(0, 3.141592653589793 / 2);
    StateVector sx = s;
    sx.apply_gate(Gate{"x", {0}, {}});
    double x_expect = (s.overlap(sx)).real();
    CHECK(x_expect == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("gates are unitary and norm-preserving") {
    Rng rng(41, 0);
    StateVector s(3);
    s.apply_gate(Gate{"h", {0}, {}});
    s.apply_gate(Gate{"h", {1}, {}});
    s.apply_gate(Gate{"h", {2}, {}});
    const char* names[] = {"h", "s", "sdg", "x", "y", "z", "sx", "sxdg", "t", "tdg"};
    for (int i = 0; i < 200; i++) {
        if (rng.next_double() < 0.3) {
            int a = static_cast<int>(rng.next_below(3));
            int b = (a + 1) % 3;
            const char* two[] = {"cx", "cz", "swap"};
            s.apply_gate(Gate{two[rng.next_below(3)], {a, b}, {}});
        } else if (rng.next_double() < 0.2) {
            s.apply_gate(Gate{"u3", {static_cast<int>(rng.next_below(3))},
                              {rng.next_double(), rng.next_double(), rng.next_double()}});
        } else {
            s.apply_gate(Gate{names[rng.next_below(10)], {static_cast<int>(rng.next_below(3))}, {}});
        }
        CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("pauli application matches the dense operator") {
    Rng rng(42, 0);
    for (int trial = 0; trial < 30; trial++) {
        int n = 1 + static_cast<int>(rng.next_below(3));
        uint64_t mask = (uint64_t{1} << n) - 1;
        PauliString p(n, rng.next_u64() & mask, rng.next_u64() & mask);
        StateVector s(n);
        // random state
        for (int k = 0; k < n; k++) {
            s.apply_gate(Gate{"u3", {k}, {rng.next_double() * 3, rng.next_double() * 6, rng.next_double() * 6}});
        }
        Eigen::VectorXcd v(1 << n);
        for (int i = 0; i < (1 << n); i++) {
            v[i] = s.amplitudes()[i];
        }
        s.apply_pauli(p);
        Eigen::VectorXcd want = oracle::dense_pauli(p) * v;
        for (int i = 0; i < (1 << n); i++) {
            CHECK(std::abs(s.amplitudes()[i] - want[i]) < 1e-12);
        }
    }
}

TEST_CASE("measurement collapses and renormalizes") {
    StateVector s(2);
    s.apply_gate(Gate{"h", {0}, {}});
    s.apply_gate(Gate{"cx", {0, 1}, {}});
    int m0 = s.measure_qubit(0, 0.3);
    CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-12));
    int m1 = s.measure_qubit(1, 0.9);
    CHECK(m0 == m1);  // Bell pair correlates outcomes

    StateVector r(1);
    r.apply_gate(Gate{"h", {0}, {}});
    r.reset_qubit(0, 0.7);
    CHECK(std::abs(r.amplitudes()[0] - cxd(1, 0)) < 1e-12);
}

TEST_CASE("random stabilizer states are valid and uniform-ish") {
    Rng rng(43, 0);
    // n=1: exactly six stabilizer states, roughly equally likely
    std::map<std::string, int> counts;
    int trials = 3000;
    for (int t = 0; t < trials; t++) {
        StateVector s = random_stabilizer_state(1, rng);
        CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-10));
        // fingerprint by expectation values
        StateVector sx = s, sy = s, sz = s;
        sx.apply_pauli(PauliString::from_str("X"));
        sy.apply_pauli(PauliString::from_str("Y"));
        sz.apply_pauli(PauliString::from_str("Z"));
        auto sgn = [&](const StateVector& other) {
            double e = s.overlap(other).real();
            return e > 0.5 ? "+" : (e < -0.5 ? "-" : "0");
        };
        counts[std::string(sgn(sx)) + sgn(sy) + sgn(sz)]++;
    }
    CHECK(counts.size() == 6);
    for (const auto& [key, c] : counts) {
        CHECK(c > trials / 6 * 0.7);
        CHECK(c < trials / 6 * 1.3);
    }

    // larger n: normalized, and amplitudes form a valid stabilizer support
    for (int t = 0; t < 50; t++) {
        int n = 2 + static_cast<int>(rng.next_below(3));
        StateVector s = random_stabilizer_state(n, rng);
        CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-10));
        int support = 0;
        for (const auto& a : s.amplitudes()) {
            if (std::norm(a) > 1e-12) {
                support++;
            }
        }
        // support of a stabilizer state is a power of two
        CHECK((support & (support - 1)) == 0);
    }
}

TEST_CASE("stabilizer states form a 2-design for the fidelity estimator") {
    // For a fixed unitary W, E_psi |<psi|W|psi>|^2 = (|tr W|^2 + d) / (d(d+1)).
    Rng rng(44, 0);
    for (int n : {1, 2}) {
        StateVector probe(n);
        // fixed non-trivial W as a circuit
        std::vector<Gate> word;
        word.push_back(Gate{"u3", {0}, {0.7, 0.3, 1.1}});
        if (n == 2) {
            word.push_back(Gate{"cx", {0, 1}, {}});
            word.push_back(Gate{"u3", {1}, {0.4, 2.0, 0.2}});
        }
        oracle::Mat w = oracle::dense_gates(word, n);
        double d = std::pow(2.0, n);
        double want = (std::norm(w.trace()) + d) / (d * (d + 1));

        int samples = 60000;
        double acc = 0, acc2 = 0;
        for (int k = 0; k < samples; k++) {
            StateVector psi = random_stabilizer_state(n, rng);
            StateVector out = psi;
            for (const auto& g : word) {
                out.apply_gate(g);
            }
            double v = std::norm(psi.overlap(out));
            acc += v;
            acc2 += v * v;
        }
        double mean = acc / samples;
        double se = std::sqrt((acc2 / samples - mean * mean) / samples);
        CHECK(std::abs(mean - want) < 3.5 * se + 1e-9);
    }
}
