#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "twirlcorr/circuit.h"
#include "twirlcorr/pauli.h"
#include "twirlcorr/rng.h"

namespace twirlcorr {

using cxd = std::complex<double>;

// Dense 2^n statevector. All gates act in place; norm stays 1 to the solver
// tolerance after every unitary.
class StateVector {
   public:
    explicit StateVector(int n);
    static StateVector zero_state(int n);

    int n() const {
        return n_;
    }
    const std::vector<cxd>& amplitudes() const {
        return amp_;
    }
    std::vector<cxd>& amplitudes() {
        return amp_;
    }

    // Named gates: the Clifford set plus t, tdg, u1(l), rz(l) [qelib
    // convention exp(-i l Z / 2)], u3(theta, phi, lambda), cx, cz, swap.
    void apply_gate(const Gate& g);
    void apply_1q(int qubit, const cxd m[2][2]);
    void apply_cx(int control, int target);
    void apply_cz(int a, int b);
    void apply_swap(int a, int b);
    // Dephasing error exp(-i sigma_z theta) on one qubit (angle convention of
    // the noise model, twice the qelib rz half-angle).
    void apply_noise_rz(int qubit, double theta);
    void apply_pauli(const PauliString& p);

    double norm() const;
    cxd overlap(const StateVector& other) const;

    // Z measurement; collapses and renormalizes. u01 is the uniform draw.
    int measure_qubit(int qubit, double u01);
    // Measure then flip to |0>.
    void reset_qubit(int qubit, double u01);

   private:
    int n_;
    std::vector<cxd> amp_;
};

// A uniformly random stabilizer state (exact state 2-design): a uniform
// maximal isotropic subspace of F_2^{2n} with uniform signs, realized as a
// dense vector through the stabilizer projector.
StateVector random_stabilizer_state(int n, Rng& rng);

}  // namespace twirlcorr
