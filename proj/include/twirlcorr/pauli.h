#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace twirlcorr {

// An n-qubit Pauli in symplectic form (x bits, z bits), without a global
// phase. Bit k of x/z refers to qubit k; (x,z) = (1,1) denotes the Hermitian
// Pauli Y. Commutation and conjugation-up-to-sign are all the engine needs;
// signs are tracked separately where they matter (tableau images).
struct PauliString {
    int n = 0;
    uint64_t x = 0;
    uint64_t z = 0;

    PauliString() = default;
    PauliString(int n_, uint64_t x_, uint64_t z_);

    static PauliString identity(int n);
    // Accepts strings over {I,X,Y,Z,_,.} (qubit 0 first), e.g. "XZ_Y".
    static PauliString from_str(const std::string& s);
    // Single-qubit Pauli embedded at `qubit`; axis in {'X','Y','Z'}.
    static PauliString single(int n, int qubit, char axis);

    bool is_identity() const {
        return x == 0 && z == 0;
    }
    int weight() const;
    std::string str() const;

    bool operator==(const PauliString& o) const {
        return n == o.n && x == o.x && z == o.z;
    }
};

// True iff p and q commute: parity of the symplectic form
// sum_k (p.x_k q.z_k + p.z_k q.x_k) mod 2.
bool commutes(const PauliString& p, const PauliString& q);

// A Pauli with a tracked sign, i.e. the Hermitian operator (-1)^neg * sigma_p.
struct SignedPauli {
    PauliString p;
    bool neg = false;

    bool operator==(const SignedPauli& o) const {
        return p == o.p && neg == o.neg;
    }
};

// Clifford as the images of the 2n generators under conjugation:
// images[k]   = U X_k U^dag   for k in [0, n)
// images[n+k] = U Z_k U^dag.
// The images always satisfy the symplectic condition (validated in tests).
class CliffordTableau {
   public:
    explicit CliffordTableau(int n);
    static CliffordTableau identity(int n);

    // Named gates: i, h, s, sdg, x, y, z, sx, sxdg, cx, cz, swap.
    static CliffordTableau for_gate(int n, const std::string& name, const std::vector<int>& qubits);

    int n() const {
        return n_;
    }
    const SignedPauli& image(size_t generator) const {
        return images_[generator];
    }

    // U p U^dag with the sign tracked.
    SignedPauli conjugate(const SignedPauli& in) const;
    PauliString conjugate(const PauliString& in) const;

    // Tableau of (this ∘ first): first applied first, then this.
    CliffordTableau then_after(const CliffordTableau& first) const;
    CliffordTableau inverse() const;

    bool operator==(const CliffordTableau& o) const {
        return n_ == o.n_ && images_ == o.images_;
    }

   private:
    int n_;
    std::vector<SignedPauli> images_;
};

// Product of Hermitian Paulis: sigma_a * sigma_b = i^e * sigma_{a xor b}.
// Returns the phase exponent e mod 4.
int pauli_mul_phase(const PauliString& a, const PauliString& b);

}  // namespace twirlcorr
