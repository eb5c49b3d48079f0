#include "twirlcorr/pauli.h"

#include <bit>

namespace twirlcorr {

namespace {

void check_n(int n) {
    if (n < 1 || n > 63) {
        throw std::invalid_argument("qubit count must be in [1, 63], got " + std::to_string(n));
    }
}

void check_same_n(int a, int b) {
    if (a != b) {
        throw std::invalid_argument("pauli dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
    }
}

int parity(uint64_t v) {
    return std::popcount(v) & 1;
}

}  // namespace

PauliString::PauliString(int n_, uint64_t x_, uint64_t z_) : n(n_), x(x_), z(z_) {
    check_n(n_);
    uint64_t mask = (n_ == 63) ? ~0ULL >> 1 : ((1ULL << n_) - 1);
    if ((x_ & ~mask) || (z_ & ~mask)) {
        throw std::invalid_argument("pauli bits exceed qubit count");
    }
}

PauliString PauliString::identity(int n) {
    return PauliString(n, 0, 0);
}

PauliString PauliString::from_str(const std::string& s) {
    PauliString p(static_cast<int>(s.size()), 0, 0);
    for (size_t k = 0; k < s.size(); k++) {
        switch (s[k]) {
            case 'I':
            case 'i':
            case '_':
            case '.':
                break;
            case 'X':
            case 'x':
                p.x |= 1ULL << k;
                break;
            case 'Y':
            case 'y':
                p.x |= 1ULL << k;
                p.z |= 1ULL << k;
                break;
            case 'Z':
            case 'z':
                p.z |= 1ULL << k;
                break;
            default:
                throw std::invalid_argument(std::string("bad pauli character '") + s[k] + "'");
        }
    }
    return p;
}

PauliString PauliString::single(int n, int qubit, char axis) {
    check_n(n);
    if (qubit < 0 || qubit >= n) {
        throw std::invalid_argument("qubit index out of range");
    }
    PauliString p(n, 0, 0);
    switch (axis) {
        case 'X':
            p.x = 1ULL << qubit;
            break;
        case 'Y':
            p.x = 1ULL << qubit;
            p.z = 1ULL << qubit;
            break;
        case 'Z':
            p.z = 1ULL << qubit;
            break;
        default:
            throw std::invalid_argument("axis must be X, Y, or Z");
    }
    return p;
}

int PauliString::weight() const {
    return std::popcount(x | z);
}

std::string PauliString::str() const {
    std::string s(n, '_');
    for (int k = 0; k < n; k++) {
        bool xb = (x >> k) & 1;
        bool zb = (z >> k) & 1;
        if (xb && zb) {
            s[k] = 'Y';
        } else if (xb) {
            s[k] = 'X';
        } else if (zb) {
            s[k] = 'Z';
        }
    }
    return s;
}

bool commutes(const PauliString& p, const PauliString& q) {
    check_same_n(p.n, q.n);
    return (parity(p.x & q.z) ^ parity(p.z & q.x)) == 0;
}

int pauli_mul_phase(const PauliString& a, const PauliString& b) {
    check_same_n(a.n, b.n);
    // Per qubit: sigma_u sigma_v = i^f sigma_{u xor v}, with the cyclic rule
    // XY=iZ, YZ=iX, ZX=iY and f=3 for the reversed orders.
    int e = 0;
    uint64_t support = (a.x | a.z) & (b.x | b.z);
    for (uint64_t m = support; m; m &= m - 1) {
        int k = std::countr_zero(m);
        int ax = (a.x >> k) & 1, az = (a.z >> k) & 1;
        int bx = (b.x >> k) & 1, bz = (b.z >> k) & 1;
        if (ax == bx && az == bz) {
            continue;  // equal nonidentity factors square to I
        }
        // Encode X=1, Z=2, Y=3; cyclic order X(1) -> Y(3) -> Z(2) -> X.
        int ua = ax | (az << 1);
        int ub = bx | (bz << 1);
        static const int next_of[4] = {0, 3, 1, 2};
        e += (next_of[ua] == ub) ? 1 : 3;
    }
    return e & 3;
}

CliffordTableau::CliffordTableau(int n) : n_(n) {
    check_n(n);
    images_.resize(2 * static_cast<size_t>(n));
    for (int k = 0; k < n; k++) {
        images_[k] = {PauliString::single(n, k, 'X'), false};
        images_[n + k] = {PauliString::single(n, k, 'Z'), false};
    }
}

CliffordTableau CliffordTableau::identity(int n) {
    return CliffordTableau(n);
}

CliffordTableau CliffordTableau::for_gate(int n, const std::string& name, const std::vector<int>& qubits) {
    CliffordTableau t(n);
    auto set1 = [&](int q, const char* x_img, bool x_neg, const char* z_img, bool z_neg) {
        t.images_[q] = {PauliString::single(n, q, x_img[0]), x_neg};
        t.images_[n + q] = {PauliString::single(n, q, z_img[0]), z_neg};
    };
    if (name == "i" || name == "id" || name == "barrier") {
        return t;
    }
    if (name == "h" || name == "x" || name == "y" || name == "z" || name == "s" || name == "sdg" || name == "sx" ||
        name == "sxdg") {
        if (qubits.size() != 1) {
            throw std::invalid_argument("gate '" + name + "' takes one qubit");
        }
        int q = qubits[0];
        if (q < 0 || q >= n) {
            throw std::invalid_argument("qubit index out of range for gate '" + name + "'");
        }
        if (name == "h") {
            set1(q, "Z", false, "X", false);
        } else if (name == "x") {
            set1(q, "X", false, "Z", true);
        } else if (name == "y") {
            set1(q, "X", true, "Z", true);
        } else if (name == "z") {
            set1(q, "X", true, "Z", false);
        } else if (name == "s") {
            set1(q, "Y", false, "Z", false);
        } else if (name == "sdg") {
            set1(q, "Y", true, "Z", false);
        } else if (name == "sx") {
            set1(q, "X", false, "Y", true);
        } else {  // sxdg
            set1(q, "X", false, "Y", false);
        }
        return t;
    }
    if (name == "cx" || name == "cnot" || name == "cz" || name == "swap") {
        if (qubits.size() != 2 || qubits[0] == qubits[1]) {
            throw std::invalid_argument("gate '" + name + "' takes two distinct qubits");
        }
        int a = qubits[0], b = qubits[1];
        if (a < 0 || a >= n || b < 0 || b >= n) {
            throw std::invalid_argument("qubit index out of range for gate '" + name + "'");
        }
        uint64_t ba = 1ULL << a, bb = 1ULL << b;
        if (name == "cx" || name == "cnot") {
            t.images_[a] = {PauliString(n, ba | bb, 0), false};       // X_c -> X_c X_t
            t.images_[n + b] = {PauliString(n, 0, ba | bb), false};   // Z_t -> Z_c Z_t
        } else if (name == "cz") {
            t.images_[a] = {PauliString(n, ba, bb), false};           // X_a -> X_a Z_b
            t.images_[b] = {PauliString(n, bb, ba), false};           // X_b -> Z_a X_b
        } else {  // swap
            t.images_[a] = {PauliString::single(n, b, 'X'), false};
            t.images_[b] = {PauliString::single(n, a, 'X'), false};
            t.images_[n + a] = {PauliString::single(n, b, 'Z'), false};
            t.images_[n + b] = {PauliString::single(n, a, 'Z'), false};
        }
        return t;
    }
    throw std::invalid_argument("gate '" + name + "' has no Clifford tableau");
}

SignedPauli CliffordTableau::conjugate(const SignedPauli& in) const {
    check_same_n(n_, in.p.n);
    // Decompose sigma_P = i^y * prod X_k^{x_k} * prod Z_k^{z_k} (y = #Y), then
    // conjugate factor by factor, accumulating i powers.
    int e = (in.neg ? 2 : 0) + std::popcount(in.p.x & in.p.z);
    PauliString acc = PauliString::identity(n_);
    auto mul_in = [&](const SignedPauli& img) {
        e += img.neg ? 2 : 0;
        e += pauli_mul_phase(acc, img.p);
        acc.x ^= img.p.x;
        acc.z ^= img.p.z;
    };
    for (uint64_t m = in.p.x; m; m &= m - 1) {
        mul_in(images_[std::countr_zero(m)]);
    }
    for (uint64_t m = in.p.z; m; m &= m - 1) {
        mul_in(images_[n_ + std::countr_zero(m)]);
    }
    // The f1-based products keep the accumulator canonical Hermitian, so the
    // total phase must already be +/-1.
    e &= 3;
    if (e != 0 && e != 2) {
        throw std::logic_error("tableau conjugation produced a non-Hermitian phase");
    }
    return {acc, e == 2};
}

PauliString CliffordTableau::conjugate(const PauliString& in) const {
    return conjugate(SignedPauli{in, false}).p;
}

CliffordTableau CliffordTableau::then_after(const CliffordTableau& first) const {
    check_same_n(n_, first.n_);
    CliffordTableau out(n_);
    for (size_t g = 0; g < images_.size(); g++) {
        out.images_[g] = conjugate(first.images_[g]);
    }
    return out;
}

CliffordTableau CliffordTableau::inverse() const {
    // Bit-matrix part: the symplectic inverse M^{-1} = J M^T J with
    // J = [[0, I], [I, 0]]; signs fixed afterwards so that
    // conjugate(inverse_image(g)) == +g.
    int n = n_;
    CliffordTableau out(n);
    // Entry (row r, col c) of the bit matrix M is bit r of image(c), and
    // (M^{-1})_{rc} = M_{J(c), J(r)} with J swapping the X and Z halves.
    auto m_bit = [&](int row, int col) -> int {
        const PauliString& p = images_[col].p;
        return row < n ? ((p.x >> row) & 1) : ((p.z >> (row - n)) & 1);
    };
    auto swap_half = [&](int idx) {
        return idx < n ? idx + n : idx - n;
    };
    for (int c = 0; c < 2 * n; c++) {
        uint64_t px = 0, pz = 0;
        for (int r = 0; r < 2 * n; r++) {
            if (m_bit(swap_half(c), swap_half(r))) {
                if (r < n) {
                    px |= 1ULL << r;
                } else {
                    pz |= 1ULL << (r - n);
                }
            }
        }
        out.images_[c] = {PauliString(n, px, pz), false};
    }
    // Fix signs: require conjugate(out.image(g)) == + generator_g.
    for (int g = 0; g < 2 * n; g++) {
        SignedPauli round_trip = conjugate(out.images_[g]);
        PauliString expect = g < n ? PauliString::single(n, g, 'X') : PauliString::single(n, g - n, 'Z');
        if (!(round_trip.p == expect)) {
            throw std::logic_error("tableau is not symplectic; cannot invert");
        }
        out.images_[g].neg = round_trip.neg;
    }
    return out;
}

}  // namespace twirlcorr
