#include "twirlcorr/statevector.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace twirlcorr {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kInvSqrt2 = 0.7071067811865475244008443621048490393;
}  // namespace

StateVector::StateVector(int n) : n_(n) {
    if (n < 1 || n > 26) {
        throw std::invalid_argument("statevector qubit count must be in [1, 26]");
    }
    amp_.assign(size_t{1} << n, cxd(0.0, 0.0));
    amp_[0] = cxd(1.0, 0.0);
}

StateVector StateVector::zero_state(int n) {
    return StateVector(n);
}

void StateVector::apply_1q(int qubit, const cxd m[2][2]) {
    if (qubit < 0 || qubit >= n_) {
        throw std::invalid_argument("qubit index out of range");
    }
    size_t bit = size_t{1} << qubit;
    size_t dim = amp_.size();
    for (size_t i = 0; i < dim; i++) {
        if (i & bit) {
            continue;
        }
        cxd a0 = amp_[i];
        cxd a1 = amp_[i | bit];
        amp_[i] = m[0][0] * a0 + m[0][1] * a1;
        amp_[i | bit] = m[1][0] * a0 + m[1][1] * a1;
    }
}

void StateVector::apply_cx(int control, int target) {
    if (control == target || control < 0 || target < 0 || control >= n_ || target >= n_) {
        throw std::invalid_argument("bad cx qubits");
    }
    size_t cb = size_t{1} << control;
    size_t tb = size_t{1} << target;
    size_t dim = amp_.size();
    for (size_t i = 0; i < dim; i++) {
        if ((i & cb) && !(i & tb)) {
            std::swap(amp_[i], amp_[i | tb]);
        }
    }
}

void StateVector::apply_cz(int a, int b) {
    if (a == b || a < 0 || b < 0 || a >= n_ || b >= n_) {
        throw std::invalid_argument("bad cz qubits");
    }
    size_t ab = (size_t{1} << a) | (size_t{1} << b);
    size_t dim = amp_.size();
    for (size_t i = 0; i < dim; i++) {
        if ((i & ab) == ab) {
            amp_[i] = -amp_[i];
        }
    }
}

void StateVector::apply_swap(int a, int b) {
    apply_cx(a, b);
    apply_cx(b, a);
    apply_cx(a, b);
}

void StateVector::apply_noise_rz(int qubit, double theta) {
    size_t bit = size_t{1} << qubit;
    cxd ph0 = std::polar(1.0, -theta);
    cxd ph1 = std::polar(1.0, theta);
    for (size_t i = 0; i < amp_.size(); i++) {
        amp_[i] *= (i & bit) ? ph1 : ph0;
    }
}

void StateVector::apply_pauli(const PauliString& p) {
    if (p.n != n_) {
        throw std::invalid_argument("pauli dimension mismatch");
    }
    // sigma |x> = i^{#Y} (-1)^{z.x} |x xor p.x>, applied as a permutation
    // with phases; the overall i^{#Y} is a global phase and is kept so that
    // interleaved products stay consistent.
    size_t dim = amp_.size();
    uint64_t px = p.x, pz = p.z;
    cxd global = std::pow(cxd(0.0, 1.0), std::popcount(p.x & p.z) % 4);
    std::vector<cxd> out(dim);
    for (size_t i = 0; i < dim; i++) {
        int sign = std::popcount(static_cast<uint64_t>(i) & pz) & 1;
        cxd v = amp_[i] * global;
        out[i ^ px] = sign ? -v : v;
    }
    amp_ = std::move(out);
}

void StateVector::apply_gate(const Gate& g) {
    const std::string& nm = g.name;
    auto p = [&](size_t k) { return g.params.at(k); };
    if (nm == "i" || nm == "id" || nm == "barrier") {
        return;
    }
    if (nm == "cx" || nm == "cnot") {
        apply_cx(g.qubits.at(0), g.qubits.at(1));
        return;
    }
    if (nm == "cz") {
        apply_cz(g.qubits.at(0), g.qubits.at(1));
        return;
    }
    if (nm == "swap") {
        apply_swap(g.qubits.at(0), g.qubits.at(1));
        return;
    }
    int q = g.qubits.at(0);
    cxd m[2][2];
    auto diag = [&](cxd d0, cxd d1) {
        m[0][0] = d0;
        m[0][1] = 0;
        m[1][0] = 0;
        m[1][1] = d1;
    };
    if (nm == "h") {
        m[0][0] = m[0][1] = m[1][0] = kInvSqrt2;
        m[1][1] = -kInvSqrt2;
    } else if (nm == "x") {
        m[0][0] = m[1][1] = 0;
        m[0][1] = m[1][0] = 1;
    } else if (nm == "y") {
        m[0][0] = m[1][1] = 0;
        m[0][1] = cxd(0, -1);
        m[1][0] = cxd(0, 1);
    } else if (nm == "z") {
        diag(1, -1);
    } else if (nm == "s") {
        diag(1, cxd(0, 1));
    } else if (nm == "sdg") {
        diag(1, cxd(0, -1));
    } else if (nm == "t") {
        diag(1, std::polar(1.0, kPi / 4));
    } else if (nm == "tdg") {
        diag(1, std::polar(1.0, -kPi / 4));
    } else if (nm == "sx") {
        m[0][0] = m[1][1] = cxd(0.5, 0.5);
        m[0][1] = m[1][0] = cxd(0.5, -0.5);
    } else if (nm == "sxdg") {
        m[0][0] = m[1][1] = cxd(0.5, -0.5);
        m[0][1] = m[1][0] = cxd(0.5, 0.5);
    } else if (nm == "u1" || nm == "p") {
        diag(1, std::polar(1.0, p(0)));
    } else if (nm == "rz") {
        diag(std::polar(1.0, -p(0) / 2), std::polar(1.0, p(0) / 2));
    } else if (nm == "u3" || nm == "u") {
        double th = p(0), ph = p(1), la = p(2);
        m[0][0] = std::cos(th / 2);
        m[0][1] = -std::polar(1.0, la) * std::sin(th / 2);
        m[1][0] = std::polar(1.0, ph) * std::sin(th / 2);
        m[1][1] = std::polar(1.0, ph + la) * std::cos(th / 2);
    } else {
        throw std::invalid_argument("unknown gate in statevector engine: " + nm);
    }
    apply_1q(q, m);
}

double StateVector::norm() const {
    double s = 0.0;
    for (const auto& a : amp_) {
        s += std::norm(a);
    }
    return std::sqrt(s);
}

cxd StateVector::overlap(const StateVector& other) const {
    if (other.n_ != n_) {
        throw std::invalid_argument("overlap dimension mismatch");
    }
    cxd s(0.0, 0.0);
    for (size_t i = 0; i < amp_.size(); i++) {
        s += std::conj(amp_[i]) * other.amp_[i];
    }
    return s;
}

int StateVector::measure_qubit(int qubit, double u01) {
    size_t bit = size_t{1} << qubit;
    double p1 = 0.0;
    for (size_t i = 0; i < amp_.size(); i++) {
        if (i & bit) {
            p1 += std::norm(amp_[i]);
        }
    }
    int outcome = (u01 < p1) ? 1 : 0;
    double keep = outcome ? p1 : 1.0 - p1;
    double inv = (keep > 0.0) ? 1.0 / std::sqrt(keep) : 0.0;
    for (size_t i = 0; i < amp_.size(); i++) {
        bool is_one = (i & bit) != 0;
        if (is_one == (outcome == 1)) {
            amp_[i] *= inv;
        } else {
            amp_[i] = cxd(0.0, 0.0);
        }
    }
    return outcome;
}

void StateVector::reset_qubit(int qubit, double u01) {
    int outcome = measure_qubit(qubit, u01);
    if (outcome == 1) {
        Gate flip{"x", {qubit}, {}};
        apply_gate(flip);
    }
}

// ---- random stabilizer states ---------------------------------------------

namespace {

// F_2 span with basis rows kept at distinct leading bits, sorted so that
// reduction by leading bit terminates.
struct F2Span {
    int n2;                       // ambient dimension 2n
    std::vector<uint64_t> basis;  // sorted by decreasing leading bit

    uint64_t reduce(uint64_t v) const {
        for (uint64_t b : basis) {
            uint64_t pivot = uint64_t{1} << (63 - std::countl_zero(b));
            if (v & pivot) {
                v ^= b;
            }
        }
        return v;
    }

    bool contains(uint64_t v) const {
        return reduce(v) == 0;
    }

    bool add(uint64_t v) {
        v = reduce(v);
        if (v == 0) {
            return false;
        }
        basis.push_back(v);
        std::sort(basis.begin(), basis.end(), std::greater<uint64_t>());
        return true;
    }
};

int symplectic_product(uint64_t a, uint64_t b, int n) {
    uint64_t ax = a & ((uint64_t{1} << n) - 1), az = a >> n;
    uint64_t bx = b & ((uint64_t{1} << n) - 1), bz = b >> n;
    return std::popcount((ax & bz) ^ (az & bx)) & 1;
}

// Basis of {v : <v, w_i>_sp = 0 for all i}; a uniform combination of the
// basis is then a uniform element of the solution space.
std::vector<uint64_t> nullspace_of_constraints(const std::vector<uint64_t>& ws, int n) {
    int n2 = 2 * n;
    // The constraint row for w is its symplectic pairing vector (z | x << n).
    std::vector<uint64_t> rows;
    for (uint64_t w : ws) {
        uint64_t wx = w & ((uint64_t{1} << n) - 1), wz = w >> n;
        rows.push_back(wz | (wx << n));
    }
    // Gauss-Jordan: after this, kept rows have a unique pivot column each.
    std::vector<int> pivot_col_of_row(rows.size(), -1);
    std::vector<bool> col_is_pivot(n2, false);
    for (size_t r = 0; r < rows.size(); r++) {
        for (int c = 0; c < n2; c++) {
            if (!col_is_pivot[c] && ((rows[r] >> c) & 1)) {
                pivot_col_of_row[r] = c;
                col_is_pivot[c] = true;
                break;
            }
        }
        if (pivot_col_of_row[r] < 0) {
            continue;  // dependent constraint
        }
        for (size_t r2 = 0; r2 < rows.size(); r2++) {
            if (r2 != r && ((rows[r2] >> pivot_col_of_row[r]) & 1)) {
                rows[r2] ^= rows[r];
            }
        }
    }
    std::vector<uint64_t> null_basis;
    for (int c = 0; c < n2; c++) {
        if (col_is_pivot[c]) {
            continue;
        }
        uint64_t v = uint64_t{1} << c;
        for (size_t r = 0; r < rows.size(); r++) {
            if (pivot_col_of_row[r] >= 0 && ((rows[r] >> c) & 1)) {
                v |= uint64_t{1} << pivot_col_of_row[r];
            }
        }
        null_basis.push_back(v);
    }
    return null_basis;
}

}  // namespace

StateVector random_stabilizer_state(int n, Rng& rng) {
    // 1) uniform maximal isotropic subspace: pick v_k uniformly from the
    //    symplectic complement of the previous picks, excluding their span.
    std::vector<uint64_t> gens;
    F2Span span{2 * n, {}};
    for (int k = 0; k < n; k++) {
        std::vector<uint64_t> nb = nullspace_of_constraints(gens, n);
        uint64_t v = 0;
        do {
            v = 0;
            for (uint64_t b : nb) {
                if (rng.next_bool()) {
                    v ^= b;
                }
            }
        } while (span.contains(v));
        gens.push_back(v);
        span.add(v);
    }
    // 2) uniform signs
    std::vector<SignedPauli> stab;
    uint64_t qmask = (uint64_t{1} << n) - 1;
    for (uint64_t v : gens) {
        stab.push_back({PauliString(n, v & qmask, v >> n), rng.next_bool()});
    }
    // 3) find a computational basis state in the support: eliminate X parts,
    //    leaving Z-only group elements whose sign constraints are linear
    //    equations z . x0 = b over F_2.
    std::vector<SignedPauli> work = stab;
    std::vector<bool> x_col_used(n, false);
    for (size_t r = 0; r < work.size(); r++) {
        int pc = -1;
        for (int c = 0; c < n; c++) {
            if (!x_col_used[c] && ((work[r].p.x >> c) & 1)) {
                pc = c;
                break;
            }
        }
        if (pc < 0) {
            continue;
        }
        x_col_used[pc] = true;
        for (size_t r2 = 0; r2 < work.size(); r2++) {
            if (r2 != r && ((work[r2].p.x >> pc) & 1)) {
                // multiply generator r2 by generator r (group operation)
                int e = (work[r2].neg ? 2 : 0) + (work[r].neg ? 2 : 0) + pauli_mul_phase(work[r2].p, work[r].p);
                work[r2].p.x ^= work[r].p.x;
                work[r2].p.z ^= work[r].p.z;
                e &= 3;
                if (e != 0 && e != 2) {
                    throw std::logic_error("stabilizer generators do not commute");
                }
                work[r2].neg = (e == 2);
            }
        }
    }
    // Solve z . x0 = (neg ? 1 : 0) for the Z-only rows.
    uint64_t x0 = 0;
    {
        std::vector<std::pair<uint64_t, int>> eqs;
        for (size_t r = 0; r < work.size(); r++) {
            if (work[r].p.x == 0 && work[r].p.z != 0) {
                eqs.push_back({work[r].p.z, work[r].neg ? 1 : 0});
            }
        }
        std::vector<bool> col_used(n, false);
        std::vector<std::pair<int, size_t>> pivot_of;  // (column, equation)
        for (size_t e = 0; e < eqs.size(); e++) {
            int pc = -1;
            for (int c = 0; c < n; c++) {
                if (!col_used[c] && ((eqs[e].first >> c) & 1)) {
                    pc = c;
                    break;
                }
            }
            if (pc < 0) {
                if (eqs[e].second != 0) {
                    throw std::logic_error("inconsistent stabilizer sign system");
                }
                continue;
            }
            col_used[pc] = true;
            pivot_of.push_back({pc, e});
            for (size_t e2 = 0; e2 < eqs.size(); e2++) {
                if (e2 != e && ((eqs[e2].first >> pc) & 1)) {
                    eqs[e2].first ^= eqs[e].first;
                    eqs[e2].second ^= eqs[e].second;
                }
            }
        }
        // read the solution only after the elimination settles: later pivots
        // can flip the right-hand side of earlier equations
        for (const auto& [pc, e] : pivot_of) {
            if (eqs[e].second) {
                x0 |= uint64_t{1} << pc;
            }
        }
        for (const auto& eq : eqs) {
            if ((std::popcount(eq.first & x0) & 1) != eq.second) {
                throw std::logic_error("stabilizer support solve failed");
            }
        }
    }
    // 4) project: |psi> ∝ prod_i (I + g_i)/2 |x0>
    StateVector psi(n);
    psi.amplitudes().assign(size_t{1} << n, cxd(0.0, 0.0));
    psi.amplitudes()[x0] = cxd(1.0, 0.0);
    for (const auto& g : stab) {
        const auto& in = psi.amplitudes();
        std::vector<cxd> out(in.size());
        cxd yphase = std::pow(cxd(0.0, 1.0), std::popcount(g.p.x & g.p.z) % 4);
        if (g.neg) {
            yphase = -yphase;
        }
        for (size_t i = 0; i < in.size(); i++) {
            if (in[i] == cxd(0.0, 0.0)) {
                continue;
            }
            int sgn = std::popcount(static_cast<uint64_t>(i) & g.p.z) & 1;
            cxd v = in[i] * yphase * (sgn ? -1.0 : 1.0);
            out[i ^ g.p.x] += v;
        }
        for (size_t i = 0; i < out.size(); i++) {
            out[i] = 0.5 * (in[i] + out[i]);
        }
        psi.amplitudes() = std::move(out);
    }
    double nn = psi.norm();
    if (nn < 1e-9) {
        throw std::logic_error("stabilizer projector annihilated the support point");
    }
    for (auto& a : psi.amplitudes()) {
        a /= nn;
    }
    return psi;
}

}  // namespace twirlcorr
