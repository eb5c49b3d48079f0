#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "twirlcorr/analytic.h"
#include "twirlcorr/circuit.h"
#include "twirlcorr/covariance.h"
#include "twirlcorr/montecarlo.h"
#include "twirlcorr/qasm.h"
#include "twirlcorr/repcode.h"

namespace py = pybind11;
using namespace twirlcorr;

namespace {

GateCircuit circuit_from_any(const std::string& qasm_text, const std::string& circuit_json) {
    if (!qasm_text.empty() && !circuit_json.empty()) {
        throw std::invalid_argument("pass either qasm or circuit_json, not both");
    }
    if (!qasm_text.empty()) {
        return lower(parse_qasm(qasm_text));
    }
    if (!circuit_json.empty()) {
        return clifford_circuit_from_json(circuit_json).to_gate_circuit();
    }
    throw std::invalid_argument("a circuit is required (qasm= or circuit_json=)");
}

CovMatrix cov_from_kwargs(const GateCircuit& circuit, const std::string& kind, double sigma, double tau,
                          bool global_clock) {
    NoiseLayout layout = make_layout(circuit);
    int dim = static_cast<int>(layout.sites.size());
    if (kind == "exponential") {
        return cov_for_layout(layout, sigma, tau, nullptr, global_clock);
    }
    if (kind == "min") {
        return cov_min(Eigen::VectorXd::Constant(dim, sigma * sigma));
    }
    if (kind == "max") {
        return cov_max(Eigen::VectorXd::Constant(dim, sigma), std::vector<int>(dim, 1));
    }
    throw std::invalid_argument("unknown covariance kind: " + kind);
}

py::dict estimate_to_dict(const FidelityEstimate& e, int n, bool value_is_p) {
    py::dict d;
    double p = e.value, f = e.value;
    if (value_is_p) {
        f = fidelity_from_p(e.value, n);
    } else {
        double dpow = std::pow(2.0, n);
        p = ((dpow + 1.0) * e.value - 1.0) / dpow;
    }
    d["p_no_error"] = p;
    d["fidelity"] = f;
    d["std_error"] = e.std_error;
    d["method"] = e.method;
    d["n"] = n;
    return d;
}

}  // namespace

PYBIND11_MODULE(_twirlcorr, m) {
    m.doc() = "circuit fidelity of Pauli-twirled circuits under correlated Gaussian dephasing";

    m.def(
        "parse_qasm",
        [](const std::string& text) {
            QasmProgram p = parse_qasm(text);
            GateCircuit c = lower(p);
            py::dict d;
            d["n_qubits"] = p.n_qubits;
            d["gates"] = c.gates.size();
            d["two_qubit_gates"] = c.twirl_units.size();
            d["noise_sites"] = c.sites.size();
            d["clifford"] = c.clifford;
            return d;
        },
        py::arg("text"), "Parse OpenQASM 2 text and report lowering diagnostics.");

    m.def(
        "covariance_matrix",
        [](const std::string& kind, int n, int l, double sigma, double tau_over_tg, bool maximal_spatial) {
            if (kind == "exponential") {
                return cov_exponential(n, l, sigma, tau_over_tg, 1.0).entries();
            }
            if (kind == "quasistatic") {
                return cov_quasistatic(n, l, sigma, maximal_spatial).entries();
            }
            if (kind == "min") {
                return cov_min(Eigen::VectorXd::Constant(n * l, sigma * sigma)).entries();
            }
            if (kind == "max") {
                return cov_max(Eigen::VectorXd::Constant(n * l, sigma), std::vector<int>(n * l, 1)).entries();
            }
            throw std::invalid_argument("unknown covariance kind: " + kind);
        },
        py::arg("kind"), py::arg("n"), py::arg("l"), py::arg("sigma"), py::arg("tau_over_tg") = 1.0,
        py::arg("maximal_spatial") = false,
        "Dense covariance matrix of the named model, qubit-major flat index.");

    m.def(
        "sample_noise",
        [](const Eigen::MatrixXd& cov, uint64_t seed, int count) {
            NoiseSampler sampler{CovMatrix(cov)};
            Eigen::MatrixXd out(count, cov.rows());
            for (int k = 0; k < count; k++) {
                out.row(k) = sampler.sample(seed, k).theta.transpose();
            }
            return out;
        },
        py::arg("cov"), py::arg("seed"), py::arg("count"),
        "Correlated Gaussian angle realizations, one per row; draw k depends only on (seed, k).");

    m.def(
        "analytic_fidelity",
        [](const std::string& qasm, const std::string& circuit_json, const std::string& cov_kind, double sigma,
           double tau, int budget, uint64_t seed, bool global_clock) {
            GateCircuit c = circuit_from_any(qasm, circuit_json);
            if (!c.clifford) {
                throw std::invalid_argument(
                    "circuit contains non-Clifford gates; the analytic path needs a Clifford circuit "
                    "(use mc_fidelity)");
            }
            CovMatrix cov = cov_from_kwargs(c, cov_kind, sigma, tau, global_clock);
            PauliSumOptions opts;
            if (budget > 0) {
                opts.mode = PauliSumMode::Sampled;
                opts.budget = budget;
                opts.seed = seed;
            }
            FidelityEstimate p = no_error_probability(c, cov, opts);
            return estimate_to_dict(p, c.n, true);
        },
        py::arg("qasm") = "", py::arg("circuit_json") = "", py::arg("cov_kind") = "exponential",
        py::arg("sigma") = 0.15, py::arg("tau") = 1.0, py::arg("budget") = 0, py::arg("seed") = 0,
        py::arg("global_clock") = false,
        "Twirled-circuit fidelity from the determinant formula (exact sum, or sampled with budget > 0).");

    m.def(
        "fidelity_bounds",
        [](const std::string& qasm, const std::string& circuit_json, double sigma, double tau) {
            GateCircuit c = circuit_from_any(qasm, circuit_json);
            NoiseLayout layout = make_layout(c);
            auto axes = propagate_noise_axes(c, layout);
            CovMatrix cov = cov_for_layout(layout, sigma, tau);
            FidelityBounds b = fidelity_bounds(axes, c.n, cov);
            FidelityEstimate mid = no_error_probability(axes, c.n, cov);
            py::dict d;
            d["f_min"] = b.lower.value;
            d["f"] = fidelity_from_p(mid.value, c.n);
            d["f_max"] = b.upper.value;
            return d;
        },
        py::arg("qasm") = "", py::arg("circuit_json") = "", py::arg("sigma") = 0.15, py::arg("tau") = 1.0,
        "Fidelity with its extremal-covariance bounds for an exponential kernel.");

    m.def(
        "mc_fidelity",
        [](const std::string& qasm, const std::string& circuit_json, const std::string& cov_kind, double sigma,
           double tau, bool twirled, int n_noise, uint64_t seed) {
            GateCircuit c = circuit_from_any(qasm, circuit_json);
            CovMatrix cov = cov_from_kwargs(c, cov_kind, sigma, tau, false);
            McOptions mo;
            mo.twirled = twirled;
            mo.n_noise = n_noise;
            mo.seed = seed;
            FidelityEstimate f = average_fidelity_mc(c, cov, mo);
            return estimate_to_dict(f, c.n, false);
        },
        py::arg("qasm") = "", py::arg("circuit_json") = "", py::arg("cov_kind") = "exponential",
        py::arg("sigma") = 0.15, py::arg("tau") = 1.0, py::arg("twirled") = false, py::arg("n_noise") = 2000,
        py::arg("seed") = 0, "Statevector Monte-Carlo average fidelity (bare or twirled).");

    m.def(
        "eigenvalue_gaussian",
        [](const std::vector<bool>& mask_bits, const Eigen::MatrixXd& cov) {
            CommutationMask mask;
            mask.bits = mask_bits;
            return eigenvalue_gaussian(mask, CovMatrix(cov));
        },
        py::arg("mask"), py::arg("cov"),
        "det(1 + 4 M Sigma)^{-1/2} over the masked principal submatrix.");

    m.def(
        "run_repcode",
        [](int rounds, double sigma, double tau, bool twirled, int n_samples, uint64_t seed) {
            RepCodeConfig c;
            c.rounds = rounds;
            c.sigma = sigma;
            c.tau_over_tg = tau;
            c.twirled = twirled;
            c.n_samples = n_samples;
            c.seed = seed;
            RepCodeResult r = run_repcode(c);
            py::dict d;
            d["survival"] = r.survival;
            d["std_error"] = r.std_error;
            d["n_samples"] = r.n_samples;
            return d;
        },
        py::arg("rounds") = 250, py::arg("sigma") = 0.05, py::arg("tau") = 1.0, py::arg("twirled") = false,
        py::arg("n_samples") = 2000, py::arg("seed") = 0,
        "Logical survival of the [[3,1,1]] phase-flip code under correlated dephasing.");

    m.attr("__version__") = "0.1.0";
}
