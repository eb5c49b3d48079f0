#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "twirlcorr/analytic.h"
#include "twirlcorr/circuit.h"
#include "twirlcorr/covariance.h"
#include "twirlcorr/finite_time.h"
#include "twirlcorr/montecarlo.h"
#include "twirlcorr/qasm.h"
#include "twirlcorr/qkernel.h"
#include "twirlcorr/repcode.h"

namespace tc = twirlcorr;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// All rows buffered, written in one shot; a failed run leaves no partial CSV.
class CsvWriter {
   public:
    explicit CsvWriter(std::string header) : header_(std::move(header)) {}

    void row(const std::string& r) {
        rows_.push_back(r);
    }

    void write(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw std::runtime_error("cannot open output file: " + path);
        }
        out << header_ << "\n";
        for (const auto& r : rows_) {
            out << r << "\n";
        }
    }

   private:
    std::string header_;
    std::vector<std::string> rows_;
};

void write_manifest(const std::string& csv_path, uint64_t seed, const nlohmann::json& budgets, double wall_s) {
    nlohmann::json m;
    m["seed"] = seed;
    m["budgets"] = budgets;
    m["engine_version"] = kVersion;
    m["wall_time_s"] = wall_s;
    std::ofstream out(csv_path + ".manifest.json");
    out << m.dump(2) << "\n";
}

struct CircuitSource {
    std::string qasm_path;
    std::string json_path;
    std::string ensemble;
    int n = 4;
    int depth = 8;
    uint64_t circuit_seed = 1;
    uint64_t circuit_index = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--qasm", qasm_path, "OpenQASM 2 file");
        cmd->add_option("--circuit-json", json_path, "layered circuit JSON file");
        cmd->add_option("--ensemble", ensemble,
                        "builtin ensemble: clifford-brickwork | t-doped-brickwork | uniform-clifford-brickwork");
        cmd->add_option("--n", n, "qubits (ensemble source)");
        cmd->add_option("--depth", depth, "two-qubit gate layers (ensemble source)");
        cmd->add_option("--circuit-seed", circuit_seed, "ensemble circuit seed");
        cmd->add_option("--circuit-index", circuit_index, "ensemble circuit index");
    }

    tc::EnsembleKind kind() const {
        if (ensemble == "clifford-brickwork") {
            return tc::EnsembleKind::CliffordBrickwork;
        }
        if (ensemble == "t-doped-brickwork") {
            return tc::EnsembleKind::TDopedBrickwork;
        }
        if (ensemble == "uniform-clifford-brickwork") {
            return tc::EnsembleKind::UniformCliffordBrickwork;
        }
        throw CLI::ValidationError("--ensemble", "unknown ensemble '" + ensemble + "'");
    }

    tc::GateCircuit load() const {
        int provided = (!qasm_path.empty()) + (!json_path.empty()) + (!ensemble.empty());
        if (provided != 1) {
            throw CLI::ValidationError("circuit source",
                                       "exactly one of --qasm, --circuit-json, --ensemble is required");
        }
        if (!qasm_path.empty()) {
            return tc::lower(tc::parse_qasm_file(qasm_path));
        }
        if (!json_path.empty()) {
            std::ifstream in(json_path);
            if (!in) {
                throw std::runtime_error("cannot open circuit file: " + json_path);
            }
            std::stringstream ss;
            ss << in.rdbuf();
            return tc::clifford_circuit_from_json(ss.str()).to_gate_circuit();
        }
        tc::EnsembleSpec spec;
        spec.kind = kind();
        spec.n = n;
        spec.depth = depth;
        return tc::make_brickwork_circuit(spec, circuit_seed, circuit_index);
    }
};

struct CovSource {
    std::string kind = "exponential";
    double sigma = 0.15;
    std::vector<double> tau = {1.0};
    bool spatial_max = false;
    bool global_clock = false;
    std::string file;

    void attach(CLI::App* cmd) {
        cmd->add_option("--cov", kind, "exponential | min | max | quasistatic | file")
            ->default_val("exponential");
        cmd->add_option("--sigma", sigma, "noise strength (radians)")->default_val(0.15);
        cmd->add_option("--tau", tau, "correlation times tau_c/t_g (list)")->delimiter(',');
        cmd->add_flag("--spatial-max", spatial_max, "maximal spatial correlations (quasistatic kind)");
        cmd->add_flag("--global-clock", global_clock,
                      "index temporal correlations by the global two-qubit-gate clock instead of per-qubit clocks");
        cmd->add_option("--cov-file", file, "dense covariance CSV (file kind)");
    }

    tc::CovMatrix build(const tc::NoiseLayout& layout, double tau_value) const {
        int dim = static_cast<int>(layout.sites.size());
        if (kind == "exponential") {
            return tc::cov_for_layout(layout, sigma, tau_value, nullptr, global_clock);
        }
        if (kind == "min") {
            return tc::cov_min(Eigen::VectorXd::Constant(dim, sigma * sigma));
        }
        if (kind == "max") {
            return tc::cov_max(Eigen::VectorXd::Constant(dim, sigma), std::vector<int>(dim, 1));
        }
        if (kind == "quasistatic") {
            Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
            double s2 = sigma * sigma;
            for (int i = 0; i < dim; i++) {
                for (int k = 0; k < dim; k++) {
                    if (spatial_max || layout.sites[i].qubit == layout.sites[k].qubit) {
                        m(i, k) = s2;
                    }
                }
            }
            return tc::CovMatrix(std::move(m), spatial_max ? "quasistatic-maximal" : "quasistatic");
        }
        if (kind == "file") {
            return tc::cov_from_csv(file);
        }
        throw CLI::ValidationError("--cov", "unknown covariance kind '" + kind + "'");
    }
};

int depth_of(const tc::GateCircuit& c) {
    int d = 0;
    for (const auto& s : c.sites) {
        d = std::max(d, s.time_q);
    }
    return d;
}

std::string estimate_row(const tc::GateCircuit& c, const std::string& cov_kind, double sigma, double tau,
                         const tc::FidelityEstimate& p_est) {
    double f = tc::fidelity_from_p(p_est.value, c.n);
    double f_se = p_est.std_error * std::pow(2.0, c.n) / (std::pow(2.0, c.n) + 1.0);
    std::ostringstream os;
    os << std::hex << c.hash() << std::dec << "," << c.n << "," << depth_of(c) << "," << cov_kind << "," << fmt(sigma)
       << "," << fmt(tau) << "," << p_est.method << "," << fmt(p_est.value) << "," << fmt(f) << "," << fmt(f_se);
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"circuit fidelity of Pauli-twirled circuits under correlated Gaussian dephasing"};
    app.set_config("--config");
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    std::string out_path = "out.csv";
    uint64_t seed = 0;
    app.add_option("--out,-o", out_path, "output CSV path")->capture_default_str();
    app.add_option("--seed", seed, "master seed")->capture_default_str();

    // ---- analytic ----
    auto* analytic = app.add_subcommand("analytic", "twirled fidelity via the determinant formula");
    CircuitSource an_src;
    CovSource an_cov;
    an_src.attach(analytic);
    an_cov.attach(analytic);
    int an_budget = 0;
    int an_exact_limit = 12;
    int an_ncircuits = 1;
    analytic->add_option("--budget", an_budget, "Pauli samples (0 = exact sum)");
    analytic->add_option("--exact-limit", an_exact_limit, "exact-sum qubit cutoff")->capture_default_str();
    analytic->add_option("--circuits", an_ncircuits, "number of ensemble circuits")->capture_default_str();

    // ---- bounds ----
    auto* bounds = app.add_subcommand("bounds", "extremal-covariance fidelity bounds");
    CircuitSource bd_src;
    CovSource bd_cov;
    bd_src.attach(bounds);
    bd_cov.attach(bounds);

    // ---- mc ----
    auto* mc = app.add_subcommand("mc", "statevector Monte-Carlo fidelity (bare or twirled)");
    CircuitSource mc_src;
    CovSource mc_cov;
    mc_src.attach(mc);
    mc_cov.attach(mc);
    bool mc_twirled = false;
    bool long_run = false;
    int mc_noise = 2000, mc_twirl = 1, mc_states = 1;
    mc->add_flag("--twirled", mc_twirled, "dress two-qubit gates with random Paulis");
    mc->add_flag("--long-run", long_run, "allow workloads above 14 qubits");
    mc->add_option("--n-noise", mc_noise, "noise realizations")->capture_default_str();
    mc->add_option("--n-twirl", mc_twirl, "dressings per noise draw")->capture_default_str();
    mc->add_option("--n-states", mc_states, "input states per dressing")->capture_default_str();

    // ---- ensemble ----
    auto* ens = app.add_subcommand("ensemble", "bare vs twirled fidelity across a random-circuit ensemble");
    std::string ens_kind = "clifford-brickwork";
    int ens_n = 8, ens_depth = 8, ens_circuits = 20;
    double ens_sigma = 0.15;
    std::vector<double> ens_tau = {0.1, 1.0, 10.0, 100.0};
    int ens_noise = 2000;
    uint64_t ens_circuit_seed = 1;
    bool ens_twirled_mc = false;
    ens->add_option("--kind", ens_kind,
                    "clifford-brickwork | t-doped-brickwork | uniform-clifford-brickwork")
        ->capture_default_str();
    ens->add_option("--n", ens_n)->capture_default_str();
    ens->add_option("--depth", ens_depth)->capture_default_str();
    ens->add_option("--circuits", ens_circuits)->capture_default_str();
    ens->add_option("--sigma", ens_sigma)->capture_default_str();
    ens->add_option("--tau", ens_tau)->delimiter(',');
    ens->add_option("--n-noise", ens_noise)->capture_default_str();
    ens->add_option("--circuit-seed", ens_circuit_seed)->capture_default_str();
    ens->add_flag("--twirled-mc", ens_twirled_mc, "estimate the twirled fidelity by MC instead of the exact sum");

    // ---- qasm ----
    auto* qasm = app.add_subcommand("qasm", "parse + lower diagnostics for a QASM file");
    std::string qasm_path;
    qasm->add_option("--qasm", qasm_path, "OpenQASM 2 file")->required();

    // ---- repcode ----
    auto* rep = app.add_subcommand("repcode", "[[3,1,1]] phase-flip code survival, bare vs twirled");
    int rep_rounds = 250, rep_samples = 2000;
    double rep_sigma = 0.05;
    std::vector<double> rep_tau = {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 100.0};
    bool rep_bare_only = false, rep_twirled_only = false;
    rep->add_option("--rounds", rep_rounds)->capture_default_str();
    rep->add_option("--samples", rep_samples)->capture_default_str();
    rep->add_option("--sigma", rep_sigma)->capture_default_str();
    rep->add_option("--tau", rep_tau)->delimiter(',');
    rep->add_flag("--bare-only", rep_bare_only);
    rep->add_flag("--twirled-only", rep_twirled_only);

    // ---- ft-mask ----
    auto* ft = app.add_subcommand("ft-mask", "finite-duration-gate mask and bound checks");
    std::string ft_schedule, ft_circuit, ft_pauli = "Z";
    int ft_bound_samples = 0;
    double ft_sigma = 0.1;
    ft->add_option("--schedule", ft_schedule, "control schedule JSON")->required();
    ft->add_option("--circuit-json", ft_circuit, "layered circuit JSON")->required();
    ft->add_option("--pauli", ft_pauli, "Pauli Q, e.g. ZX")->capture_default_str();
    ft->add_option("--bound-samples", ft_bound_samples, "random covariances for the bound report");
    ft->add_option("--bound-sigma", ft_sigma, "scale of the random covariances")->capture_default_str();

    // ---- qkernel ----
    auto* qk = app.add_subcommand("qkernel", "Pauli-averaged quantum-kernel cancellation report");
    int qk_n = 2, qk_grid = 6;
    double qk_cutoff = 1.0;
    uint64_t qk_dressing_seed = 7;
    qk->add_option("--n", qk_n)->capture_default_str();
    qk->add_option("--grid", qk_grid, "time grid points")->capture_default_str();
    qk->add_option("--cutoff", qk_cutoff, "ohmic cutoff frequency")->capture_default_str();
    qk->add_option("--dressing-seed", qk_dressing_seed)->capture_default_str();

    // ---- sweep ----
    auto* sweep = app.add_subcommand("sweep", "sigma x tau fidelity grid for one circuit");
    CircuitSource sw_src;
    CovSource sw_cov;
    sw_src.attach(sweep);
    sw_cov.attach(sweep);
    std::vector<double> sw_sigmas = {0.05, 0.15};
    sweep->add_option("--sigmas", sw_sigmas, "noise strengths")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    try {
        if (*analytic) {
            CsvWriter csv("circuit_hash,n,l,cov_kind,sigma,tau_over_tg,method,p_I,F,std_error");
            tc::PauliSumOptions popts;
            popts.mode = an_budget > 0 ? tc::PauliSumMode::Sampled : tc::PauliSumMode::Exact;
            popts.budget = an_budget;
            popts.seed = seed;
            popts.exact_limit = an_exact_limit;
            for (int ci = 0; ci < an_ncircuits; ci++) {
                CircuitSource src = an_src;
                src.circuit_index = an_src.circuit_index + ci;
                tc::GateCircuit circuit = src.load();
                if (!circuit.clifford) {
                    throw std::runtime_error(
                        "circuit contains non-Clifford gates (t/rz/u1/u3); the analytic path is only valid for "
                        "Clifford circuits - run the mc subcommand instead");
                }
                tc::NoiseLayout layout = tc::make_layout(circuit);
                auto axes = tc::propagate_noise_axes(circuit, layout);
                for (double tau : an_cov.tau) {
                    tc::CovMatrix cov = an_cov.build(layout, tau);
                    tc::FidelityEstimate p = tc::no_error_probability(axes, circuit.n, cov, popts);
                    csv.row(estimate_row(circuit, cov.descriptor(), an_cov.sigma, tau, p));
                }
            }
            csv.write(out_path);
            write_manifest(out_path, seed, {{"budget", an_budget}, {"circuits", an_ncircuits}}, elapsed());
        } else if (*bounds) {
            CsvWriter csv("circuit_hash,n,l,cov_kind,sigma,tau_over_tg,F_min,F,F_max");
            tc::GateCircuit circuit = bd_src.load();
            if (!circuit.clifford) {
                throw std::runtime_error("bounds need a Clifford circuit");
            }
            tc::NoiseLayout layout = tc::make_layout(circuit);
            auto axes = tc::propagate_noise_axes(circuit, layout);
            for (double tau : bd_cov.tau) {
                tc::CovMatrix cov = bd_cov.build(layout, tau);
                tc::FidelityEstimate p = tc::no_error_probability(axes, circuit.n, cov, {});
                tc::FidelityBounds fb = tc::fidelity_bounds(axes, circuit.n, cov, {});
                std::ostringstream os;
                os << std::hex << circuit.hash() << std::dec << "," << circuit.n << "," << depth_of(circuit) << ","
                   << cov.descriptor() << "," << fmt(bd_cov.sigma) << "," << fmt(tau) << "," << fmt(fb.lower.value)
                   << "," << fmt(tc::fidelity_from_p(p.value, circuit.n)) << "," << fmt(fb.upper.value);
                csv.row(os.str());
            }
            csv.write(out_path);
            write_manifest(out_path, seed, {}, elapsed());
        } else if (*mc) {
            tc::GateCircuit circuit = mc_src.load();
            if (circuit.n > 14 && !long_run) {
                throw std::runtime_error("workloads above 14 qubits need --long-run");
            }
            CsvWriter csv("circuit_hash,n,l,cov_kind,sigma,tau_over_tg,method,p_I,F,std_error");
            tc::NoiseLayout layout = tc::make_layout(circuit);
            for (double tau : mc_cov.tau) {
                tc::CovMatrix cov = mc_cov.build(layout, tau);
                tc::McOptions mo;
                mo.twirled = mc_twirled;
                mo.n_noise = mc_noise;
                mo.n_twirl = mc_twirl;
                mo.n_states = mc_states;
                mo.seed = seed;
                tc::FidelityEstimate f = tc::average_fidelity_mc(circuit, cov, mo);
                double dpow = std::pow(2.0, circuit.n);
                double p_i = ((dpow + 1.0) * f.value - 1.0) / dpow;
                std::ostringstream os;
                os << std::hex << circuit.hash() << std::dec << "," << circuit.n << "," << depth_of(circuit) << ","
                   << cov.descriptor() << "," << fmt(mc_cov.sigma) << "," << fmt(tau) << "," << f.method << ","
                   << fmt(p_i) << "," << fmt(f.value) << "," << fmt(f.std_error);
                csv.row(os.str());
            }
            csv.write(out_path);
            write_manifest(out_path, seed,
                           {{"n_noise", mc_noise}, {"n_twirl", mc_twirl}, {"n_states", mc_states}}, elapsed());
        } else if (*ens) {
            tc::EnsembleStudyOptions eo;
            if (ens_kind == "clifford-brickwork") {
                eo.spec.kind = tc::EnsembleKind::CliffordBrickwork;
            } else if (ens_kind == "t-doped-brickwork") {
                eo.spec.kind = tc::EnsembleKind::TDopedBrickwork;
            } else if (ens_kind == "uniform-clifford-brickwork") {
                eo.spec.kind = tc::EnsembleKind::UniformCliffordBrickwork;
            } else {
                throw std::runtime_error("unknown ensemble kind '" + ens_kind + "'");
            }
            eo.spec.n = ens_n;
            eo.spec.depth = ens_depth;
            eo.tau_grid = ens_tau;
            eo.sigma = ens_sigma;
            eo.n_circuits = ens_circuits;
            eo.mc.n_noise = ens_noise;
            eo.mc.seed = seed;
            eo.twirled_analytic = !ens_twirled_mc;
            eo.circuit_seed = ens_circuit_seed;
            tc::EnsembleSummary summary = tc::circuit_ensemble_study(eo);
            CsvWriter csv("kind,circuit_index,tau_over_tg,bare_F,bare_se,twirled_F,twirled_se");
            for (const auto& row : summary.rows) {
                std::ostringstream os;
                os << "circuit," << row.circuit_index << "," << fmt(row.tau_over_tg) << "," << fmt(row.bare.value)
                   << "," << fmt(row.bare.std_error) << "," << fmt(row.twirled.value) << ","
                   << fmt(row.twirled.std_error);
                csv.row(os.str());
            }
            for (size_t ti = 0; ti < summary.tau.size(); ti++) {
                std::ostringstream os;
                os << "aggregate-mean,," << fmt(summary.tau[ti]) << "," << fmt(summary.bare_mean[ti]) << ","
                   << fmt(summary.bare_mean_se[ti]) << "," << fmt(summary.twirled_mean[ti]) << ","
                   << fmt(summary.twirled_mean_se[ti]);
                csv.row(os.str());
                std::ostringstream os2;
                os2 << "aggregate-std,," << fmt(summary.tau[ti]) << "," << fmt(summary.bare_std[ti]) << ",,"
                    << fmt(summary.twirled_std[ti]) << ",";
                csv.row(os2.str());
            }
            csv.write(out_path);
            write_manifest(out_path, seed, {{"n_noise", ens_noise}, {"circuits", ens_circuits}}, elapsed());
        } else if (*qasm) {
            tc::QasmProgram prog = tc::parse_qasm_file(qasm_path);
            tc::GateCircuit circuit = tc::lower(prog);
            nlohmann::json j;
            j["n_qubits"] = prog.n_qubits;
            j["statements"] = prog.statements.size();
            j["gates"] = circuit.gates.size();
            j["two_qubit_gates"] = circuit.twirl_units.size();
            j["noise_sites"] = circuit.sites.size();
            j["clifford"] = circuit.clifford;
            j["measured_qubits"] = prog.measured_count;
            std::cout << j.dump(2) << "\n";
        } else if (*rep) {
            CsvWriter csv("tau_over_tg,twirled,survival,std_error,n_samples");
            for (int twirled = 0; twirled <= 1; twirled++) {
                if ((twirled && rep_bare_only) || (!twirled && rep_twirled_only)) {
                    continue;
                }
                for (double tau : rep_tau) {
                    tc::RepCodeConfig rc;
                    rc.rounds = rep_rounds;
                    rc.sigma = rep_sigma;
                    rc.tau_over_tg = tau;
                    rc.twirled = twirled;
                    rc.n_samples = rep_samples;
                    rc.seed = seed;
                    tc::RepCodeResult res = tc::run_repcode(rc);
                    std::ostringstream os;
                    os << fmt(tau) << "," << twirled << "," << fmt(res.survival) << "," << fmt(res.std_error) << ","
                       << res.n_samples;
                    csv.row(os.str());
                }
            }
            csv.write(out_path);
            write_manifest(out_path, seed, {{"samples", rep_samples}, {"rounds", rep_rounds}}, elapsed());
        } else if (*ft) {
            std::ifstream cj(ft_circuit);
            if (!cj) {
                throw std::runtime_error("cannot open circuit file: " + ft_circuit);
            }
            std::stringstream cs;
            cs << cj.rdbuf();
            tc::CliffordCircuit circuit = tc::clifford_circuit_from_json(cs.str());
            std::ifstream sj(ft_schedule);
            if (!sj) {
                throw std::runtime_error("cannot open schedule file: " + ft_schedule);
            }
            std::stringstream ss;
            ss << sj.rdbuf();
            tc::ControlSchedule schedule = tc::schedule_from_json(ss.str(), circuit);
            tc::FtMask mask = tc::build_ft_mask(schedule, circuit, tc::PauliString::from_str(ft_pauli));
            nlohmann::json j;
            j["n"] = mask.n;
            j["l"] = mask.l;
            j["mask"] = nlohmann::json::array();
            for (int r = 0; r < mask.m.rows(); r++) {
                nlohmann::json row = nlohmann::json::array();
                for (int c = 0; c < mask.m.cols(); c++) {
                    row.push_back(mask.m(r, c));
                }
                j["mask"].push_back(row);
            }
            if (ft_bound_samples > 0) {
                std::vector<tc::CovMatrix> covs;
                for (int s = 0; s < ft_bound_samples; s++) {
                    tc::Rng rng(seed, s, /*stream_tag=*/0x6674636f76ULL);
                    int dim = mask.n * mask.l;
                    Eigen::MatrixXd a(dim, dim);
                    for (int r = 0; r < dim; r++) {
                        for (int c = 0; c < dim; c++) {
                            a(r, c) = rng.next_normal();
                        }
                    }
                    Eigen::MatrixXd cov = ft_sigma * ft_sigma * (a * a.transpose()) / dim;
                    covs.push_back(tc::CovMatrix(cov, "random"));
                }
                tc::FtBoundsReport rep = tc::ft_bounds_check(mask, covs);
                j["bounds"] = {{"checked", rep.checked},
                               {"lower_violations", rep.lower_violations},
                               {"upper_violations", rep.upper_violations},
                               {"worst_lower_gap", rep.worst_lower_gap},
                               {"worst_upper_gap", rep.worst_upper_gap}};
            }
            std::ofstream out(out_path);
            out << j.dump(2) << "\n";
        } else if (*qk) {
            // random Clifford dressing word per grid point, Z noise ops
            std::vector<Eigen::MatrixXcd> noise_ops;
            for (int q = 0; q < qk_n; q++) {
                noise_ops.push_back(tc::dense_pauli(tc::PauliString::single(qk_n, q, 'Z')));
            }
            std::vector<double> times;
            std::vector<Eigen::MatrixXcd> dressings;
            tc::Rng rng(qk_dressing_seed, 0, /*stream_tag=*/0x716b65726eULL);
            size_t d = size_t{1} << qk_n;
            Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(d, d);
            for (int k = 0; k < qk_grid; k++) {
                times.push_back(static_cast<double>(k));
                dressings.push_back(u);
                // extend the dressing word with a random layer
                std::vector<tc::Gate> gates;
                for (int q = 0; q < qk_n; q++) {
                    const char* names[] = {"h", "s", "sx", "t"};
                    gates.push_back(tc::Gate{names[rng.next_below(4)], {q}, {}});
                }
                if (qk_n > 1) {
                    int a = static_cast<int>(rng.next_below(qk_n));
                    int b = (a + 1) % qk_n;
                    gates.push_back(tc::Gate{"cx", {a, b}, {}});
                }
                for (const auto& g : gates) {
                    Eigen::MatrixXcd gu = Eigen::MatrixXcd::Zero(d, d);
                    for (size_t col = 0; col < d; col++) {
                        tc::StateVector sv(qk_n);
                        sv.amplitudes().assign(d, tc::cxd(0, 0));
                        sv.amplitudes()[col] = 1.0;
                        sv.apply_gate(g);
                        for (size_t row = 0; row < d; row++) {
                            gu(row, col) = sv.amplitudes()[row];
                        }
                    }
                    u = gu * u;
                }
            }
            tc::KernelReport rep =
                tc::verify_kernel_cancellation(qk_n, noise_ops, dressings, times, tc::ohmic_correlator(qk_cutoff));
            nlohmann::json j;
            j["grid"] = nlohmann::json::array();
            for (auto& [t1, t2] : rep.grid) {
                j["grid"].push_back({t1, t2});
            }
            j["max_quantum_entry"] = rep.max_quantum_entry;
            j["max_classical_entry"] = rep.max_classical_entry;
            std::ofstream out(out_path);
            out << j.dump(2) << "\n";
            std::cout << "max quantum entry:   " << rep.max_quantum_entry << "\n"
                      << "max classical entry: " << rep.max_classical_entry << "\n";
        } else if (*sweep) {
            tc::GateCircuit circuit = sw_src.load();
            CsvWriter csv("circuit_hash,n,l,cov_kind,sigma,tau_over_tg,method,p_I,F,std_error");
            if (!circuit.clifford) {
                throw std::runtime_error("sweep uses the analytic engine; the circuit must be Clifford");
            }
            tc::NoiseLayout layout = tc::make_layout(circuit);
            auto axes = tc::propagate_noise_axes(circuit, layout);
            for (double sg : sw_sigmas) {
                for (double tau : sw_cov.tau) {
                    tc::CovMatrix cov = tc::cov_for_layout(layout, sg, tau, nullptr, sw_cov.global_clock);
                    tc::FidelityEstimate p = tc::no_error_probability(axes, circuit.n, cov, {});
                    csv.row(estimate_row(circuit, cov.descriptor(), sg, tau, p));
                }
            }
            csv.write(out_path);
            write_manifest(out_path, seed, {}, elapsed());
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
