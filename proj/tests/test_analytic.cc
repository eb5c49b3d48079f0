#include "twirlcorr/analytic.h"

#include <cmath>

#include "doctest.h"
#include "oracles.h"
#include "twirlcorr/rng.h"

using namespace twirlcorr;

namespace {

CliffordCircuit identity_circuit(int n, int l) {
    return CliffordCircuit(n, std::vector<std::vector<Gate>>(l));
}

CommutationMask mask_of_bits(const std::vector<int>& bits) {
    CommutationMask m;
    for (int b : bits) {
        m.bits.push_back(b != 0);
    }
    return m;
}

// random PSD covariance with the given diagonal
Eigen::MatrixXd random_psd_with_diag(const Eigen::VectorXd& diag, Rng& rng) {
    int dim = static_cast<int>(diag.size());
    Eigen::MatrixXd a(dim, dim);
    for (int r = 0; r < dim; r++) {
        for (int c = 0; c < dim; c++) {
            a(r, c) = rng.next_normal();
        }
    }
    Eigen::MatrixXd g = a * a.transpose();
    Eigen::VectorXd d = g.diagonal().cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd corr = d.asDiagonal() * g * d.asDiagonal();
    Eigen::VectorXd root = diag.cwiseSqrt();
    return root.asDiagonal() * corr * root.asDiagonal();
}

CliffordCircuit random_clifford_circuit(int n, int l, Rng& rng) {
    const char* names1[] = {"h", "s", "sx", "sdg", "x"};
    std::vector<std::vector<Gate>> layers(l);
    for (auto& layer : layers) {
        for (int q = 0; q < n; q++) {
            if (rng.next_double() < 0.5) {
                layer.push_back(Gate{names1[rng.next_below(5)], {q}, {}});
            }
        }
        if (n > 1) {
            int a = static_cast<int>(rng.next_below(n));
            int b = (a + 1) % n;
            layer.push_back(Gate{"cx", {a, b}, {}});
        }
    }
    return CliffordCircuit(n, layers);
}

}  // namespace

TEST_CASE("eigenvalue_exact") {
    Eigen::VectorXd theta(2);
    theta << 0.1, 0.2;
    CHECK(eigenvalue_exact(theta, mask_of_bits({0, 0})) == 1.0);
    CHECK(eigenvalue_exact(theta, mask_of_bits({1, 1})) ==
          doctest::Approx(std::cos(0.2) * std::cos(0.4)).epsilon(1e-14));

    Eigen::VectorXd quarter(1);
    quarter << 3.141592653589793 / 4;
    CHECK(eigenvalue_exact(quarter, mask_of_bits({1})) == doctest::Approx(0.0).epsilon(1e-12));

    // dense 1-qubit channel oracle: the twirled dephasing channel keeps only
    // the X component of U X U^dag, which is cos(2 theta)
    oracle::Mat x = oracle::dense_1q('X');
    double th = 0.137;
    oracle::Mat u = oracle::Mat::Zero(2, 2);
    u(0, 0) = std::polar(1.0, -th);
    u(1, 1) = std::polar(1.0, th);
    oracle::Mat chan = u * x * u.adjoint();
    double lambda = 0.5 * (chan * x).trace().real();
    CHECK(lambda == doctest::Approx(std::cos(2 * th)).epsilon(1e-12));
}

TEST_CASE("eigenvalue_resummed bounds the exact value") {
    CHECK(eigenvalue_resummed(Eigen::VectorXd::Zero(3), mask_of_bits({1, 1, 1})) == 1.0);
    for (double th = -0.785; th <= 0.785; th += 0.05) {
        Eigen::VectorXd t(1);
        t << th;
        CHECK(eigenvalue_resummed(t, mask_of_bits({1})) >= eigenvalue_exact(t, mask_of_bits({1})) - 1e-14);
    }
    // the dropped terms are bounded: |log lambda_exact - log lambda_resummed|
    // <= C * max theta^2 * sum theta^2; the sweep calibrates C = 2 over
    // |theta| <= 0.5, well beyond the weak-noise regime of interest
    Rng rng(31, 0);
    int checked = 0;
    for (int trial = 0; trial < 400; trial++) {
        int dim = 1 + static_cast<int>(rng.next_below(6));
        Eigen::VectorXd t(dim);
        for (int i = 0; i < dim; i++) {
            t[i] = 0.15 * rng.next_normal();
        }
        if (t.cwiseAbs().maxCoeff() > 0.5) {
            continue;
        }
        checked++;
        CommutationMask full = mask_of_bits(std::vector<int>(dim, 1));
        double exact = eigenvalue_exact(t, full);
        double budget = t.cwiseProduct(t).maxCoeff() * t.squaredNorm();
        CHECK(std::abs(std::log(exact) - std::log(eigenvalue_resummed(t, full))) <= 2.0 * budget + 1e-12);
    }
    CHECK(checked > 300);
}

TEST_CASE("eigenvalue_gaussian closed forms") {
    // Markovian: (1 + 4 sigma^2)^{-m/2}
    double s2 = 0.0225;
    int dim = 8;
    CovMatrix markov = cov_min(Eigen::VectorXd::Constant(dim, s2));
    for (int m = 0; m <= dim; m++) {
        std::vector<int> bits(dim, 0);
        for (int i = 0; i < m; i++) {
            bits[i] = 1;
        }
        double got = eigenvalue_gaussian(mask_of_bits(bits), markov);
        CHECK(got == doctest::Approx(std::pow(1 + 4 * s2, -0.5 * m)).epsilon(1e-12));
    }

    // quasistatic: 1/sqrt(1 + 4 sigma^2 m)
    CovMatrix quasi = cov_quasistatic(1, dim, std::sqrt(s2));
    for (int m = 0; m <= dim; m++) {
        std::vector<int> bits(dim, 0);
        for (int i = 0; i < m; i++) {
            bits[i] = 1;
        }
        double got = eigenvalue_gaussian(mask_of_bits(bits), quasi);
        CHECK(got == doctest::Approx(1.0 / std::sqrt(1 + 4 * s2 * m)).epsilon(1e-12));
    }

    // zero covariance
    CovMatrix zero(Eigen::MatrixXd::Zero(3, 3));
    CHECK(eigenvalue_gaussian(mask_of_bits({1, 1, 1}), zero) == 1.0);
}

TEST_CASE("determinant evaluator vs naive determinant") {
    Rng rng(32, 0);
    for (int dim : {1, 4, 16, 64}) {
        Eigen::VectorXd diag = Eigen::VectorXd::Constant(dim, 0.01).array() +
                               0.02 * Eigen::VectorXd::Random(dim).cwiseAbs().array();
        Eigen::MatrixXd sigma = random_psd_with_diag(diag, rng);
        CovMatrix cov(sigma);
        CommutationMask full = mask_of_bits(std::vector<int>(dim, 1));
        double got = eigenvalue_gaussian(full, cov);
        Eigen::MatrixXd a = Eigen::MatrixXd::Identity(dim, dim) + 4.0 * sigma;
        double naive = 1.0 / std::sqrt(a.determinant());
        CHECK(got == doctest::Approx(naive).epsilon(1e-10));
    }
}

TEST_CASE("eigenvalue_gaussian equals the Monte-Carlo average of the resummed eigenvalue") {
    Rng rng(33, 0);
    Eigen::VectorXd diag = Eigen::VectorXd::Constant(6, 0.02);
    Eigen::MatrixXd sigma = random_psd_with_diag(diag, rng);
    CovMatrix cov(sigma);
    CommutationMask mask = mask_of_bits({1, 0, 1, 1, 0, 1});
    NoiseSampler sampler(cov);
    int n_samples = 200000;
    double acc = 0.0, acc2 = 0.0;
    for (int k = 0; k < n_samples; k++) {
        double v = eigenvalue_resummed(sampler.sample(9, k).theta, mask);
        acc += v;
        acc2 += v * v;
    }
    double mean = acc / n_samples;
    double se = std::sqrt((acc2 / n_samples - mean * mean) / n_samples);
    CHECK(std::abs(eigenvalue_gaussian(mask, cov) - mean) < 3.5 * se);
}

TEST_CASE("no_error_probability closed form and modes") {
    // zero covariance -> exactly 1
    CliffordCircuit idc = identity_circuit(2, 2);
    CovMatrix zero(Eigen::MatrixXd::Zero(4, 4));
    FidelityEstimate z = no_error_probability(idc, zero);
    CHECK(z.value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(z.std_error == 0.0);
    CHECK(z.method == "exact-sum");

    // n=1 identity circuit, Markovian: p = (2 + 2 (1+4s^2)^{-l/2}) / 4
    int l = 5;
    double s2 = 0.01;
    CliffordCircuit id1 = identity_circuit(1, l);
    CovMatrix markov = cov_min(Eigen::VectorXd::Constant(l, s2));
    FidelityEstimate p = no_error_probability(id1, markov);
    CHECK(p.value == doctest::Approx(0.25 * (2.0 + 2.0 * std::pow(1 + 4 * s2, -0.5 * l))).epsilon(1e-12));

    // sampled mode agrees with exact within 3 standard errors
    Rng rng(34, 0);
    CliffordCircuit rc = random_clifford_circuit(2, 3, rng);
    CovMatrix cov = cov_exponential(2, 3, 0.15, 3.0, 1.0);
    FidelityEstimate exact = no_error_probability(rc, cov);
    PauliSumOptions sopts;
    sopts.mode = PauliSumMode::Sampled;
    sopts.budget = 4096;
    sopts.seed = 3;
    FidelityEstimate sampled = no_error_probability(rc, cov, sopts);
    CHECK(sampled.method == "pauli-sampled");
    CHECK(sampled.std_error > 0.0);
    CHECK(std::abs(sampled.value - exact.value) < 3 * sampled.std_error + 1e-9);

    // refusal above the exact limit mentions the sampled mode
    PauliSumOptions tight;
    tight.exact_limit = 1;
    bool threw = false;
    try {
        no_error_probability(rc, cov, tight);
    } catch (const std::invalid_argument& e) {
        threw = true;
        CHECK(std::string(e.what()).find("sampled") != std::string::npos);
    }
    CHECK(threw);
}

TEST_CASE("exact sum is bit-stable across worker counts") {
    Rng rng(35, 0);
    CliffordCircuit rc = random_clifford_circuit(3, 4, rng);
    CovMatrix cov = cov_exponential(3, 4, 0.1, 5.0, 1.0);
    setenv("TWIRLCORR_THREADS", "1", 1);
    double v1 = no_error_probability(rc, cov).value;
    setenv("TWIRLCORR_THREADS", "7", 1);
    double v7 = no_error_probability(rc, cov).value;
    unsetenv("TWIRLCORR_THREADS");
    CHECK(v1 == v7);
}

TEST_CASE("fidelity_from_p") {
    CHECK(fidelity_from_p(1.0, 3) == 1.0);
    CHECK(fidelity_from_p(0.5, 1) == doctest::Approx(2.0 / 3));
    CHECK(fidelity_from_p(0.0, 2) == doctest::Approx(0.2));
    CHECK_THROWS(fidelity_from_p(1.5, 1));
}

TEST_CASE("fidelity bounds: saturation and random-covariance ordering") {
    Rng rng(36, 0);
    // diagonal covariance: lower bound saturates exactly
    CliffordCircuit rc = random_clifford_circuit(2, 3, rng);
    CovMatrix diag = cov_min(Eigen::VectorXd::Constant(6, 0.02));
    FidelityBounds fb = fidelity_bounds(rc, diag);
    double f = fidelity_from_p(no_error_probability(rc, diag).value, 2);
    CHECK(fb.lower.value == doctest::Approx(f).epsilon(1e-13));

    // rank-one with positive signs: upper bound saturates exactly
    Eigen::VectorXd s = Eigen::VectorXd::Constant(6, 0.1);
    CovMatrix ro = cov_max(s, std::vector<int>(6, 1));
    FidelityBounds fb2 = fidelity_bounds(rc, ro);
    double f2 = fidelity_from_p(no_error_probability(rc, ro).value, 2);
    CHECK(fb2.upper.value == doctest::Approx(f2).epsilon(1e-13));

    // random PSD with fixed diagonal: ordering holds with zero violations
    for (int trial = 0; trial < 60; trial++) {
        int n = 1 + static_cast<int>(rng.next_below(3));
        int lr = 2 + static_cast<int>(rng.next_below(5));
        CliffordCircuit c = random_clifford_circuit(n, lr, rng);
        Eigen::VectorXd d = Eigen::VectorXd::Constant(n * lr, 0.0004).array() +
                            0.01 * Eigen::VectorXd::Random(n * lr).cwiseAbs2().array();
        CovMatrix cov(random_psd_with_diag(d, rng));
        FidelityBounds b = fidelity_bounds(c, cov);
        double mid = fidelity_from_p(no_error_probability(c, cov).value, n);
        CHECK(b.lower.value <= mid + 1e-12);
        CHECK(mid <= b.upper.value + 1e-12);
    }
}

TEST_CASE("perturbative expansion") {
    CovMatrix zero(Eigen::MatrixXd::Zero(4, 4));
    CHECK(eigenvalue_perturbative(mask_of_bits({1, 1, 0, 1}), zero) == 1.0);

    // diagonal covariance: tr[(M S)^2] reduces to the sum of squared masked diagonals
    Eigen::VectorXd d(4);
    d << 0.01, 0.02, 0.03, 0.04;
    CovMatrix diag = cov_min(d);
    CommutationMask mask = mask_of_bits({1, 0, 1, 1});
    double tr = 0.01 + 0.03 + 0.04;
    double tr2 = 0.01 * 0.01 + 0.03 * 0.03 + 0.04 * 0.04;
    CHECK(eigenvalue_perturbative(mask, diag) ==
          doctest::Approx(1 - 2 * tr + 2 * tr * tr + 4 * tr2).epsilon(1e-14));

    // matches eigenvalue_gaussian to O(||Sigma||^3): scaling check
    Rng rng(37, 0);
    Eigen::MatrixXd base = random_psd_with_diag(Eigen::VectorXd::Constant(4, 1.0), rng);
    double prev_ratio = 0.0;
    for (double scale : {1e-2, 5e-3, 2.5e-3}) {
        CovMatrix cov(base * scale);
        double diff = std::abs(eigenvalue_gaussian(mask, cov) - eigenvalue_perturbative(mask, cov));
        double ratio = diff / (scale * scale * scale);
        if (prev_ratio > 0) {
            CHECK(ratio < prev_ratio * 4.0);  // stays bounded as scale shrinks
        }
        prev_ratio = ratio;
        CHECK(diff <= 200.0 * scale * scale * scale);
    }
}

TEST_CASE("twirled error-probability covariance") {
    CHECK(error_prob_covariance(0.0) == 0.0);
    // exponential kernel entry: halved decay time with the squared prefactor
    double s2 = 0.0025, tau = 4.0;
    for (int delta = 1; delta <= 5; delta++) {
        double entry = s2 * std::exp(-delta / tau);
        CHECK(error_prob_covariance(entry) ==
              doctest::Approx(2.0 * s2 * s2 * std::exp(-delta / (tau / 2))).epsilon(1e-12));
    }

    // Monte-Carlo check of the leading coefficient at sigma = 0.05
    double sig2 = 0.0025;
    double c = 0.6 * sig2;
    Eigen::MatrixXd m(2, 2);
    m << sig2, c, c, sig2;
    NoiseSampler sampler{CovMatrix(m)};
    int n_samples = 2000000;
    double s_p1 = 0, s_p2 = 0, s_p12 = 0, s_sq = 0;
    for (int k = 0; k < n_samples; k++) {
        Eigen::VectorXd t = sampler.sample(10, k).theta;
        double p1 = std::sin(t[0]) * std::sin(t[0]);
        double p2 = std::sin(t[1]) * std::sin(t[1]);
        s_p1 += p1;
        s_p2 += p2;
        s_p12 += p1 * p2;
        s_sq += p1 * p2 * p1 * p2;
    }
    double cov_emp = s_p12 / n_samples - (s_p1 / n_samples) * (s_p2 / n_samples);
    // crude se of the covariance estimator
    double se = std::sqrt((s_sq / n_samples) / n_samples) + 2.0 * sig2 * sig2 / std::sqrt(n_samples);
    CHECK(std::abs(cov_emp - error_prob_covariance(c)) < 5 * se + 1e-7);
    CHECK(std::abs(cov_emp - error_prob_covariance_exact(sig2, sig2, c)) < 5 * se + 1e-7);
}

TEST_CASE("bare free induction closed form") {
    CovMatrix zero(Eigen::MatrixXd::Zero(3, 3));
    CHECK(bare_free_induction_p(zero) == 1.0);

    // quasistatic block: p = 1/2 + 1/2 exp(-2 l^2 sigma^2)
    int l = 4;
    double s2 = 0.01;
    CovMatrix q = cov_quasistatic(1, l, std::sqrt(s2));
    CHECK(bare_free_induction_p(q) == doctest::Approx(0.5 + 0.5 * std::exp(-2.0 * l * l * s2)).epsilon(1e-13));
}

TEST_CASE("twirled fidelity is non-decreasing in the correlation time") {
    Rng rng(38, 0);
    for (int trial = 0; trial < 5; trial++) {
        int n = 2 + static_cast<int>(rng.next_below(2));
        int l = 4;
        CliffordCircuit c = random_clifford_circuit(n, l, rng);
        double prev = -1.0;
        for (double tau : {0.1, 1.0, 10.0, 100.0, 1000.0}) {
            CovMatrix cov = cov_exponential(n, l, 0.15, tau, 1.0);
            double f = fidelity_from_p(no_error_probability(c, cov).value, n);
            CHECK(f >= prev - 1e-12);
            prev = f;
        }
    }
}
