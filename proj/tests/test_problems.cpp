#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <set>

#include "igpkit/problems.hpp"

using namespace igp;

TEST_CASE("identity-plus-Hadamard design has unit columns and coherence 1/sqrt(n)") {
    for (int n : {4, 16}) {
        const SensingMatrix m = gen_identity_hadamard(n);
        REQUIRE(m.n() == n);
        REQUIRE(m.p() == 2 * n);
        for (int j = 0; j < m.p(); ++j)
            CHECK(m.col(j).norm() == doctest::Approx(1.0).epsilon(1e-14));
        double mu = 0.0;
        for (int a = 0; a < m.p(); ++a)
            for (int b = a + 1; b < m.p(); ++b)
                mu = std::max(mu, std::abs(m.col(a).dot(m.col(b))));
        CHECK(mu == doctest::Approx(1.0 / std::sqrt(n)).epsilon(1e-14));
        // cross-block inner products are exactly +-1/sqrt(n)
        CHECK(std::abs(m.col(0).dot(m.col(n))) == doctest::Approx(1.0 / std::sqrt(n)));
    }
    CHECK_THROWS_AS(gen_identity_hadamard(12), ArgumentError);
    CHECK_THROWS_AS(gen_identity_hadamard(0), ArgumentError);
}

TEST_CASE("gaussian designs have standard normal entries before normalization") {
    Rng rng(2024);
    const SensingMatrix raw = gen_gaussian_raw(200, 300, rng);
    const double mean = raw.data.mean();
    const double var = (raw.data.array() - mean).square().sum() / (200.0 * 300.0 - 1.0);
    // 60000 draws: the sample mean has sd ~ 0.0041, variance sd ~ 0.0058
    CHECK(std::abs(mean) < 0.02);
    CHECK(var == doctest::Approx(1.0).epsilon(0.03));
    const double kurt =
        ((raw.data.array() - mean) / std::sqrt(var)).pow(4).mean();
    CHECK(kurt == doctest::Approx(3.0).epsilon(0.1));

    Rng rng2(77);
    const SensingMatrix m = gen_gaussian_matrix(50, 80, rng2);
    for (int j = 0; j < m.p(); ++j)
        CHECK(m.col(j).norm() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("matrix generation is reproducible per seed and differs across seeds") {
    Rng a1(5), a2(5), b(6);
    const SensingMatrix m1 = gen_gaussian_matrix(12, 20, a1);
    const SensingMatrix m2 = gen_gaussian_matrix(12, 20, a2);
    const SensingMatrix m3 = gen_gaussian_matrix(12, 20, b);
    CHECK((m1.data - m2.data).cwiseAbs().maxCoeff() == 0.0);
    CHECK((m1.data - m3.data).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("signal supports are sorted, in range, and respect explicit requests") {
    Rng rng(9);
    const SparseSignal s = gen_signal(40, 6, UniformSignValues{}, RandomSupport{}, rng);
    REQUIRE(s.k0 == 6);
    REQUIRE(s.support.size() == 6);
    CHECK(std::is_sorted(s.support.begin(), s.support.end()));
    std::set<int> uniq(s.support.begin(), s.support.end());
    CHECK(uniq.size() == 6);
    for (int idx : s.support) {
        CHECK(idx >= 0);
        CHECK(idx < 40);
        CHECK(std::abs(s.beta[idx]) == 1.0);  // +-1 values
    }
    CHECK(s.beta.cwiseAbs().sum() == doctest::Approx(6.0));

    Rng rng2(10);
    const SparseSignal e = gen_signal(
        20, 3, ExplicitValues{{0.5, -2.0, 1.0}}, ExplicitSupport{{7, 2, 11}}, rng2);
    CHECK(e.support == std::vector<int>{2, 7, 11});
    CHECK(e.beta[7] == 0.5);   // values follow the order the support was given in
    CHECK(e.beta[2] == -2.0);
    CHECK(e.beta[11] == 1.0);

    Rng rng3(11);
    CHECK_THROWS_AS(gen_signal(20, 2, UniformSignValues{}, ExplicitSupport{{3, 3}}, rng3),
                    ArgumentError);
    CHECK_THROWS_AS(gen_signal(20, 2, UniformSignValues{}, ExplicitSupport{{3, 25}}, rng3),
                    ArgumentError);
    CHECK_THROWS_AS(gen_signal(20, 25, UniformSignValues{}, RandomSupport{}, rng3),
                    ArgumentError);
    CHECK_THROWS_AS(
        gen_signal(20, 2, ExplicitValues{{1.0}}, ExplicitSupport{{3, 4}}, rng3),
        ArgumentError);
}

TEST_CASE("gaussian noise is scaled so the per-sample snr matches the request") {
    Rng rng(301);
    Rng rm = rng.derive(1), rs = rng.derive(2), rw = rng.derive(3);
    const SensingMatrix m = gen_gaussian_matrix(64, 128, rm);
    const SparseSignal sig = gen_signal(128, 5, UniformSignValues{}, RandomSupport{}, rs);
    const double snr_db = 15.0;
    const NoisySystem sys = make_noisy_system(m, sig, snr_db, NoiseModel::Gaussian, rw);

    const Vec xb = m.data * sig.beta;
    CHECK(sys.sigma ==
          doctest::Approx(xb.norm() / std::sqrt(64.0 * std::pow(10.0, snr_db / 10.0)))
              .epsilon(1e-14));
    // assembled exactly as X beta + w, bitwise
    CHECK((sys.y - (xb + sys.noise)).cwiseAbs().maxCoeff() == 0.0);
    // the recorded noise bound is the realized norm
    CHECK(sys.eps2 == doctest::Approx(sys.noise.norm()).epsilon(1e-14));
    CHECK(sys.snr_db == snr_db);
}

TEST_CASE("bounded noise lands exactly on the prescribed sphere") {
    Rng rng(302);
    Rng rm = rng.derive(1), rs = rng.derive(2), rw = rng.derive(3);
    const SensingMatrix m = gen_identity_hadamard(16);
    const SparseSignal sig = gen_signal(32, 3, GaussianValues{}, RandomSupport{}, rs);
    (void)rm;
    const NoisySystem sys = make_noisy_system(m, sig, 20.0, NoiseModel::L2Bounded, rw);
    const double expect = (m.data * sig.beta).norm() / std::pow(10.0, 20.0 / 20.0);
    CHECK(sys.eps2 == doctest::Approx(expect).epsilon(1e-14));
    CHECK(sys.noise.norm() == doctest::Approx(sys.eps2).epsilon(1e-13));
    CHECK((sys.y - (m.data * sig.beta + sys.noise)).cwiseAbs().maxCoeff() == 0.0);

    SparseSignal zero = sig;
    zero.beta.setZero();
    Rng rw2 = rng.derive(4);
    CHECK_THROWS_AS(make_noisy_system(m, zero, 20.0, NoiseModel::Gaussian, rw2), ZeroSignal);
}

TEST_CASE("noise-only systems take sigma directly") {
    Rng rng(303);
    const SensingMatrix m = gen_identity_hadamard(8);
    const NoisySystem sys = make_noise_only_system(m, 2.5, rng);
    CHECK(sys.sigma == 2.5);
    CHECK(sys.signal.k0 == 0);
    CHECK(sys.signal.beta.cwiseAbs().maxCoeff() == 0.0);
    CHECK((sys.y - sys.noise).cwiseAbs().maxCoeff() == 0.0);
    const double z = sys.noise.norm() / 2.5;
    CHECK(z > 0.5);  // chi with 8 dof, loose sanity bounds
    CHECK(z < 6.0);
}

TEST_CASE("recovery metrics measure what they claim") {
    Vec beta = Vec::Zero(6);
    beta[1] = 2.0;
    Vec hat = beta;
    hat[1] = 1.0;
    hat[4] = 1.0;
    CHECK(nmse(beta, hat) == doctest::Approx(0.5));  // (1 + 1) / 4
    CHECK(nmse(beta, beta) == 0.0);
    CHECK_THROWS_AS(nmse(Vec::Zero(6), hat), ZeroSignal);

    CHECK(pe_indicator({1, 5, 9}, {9, 1, 5}) == 0);  // order-insensitive
    CHECK(pe_indicator({1, 5, 9}, {1, 5}) == 1);
    CHECK(pe_indicator({1, 5}, {1, 6}) == 1);
    CHECK(pe_indicator({}, {}) == 0);
}

TEST_CASE("matrix kinds expose their dimensions and names") {
    const MatrixKind g = GaussianKind{32, 64};
    const MatrixKind h = IdentityHadamardKind{16};
    CHECK(matrix_kind_name(g) == "gaussian");
    CHECK(matrix_kind_name(h) == "identity_hadamard");
    CHECK(matrix_kind_n(g) == 32);
    CHECK(matrix_kind_p(g) == 64);
    CHECK(matrix_kind_n(h) == 16);
    CHECK(matrix_kind_p(h) == 32);
    Rng rng(55);
    CHECK(gen_matrix(h, rng).p() == 32);
}

TEST_CASE("saved bundles reload to the very same system") {
    namespace fs = std::filesystem;
    Rng rng(304);
    Rng rm = rng.derive(1), rs = rng.derive(2), rw = rng.derive(3);
    const SensingMatrix m = gen_gaussian_matrix(10, 18, rm);
    const SparseSignal sig = gen_signal(18, 3, UniformSignValues{}, RandomSupport{}, rs);
    const NoisySystem sys = make_noisy_system(m, sig, 12.0, NoiseModel::Gaussian, rw);

    const fs::path dir = fs::temp_directory_path() / "igpkit_bundle";
    fs::remove_all(dir);
    save_bundle(dir.string(), sys);
    CHECK((read_matrix_csv((dir / "matrix.csv").string()).data - m.data)
              .cwiseAbs()
              .maxCoeff() == 0.0);
    CHECK((read_vector_csv((dir / "y.csv").string()) - sys.y).cwiseAbs().maxCoeff() == 0.0);
    CHECK((read_vector_csv((dir / "beta.csv").string()) - sig.beta)
              .cwiseAbs()
              .maxCoeff() == 0.0);
    CHECK((read_vector_csv((dir / "noise.csv").string()) - sys.noise)
              .cwiseAbs()
              .maxCoeff() == 0.0);

    std::ifstream in(dir / "manifest.json");
    REQUIRE(in.good());
    const nlohmann::json j = nlohmann::json::parse(in);
    CHECK(j.at("n") == 10);
    CHECK(j.at("p") == 18);
    CHECK(j.at("k0") == 3);
    CHECK(j.at("noise_model") == "gaussian");
}
