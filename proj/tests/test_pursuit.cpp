#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <json.hpp>
#include <memory>

#include "igpkit/problems.hpp"
#include "igpkit/pursuit.hpp"
#include "igpkit/reference.hpp"

using namespace igp;

namespace {

std::shared_ptr<const SensingMatrix> gaussian(int n, int p, std::uint64_t seed) {
    Rng rng(seed);
    return std::make_shared<SensingMatrix>(gen_gaussian_matrix(n, p, rng));
}

Vec noisy_observation(const SensingMatrix& m, int k0, double snr_db, std::uint64_t seed) {
    Rng rng(seed);
    Rng rs = rng.derive(1), rw = rng.derive(2);
    const SparseSignal sig = gen_signal(m.p(), k0, UniformSignValues{}, RandomSupport{}, rs);
    return make_noisy_system(m, sig, snr_db, NoiseModel::Gaussian, rw).y;
}

}  // namespace

TEST_CASE("incremental pursuit reproduces the dense-refit reference") {
    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
        for (Algorithm alg : {Algorithm::Omp, Algorithm::Ols}) {
            const auto m = gaussian(10, 24, seed);
            const Vec y = noisy_observation(*m, 3, 15.0, seed + 100);
            const KMax kmax = KMax::defaults(10);
            const PursuitTrace fast = run_pursuit(m, y, alg, kmax, Exec::Serial);
            const PursuitTrace slow = reference::run(*m, y, alg, kmax);
            REQUIRE(fast.k_reached() == slow.k_reached());
            CHECK(fast.termination == slow.termination);
            for (int k = 0; k <= fast.k_reached(); ++k) {
                CHECK(fast.supports[static_cast<std::size_t>(k)] ==
                      slow.supports[static_cast<std::size_t>(k)]);
                CHECK(fast.residual_norms[static_cast<std::size_t>(k)] ==
                      doctest::Approx(slow.residual_norms[static_cast<std::size_t>(k)])
                          .epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("supports are nested and ratios live in (0, 1]") {
    const auto m = gaussian(16, 40, 9);
    const Vec y = noisy_observation(*m, 4, 10.0, 10);
    for (Algorithm alg : {Algorithm::Omp, Algorithm::Ols}) {
        const PursuitTrace t = run_pursuit(m, y, alg, KMax::defaults(16), Exec::Serial);
        REQUIRE(t.k_reached() >= 1);
        for (int k = 1; k <= t.k_reached(); ++k) {
            const auto& prev = t.supports[static_cast<std::size_t>(k - 1)];
            const auto& cur = t.supports[static_cast<std::size_t>(k)];
            REQUIRE(cur.size() == prev.size() + 1);
            CHECK(std::equal(prev.begin(), prev.end(), cur.begin()));  // prefix
            const double rr = t.rr_at(k);
            CHECK(rr > 0.0);
            CHECK(rr <= 1.0);
            CHECK(rr == doctest::Approx(t.residual_norms[static_cast<std::size_t>(k)] /
                                        t.residual_norms[static_cast<std::size_t>(k - 1)])
                            .epsilon(1e-12));
        }
    }
}

TEST_CASE("a shorter iteration cap yields a prefix of the longer run") {
    const auto m = gaussian(14, 30, 21);
    const Vec y = noisy_observation(*m, 3, 20.0, 22);
    for (Algorithm alg : {Algorithm::Omp, Algorithm::Ols}) {
        const PursuitTrace full =
            run_pursuit(m, y, alg, KMax::explicit_value(5, 14), Exec::Serial);
        for (int cap : {1, 2, 3}) {
            const PursuitTrace part =
                run_pursuit(m, y, alg, KMax::explicit_value(cap, 14), Exec::Serial);
            REQUIRE(part.k_reached() == cap);
            for (int k = 0; k <= cap; ++k) {
                CHECK(part.supports[static_cast<std::size_t>(k)] ==
                      full.supports[static_cast<std::size_t>(k)]);
                CHECK(part.residual_norms[static_cast<std::size_t>(k)] ==
                      full.residual_norms[static_cast<std::size_t>(k)]);
            }
        }
    }
}

TEST_CASE("both algorithms agree on the first selection") {
    // identical by construction: the first OLS gain reduces to the squared
    // correlation because every column has unit norm
    for (std::uint64_t seed : {31u, 32u, 33u}) {
        const auto m = gaussian(12, 28, seed);
        const Vec y = noisy_observation(*m, 2, 12.0, seed + 7);
        const PursuitTrace a = run_pursuit(m, y, Algorithm::Omp,
                                           KMax::explicit_value(1, 12), Exec::Serial);
        const PursuitTrace b = run_pursuit(m, y, Algorithm::Ols,
                                           KMax::explicit_value(1, 12), Exec::Serial);
        CHECK(a.supports[1] == b.supports[1]);
    }
}

TEST_CASE("serial and parallel execution produce bitwise identical traces") {
    const auto m = gaussian(32, 900, 77);  // wide enough to cross the kernel cutoff
    const Vec y = noisy_observation(*m, 5, 15.0, 78);
    for (Algorithm alg : {Algorithm::Omp, Algorithm::Ols}) {
        const PursuitTrace s = run_pursuit(m, y, alg, KMax::defaults(32), Exec::Serial);
        const PursuitTrace p = run_pursuit(m, y, alg, KMax::defaults(32), Exec::Parallel);
        REQUIRE(s.k_reached() == p.k_reached());
        CHECK(s.termination == p.termination);
        for (int k = 0; k <= s.k_reached(); ++k) {
            CHECK(s.supports[static_cast<std::size_t>(k)] ==
                  p.supports[static_cast<std::size_t>(k)]);
            CHECK(s.residual_norms[static_cast<std::size_t>(k)] ==
                  p.residual_norms[static_cast<std::size_t>(k)]);  // exact
        }
    }
}

TEST_CASE("selection order is invariant to the observation scale") {
    const auto m = gaussian(12, 26, 41);
    const Vec y = noisy_observation(*m, 3, 18.0, 42);
    const PursuitTrace base = run_pursuit(m, y, Algorithm::Omp, KMax::defaults(12),
                                          Exec::Serial);
    for (double c : {0.1, 100.0}) {
        const PursuitTrace scaled = run_pursuit(m, Vec(c * y), Algorithm::Omp,
                                                KMax::defaults(12), Exec::Serial);
        REQUIRE(scaled.k_reached() == base.k_reached());
        CHECK(scaled.supports.back() == base.supports.back());
        for (int k = 1; k <= base.k_reached(); ++k)
            CHECK(scaled.rr_at(k) == doctest::Approx(base.rr_at(k)).epsilon(1e-12));
    }
}

TEST_CASE("an exactly representable observation terminates with a zero residual") {
    const auto m = std::make_shared<SensingMatrix>(gen_identity_hadamard(8));
    Vec y = m->col(3) * 2.0;  // one standard-basis column, one step to zero
    const PursuitTrace t =
        run_pursuit(m, y, Algorithm::Omp, KMax::defaults(8), Exec::Serial);
    CHECK(t.termination == Termination::ResidualZero);
    CHECK(t.k_reached() == 1);
    CHECK(t.supports[1] == std::vector<int>{3});
    CHECK(t.residual_norms[1] <= kResidualZeroTol * y.norm());
}

TEST_CASE("rank collapse ends the pursuit differently per algorithm") {
    // two columns, then only exact duplicates remain
    SensingMatrix raw;
    raw.data.resize(4, 4);
    raw.data.col(0) << 1, 0, 0, 0;
    raw.data.col(1) << 0, 1, 0, 0;
    raw.data.col(2) << 1, 0, 0, 0;  // duplicate of 0
    raw.data.col(3) << 0, 1, 0, 0;  // duplicate of 1
    const auto m = std::make_shared<SensingMatrix>(raw);
    Vec y(4);
    y << 3, 2, 1, 1;  // unreachable tail keeps the residual nonzero

    const PursuitTrace omp =
        run_pursuit(m, y, Algorithm::Omp, KMax::explicit_value(4, 4), Exec::Serial);
    CHECK(omp.termination == Termination::RankDeficient);
    CHECK(omp.k_reached() == 2);

    const PursuitTrace ols =
        run_pursuit(m, y, Algorithm::Ols, KMax::explicit_value(4, 4), Exec::Serial);
    CHECK(ols.termination == Termination::RankDeficient);
    CHECK(ols.k_reached() == 2);  // skips the duplicates, then runs dry
}

TEST_CASE("iteration caps and inputs are validated") {
    const auto m = gaussian(10, 20, 5);
    CHECK(KMax::defaults(10).value == 5);
    CHECK(KMax::defaults(11).value == 6);
    CHECK_THROWS_AS(KMax::explicit_value(0, 10), ArgumentError);
    CHECK_THROWS_AS(KMax::explicit_value(11, 10), ArgumentError);
    CHECK_THROWS_AS(
        run_pursuit(m, Vec::Zero(10), Algorithm::Omp, KMax::defaults(10), Exec::Serial),
        ZeroVector);
    CHECK_THROWS_AS(algorithm_from_string("neither"), ArgumentError);
    CHECK(to_string(Algorithm::Omp) == "omp");
    CHECK(to_string(Algorithm::Ols) == "ols");
    CHECK(algorithm_from_string("ols") == Algorithm::Ols);
}

TEST_CASE("trace serialization carries the full run record") {
    const auto m = gaussian(8, 16, 61);
    const Vec y = noisy_observation(*m, 2, 20.0, 62);
    const PursuitTrace t =
        run_pursuit(m, y, Algorithm::Ols, KMax::explicit_value(3, 8), Exec::Serial);
    const nlohmann::json j = nlohmann::json::parse(trace_to_json(t));
    CHECK(j.at("algorithm") == "ols");
    CHECK(j.at("termination") == "reached_kmax");
    REQUIRE(j.at("supports").size() == static_cast<std::size_t>(t.k_reached()) + 1);
    CHECK(j.at("supports")[0].empty());
    CHECK(j.at("residual_norms").size() == j.at("supports").size());
    CHECK(j.at("rr").size() == static_cast<std::size_t>(t.k_reached()));
    CHECK(j.at("residual_norms")[0].get<double>() == doctest::Approx(y.norm()));
}
