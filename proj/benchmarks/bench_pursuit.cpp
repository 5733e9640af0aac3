// Timing harness: dense-refit reference vs incremental pursuit, serial vs
// parallel kernels. Also reports the largest observed divergence between the
// paths (the kernels are written so serial and parallel agree bitwise).

#include <cstdio>
#include <cstring>
#include <omp.h>
#include <string>
#include <vector>

#include "igpkit/problems.hpp"
#include "igpkit/pursuit.hpp"
#include "igpkit/reference.hpp"

using namespace igp;

namespace {

struct Timed {
    double seconds = 0.0;
    PursuitTrace trace;
};

template <typename F>
Timed time_run(F&& f, int reps) {
    Timed out;
    // warm-up run, also the trace we keep
    out.trace = f();
    const double t0 = omp_get_wtime();
    for (int i = 0; i < reps; ++i) (void)f();
    out.seconds = (omp_get_wtime() - t0) / reps;
    return out;
}

double trace_max_diff(const PursuitTrace& a, const PursuitTrace& b) {
    double worst = 0.0;
    const std::size_t m = std::min(a.residual_norms.size(), b.residual_norms.size());
    if (a.residual_norms.size() != b.residual_norms.size()) worst = 1.0;
    for (std::size_t i = 0; i < m; ++i)
        worst = std::max(worst, std::abs(a.residual_norms[i] - b.residual_norms[i]));
    for (std::size_t k = 1; k < std::min(a.supports.size(), b.supports.size()); ++k)
        if (a.supports[k] != b.supports[k]) worst = std::max(worst, 1.0);
    return worst;
}

}  // namespace

int main(int argc, char** argv) {
    int n = 256, p = 1024, k0 = 24, reps = 3, threads = omp_get_max_threads();
    for (int i = 1; i < argc; ++i) {
        auto want = [&](const char* flag) {
            return std::strcmp(argv[i], flag) == 0 && i + 1 < argc;
        };
        if (want("--n")) n = std::atoi(argv[++i]);
        else if (want("--p")) p = std::atoi(argv[++i]);
        else if (want("--k0")) k0 = std::atoi(argv[++i]);
        else if (want("--reps")) reps = std::atoi(argv[++i]);
        else if (want("--threads")) threads = std::atoi(argv[++i]);
        else {
            std::fprintf(stderr, "usage: %s [--n N] [--p P] [--k0 K] [--reps R] [--threads T]\n",
                         argv[0]);
            return 2;
        }
    }
    omp_set_num_threads(threads);

    Rng rng(0xB0B5);
    Rng rng_m = rng.derive(1), rng_s = rng.derive(2), rng_w = rng.derive(3);
    auto matrix = std::make_shared<SensingMatrix>(gen_gaussian_matrix(n, p, rng_m));
    const SparseSignal sig = gen_signal(p, k0, UniformSignValues{}, RandomSupport{}, rng_s);
    const NoisySystem sys = make_noisy_system(*matrix, sig, 20.0, NoiseModel::Gaussian, rng_w);

    std::printf("pursuit benchmark  n=%d p=%d k0=%d snr=20dB reps=%d threads=%d\n", n, p, k0,
                reps, threads);

    for (Algorithm alg : {Algorithm::Omp, Algorithm::Ols}) {
        const KMax kmax = KMax::defaults(n);
        const Timed serial = time_run(
            [&] { return run_pursuit(matrix, sys.y, alg, kmax, Exec::Serial); }, reps);
        const Timed parallel = time_run(
            [&] { return run_pursuit(matrix, sys.y, alg, kmax, Exec::Parallel); }, reps);
        // the dense reference refits from scratch every step; keep it to small reps
        const Timed dense = time_run(
            [&] { return reference::run(*matrix, sys.y, alg, kmax); }, 1);

        const double d_sp = trace_max_diff(serial.trace, parallel.trace);
        const double d_ref = trace_max_diff(serial.trace, dense.trace);
        std::printf("%s  incremental serial %8.4f s | parallel %8.4f s (x%.2f) | dense ref %8.4f s\n",
                    to_string(alg).c_str(), serial.seconds, parallel.seconds,
                    serial.seconds / parallel.seconds, dense.seconds);
        std::printf("      max |serial - parallel| = %.3g (expect 0), max |serial - dense| = %.3g\n",
                    d_sp, d_ref);
    }
    return 0;
}
