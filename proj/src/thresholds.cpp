#include "igpkit/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>

#include "igpkit/betafn.hpp"
#include "igpkit/problems.hpp"
#include "igpkit/rng.hpp"

namespace igp {

ThresholdSpec gamma_rrt_alpha(int n, int p, int kmax, double alpha) {
    if (kmax < 1 || kmax > n - 1)
        throw BadDims("gamma_rrt_alpha: need 1 <= kmax <= n - 1");
    if (p < kmax) throw BadDims("gamma_rrt_alpha: need p >= kmax");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ArgumentError("gamma_rrt_alpha: alpha must lie in (0, 1)");

    double best = 2.0;
    for (int k = 1; k <= kmax; ++k) {
        const double a = 0.5 * (n - k);
        const double q = alpha / (static_cast<double>(kmax) * (p - k + 1));
        const double x = beta_inv_cdf(a, 0.5, q);
        best = std::min(best, std::sqrt(x));
    }

    ThresholdSpec spec;
    spec.kind = ThresholdKind::Analytic;
    spec.n = n;
    spec.p = p;
    spec.kmax = kmax;
    spec.alpha = alpha;
    spec.value = best;
    return spec;
}

ThresholdSpec train_gamma_lb(int n, int p, int ntr, Algorithm alg, std::uint64_t seed,
                             Exec exec, TrainingDesign design) {
    if (n < 2 || p < 1) throw BadDims("train_gamma_lb: need n >= 2, p >= 1");
    if (ntr < 1) throw ArgumentError("train_gamma_lb: need ntr >= 1");

    const KMax kmax = KMax::defaults(n);
    const Rng base = Rng(seed).derive(kStreamTraining);

    std::shared_ptr<const SensingMatrix> fixed;
    if (design == TrainingDesign::IdentityHadamard) {
        if (2 * n != p) throw BadDims("train_gamma_lb: identity_hadamard needs p == 2n");
        fixed = std::make_shared<SensingMatrix>(gen_identity_hadamard(n));
    }

    // Each run s has its own derived stream, so the set of runs {1..ntr} is a
    // prefix of the set for any larger ntr and the min can only decrease.
    std::vector<double> per_run(static_cast<std::size_t>(ntr), 2.0);
    const bool par = exec == Exec::Parallel;
#pragma omp parallel for schedule(dynamic) if (par)
    for (int s = 0; s < ntr; ++s) {
        Rng rng = base.derive(static_cast<std::uint64_t>(s));
        std::shared_ptr<const SensingMatrix> X = fixed;
        if (!X) X = std::make_shared<SensingMatrix>(gen_gaussian_matrix(n, p, rng));
        Vec y(n);
        for (int i = 0; i < n; ++i) y[i] = rng.normal();
        const PursuitTrace tr = run_pursuit(X, y, alg, kmax, Exec::Serial);
        double m = 2.0;
        for (double v : tr.rr) m = std::min(m, v);
        per_run[static_cast<std::size_t>(s)] = m;
    }

    double best = 2.0;
    for (double v : per_run) best = std::min(best, v);

    ThresholdSpec spec;
    spec.kind = ThresholdKind::Trained;
    spec.n = n;
    spec.p = p;
    spec.kmax = kmax.value;
    spec.algorithm = alg;
    spec.ntr = ntr;
    spec.seed = seed;
    spec.value = best;
    return spec;
}

namespace {

std::string cache_key(int n, int p, Algorithm alg, int ntr, std::uint64_t seed) {
    return std::to_string(n) + ":" + std::to_string(p) + ":" + to_string(alg) + ":" +
           std::to_string(ntr) + ":" + std::to_string(seed);
}

}  // namespace

ThresholdCache::ThresholdCache(std::string path) : path_(std::move(path)) {}

ThresholdSpec ThresholdCache::get_or_train(int n, int p, int ntr, Algorithm alg,
                                           std::uint64_t seed, Exec exec) {
    nlohmann::json j = nlohmann::json::object();
    {
        std::ifstream in(path_);
        if (in) {
            try {
                in >> j;
            } catch (const nlohmann::json::exception&) {
                throw ParseError(path_ + ": not valid JSON");
            }
            if (!j.is_object()) throw ParseError(path_ + ": cache root must be an object");
        }
    }

    const std::string key = cache_key(n, p, alg, ntr, seed);
    if (j.contains(key)) {
        ThresholdSpec spec;
        spec.kind = ThresholdKind::Trained;
        spec.n = n;
        spec.p = p;
        spec.kmax = KMax::defaults(n).value;
        spec.algorithm = alg;
        spec.ntr = ntr;
        spec.seed = seed;
        spec.value = j.at(key).get<double>();
        return spec;
    }

    ThresholdSpec spec = train_gamma_lb(n, p, ntr, alg, seed, exec);
    j[key] = spec.value;
    std::ofstream out(path_);
    if (!out) throw DataError("cannot write threshold cache " + path_);
    out << j.dump(2) << '\n';
    return spec;
}

}  // namespace igp
