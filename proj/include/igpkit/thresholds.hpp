#pragma once

#include <string>

#include "igpkit/pursuit.hpp"

namespace igp {

enum class ThresholdKind { Analytic, Trained };

struct ThresholdSpec {
    ThresholdKind kind = ThresholdKind::Analytic;
    int n = 0;
    int p = 0;
    int kmax = 0;
    double value = 0.0;
    // analytic parameters
    double alpha = 0.0;
    // training parameters
    Algorithm algorithm = Algorithm::Omp;
    int ntr = 0;
    std::uint64_t seed = 0;
};

// Signal- and noise-oblivious residual-ratio threshold with familywise
// false-alarm level alpha:
//   value = min_{1<=k<=kmax} sqrt( Finv_{(n-k)/2, 1/2}( alpha / (kmax (p - k + 1)) ) )
// where Finv is the Beta quantile. Requires kmax <= n - 1 (so every shape
// parameter is positive), kmax <= p, alpha in (0, 1).
ThresholdSpec gamma_rrt_alpha(int n, int p, int kmax, double alpha);

// Noise-assisted trained lower bound: ntr pure-noise designs
// (X ~ Gaussian with unit columns, y ~ N(0, I_n)), each run to the default
// kmax; the value is the smallest residual ratio seen anywhere. Streams are
// derived per run index, so enlarging ntr with the same seed only deepens
// the minimum. matrix_kind selects the training design; Gaussian redraw is
// the default, identity_hadamard uses the fixed [I, H] design.
enum class TrainingDesign { Gaussian, IdentityHadamard };

ThresholdSpec train_gamma_lb(int n, int p, int ntr, Algorithm alg, std::uint64_t seed,
                             Exec exec = Exec::Serial,
                             TrainingDesign design = TrainingDesign::Gaussian);

// JSON sidecar cache keyed "n:p:alg:ntr:seed". Lookup misses compute and
// persist. A missing file is an empty cache.
class ThresholdCache {
public:
    explicit ThresholdCache(std::string path);
    ThresholdSpec get_or_train(int n, int p, int ntr, Algorithm alg, std::uint64_t seed,
                               Exec exec = Exec::Serial);

private:
    std::string path_;
};

}  // namespace igp
