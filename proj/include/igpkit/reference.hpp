#pragma once

#include "igpkit/pursuit.hpp"

namespace igp {
// Deliberately naive re-implementations used as ground truth in tests and as
// the baseline in the kernel benchmark. Each step refits the whole support
// by dense QR and recomputes the residual from scratch; candidate scans try
// every column with a full projection. Independent of the incremental code
// paths in pursuit.cpp / linalg.cpp.
namespace reference {

// Residual of the dense least-squares fit of y on the given columns.
Vec dense_residual(const SensingMatrix& m, const std::vector<int>& support, const Vec& y);

// argmax_t |x_t' r| by direct evaluation, smallest index on ties.
int pick_omp(const SensingMatrix& m, const std::vector<int>& support, const Vec& r);

// argmin_t ||y - proj_{support+t}(y)|| by refitting per candidate; skips
// candidates that do not enlarge the span. Smallest index on ties.
int pick_ols(const SensingMatrix& m, const std::vector<int>& support, const Vec& y);

// Full pursuit built from the pieces above, recording the same trace shape
// as run_pursuit.
PursuitTrace run(const SensingMatrix& m, const Vec& y, Algorithm alg, KMax kmax);

}  // namespace reference
}  // namespace igp
