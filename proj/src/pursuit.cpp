#include "igpkit/pursuit.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "igpkit/kernels.hpp"

namespace igp {

std::string to_string(Algorithm a) { return a == Algorithm::Omp ? "omp" : "ols"; }

Algorithm algorithm_from_string(const std::string& s) {
    if (s == "omp") return Algorithm::Omp;
    if (s == "ols") return Algorithm::Ols;
    throw ArgumentError("unknown algorithm '" + s + "' (expected omp or ols)");
}

std::string to_string(Termination t) {
    switch (t) {
        case Termination::ReachedKmax: return "reached_kmax";
        case Termination::ResidualZero: return "residual_zero";
        case Termination::RankDeficient: return "rank_deficient";
    }
    return "?";
}

KMax KMax::defaults(int n) {
    if (n < 1) throw BadDims("kmax: n must be >= 1");
    return KMax{(n + 1) / 2};
}

KMax KMax::explicit_value(int v, int n) {
    if (v < 1 || v > n) throw BadDims("kmax must satisfy 1 <= kmax <= n");
    return KMax{v};
}

std::string trace_to_json(const PursuitTrace& trace) {
    nlohmann::json j;
    j["algorithm"] = to_string(trace.algorithm);
    j["supports"] = trace.supports;
    j["residual_norms"] = trace.residual_norms;
    j["rr"] = trace.rr;
    j["termination"] = to_string(trace.termination);
    return j.dump(2);
}

int select_next_omp(const SensingMatrix& m, const ProjectionState& state, Exec exec) {
    const int p = m.p();
    std::vector<double> corr(static_cast<std::size_t>(p));
    colwise_dot(m.data.data(), m.n(), p, state.residual.data(), corr.data(), exec);
    std::vector<unsigned char> mask(static_cast<std::size_t>(p), 0);
    for (int t : state.support) mask[static_cast<std::size_t>(t)] = 1;
    return argmax_abs_masked(corr.data(), p, mask.data());
}

namespace {

// Shared by select_next_ols (which deflates candidates on the fly) and the
// in-run fast path (which keeps a deflated copy of the matrix). Given per
// candidate the deflated correlation c_t = b_t' r and squared norm ||b_t||^2,
// picks the admissible candidate maximizing c_t^2 / ||b_t||^2; the smallest
// index wins ties. Rank-deficient candidates (||b_t|| <= kRankTol) are
// skipped.
int pick_ols_candidate(const std::vector<double>& corr, const std::vector<double>& norm2,
                       const std::vector<unsigned char>& mask) {
    const int p = static_cast<int>(corr.size());
    int best = -1;
    double bestgain = -1.0;
    for (int j = 0; j < p; ++j) {
        if (mask[static_cast<std::size_t>(j)]) continue;
        if (norm2[static_cast<std::size_t>(j)] <= kRankTol * kRankTol) continue;
        const double c = corr[static_cast<std::size_t>(j)];
        const double gain = c * c / norm2[static_cast<std::size_t>(j)];
        if (gain > bestgain) {
            bestgain = gain;
            best = j;
        }
    }
    return best;
}

}  // namespace

int select_next_ols(const SensingMatrix& m, const ProjectionState& state, Exec exec) {
    const int n = m.n();
    const int p = m.p();
    const int k = static_cast<int>(state.support.size());
    std::vector<unsigned char> mask(static_cast<std::size_t>(p), 0);
    for (int t : state.support) mask[static_cast<std::size_t>(t)] = 1;

    std::vector<double> corr(static_cast<std::size_t>(p), 0.0);
    std::vector<double> norm2(static_cast<std::size_t>(p), 0.0);
    std::vector<double> coef(static_cast<std::size_t>(std::max(k, 1)));
    Vec b(n);
    for (int j = 0; j < p; ++j) {
        if (mask[static_cast<std::size_t>(j)]) continue;
        b = m.col(j);
        if (k > 0) {
            basis_dots(state.basis.data(), n, k, b.data(), coef.data(), exec);
            subtract_projection(b.data(), n, state.basis.data(), k, coef.data(), exec);
        }
        norm2[static_cast<std::size_t>(j)] = b.squaredNorm();
        corr[static_cast<std::size_t>(j)] = b.dot(state.residual);
    }
    return pick_ols_candidate(corr, norm2, mask);
}

namespace {

struct OlsScratch {
    // Row-major copy of the matrix, progressively deflated against the
    // orthonormal basis. Column j equals (I - P_J) x_j throughout.
    RowMajorMatrix B;
    std::vector<double> corr, norm2, tmp;
};

int select_from_scratch(const OlsScratch& s, const std::vector<unsigned char>& mask,
                        const Vec& residual, int n, int p, Exec exec,
                        std::vector<double>& corr, std::vector<double>& norm2) {
    colwise_dot_and_norm2(s.B.data(), n, p, residual.data(), corr.data(), norm2.data(), exec);
    return pick_ols_candidate(corr, norm2, mask);
}

}  // namespace

PursuitTrace run_pursuit(std::shared_ptr<const SensingMatrix> m, const Vec& y, Algorithm alg,
                         KMax kmax, Exec exec) {
    const SensingMatrix& X = *m;
    const int n = X.n();
    const int p = X.p();
    if (y.size() != n) throw BadDims("run_pursuit: y length does not match matrix rows");
    if (kmax.value < 1 || kmax.value > n) throw BadDims("run_pursuit: invalid kmax");
    const double ynorm = y.norm();
    if (ynorm <= 0.0) throw ZeroVector("run_pursuit: observation has zero norm");

    PursuitTrace trace;
    trace.algorithm = alg;
    trace.matrix = m;
    trace.y = y;
    trace.supports.push_back({});
    trace.residual_norms.push_back(ynorm);
    trace.termination = Termination::ReachedKmax;

    ProjectionState state = make_projection_state(y);

    OlsScratch scratch;
    std::vector<unsigned char> mask(static_cast<std::size_t>(p), 0);
    if (alg == Algorithm::Ols) {
        scratch.B = X.data;
        scratch.corr.resize(static_cast<std::size_t>(p));
        scratch.norm2.resize(static_cast<std::size_t>(p));
        scratch.tmp.resize(static_cast<std::size_t>(p));
    }

    const int limit = std::min(kmax.value, p);
    for (int k = 1; k <= limit; ++k) {
        if (state.residual_norm <= kResidualZeroTol * ynorm) {
            trace.termination = Termination::ResidualZero;
            return trace;
        }

        bool extended = false;
        while (!extended) {
            int t = -1;
            if (alg == Algorithm::Omp) {
                t = select_next_omp(X, state, exec);
            } else {
                t = select_from_scratch(scratch, mask, state.residual, n, p, exec,
                                        scratch.corr, scratch.norm2);
            }
            if (t < 0) {
                trace.termination = Termination::RankDeficient;
                return trace;
            }
            try {
                state = project_extend(X, state, t, exec);
                extended = true;
                mask[static_cast<std::size_t>(t)] = 1;
                if (alg == Algorithm::Ols) {
                    // push the new basis direction out of every column
                    const double* q = state.basis.col(state.basis.cols() - 1).data();
                    colwise_dot(scratch.B.data(), n, p, q, scratch.tmp.data(), exec);
                    deflate_columns(scratch.B.data(), n, p, q, scratch.tmp.data(), exec);
                }
            } catch (const RankDeficientError&) {
                if (alg == Algorithm::Omp) {
                    trace.termination = Termination::RankDeficient;
                    return trace;
                }
                // the least-squares rule skips dependent candidates
                mask[static_cast<std::size_t>(t)] = 1;
            }
        }

        trace.supports.push_back(state.support);
        trace.residual_norms.push_back(state.residual_norm);
        const double prev = trace.residual_norms[static_cast<std::size_t>(k) - 1];
        trace.rr.push_back(std::min(state.residual_norm / prev, 1.0));
    }
    return trace;
}

PursuitTrace run_pursuit(const SensingMatrix& m, const Vec& y, Algorithm alg, KMax kmax,
                         Exec exec) {
    return run_pursuit(std::make_shared<SensingMatrix>(m), y, alg, kmax, exec);
}

}  // namespace igp
