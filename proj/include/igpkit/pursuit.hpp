#pragma once

#include <memory>
#include <string>
#include <vector>

#include "igpkit/linalg.hpp"

namespace igp {

enum class Algorithm { Omp, Ols };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);

enum class Termination { ReachedKmax, ResidualZero, RankDeficient };

std::string to_string(Termination t);

// Iteration cap. The default floor((n + 1) / 2) keeps every residual ratio's
// Beta parameter (n - k) / 2 comfortably positive.
struct KMax {
    int value = 0;
    static KMax defaults(int n);
    static KMax explicit_value(int v, int n);
};

// Record of one pursuit run out to k_reached iterations.
//   supports[k]       support after k iterations, in selection order (|.| == k)
//   residual_norms[k] ||r^(k)||_2, entry 0 is ||y||_2
//   rr[k-1]           RR(k) = residual_norms[k] / residual_norms[k-1], in (0, 1]
// The matrix and observation are carried along (not serialized) so selectors
// can produce coefficient estimates from the trace alone.
struct PursuitTrace {
    Algorithm algorithm = Algorithm::Omp;
    std::vector<std::vector<int>> supports;
    std::vector<double> residual_norms;
    std::vector<double> rr;
    Termination termination = Termination::ReachedKmax;
    std::shared_ptr<const SensingMatrix> matrix;
    Vec y;

    int k_reached() const { return static_cast<int>(rr.size()); }
    double rr_at(int k) const { return rr.at(static_cast<std::size_t>(k) - 1); }
    const std::vector<int>& support_at(int k) const {
        return supports.at(static_cast<std::size_t>(k));
    }
};

// JSON with fields: algorithm, supports, residual_norms, rr, termination.
std::string trace_to_json(const PursuitTrace& trace);

// Next index for the max-correlation rule: argmax over admissible t of
// |<x_t, residual>|, ties to the smallest index.
int select_next_omp(const SensingMatrix& m, const ProjectionState& state, Exec exec = Exec::Serial);

// Next index for the least-squares rule: argmin over admissible t of
// ||(I - P_{J u t}) y||_2 via the residual-gain identity
//   ||(I - P_{J u t}) y||^2 = ||r||^2 - (b_t' r)^2 / ||b_t||^2,  b_t = (I - P_J) x_t.
// Candidates whose deflated column norm is <= kRankTol are skipped. Returns
// -1 when every remaining column is numerically in the span of the support.
int select_next_ols(const SensingMatrix& m, const ProjectionState& state, Exec exec = Exec::Serial);

// Runs the incremental greedy pursuit out to kmax iterations, stopping early
// (before the residual is numerically zero, or when the support cannot be
// extended) and recording the trace. Requires ||y|| > 0.
PursuitTrace run_pursuit(std::shared_ptr<const SensingMatrix> m, const Vec& y,
                         Algorithm alg, KMax kmax, Exec exec = Exec::Serial);
PursuitTrace run_pursuit(const SensingMatrix& m, const Vec& y, Algorithm alg, KMax kmax,
                         Exec exec = Exec::Serial);

}  // namespace igp
