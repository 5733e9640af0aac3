#pragma once

#include <string>
#include <vector>

#include "igpkit/pursuit.hpp"

namespace igp {

enum class Selector { Tf, Rrt, OracleK0, OracleSigma, OracleEps };

std::string to_string(Selector s);
Selector selector_from_string(const std::string& s);

enum class SelectorFlag { NoThresholdCrossing };

// Chosen model order plus everything derived from it. beta_hat is the
// length-p least-squares refit on the chosen support (all zeros when
// k_hat == 0).
struct SelectorResult {
    Selector selector = Selector::Tf;
    int k_hat = 0;
    std::vector<int> support;  // selection order, first k_hat picks
    Vec beta_hat;
    std::vector<SelectorFlag> flags;

    bool has_flag(SelectorFlag f) const;
};

std::string result_to_json(const SelectorResult& r);

// Smallest residual ratio: k_hat = argmin_k RR(k), smallest k on ties.
// Requires at least one recorded iteration.
SelectorResult select_tf(const PursuitTrace& trace);

// Last threshold crossing: k_hat = max{k : RR(k) < gamma_lb} (strict).
// No crossing selects k_hat = 0 and sets NoThresholdCrossing.
SelectorResult select_rrt(const PursuitTrace& trace, double gamma_lb);

// Known sparsity: k_hat = k0. k0 may be 0; k0 > k_reached raises
// K0ExceedsTrace.
SelectorResult select_oracle_k0(const PursuitTrace& trace, int k0);

// Known noise level: first k with ||r^(k)|| <= sigma * sqrt(n + 2 sqrt(n ln n)).
// Falls back to k_reached with NoThresholdCrossing when never satisfied.
SelectorResult select_oracle_sigma(const PursuitTrace& trace, double sigma);

// Known noise bound: first k with ||r^(k)|| <= eps2, same fallback.
SelectorResult select_oracle_eps(const PursuitTrace& trace, double eps2);

// The residual threshold used by the sigma rule (natural logarithm).
double sigma_stop_threshold(double sigma, int n);

}  // namespace igp
