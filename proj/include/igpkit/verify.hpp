#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "igpkit/problems.hpp"
#include "igpkit/pursuit.hpp"

namespace igp {

// --- restricted isometry, exhaustive ---------------------------------------

struct RicEstimate {
    int k = 0;
    double delta = 0.0;
    std::uint64_t subsets_checked = 0;
};

inline constexpr std::uint64_t kDefaultSubsetBudget = 2'000'000;

// delta_k by enumerating every size-k support: the largest deviation of a
// Gram eigenvalue from 1. Size-k subsets dominate smaller ones, so only the
// exact size is enumerated. Raises BudgetExceeded (with the required count)
// when C(p, k) exceeds the budget.
RicEstimate ric_bruteforce(const SensingMatrix& m, int k,
                           std::uint64_t budget = kDefaultSubsetBudget,
                           Exec exec = Exec::Serial);

// C(p, k) saturated at 2^63.
std::uint64_t binomial_saturated(int p, int k);

// --- closed-form recovery guarantees ----------------------------------------

struct GuaranteeReport {
    // echoed inputs
    double delta_ksup = 0.0;
    double beta_min = 0.0;
    double beta_max = 0.0;
    double gamma = 0.0;
    double gamma_lb = 0.0;
    double delta_k0plus1 = 0.0;
    int k0 = 0;

    // noise-norm thresholds under which support recovery is guaranteed
    double eps_sig = 0.0;
    double eps_x = 0.0;
    double eps_rrt = 0.0;
    std::optional<double> eps_exact;  // empty when the RIP premise fails
    bool rip_violated = false;

    // excess-SNR bounds for the oblivious selectors
    double snr_excess_rrt_bound = 0.0;
    double snr_excess_sig_bound = 0.0;
};

GuaranteeReport guarantee_thresholds(double delta_ksup, double beta_min, double beta_max,
                                     double gamma, double gamma_lb, double delta_k0plus1,
                                     int k0);

// Residual-error floor when the known-sparsity rule misses an index, given
// exact isometry constants at orders k0 and min(2 k0, p):
//   (1 - delta_2k0 / (1 - delta_k0)) beta_min - eps2 / sqrt(1 - delta_k0)
double eq_floor_lower_bound(double delta_k0, double delta_2k0, double beta_min, double eps2);

// --- distributional conformance ---------------------------------------------

struct BetaLawCheck {
    int k = 0;
    int samples = 0;
    double ks_stat = 0.0;
    double ks_critical_1pct = 0.0;
    double sample_mean = 0.0;
    double expected_mean = 0.0;
};

// Squared residual-ratio samples under pure noise with projections fixed a
// priori (nested coordinate projections), tested against Beta((n-k)/2, 1/2)
// with a one-sample Kolmogorov-Smirnov statistic. Critical value pinned at
// 1.63 / sqrt(samples) (the classic 1% point).
std::vector<BetaLawCheck> beta_law_conformance(int n, const std::vector<int>& k_list,
                                               int samples, std::uint64_t seed);

// One-sample KS distance between sorted data and a cdf callable.
double ks_statistic(std::vector<double> samples, double (*cdf)(double a, double b, double x),
                    double a, double b);

// --- end-to-end sufficiency check -------------------------------------------

struct Counterexample {
    int trial = 0;
    std::string selector;
    int k_hat = 0;
    std::vector<int> support_found;
};

struct SufficiencyReport {
    int k0 = 0;
    double delta_k0 = 0.0;
    double delta_k0plus1 = 0.0;
    bool premise_rip_ok = false;  // delta_{k0+1} < 1/sqrt(k0+1)
    double gamma_measured = 0.0;
    int gamma_runs = 0;
    GuaranteeReport guarantees;
    double eps_tf_max = 0.0;   // min(eps_exact, eps_sig, eps_x)
    double eps_rrt_max = 0.0;  // min(eps_exact, eps_rrt)
    double eps2 = 0.0;
    bool applicable = false;  // eps2 below both thresholds and premise holds
    int trials = 0;
    int failures_tf = 0;
    int failures_rrt = 0;
    std::vector<Counterexample> counterexamples;
};

// Measures the matrix's own residual-ratio infimum by noise-only runs, brute
// forces the isometry constants, evaluates the guarantee thresholds, then
// runs bounded-noise trials at noise radius eps2 = eps2_scale * min(thresholds)
// and reports every trial where the smallest-ratio or last-crossing selector
// misses the true support. When the thresholds do not apply the trials still
// run but the report is informative only (applicable == false).
SufficiencyReport verify_sufficient_recovery(const SensingMatrix& m, const SparseSignal& signal,
                                             double eps2_scale, int trials, int gamma_runs,
                                             std::uint64_t seed,
                                             std::uint64_t budget = kDefaultSubsetBudget,
                                             Exec exec = Exec::Serial);

std::string sufficiency_to_json(const SufficiencyReport& r);
std::string ric_to_json(const RicEstimate& r);

}  // namespace igp
