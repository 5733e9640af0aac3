#include "igpkit/verify.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <json.hpp>

#include "igpkit/betafn.hpp"
#include "igpkit/selectors.hpp"

namespace igp {

std::uint64_t binomial_saturated(int p, int k) {
    if (k < 0 || k > p) return 0;
    k = std::min(k, p - k);
    unsigned __int128 acc = 1;
    for (int i = 1; i <= k; ++i) {
        acc = acc * static_cast<unsigned>(p - k + i) / static_cast<unsigned>(i);
        if (acc > (static_cast<unsigned __int128>(1) << 63))
            return 1ull << 63;
    }
    return static_cast<std::uint64_t>(acc);
}

namespace {

// rank -> lexicographic size-k combination of {0..p-1}
std::vector<int> unrank_combination(std::uint64_t rank, int p, int k) {
    std::vector<int> c(static_cast<std::size_t>(k));
    int v = 0;
    for (int i = 0; i < k; ++i) {
        while (true) {
            const std::uint64_t block = binomial_saturated(p - v - 1, k - i - 1);
            if (rank < block) break;
            rank -= block;
            ++v;
        }
        c[static_cast<std::size_t>(i)] = v;
        ++v;
    }
    return c;
}

// lexicographic successor, returns false after the last combination
bool next_combination(std::vector<int>& c, int p) {
    const int k = static_cast<int>(c.size());
    for (int i = k - 1; i >= 0; --i) {
        if (c[static_cast<std::size_t>(i)] < p - k + i) {
            ++c[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < k; ++j)
                c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j) - 1] + 1;
            return true;
        }
    }
    return false;
}

double gram_deviation(const SensingMatrix& m, const std::vector<int>& subset,
                      Eigen::MatrixXd& gram) {
    const int k = static_cast<int>(subset.size());
    for (int a = 0; a < k; ++a) {
        for (int b = a; b < k; ++b) {
            const double v = m.data.col(subset[static_cast<std::size_t>(a)])
                                 .dot(m.data.col(subset[static_cast<std::size_t>(b)]));
            gram(a, b) = v;
            gram(b, a) = v;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram.topLeftCorner(k, k),
                                                      Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues().minCoeff();
    const double lmax = es.eigenvalues().maxCoeff();
    return std::max(lmax - 1.0, 1.0 - lmin);
}

}  // namespace

RicEstimate ric_bruteforce(const SensingMatrix& m, int k, std::uint64_t budget, Exec exec) {
    const int p = m.p();
    if (k < 1 || k > p) throw BadDims("ric_bruteforce: need 1 <= k <= p");
    const std::uint64_t total = binomial_saturated(p, k);
    if (total > budget) throw BudgetExceeded(total, budget);

    const bool par = exec == Exec::Parallel && total > 64;
    const int chunks = par ? 64 : 1;
    std::vector<double> chunk_max(static_cast<std::size_t>(chunks), 0.0);

#pragma omp parallel for schedule(dynamic) if (par)
    for (int c = 0; c < chunks; ++c) {
        const std::uint64_t lo = total * static_cast<std::uint64_t>(c) / chunks;
        const std::uint64_t hi = total * static_cast<std::uint64_t>(c + 1) / chunks;
        if (lo >= hi) continue;
        std::vector<int> subset = unrank_combination(lo, p, k);
        Eigen::MatrixXd gram(k, k);
        double best = 0.0;
        for (std::uint64_t r = lo; r < hi; ++r) {
            best = std::max(best, gram_deviation(m, subset, gram));
            if (r + 1 < hi) next_combination(subset, p);
        }
        chunk_max[static_cast<std::size_t>(c)] = best;
    }

    RicEstimate est;
    est.k = k;
    est.subsets_checked = total;
    for (double v : chunk_max) est.delta = std::max(est.delta, v);
    return est;
}

GuaranteeReport guarantee_thresholds(double delta_ksup, double beta_min, double beta_max,
                                     double gamma, double gamma_lb, double delta_k0plus1,
                                     int k0) {
    if (!(delta_ksup >= 0.0 && delta_ksup < 1.0))
        throw ArgumentError("guarantee_thresholds: delta_ksup must lie in [0, 1)");
    if (!(delta_k0plus1 >= 0.0 && delta_k0plus1 < 1.0))
        throw ArgumentError("guarantee_thresholds: delta_k0plus1 must lie in [0, 1)");
    if (!(beta_min > 0.0) || beta_max < beta_min)
        throw ArgumentError("guarantee_thresholds: need 0 < beta_min <= beta_max");
    if (!(gamma > 0.0 && gamma <= 1.0) || !(gamma_lb > 0.0 && gamma_lb <= 1.0))
        throw ArgumentError("guarantee_thresholds: gamma values must lie in (0, 1]");
    if (k0 < 1) throw ArgumentError("guarantee_thresholds: need k0 >= 1");

    GuaranteeReport rep;
    rep.delta_ksup = delta_ksup;
    rep.beta_min = beta_min;
    rep.beta_max = beta_max;
    rep.gamma = gamma;
    rep.gamma_lb = gamma_lb;
    rep.delta_k0plus1 = delta_k0plus1;
    rep.k0 = k0;

    const double root = std::sqrt(1.0 - delta_ksup);
    const double dr = beta_max / beta_min;
    const double cond = std::sqrt((1.0 + delta_ksup) / (1.0 - delta_ksup));
    rep.eps_sig = root * beta_min / (1.0 + cond * (2.0 + dr));
    rep.eps_x = root * beta_min * gamma / (1.0 + gamma);
    rep.eps_rrt = root * beta_min * gamma_lb / (1.0 + gamma_lb);

    const double rip_limit = 1.0 / std::sqrt(static_cast<double>(k0) + 1.0);
    if (delta_k0plus1 < rip_limit) {
        const double num = beta_min * std::sqrt(1.0 - delta_k0plus1);
        const double den = 1.0 + std::sqrt(1.0 - delta_k0plus1 * delta_k0plus1) /
                                     (1.0 - std::sqrt(static_cast<double>(k0) + 1.0) *
                                                delta_k0plus1);
        rep.eps_exact = num / den;
    } else {
        rep.rip_violated = true;
    }

    rep.snr_excess_rrt_bound = 0.5 * (1.0 + 1.0 / gamma_lb);
    rep.snr_excess_sig_bound = 0.5 * (1.0 + cond * (2.0 + dr));
    return rep;
}

double eq_floor_lower_bound(double delta_k0, double delta_2k0, double beta_min, double eps2) {
    return (1.0 - delta_2k0 / (1.0 - delta_k0)) * beta_min - eps2 / std::sqrt(1.0 - delta_k0);
}

double ks_statistic(std::vector<double> samples, double (*cdf)(double a, double b, double x),
                    double a, double b) {
    std::sort(samples.begin(), samples.end());
    const double N = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double F = cdf(a, b, samples[i]);
        d = std::max(d, F - static_cast<double>(i) / N);
        d = std::max(d, static_cast<double>(i + 1) / N - F);
    }
    return d;
}

std::vector<BetaLawCheck> beta_law_conformance(int n, const std::vector<int>& k_list,
                                               int samples, std::uint64_t seed) {
    if (n < 2) throw BadDims("beta_law_conformance: need n >= 2");
    if (samples < 10) throw ArgumentError("beta_law_conformance: need samples >= 10");
    for (int k : k_list)
        if (k < 1 || k >= n)
            throw ArgumentError("beta_law_conformance: every k must satisfy 1 <= k < n");

    // ratio of squared residual norms under nested coordinate projections:
    // r_k = sum_{i >= k} z_i^2 / sum_{i >= k-1} z_i^2
    std::vector<std::vector<double>> draws(k_list.size(),
                                           std::vector<double>(static_cast<std::size_t>(samples)));
    const Rng base = Rng(seed).derive(kStreamVerify);
    for (int s = 0; s < samples; ++s) {
        Rng rng = base.derive(static_cast<std::uint64_t>(s));
        std::vector<double> z2(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            const double z = rng.normal();
            z2[static_cast<std::size_t>(i)] = z * z;
        }
        std::vector<double> suffix(static_cast<std::size_t>(n) + 1, 0.0);
        for (int i = n - 1; i >= 0; --i)
            suffix[static_cast<std::size_t>(i)] =
                suffix[static_cast<std::size_t>(i) + 1] + z2[static_cast<std::size_t>(i)];
        for (std::size_t j = 0; j < k_list.size(); ++j) {
            const int k = k_list[j];
            draws[j][static_cast<std::size_t>(s)] =
                suffix[static_cast<std::size_t>(k)] / suffix[static_cast<std::size_t>(k) - 1];
        }
    }

    std::vector<BetaLawCheck> checks;
    for (std::size_t j = 0; j < k_list.size(); ++j) {
        BetaLawCheck c;
        c.k = k_list[j];
        c.samples = samples;
        const double a = 0.5 * (n - c.k);
        c.ks_stat = ks_statistic(draws[j], &beta_cdf, a, 0.5);
        c.ks_critical_1pct = 1.63 / std::sqrt(static_cast<double>(samples));
        double acc = 0.0;
        for (double v : draws[j]) acc += v;
        c.sample_mean = acc / samples;
        c.expected_mean = a / (a + 0.5);
        checks.push_back(c);
    }
    return checks;
}

SufficiencyReport verify_sufficient_recovery(const SensingMatrix& m, const SparseSignal& signal,
                                             double eps2_scale, int trials, int gamma_runs,
                                             std::uint64_t seed, std::uint64_t budget,
                                             Exec exec) {
    if (signal.k0 < 1) throw ArgumentError("verify_sufficient_recovery: need k0 >= 1");
    if (trials < 1 || gamma_runs < 1)
        throw ArgumentError("verify_sufficient_recovery: trials and gamma_runs must be >= 1");
    if (!(eps2_scale > 0.0))
        throw ArgumentError("verify_sufficient_recovery: eps2_scale must be > 0");

    SufficiencyReport rep;
    rep.k0 = signal.k0;
    rep.trials = trials;
    rep.gamma_runs = gamma_runs;

    rep.delta_k0 = ric_bruteforce(m, signal.k0, budget, exec).delta;
    rep.delta_k0plus1 = ric_bruteforce(m, signal.k0 + 1, budget, exec).delta;
    rep.premise_rip_ok =
        rep.delta_k0plus1 < 1.0 / std::sqrt(static_cast<double>(signal.k0) + 1.0);

    // the matrix's own worst-case residual ratio, approximated from below by
    // pure-noise runs on this very matrix
    const KMax kmax = KMax::defaults(m.n());
    const Rng gbase = Rng(seed).derive(kStreamVerify).derive(0xBEEF);
    auto shared = std::make_shared<SensingMatrix>(m);
    std::vector<double> per_run(static_cast<std::size_t>(gamma_runs), 2.0);
    const bool par = exec == Exec::Parallel;
#pragma omp parallel for schedule(dynamic) if (par)
    for (int s = 0; s < gamma_runs; ++s) {
        Rng rng = gbase.derive(static_cast<std::uint64_t>(s));
        Vec y(m.n());
        for (int i = 0; i < m.n(); ++i) y[i] = rng.normal();
        const PursuitTrace tr = run_pursuit(shared, y, Algorithm::Omp, kmax, Exec::Serial);
        double mn = 2.0;
        for (double v : tr.rr) mn = std::min(mn, v);
        per_run[static_cast<std::size_t>(s)] = mn;
    }
    double gmin = 2.0;
    for (double v : per_run) gmin = std::min(gmin, v);
    rep.gamma_measured = gmin;

    double beta_min = std::numeric_limits<double>::infinity();
    double beta_max = 0.0;
    for (int idx : signal.support) {
        beta_min = std::min(beta_min, std::fabs(signal.beta[idx]));
        beta_max = std::max(beta_max, std::fabs(signal.beta[idx]));
    }

    rep.guarantees = guarantee_thresholds(rep.delta_k0, beta_min, beta_max, gmin, gmin,
                                          rep.delta_k0plus1, signal.k0);
    const double eps_exact =
        rep.guarantees.eps_exact ? *rep.guarantees.eps_exact
                                 : std::numeric_limits<double>::infinity();
    rep.eps_tf_max = std::min({eps_exact, rep.guarantees.eps_sig, rep.guarantees.eps_x});
    rep.eps_rrt_max = std::min(eps_exact, rep.guarantees.eps_rrt);
    rep.eps2 = eps2_scale * std::min(rep.eps_tf_max, rep.eps_rrt_max);
    rep.applicable = rep.premise_rip_ok && rep.eps2 < rep.eps_tf_max &&
                     rep.eps2 < rep.eps_rrt_max && std::isfinite(rep.eps2);

    const Vec xb = m.data * signal.beta;
    const Rng tbase = Rng(seed).derive(kStreamVerify).derive(0xF00D);
    for (int t = 0; t < trials; ++t) {
        Rng rng = tbase.derive(static_cast<std::uint64_t>(t));
        Vec w(m.n());
        for (int i = 0; i < m.n(); ++i) w[i] = rng.normal();
        w *= rep.eps2 / w.norm();
        const Vec y = xb + w;
        const PursuitTrace tr = run_pursuit(shared, y, Algorithm::Omp, kmax, Exec::Serial);

        const SelectorResult tf = select_tf(tr);
        if (pe_indicator(signal.support, tf.support)) {
            ++rep.failures_tf;
            rep.counterexamples.push_back({t, "tf", tf.k_hat, tf.support});
        }
        const SelectorResult rrt = select_rrt(tr, gmin);
        if (pe_indicator(signal.support, rrt.support)) {
            ++rep.failures_rrt;
            rep.counterexamples.push_back({t, "rrt", rrt.k_hat, rrt.support});
        }
    }
    return rep;
}

std::string ric_to_json(const RicEstimate& r) {
    nlohmann::json j;
    j["k"] = r.k;
    j["delta"] = r.delta;
    j["subsets_checked"] = r.subsets_checked;
    return j.dump(2);
}

std::string sufficiency_to_json(const SufficiencyReport& r) {
    nlohmann::json j;
    j["k0"] = r.k0;
    j["delta_k0"] = r.delta_k0;
    j["delta_k0plus1"] = r.delta_k0plus1;
    j["premise_rip_ok"] = r.premise_rip_ok;
    j["gamma_measured"] = r.gamma_measured;
    j["gamma_runs"] = r.gamma_runs;
    j["eps_sig"] = r.guarantees.eps_sig;
    j["eps_x"] = r.guarantees.eps_x;
    j["eps_rrt"] = r.guarantees.eps_rrt;
    if (r.guarantees.eps_exact)
        j["eps_exact"] = *r.guarantees.eps_exact;
    else
        j["eps_exact"] = nullptr;
    j["eps_tf_max"] = r.eps_tf_max;
    j["eps_rrt_max"] = r.eps_rrt_max;
    j["eps2"] = r.eps2;
    j["applicable"] = r.applicable;
    j["trials"] = r.trials;
    j["failures_tf"] = r.failures_tf;
    j["failures_rrt"] = r.failures_rrt;
    nlohmann::json cx = nlohmann::json::array();
    for (const Counterexample& c : r.counterexamples) {
        nlohmann::json e;
        e["trial"] = c.trial;
        e["selector"] = c.selector;
        e["k_hat"] = c.k_hat;
        e["support_found"] = c.support_found;
        cx.push_back(e);
    }
    j["counterexamples"] = cx;
    return j.dump(2);
}

}  // namespace igp
