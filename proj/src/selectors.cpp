#include "igpkit/selectors.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

namespace igp {

std::string to_string(Selector s) {
    switch (s) {
        case Selector::Tf: return "tf";
        case Selector::Rrt: return "rrt";
        case Selector::OracleK0: return "oracle-k0";
        case Selector::OracleSigma: return "oracle-sigma";
        case Selector::OracleEps: return "oracle-eps";
    }
    return "?";
}

Selector selector_from_string(const std::string& s) {
    if (s == "tf") return Selector::Tf;
    if (s == "rrt") return Selector::Rrt;
    if (s == "oracle-k0") return Selector::OracleK0;
    if (s == "oracle-sigma") return Selector::OracleSigma;
    if (s == "oracle-eps") return Selector::OracleEps;
    throw ArgumentError("unknown selector '" + s + "'");
}

bool SelectorResult::has_flag(SelectorFlag f) const {
    return std::find(flags.begin(), flags.end(), f) != flags.end();
}

std::string result_to_json(const SelectorResult& r) {
    nlohmann::json j;
    j["selector"] = to_string(r.selector);
    j["k_hat"] = r.k_hat;
    j["support"] = r.support;
    std::vector<std::string> flagnames;
    for (auto f : r.flags)
        if (f == SelectorFlag::NoThresholdCrossing) flagnames.push_back("no_threshold_crossing");
    j["flags"] = flagnames;
    return j.dump(2);
}

namespace {

SelectorResult finish(const PursuitTrace& trace, Selector sel, int k_hat,
                      std::vector<SelectorFlag> flags) {
    SelectorResult r;
    r.selector = sel;
    r.k_hat = k_hat;
    r.support = trace.support_at(k_hat);
    r.flags = std::move(flags);
    if (k_hat == 0) {
        r.beta_hat = Vec::Zero(trace.matrix->p());
    } else {
        const Vec coef = least_squares_on_support(*trace.matrix, r.support, trace.y);
        r.beta_hat = scatter_to_full(coef, r.support, trace.matrix->p());
    }
    return r;
}

void require_nonempty(const PursuitTrace& trace) {
    if (trace.k_reached() < 1) throw EmptyTrace("selector requires a non-empty trace");
}

// first k in [0, k_reached] with residual_norms[k] <= threshold, else
// k_reached with the no-crossing flag
SelectorResult first_crossing(const PursuitTrace& trace, Selector sel, double threshold) {
    require_nonempty(trace);
    for (int k = 0; k <= trace.k_reached(); ++k) {
        if (trace.residual_norms[static_cast<std::size_t>(k)] <= threshold)
            return finish(trace, sel, k, {});
    }
    return finish(trace, sel, trace.k_reached(), {SelectorFlag::NoThresholdCrossing});
}

}  // namespace

double sigma_stop_threshold(double sigma, int n) {
    return sigma * std::sqrt(n + 2.0 * std::sqrt(n * std::log(static_cast<double>(n))));
}

SelectorResult select_tf(const PursuitTrace& trace) {
    require_nonempty(trace);
    int best = 1;
    for (int k = 2; k <= trace.k_reached(); ++k)
        if (trace.rr_at(k) < trace.rr_at(best)) best = k;
    return finish(trace, Selector::Tf, best, {});
}

SelectorResult select_rrt(const PursuitTrace& trace, double gamma_lb) {
    require_nonempty(trace);
    if (!(gamma_lb > 0.0 && gamma_lb <= 1.0))
        throw ArgumentError("select_rrt: gamma_lb must lie in (0, 1]");
    int k_hat = 0;
    for (int k = trace.k_reached(); k >= 1; --k) {
        if (trace.rr_at(k) < gamma_lb) {
            k_hat = k;
            break;
        }
    }
    if (k_hat == 0)
        return finish(trace, Selector::Rrt, 0, {SelectorFlag::NoThresholdCrossing});
    return finish(trace, Selector::Rrt, k_hat, {});
}

SelectorResult select_oracle_k0(const PursuitTrace& trace, int k0) {
    if (k0 < 0) throw ArgumentError("select_oracle_k0: k0 must be >= 0");
    if (k0 > trace.k_reached()) throw K0ExceedsTrace(k0, trace.k_reached());
    return finish(trace, Selector::OracleK0, k0, {});
}

SelectorResult select_oracle_sigma(const PursuitTrace& trace, double sigma) {
    if (!(sigma >= 0.0)) throw ArgumentError("select_oracle_sigma: sigma must be >= 0");
    const int n = trace.matrix->n();
    return first_crossing(trace, Selector::OracleSigma, sigma_stop_threshold(sigma, n));
}

SelectorResult select_oracle_eps(const PursuitTrace& trace, double eps2) {
    if (!(eps2 >= 0.0)) throw ArgumentError("select_oracle_eps: eps2 must be >= 0");
    return first_crossing(trace, Selector::OracleEps, eps2);
}

}  // namespace igp
