#include "igpkit/bench.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "igpkit/kernels.hpp"

namespace igp {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            throw ParseError("config: unknown key '" + it.key() + "' in " + where);
    }
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("config: not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("config: root must be an object");
    reject_unknown(j,
                   {"matrix", "values", "noise_model", "algorithm", "k0_list", "snr_db_list",
                    "selectors", "trials", "seed", "threshold", "cache_path"},
                   "root");

    ExperimentConfig cfg;
    try {
        const json& jm = j.at("matrix");
        reject_unknown(jm, {"kind", "n", "p"}, "matrix");
        const std::string kind = jm.at("kind").get<std::string>();
        if (kind == "gaussian") {
            cfg.matrix = GaussianKind{jm.at("n").get<int>(), jm.at("p").get<int>()};
        } else if (kind == "identity_hadamard") {
            if (jm.contains("p")) throw ParseError("config: identity_hadamard takes only n");
            cfg.matrix = IdentityHadamardKind{jm.at("n").get<int>()};
        } else {
            throw ParseError("config: matrix.kind must be gaussian or identity_hadamard");
        }

        if (j.contains("values")) {
            const std::string v = j.at("values").get<std::string>();
            if (v == "uniform_sign")
                cfg.values = ValueModel::UniformSign;
            else if (v == "gaussian")
                cfg.values = ValueModel::GaussianValues;
            else
                throw ParseError("config: values must be uniform_sign or gaussian");
        }
        if (j.contains("noise_model")) {
            const std::string v = j.at("noise_model").get<std::string>();
            if (v == "gaussian")
                cfg.noise_model = NoiseModel::Gaussian;
            else if (v == "l2_bounded")
                cfg.noise_model = NoiseModel::L2Bounded;
            else
                throw ParseError("config: noise_model must be gaussian or l2_bounded");
        }
        if (j.contains("algorithm"))
            cfg.algorithm = algorithm_from_string(j.at("algorithm").get<std::string>());

        cfg.k0_list = j.at("k0_list").get<std::vector<int>>();
        cfg.snr_db_list = j.at("snr_db_list").get<std::vector<double>>();
        for (const std::string& s : j.at("selectors").get<std::vector<std::string>>())
            cfg.selectors.push_back(selector_from_string(s));
        cfg.trials = j.at("trials").get<int>();
        if (!j.contains("seed")) throw ParseError("config: seed is required");
        cfg.seed = j.at("seed").get<std::uint64_t>();

        if (j.contains("threshold")) {
            const json& jt = j.at("threshold");
            reject_unknown(jt, {"kind", "value", "alpha", "ntr"}, "threshold");
            const std::string kind2 = jt.at("kind").get<std::string>();
            if (kind2 == "fixed")
                cfg.threshold = FixedGamma{jt.at("value").get<double>()};
            else if (kind2 == "alpha")
                cfg.threshold = AlphaGamma{jt.at("alpha").get<double>()};
            else if (kind2 == "trained")
                cfg.threshold = TrainedGamma{jt.at("ntr").get<int>()};
            else
                throw ParseError("config: threshold.kind must be fixed, alpha or trained");
        }
        if (j.contains("cache_path")) cfg.cache_path = j.at("cache_path").get<std::string>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }

    // validation
    const int n = matrix_kind_n(cfg.matrix);
    const int p = matrix_kind_p(cfg.matrix);
    if (n < 2 || p < 2) throw ParseError("config: matrix dimensions too small");
    if (cfg.k0_list.empty() || cfg.snr_db_list.empty() || cfg.selectors.empty())
        throw ParseError("config: k0_list, snr_db_list and selectors must be non-empty");
    const int kmax = KMax::defaults(n).value;
    for (int k0 : cfg.k0_list)
        if (k0 < 1 || k0 > kmax)
            throw ParseError("config: every k0 must lie in [1, floor((n+1)/2)]");
    if (cfg.trials < 1) throw ParseError("config: trials must be >= 1");
    bool has_rrt = false;
    for (Selector s : cfg.selectors) has_rrt = has_rrt || s == Selector::Rrt;
    if (has_rrt && !cfg.threshold)
        throw ParseError("config: selectors include rrt but no threshold is given");
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_experiment_config(ss.str());
}

namespace {

double resolve_gamma(const ExperimentConfig& cfg) {
    bool has_rrt = false;
    for (Selector s : cfg.selectors) has_rrt = has_rrt || s == Selector::Rrt;
    if (!has_rrt || !cfg.threshold) return 0.0;
    const int n = matrix_kind_n(cfg.matrix);
    const int p = matrix_kind_p(cfg.matrix);
    if (const auto* f = std::get_if<FixedGamma>(&*cfg.threshold)) return f->value;
    if (const auto* a = std::get_if<AlphaGamma>(&*cfg.threshold))
        return gamma_rrt_alpha(n, p, KMax::defaults(n).value, a->alpha).value;
    const auto& t = std::get<TrainedGamma>(*cfg.threshold);
    if (!cfg.cache_path.empty()) {
        ThresholdCache cache(cfg.cache_path);
        return cache.get_or_train(n, p, t.ntr, cfg.algorithm, cfg.seed).value;
    }
    return train_gamma_lb(n, p, t.ntr, cfg.algorithm, cfg.seed).value;
}

// beta_hat/support for one selector applied to a shared trace. A trace too
// shallow for the known-sparsity oracle falls back to the deepest recorded
// support (counted as an error by the pe metric when it misses indices).
SelectorResult apply_selector(Selector sel, const PursuitTrace& trace, const NoisySystem& sys,
                              double gamma) {
    switch (sel) {
        case Selector::Tf: return select_tf(trace);
        case Selector::Rrt: return select_rrt(trace, gamma);
        case Selector::OracleK0:
            try {
                return select_oracle_k0(trace, sys.signal.k0);
            } catch (const K0ExceedsTrace&) {
                return select_oracle_k0(trace, trace.k_reached());
            }
        case Selector::OracleSigma: return select_oracle_sigma(trace, sys.sigma);
        case Selector::OracleEps: return select_oracle_eps(trace, sys.eps2);
    }
    throw ArgumentError("apply_selector: bad selector");
}

}  // namespace

CellOutcome run_cell(const ExperimentConfig& cfg, int k0, double snr_db,
                     std::uint64_t cell_index, double gamma_value, int workers) {
    const int n = matrix_kind_n(cfg.matrix);
    const int p = matrix_kind_p(cfg.matrix);
    const KMax kmax = KMax::defaults(n);
    const int ns = static_cast<int>(cfg.selectors.size());

    CellOutcome out;
    out.nmse.assign(static_cast<std::size_t>(ns),
                    std::vector<double>(static_cast<std::size_t>(cfg.trials), 0.0));
    out.pe.assign(static_cast<std::size_t>(ns),
                  std::vector<int>(static_cast<std::size_t>(cfg.trials), 0));

    std::shared_ptr<const SensingMatrix> fixed;
    if (std::holds_alternative<IdentityHadamardKind>(cfg.matrix))
        fixed = std::make_shared<SensingMatrix>(
            gen_identity_hadamard(std::get<IdentityHadamardKind>(cfg.matrix).n));

    const Rng cell_base = Rng(cfg.seed).derive(kStreamBench).derive(cell_index);
    const SignalModel model = cfg.values == ValueModel::UniformSign
                                  ? SignalModel{UniformSignValues{}}
                                  : SignalModel{GaussianValues{}};

    if (workers < 1) workers = 1;
#pragma omp parallel for schedule(dynamic) num_threads(workers) if (workers > 1)
    for (int t = 0; t < cfg.trials; ++t) {
        Rng rng = cell_base.derive(static_cast<std::uint64_t>(t));
        std::shared_ptr<const SensingMatrix> X = fixed;
        if (!X) {
            const auto& g = std::get<GaussianKind>(cfg.matrix);
            X = std::make_shared<SensingMatrix>(gen_gaussian_matrix(g.n, g.p, rng));
        }
        const SparseSignal sig = gen_signal(p, k0, model, RandomSupport{}, rng);
        const NoisySystem sys = make_noisy_system(*X, sig, snr_db, cfg.noise_model, rng);
        const PursuitTrace trace = run_pursuit(X, sys.y, cfg.algorithm, kmax, Exec::Serial);
        for (int s = 0; s < ns; ++s) {
            const SelectorResult r =
                apply_selector(cfg.selectors[static_cast<std::size_t>(s)], trace, sys,
                               gamma_value);
            out.nmse[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)] =
                nmse(sig.beta, r.beta_hat);
            out.pe[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)] =
                pe_indicator(sig.support, r.support);
        }
    }
    (void)n;
    return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, int workers) {
    ExperimentResult res;
    res.config = cfg;
    res.gamma_value = resolve_gamma(cfg);

    std::uint64_t cell_index = 0;
    for (int k0 : cfg.k0_list) {
        for (double snr : cfg.snr_db_list) {
            const CellOutcome cell = run_cell(cfg, k0, snr, cell_index, res.gamma_value, workers);
            for (std::size_t s = 0; s < cfg.selectors.size(); ++s) {
                MetricsRecord rec;
                rec.selector = cfg.selectors[s];
                rec.k0 = k0;
                rec.snr_db = snr;
                rec.trials = cfg.trials;
                rec.nmse_mean = pairwise_sum(cell.nmse[s]) / cfg.trials;
                double pesum = 0.0;
                for (int v : cell.pe[s]) pesum += v;
                rec.pe_mean = pesum / cfg.trials;
                res.records.push_back(rec);
            }
            ++cell_index;
        }
    }

    // group rows per selector so each curve is contiguous in the file
    std::vector<MetricsRecord> ordered;
    for (Selector sel : cfg.selectors)
        for (const MetricsRecord& r : res.records)
            if (r.selector == sel) ordered.push_back(r);
    res.records = ordered;
    return res;
}

std::string result_to_csv(const ExperimentResult& r) {
    std::string out = "selector,algorithm,matrix_kind,n,p,k0,snr_db,trials,nmse_mean,pe_mean\n";
    char buf[64];
    const std::string alg = to_string(r.config.algorithm);
    const std::string kind = matrix_kind_name(r.config.matrix);
    const int n = matrix_kind_n(r.config.matrix);
    const int p = matrix_kind_p(r.config.matrix);
    for (const MetricsRecord& rec : r.records) {
        out += to_string(rec.selector) + "," + alg + "," + kind + "," + std::to_string(n) +
               "," + std::to_string(p) + "," + std::to_string(rec.k0) + ",";
        std::snprintf(buf, sizeof buf, "%.17g", rec.snr_db);
        out += buf;
        out += "," + std::to_string(rec.trials) + ",";
        std::snprintf(buf, sizeof buf, "%.17g", rec.nmse_mean);
        out += buf;
        out += ",";
        std::snprintf(buf, sizeof buf, "%.17g", rec.pe_mean);
        out += buf;
        out += "\n";
    }
    return out;
}

void write_result_csv(const std::string& path, const ExperimentResult& r) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << result_to_csv(r);
}

}  // namespace igp
