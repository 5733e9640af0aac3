// Command line front end. Subcommands: solve, train, gamma-alpha,
// experiment, ric, verify. Exit codes: 0 success, 2 bad arguments,
// 3 bad or unreadable data, 4 enumeration budget exceeded.

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <omp.h>
#include <sstream>

#include "igpkit/bench.hpp"
#include "igpkit/verify.hpp"
#include "igpkit/version.hpp"

namespace {

using namespace igp;
namespace fs = std::filesystem;
using nlohmann::json;

struct Common {
    std::string out_dir = ".";
    int workers = 1;
    Exec exec() const { return workers > 1 ? Exec::Parallel : Exec::Serial; }
};

void write_manifest(const std::string& dir, const std::string& subcommand, const json& options,
                    const std::vector<std::string>& outputs) {
    json j;
    j["tool"] = "igpkit";
    j["version"] = kVersion;
    j["subcommand"] = subcommand;
    j["options"] = options;
    j["outputs"] = outputs;
    fs::create_directories(dir);
    std::ofstream out(dir + "/manifest.json", std::ios::binary);
    if (!out) throw DataError("cannot write " + dir + "/manifest.json");
    out << j.dump(2) << '\n';
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// "alpha:0.1" computes the analytic threshold at this run's dimensions;
// "trained:PATH" looks up a cache entry matching n:p:alg (any ntr/seed, but
// it must be unambiguous).
double resolve_solve_gamma(const std::string& threshold, int n, int p, int kmax,
                           Algorithm alg) {
    const auto colon = threshold.find(':');
    if (colon == std::string::npos)
        throw ArgumentError("--threshold expects alpha:VALUE or trained:PATH");
    const std::string kind = threshold.substr(0, colon);
    const std::string rest = threshold.substr(colon + 1);
    if (kind == "alpha") {
        double alpha = 0.0;
        try {
            alpha = std::stod(rest);
        } catch (const std::exception&) {
            throw ArgumentError("--threshold alpha: bad number '" + rest + "'");
        }
        return gamma_rrt_alpha(n, p, kmax, alpha).value;
    }
    if (kind == "trained") {
        std::ifstream in(rest);
        if (!in) throw DataError("cannot open threshold cache " + rest);
        json j;
        try {
            in >> j;
        } catch (const json::exception&) {
            throw ParseError(rest + ": not valid JSON");
        }
        const std::string prefix =
            std::to_string(n) + ":" + std::to_string(p) + ":" + to_string(alg) + ":";
        std::vector<double> hits;
        for (auto it = j.begin(); it != j.end(); ++it)
            if (it.key().rfind(prefix, 0) == 0) hits.push_back(it.value().get<double>());
        if (hits.empty())
            throw DataError(rest + ": no trained value for " + prefix + "...");
        if (hits.size() > 1)
            throw ArgumentError(rest + ": several trained values match " + prefix +
                                "..., pass --gamma explicitly");
        return hits.front();
    }
    throw ArgumentError("--threshold expects alpha:VALUE or trained:PATH");
}

int cmd_solve(const Common& com, const std::string& matrix_path, const std::string& obs_path,
              const std::string& alg_name, int kmax_opt, const std::string& selector_name,
              int k0, double sigma, double eps2, double gamma,
              const std::string& threshold) {
    const SensingMatrix X = read_matrix_auto(matrix_path);
    const Vec y = read_vector_csv(obs_path);
    const Algorithm alg = algorithm_from_string(alg_name);
    const Selector sel = selector_from_string(selector_name);
    const KMax kmax = kmax_opt > 0 ? KMax::explicit_value(kmax_opt, X.n())
                                   : KMax::defaults(X.n());

    double gamma_used = gamma;
    if (sel == Selector::Rrt) {
        if (gamma > 0.0 && !threshold.empty())
            throw ArgumentError("pass either --gamma or --threshold, not both");
        if (gamma <= 0.0 && threshold.empty())
            throw ArgumentError("selector rrt needs --gamma or --threshold");
        if (gamma <= 0.0)
            gamma_used = resolve_solve_gamma(threshold, X.n(), X.p(), kmax.value, alg);
    }
    if (sel == Selector::OracleK0 && k0 < 0)
        throw ArgumentError("selector oracle-k0 needs --k0");
    if (sel == Selector::OracleSigma && sigma < 0.0)
        throw ArgumentError("selector oracle-sigma needs --sigma");
    if (sel == Selector::OracleEps && eps2 < 0.0)
        throw ArgumentError("selector oracle-eps needs --eps2");

    const PursuitTrace trace =
        run_pursuit(std::make_shared<SensingMatrix>(X), y, alg, kmax, com.exec());

    SelectorResult result;
    switch (sel) {
        case Selector::Tf: result = select_tf(trace); break;
        case Selector::Rrt: result = select_rrt(trace, gamma_used); break;
        case Selector::OracleK0: result = select_oracle_k0(trace, k0); break;
        case Selector::OracleSigma: result = select_oracle_sigma(trace, sigma); break;
        case Selector::OracleEps: result = select_oracle_eps(trace, eps2); break;
    }

    fs::create_directories(com.out_dir);
    {
        std::ofstream out(com.out_dir + "/trace.json", std::ios::binary);
        out << trace_to_json(trace) << '\n';
    }
    {
        std::ofstream out(com.out_dir + "/support.json", std::ios::binary);
        out << result_to_json(result) << '\n';
    }
    write_vector_csv(com.out_dir + "/beta_hat.csv", result.beta_hat);

    json opts;
    opts["matrix"] = matrix_path;
    opts["obs"] = obs_path;
    opts["alg"] = alg_name;
    opts["kmax"] = kmax.value;
    opts["selector"] = selector_name;
    if (sel == Selector::Rrt) opts["gamma"] = gamma_used;
    if (sel == Selector::OracleK0) opts["k0"] = k0;
    if (sel == Selector::OracleSigma) opts["sigma"] = sigma;
    if (sel == Selector::OracleEps) opts["eps2"] = eps2;
    opts["workers"] = com.workers;
    write_manifest(com.out_dir, "solve", opts,
                   {"trace.json", "support.json", "beta_hat.csv"});

    std::printf("k_hat %d\n", result.k_hat);
    std::printf("residual_norm %s\n",
                fmt(trace.residual_norms[static_cast<std::size_t>(result.k_hat)]).c_str());
    std::printf("termination %s\n", to_string(trace.termination).c_str());
    return 0;
}

int cmd_train(const Common& com, int n, int p, const std::string& alg_name, int ntr,
              std::uint64_t seed, const std::string& cache_path,
              const std::string& design_name) {
    const Algorithm alg = algorithm_from_string(alg_name);
    if (design_name != "gaussian" && design_name != "identity_hadamard")
        throw ArgumentError("--design must be gaussian or identity_hadamard");

    ThresholdSpec spec;
    if (design_name == "gaussian" && !cache_path.empty()) {
        ThresholdCache cache(cache_path);
        spec = cache.get_or_train(n, p, ntr, alg, seed, com.exec());
    } else {
        spec = train_gamma_lb(n, p, ntr, alg, seed, com.exec(),
                              design_name == "gaussian" ? TrainingDesign::Gaussian
                                                        : TrainingDesign::IdentityHadamard);
    }

    json opts;
    opts["n"] = n;
    opts["p"] = p;
    opts["alg"] = alg_name;
    opts["ntr"] = ntr;
    opts["seed"] = seed;
    opts["design"] = design_name;
    opts["cache"] = cache_path;
    opts["workers"] = com.workers;
    write_manifest(com.out_dir, "train", opts, cache_path.empty()
                                                   ? std::vector<std::string>{}
                                                   : std::vector<std::string>{cache_path});
    std::printf("gamma_lb_trained %s\n", fmt(spec.value).c_str());
    return 0;
}

int cmd_gamma_alpha(const Common& com, int n, int p, int kmax_opt, double alpha) {
    const int kmax = kmax_opt > 0 ? kmax_opt : KMax::defaults(n).value;
    const ThresholdSpec spec = gamma_rrt_alpha(n, p, kmax, alpha);
    json opts;
    opts["n"] = n;
    opts["p"] = p;
    opts["kmax"] = kmax;
    opts["alpha"] = alpha;
    write_manifest(com.out_dir, "gamma-alpha", opts, {});
    std::printf("gamma_rrt_alpha %s\n", fmt(spec.value).c_str());
    return 0;
}

int cmd_experiment(const Common& com, const std::string& config_path,
                   const std::string& out_csv) {
    const ExperimentConfig cfg = load_experiment_config(config_path);
    const ExperimentResult res = run_experiment(cfg, com.workers);
    const fs::path csv_path = fs::path(com.out_dir) / out_csv;
    fs::create_directories(com.out_dir);
    write_result_csv(csv_path.string(), res);

    json opts;
    opts["config"] = config_path;
    opts["out"] = out_csv;
    opts["workers"] = com.workers;
    opts["gamma_value"] = res.gamma_value;
    write_manifest(com.out_dir, "experiment", opts, {out_csv});
    std::printf("cells %zu rows %zu gamma %s\n",
                cfg.k0_list.size() * cfg.snr_db_list.size(), res.records.size(),
                fmt(res.gamma_value).c_str());
    return 0;
}

int cmd_ric(const Common& com, const std::string& matrix_path, int k, std::uint64_t budget) {
    const SensingMatrix X = read_matrix_auto(matrix_path);
    const RicEstimate est = ric_bruteforce(X, k, budget, com.exec());
    fs::create_directories(com.out_dir);
    {
        std::ofstream out(com.out_dir + "/ric.json", std::ios::binary);
        out << ric_to_json(est) << '\n';
    }
    json opts;
    opts["matrix"] = matrix_path;
    opts["k"] = k;
    opts["budget"] = budget;
    write_manifest(com.out_dir, "ric", opts, {"ric.json"});
    std::printf("delta_%d %s (subsets %llu)\n", est.k, fmt(est.delta).c_str(),
                static_cast<unsigned long long>(est.subsets_checked));
    return 0;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(std::stoi(cell));
    return out;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
    return out;
}

int cmd_verify(const Common& com, const std::string& matrix_path, const std::string& support,
               const std::string& values, double eps2_scale, int trials, int gamma_runs,
               std::uint64_t seed, std::uint64_t budget) {
    const SensingMatrix X = read_matrix_auto(matrix_path);

    SparseSignal sig;
    try {
        sig.support = parse_int_list(support);
        const std::vector<double> vals = parse_double_list(values);
        if (vals.size() != sig.support.size())
            throw ArgumentError("--support and --values must have the same length");
        sig.k0 = static_cast<int>(sig.support.size());
        sig.beta = Vec::Zero(X.p());
        for (std::size_t i = 0; i < vals.size(); ++i) {
            const int idx = sig.support[i];
            if (idx < 0 || idx >= X.p()) throw ArgumentError("--support index out of range");
            sig.beta[idx] = vals[i];
        }
        std::sort(sig.support.begin(), sig.support.end());
    } catch (const igp::Error&) {
        throw;
    } catch (const std::exception&) {
        throw ArgumentError("--support/--values: expected comma separated numbers");
    }

    const SufficiencyReport rep = verify_sufficient_recovery(
        X, sig, eps2_scale, trials, gamma_runs, seed, budget, com.exec());

    fs::create_directories(com.out_dir);
    {
        std::ofstream out(com.out_dir + "/sufficiency.json", std::ios::binary);
        out << sufficiency_to_json(rep) << '\n';
    }
    json opts;
    opts["matrix"] = matrix_path;
    opts["support"] = support;
    opts["values"] = values;
    opts["eps2_scale"] = eps2_scale;
    opts["trials"] = trials;
    opts["gamma_runs"] = gamma_runs;
    opts["seed"] = seed;
    opts["budget"] = budget;
    opts["workers"] = com.workers;
    write_manifest(com.out_dir, "verify", opts, {"sufficiency.json"});

    std::printf("applicable %s eps2 %s failures_tf %d failures_rrt %d\n",
                rep.applicable ? "yes" : "no", fmt(rep.eps2).c_str(), rep.failures_tf,
                rep.failures_rrt);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparse recovery via incremental greedy pursuits with residual-ratio "
                 "model-order selection"};
    app.require_subcommand(1);
    app.set_version_flag("--version", igp::kVersion);

    Common com;

    // solve
    auto* solve = app.add_subcommand("solve", "run one pursuit and select a model order");
    std::string matrix_path, obs_path, alg_name = "omp", selector_name, threshold;
    int kmax_opt = 0, k0 = -1;
    double sigma = -1.0, eps2 = -1.0, gamma = 0.0;
    solve->add_option("--matrix", matrix_path, "matrix file (.csv or binary)")->required();
    solve->add_option("--obs", obs_path, "observation csv, one value per line")->required();
    solve->add_option("--alg", alg_name, "omp or ols");
    solve->add_option("--kmax", kmax_opt, "iteration cap, default floor((n+1)/2)");
    solve->add_option("--selector", selector_name,
                      "tf | rrt | oracle-k0 | oracle-sigma | oracle-eps")
        ->required();
    solve->add_option("--k0", k0, "true sparsity for oracle-k0");
    solve->add_option("--sigma", sigma, "noise std for oracle-sigma");
    solve->add_option("--eps2", eps2, "noise norm bound for oracle-eps");
    solve->add_option("--gamma", gamma, "threshold for rrt");
    solve->add_option("--threshold", threshold, "rrt threshold source, alpha:A or trained:PATH");
    solve->add_option("--out", com.out_dir, "output directory");
    solve->add_option("--workers", com.workers, "worker threads");

    // train
    auto* train = app.add_subcommand("train", "noise-assisted threshold training");
    int tn = 0, tp = 0, ntr = 0;
    std::uint64_t seed = 0;
    std::string cache_path = "gamma_cache.json", design_name = "gaussian";
    bool no_cache = false;
    train->add_option("--n", tn, "rows")->required();
    train->add_option("--p", tp, "columns")->required();
    train->add_option("--alg", alg_name, "omp or ols");
    train->add_option("--ntr", ntr, "training runs")->required();
    train->add_option("--seed", seed, "stream seed")->required();
    train->add_option("--cache", cache_path, "threshold cache sidecar (json)");
    train->add_flag("--no-cache", no_cache, "skip the sidecar cache");
    train->add_option("--design", design_name, "gaussian (default) or identity_hadamard");
    train->add_option("--out", com.out_dir, "output directory");
    train->add_option("--workers", com.workers, "worker threads");

    // gamma-alpha
    auto* galpha = app.add_subcommand("gamma-alpha", "analytic residual-ratio threshold");
    double alpha = 0.0;
    galpha->add_option("--n", tn, "rows")->required();
    galpha->add_option("--p", tp, "columns")->required();
    galpha->add_option("--kmax", kmax_opt, "iteration cap, default floor((n+1)/2)");
    galpha->add_option("--alpha", alpha, "false-alarm level in (0,1)")->required();
    galpha->add_option("--out", com.out_dir, "output directory");

    // experiment
    auto* experiment = app.add_subcommand("experiment", "monte carlo benchmark grid");
    std::string config_path, out_csv = "experiment.csv";
    experiment->add_option("--config", config_path, "json config")->required();
    experiment->add_option("--out-csv", out_csv, "csv file name (within --out)");
    experiment->add_option("--out", com.out_dir, "output directory");
    experiment->add_option("--workers", com.workers, "worker threads");

    // ric
    auto* ric = app.add_subcommand("ric", "exhaustive restricted isometry constant");
    int ric_k = 0;
    std::uint64_t budget = igp::kDefaultSubsetBudget;
    ric->add_option("--matrix", matrix_path, "matrix file")->required();
    ric->add_option("--k", ric_k, "support size")->required();
    ric->add_option("--budget", budget, "max subsets to enumerate");
    ric->add_option("--out", com.out_dir, "output directory");
    ric->add_option("--workers", com.workers, "worker threads");

    // verify
    auto* verify = app.add_subcommand("verify", "bounded-noise sufficiency check");
    std::string vsupport, vvalues;
    double eps2_scale = 0.9;
    int trials = 500, gamma_runs = 2000;
    verify->add_option("--matrix", matrix_path, "matrix file")->required();
    verify->add_option("--support", vsupport, "true support, comma separated")->required();
    verify->add_option("--values", vvalues, "signal values, comma separated")->required();
    verify->add_option("--eps2-scale", eps2_scale, "noise radius as a fraction of the bound");
    verify->add_option("--trials", trials, "bounded-noise trials");
    verify->add_option("--gamma-runs", gamma_runs, "noise-only runs for the measured gamma");
    verify->add_option("--seed", seed, "stream seed")->required();
    verify->add_option("--budget", budget, "max subsets to enumerate");
    verify->add_option("--out", com.out_dir, "output directory");
    verify->add_option("--workers", com.workers, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (com.workers < 1) throw igp::ArgumentError("--workers must be >= 1");
        omp_set_num_threads(com.workers);
        if (solve->parsed())
            return cmd_solve(com, matrix_path, obs_path, alg_name, kmax_opt, selector_name,
                             k0, sigma, eps2, gamma, threshold);
        if (train->parsed())
            return cmd_train(com, tn, tp, alg_name, ntr, seed,
                             no_cache ? std::string{} : cache_path, design_name);
        if (galpha->parsed()) return cmd_gamma_alpha(com, tn, tp, kmax_opt, alpha);
        if (experiment->parsed()) return cmd_experiment(com, config_path, out_csv);
        if (ric->parsed()) return cmd_ric(com, matrix_path, ric_k, budget);
        if (verify->parsed())
            return cmd_verify(com, matrix_path, vsupport, vvalues, eps2_scale, trials,
                              gamma_runs, seed, budget);
    } catch (const igp::BudgetExceeded& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const igp::ArgumentError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const igp::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 2;
}
