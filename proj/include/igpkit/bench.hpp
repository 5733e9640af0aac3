#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "igpkit/problems.hpp"
#include "igpkit/selectors.hpp"
#include "igpkit/thresholds.hpp"

namespace igp {

// Where the last-crossing selector gets its threshold from.
struct FixedGamma {
    double value = 0.0;
};
struct AlphaGamma {
    double alpha = 0.0;
};
struct TrainedGamma {
    int ntr = 0;
};
using ThresholdSource = std::variant<FixedGamma, AlphaGamma, TrainedGamma>;

enum class ValueModel { UniformSign, GaussianValues };

struct ExperimentConfig {
    MatrixKind matrix;
    ValueModel values = ValueModel::UniformSign;
    NoiseModel noise_model = NoiseModel::Gaussian;
    Algorithm algorithm = Algorithm::Omp;
    std::vector<int> k0_list;
    std::vector<double> snr_db_list;
    std::vector<Selector> selectors;
    int trials = 0;
    std::uint64_t seed = 0;
    std::optional<ThresholdSource> threshold;  // required when selectors include rrt
    std::string cache_path;                    // optional sidecar for trained thresholds
};

// Strict parser: unknown keys anywhere are errors, seed and trials are
// mandatory. See README for the schema.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);

struct MetricsRecord {
    Selector selector = Selector::Tf;
    int k0 = 0;
    double snr_db = 0.0;
    int trials = 0;
    double nmse_mean = 0.0;
    double pe_mean = 0.0;
};

struct ExperimentResult {
    ExperimentConfig config;
    double gamma_value = 0.0;  // resolved threshold actually used by rrt
    std::vector<MetricsRecord> records;
};

// Per-trial outcomes of one (k0, snr) cell. One pursuit run per trial is
// shared by every selector. Trial t draws its own stream derived from
// (seed, cell_index, t), so results do not depend on the worker count.
struct CellOutcome {
    std::vector<std::vector<double>> nmse;  // [selector][trial]
    std::vector<std::vector<int>> pe;       // [selector][trial]
};

CellOutcome run_cell(const ExperimentConfig& cfg, int k0, double snr_db,
                     std::uint64_t cell_index, double gamma_value, int workers);

ExperimentResult run_experiment(const ExperimentConfig& cfg, int workers = 1);

// selector,algorithm,matrix_kind,n,p,k0,snr_db,trials,nmse_mean,pe_mean
std::string result_to_csv(const ExperimentResult& r);
void write_result_csv(const std::string& path, const ExperimentResult& r);

}  // namespace igp
