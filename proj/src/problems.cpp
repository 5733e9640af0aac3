#include "igpkit/problems.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <json.hpp>
#include <set>

namespace igp {

std::string matrix_kind_name(const MatrixKind& kind) {
    if (std::holds_alternative<GaussianKind>(kind)) return "gaussian";
    return "identity_hadamard";
}

int matrix_kind_n(const MatrixKind& kind) {
    if (const auto* g = std::get_if<GaussianKind>(&kind)) return g->n;
    return std::get<IdentityHadamardKind>(kind).n;
}

int matrix_kind_p(const MatrixKind& kind) {
    if (const auto* g = std::get_if<GaussianKind>(&kind)) return g->p;
    return 2 * std::get<IdentityHadamardKind>(kind).n;
}

SensingMatrix gen_gaussian_raw(int n, int p, Rng& rng) {
    if (n < 1 || p < 1) throw BadDims("gen_gaussian_raw: need n, p >= 1");
    SensingMatrix m;
    m.data.resize(n, p);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) m.data(i, j) = rng.normal();
    return m;
}

SensingMatrix gen_gaussian_matrix(int n, int p, Rng& rng) {
    return normalize_columns(gen_gaussian_raw(n, p, rng));
}

SensingMatrix gen_identity_hadamard(int n) {
    if (n < 1 || (n & (n - 1)) != 0)
        throw BadDims("gen_identity_hadamard: n must be a power of two");
    // Sylvester recursion with +-1 entries, then scale to unit columns
    Eigen::MatrixXd H(1, 1);
    H(0, 0) = 1.0;
    while (H.rows() < n) {
        const int s = static_cast<int>(H.rows());
        Eigen::MatrixXd next(2 * s, 2 * s);
        next.block(0, 0, s, s) = H;
        next.block(0, s, s, s) = H;
        next.block(s, 0, s, s) = H;
        next.block(s, s, s, s) = -H;
        H = next;
    }
    SensingMatrix m;
    m.data.resize(n, 2 * n);
    m.data.leftCols(n) = Eigen::MatrixXd::Identity(n, n);
    m.data.rightCols(n) = H / std::sqrt(static_cast<double>(n));
    return m;
}

SensingMatrix gen_matrix(const MatrixKind& kind, Rng& rng) {
    if (const auto* g = std::get_if<GaussianKind>(&kind))
        return gen_gaussian_matrix(g->n, g->p, rng);
    return gen_identity_hadamard(std::get<IdentityHadamardKind>(kind).n);
}

SparseSignal gen_signal(int p, int k0, const SignalModel& model, const SupportRule& rule,
                        Rng& rng) {
    if (k0 < 0 || k0 > p) throw BadDims("gen_signal: need 0 <= k0 <= p");
    SparseSignal s;
    s.k0 = k0;

    if (const auto* ex = std::get_if<ExplicitSupport>(&rule)) {
        s.support = ex->indices;  // caller order, so values pair up as given
        if (static_cast<int>(s.support.size()) != k0)
            throw ArgumentError("gen_signal: explicit support size != k0");
        std::set<int> uniq(s.support.begin(), s.support.end());
        if (static_cast<int>(uniq.size()) != k0 ||
            (k0 > 0 && (*uniq.begin() < 0 || *uniq.rbegin() >= p)))
            throw ArgumentError("gen_signal: explicit support invalid");
    } else {
        s.support = rng.sample_without_replacement(p, k0);
    }

    s.beta = Vec::Zero(p);
    if (const auto* ex = std::get_if<ExplicitValues>(&model)) {
        if (static_cast<int>(ex->values.size()) != k0)
            throw ArgumentError("gen_signal: explicit values size != k0");
        for (int i = 0; i < k0; ++i) s.beta[s.support[static_cast<std::size_t>(i)]] = ex->values[static_cast<std::size_t>(i)];
    } else if (std::holds_alternative<UniformSignValues>(model)) {
        for (int i = 0; i < k0; ++i)
            s.beta[s.support[static_cast<std::size_t>(i)]] = rng.uniform01() < 0.5 ? -1.0 : 1.0;
    } else {
        for (int i = 0; i < k0; ++i) s.beta[s.support[static_cast<std::size_t>(i)]] = rng.normal();
    }
    std::sort(s.support.begin(), s.support.end());
    return s;
}

NoisySystem make_noisy_system(const SensingMatrix& m, const SparseSignal& signal,
                              double snr_db, NoiseModel model, Rng& rng) {
    if (signal.beta.size() != m.p()) throw BadDims("make_noisy_system: beta length != p");
    NoisySystem sys;
    sys.matrix = m;
    sys.signal = signal;
    sys.noise_model = model;
    sys.snr_db = snr_db;

    const Vec xb = m.data * signal.beta;
    const double energy = xb.squaredNorm();
    if (energy <= 0.0)
        throw ZeroSignal("make_noisy_system: X beta is zero, SNR is undefined");

    const int n = m.n();
    Vec w(n);
    for (int i = 0; i < n; ++i) w[i] = rng.normal();

    if (model == NoiseModel::Gaussian) {
        const double sigma2 = energy / (n * std::pow(10.0, snr_db / 10.0));
        sys.sigma = std::sqrt(sigma2);
        w *= sys.sigma;
        sys.eps2 = w.norm();  // realized bound, tight for this draw
    } else {
        const double eps2 = std::sqrt(energy) / std::pow(10.0, snr_db / 20.0);
        w *= eps2 / w.norm();  // uniform direction, exact radius
        sys.eps2 = eps2;
        sys.sigma = eps2 / std::sqrt(static_cast<double>(n));
    }
    sys.noise = w;
    sys.y = xb + w;
    return sys;
}

NoisySystem make_noise_only_system(const SensingMatrix& m, double sigma, Rng& rng) {
    if (!(sigma > 0.0)) throw ArgumentError("make_noise_only_system: sigma must be > 0");
    NoisySystem sys;
    sys.matrix = m;
    sys.signal.beta = Vec::Zero(m.p());
    sys.signal.k0 = 0;
    sys.noise_model = NoiseModel::Gaussian;
    sys.sigma = sigma;
    sys.snr_db = -std::numeric_limits<double>::infinity();
    Vec w(m.n());
    for (int i = 0; i < m.n(); ++i) w[i] = sigma * rng.normal();
    sys.noise = w;
    sys.eps2 = w.norm();
    sys.y = w;
    return sys;
}

double nmse(const Vec& beta, const Vec& beta_hat) {
    const double denom = beta.squaredNorm();
    if (denom <= 0.0) throw ZeroSignal("nmse: reference signal is zero");
    return (beta - beta_hat).squaredNorm() / denom;
}

int pe_indicator(const std::vector<int>& support_true, const std::vector<int>& support_hat) {
    std::set<int> a(support_true.begin(), support_true.end());
    std::set<int> b(support_hat.begin(), support_hat.end());
    return a == b ? 0 : 1;
}

void save_bundle(const std::string& dir, const NoisySystem& sys) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    write_matrix_csv(dir + "/matrix.csv", sys.matrix);
    write_vector_csv(dir + "/beta.csv", sys.signal.beta);
    write_vector_csv(dir + "/noise.csv", sys.noise);
    write_vector_csv(dir + "/y.csv", sys.y);
    nlohmann::json j;
    j["n"] = sys.matrix.n();
    j["p"] = sys.matrix.p();
    j["k0"] = sys.signal.k0;
    j["support"] = sys.signal.support;
    j["snr_db"] = sys.snr_db;
    j["noise_model"] = sys.noise_model == NoiseModel::Gaussian ? "gaussian" : "l2_bounded";
    j["sigma"] = sys.sigma;
    j["eps2"] = sys.eps2;
    std::ofstream out(dir + "/manifest.json");
    out << j.dump(2) << '\n';
}

}  // namespace igp
