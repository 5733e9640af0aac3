#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "igpkit/linalg.hpp"
#include "igpkit/rng.hpp"

namespace igp {

// i.i.d. standard normal entries before column normalization
struct GaussianKind {
    int n = 0;
    int p = 0;
};

// [I_n, H_n] with the Sylvester Hadamard matrix scaled to unit columns;
// n must be a power of two, p is always 2n
struct IdentityHadamardKind {
    int n = 0;
};

using MatrixKind = std::variant<GaussianKind, IdentityHadamardKind>;

std::string matrix_kind_name(const MatrixKind& kind);
int matrix_kind_n(const MatrixKind& kind);
int matrix_kind_p(const MatrixKind& kind);

// Entries +-1 with equal probability.
struct UniformSignValues {};
// Values i.i.d. standard normal.
struct GaussianValues {};
// Caller-provided values, matched positionally to the support in the order
// it was given (the stored support is sorted afterwards).
struct ExplicitValues {
    std::vector<double> values;
};
using SignalModel = std::variant<UniformSignValues, GaussianValues, ExplicitValues>;

struct RandomSupport {};
struct ExplicitSupport {
    std::vector<int> indices;
};
using SupportRule = std::variant<RandomSupport, ExplicitSupport>;

struct SparseSignal {
    Vec beta;                  // length p
    std::vector<int> support;  // ascending, |support| == k0
    int k0 = 0;
};

enum class NoiseModel { Gaussian, L2Bounded };

struct NoisySystem {
    SensingMatrix matrix;
    SparseSignal signal;
    Vec noise;
    Vec y;  // = matrix * beta + noise, by construction
    NoiseModel noise_model = NoiseModel::Gaussian;
    double sigma = 0.0;   // Gaussian std; for L2Bounded the equivalent scale
    double eps2 = 0.0;    // realized ||noise||_2 bound (exact for L2Bounded)
    double snr_db = 0.0;
};

// Raw Gaussian matrix before normalization (exposed so the entry moments can
// be checked directly).
SensingMatrix gen_gaussian_raw(int n, int p, Rng& rng);
SensingMatrix gen_gaussian_matrix(int n, int p, Rng& rng);

// Unit-column Sylvester Hadamard block, n a power of two.
SensingMatrix gen_identity_hadamard(int n);

SensingMatrix gen_matrix(const MatrixKind& kind, Rng& rng);

SparseSignal gen_signal(int p, int k0, const SignalModel& model, const SupportRule& rule,
                        Rng& rng);

// Assembles y = X beta + w with w at the requested SNR:
//   Gaussian:  sigma^2 = ||X beta||^2 / (n 10^(snr/10)), w ~ N(0, sigma^2 I)
//   L2Bounded: eps2 = ||X beta|| / 10^(snr/20), w uniform on the eps2-sphere
// Raises ZeroSignal when ||X beta|| == 0.
NoisySystem make_noisy_system(const SensingMatrix& m, const SparseSignal& signal,
                              double snr_db, NoiseModel model, Rng& rng);

// Noise-only observation y = w, w ~ N(0, sigma^2 I); beta = 0. snr is
// meaningless here so sigma is given directly.
NoisySystem make_noise_only_system(const SensingMatrix& m, double sigma, Rng& rng);

// ||beta - beta_hat||^2 / ||beta||^2; raises ZeroSignal for beta == 0.
double nmse(const Vec& beta, const Vec& beta_hat);

// 1 when the supports differ as sets, else 0.
int pe_indicator(const std::vector<int>& support_true, const std::vector<int>& support_hat);

// Directory bundle: matrix.csv, beta.csv, noise.csv, y.csv + manifest.json.
void save_bundle(const std::string& dir, const NoisySystem& sys);

}  // namespace igp
