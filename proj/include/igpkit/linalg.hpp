#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "igpkit/errors.hpp"
#include "igpkit/kernels.hpp"

namespace igp {

using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::VectorXd;

// Tolerances shared by the incremental projection code. The rank tolerance
// is absolute and applies to the norm of an orthogonalized column whose
// input had unit norm; the residual-zero test is relative to ||y||.
inline constexpr double kRankTol = 1e-10;
inline constexpr double kResidualZeroTol = 1e-10;

// Dense sensing matrix, row-major storage, unit-norm columns once normalized.
struct SensingMatrix {
    RowMajorMatrix data;

    int n() const { return static_cast<int>(data.rows()); }
    int p() const { return static_cast<int>(data.cols()); }
    Vec col(int j) const { return data.col(j); }
};

// Divides every column by its Euclidean norm. A column with norm below
// 1e-300 raises ZeroColumn.
SensingMatrix normalize_columns(const SensingMatrix& m);

// State of the nested orthogonal projection P_J built one column at a time.
// q columns are orthonormal (modified Gram-Schmidt with one
// reorthogonalization pass), residual == (I - P_J) y for the y passed to
// make_projection_state.
struct ProjectionState {
    std::vector<int> support;   // selection order
    Eigen::MatrixXd basis;      // n x |support|, orthonormal, column-major
    Vec residual;
    double residual_norm = 0.0;
};

ProjectionState make_projection_state(const Vec& y);

// Extends the state with column t of m. Raises RankDeficientError when the
// orthogonalized column has norm <= kRankTol, raises ArgumentError when t is
// already in the support. Pure: returns a new state.
ProjectionState project_extend(const SensingMatrix& m, const ProjectionState& state, int t,
                               Exec exec = Exec::Serial);

// Least squares restricted to the given columns: minimizes ||y - X_S b||_2.
// Raises RankDeficientError when X_S is numerically rank deficient.
Vec least_squares_on_support(const SensingMatrix& m, const std::vector<int>& support,
                             const Vec& y);

// Scatters coefficients of a support-restricted solve into a length-p vector.
Vec scatter_to_full(const Vec& coeffs, const std::vector<int>& support, int p);

// --- file formats ---------------------------------------------------------
// CSV: one matrix row per line, comma separated.
// Binary: 8-byte header of two little-endian uint32 (n then p) followed by
// n*p float64 values in row-major order.

SensingMatrix read_matrix_csv(const std::string& path);
void write_matrix_csv(const std::string& path, const SensingMatrix& m);
SensingMatrix read_matrix_binary(const std::string& path);
void write_matrix_binary(const std::string& path, const SensingMatrix& m);

// Dispatches on the ".csv" extension, everything else is binary.
SensingMatrix read_matrix_auto(const std::string& path);

// Vector CSV: one value per line.
Vec read_vector_csv(const std::string& path);
void write_vector_csv(const std::string& path, const Vec& v);

}  // namespace igp
