#pragma once

#include <cstddef>
#include <vector>

namespace igp {

// Every kernel below has a serial and an OpenMP path that produce bitwise
// identical results: each output element is accumulated in the same index
// order on both paths, and the parallel split is only ever across output
// elements. Exec::Parallel falls back to the plain loop below a work cutoff
// so small problems don't pay the fork/join overhead.
enum class Exec { Serial, Parallel };

inline constexpr std::size_t kParallelCutoff = 1u << 15;

// out[j] = sum_i X[i*p + j] * r[i]   (X row-major n x p)
void colwise_dot(const double* X, int n, int p, const double* r, double* out, Exec exec);

// Per column j of the row-major n x p matrix B:
//   corr[j]   = sum_i B(i,j) * r[i]
//   norm2[j]  = sum_i B(i,j)^2
// One streaming pass; used by the OLS candidate scan.
void colwise_dot_and_norm2(const double* B, int n, int p, const double* r, double* corr,
                           double* norm2, Exec exec);

// B(i,j) -= q[i] * t[j]  (rank-one deflation of every column)
void deflate_columns(double* B, int n, int p, const double* q, const double* t, Exec exec);

// v -= Q * coef where Q is column-major n x k. Row i accumulates in
// ascending column order.
void subtract_projection(double* v, int n, const double* Q, int k, const double* coef,
                         Exec exec);

// coef[j] = dot(Q.col(j), v) for column-major Q
void basis_dots(const double* Q, int n, int k, const double* v, double* coef, Exec exec);

// Index of the largest |v[j]| over admissible entries (mask[j] == 0);
// ties resolve to the smallest index. Returns -1 when nothing is admissible.
int argmax_abs_masked(const double* v, int p, const unsigned char* mask);

// Deterministic sum of a contiguous array by recursive halving. The result
// depends only on the values and their order, never on thread count.
double pairwise_sum(const double* v, std::size_t len);
double pairwise_sum(const std::vector<double>& v);

}  // namespace igp
