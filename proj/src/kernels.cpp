#include "igpkit/kernels.hpp"

#include <cmath>
#include <cstdint>

namespace igp {

namespace {

inline bool go_parallel(Exec exec, std::size_t work) {
    return exec == Exec::Parallel && work > kParallelCutoff;
}

// Accumulate out[j0..j1) over all rows in ascending row order.
inline void colwise_dot_block(const double* X, int n, int p, const double* r, double* out,
                              int j0, int j1) {
    for (int j = j0; j < j1; ++j) out[j] = 0.0;
    for (int i = 0; i < n; ++i) {
        const double ri = r[i];
        const double* row = X + static_cast<std::size_t>(i) * p;
        for (int j = j0; j < j1; ++j) out[j] += row[j] * ri;
    }
}

inline void dot_and_norm2_block(const double* B, int n, int p, const double* r, double* corr,
                                double* norm2, int j0, int j1) {
    for (int j = j0; j < j1; ++j) {
        corr[j] = 0.0;
        norm2[j] = 0.0;
    }
    for (int i = 0; i < n; ++i) {
        const double ri = r[i];
        const double* row = B + static_cast<std::size_t>(i) * p;
        for (int j = j0; j < j1; ++j) {
            const double b = row[j];
            corr[j] += b * ri;
            norm2[j] += b * b;
        }
    }
}

inline void deflate_block(double* B, int n, int p, const double* q, const double* t, int j0,
                          int j1) {
    for (int i = 0; i < n; ++i) {
        const double qi = q[i];
        double* row = B + static_cast<std::size_t>(i) * p;
        for (int j = j0; j < j1; ++j) row[j] -= qi * t[j];
    }
}

}  // namespace

void colwise_dot(const double* X, int n, int p, const double* r, double* out, Exec exec) {
    const std::size_t work = static_cast<std::size_t>(n) * p;
    if (go_parallel(exec, work)) {
#pragma omp parallel for schedule(static)
        for (int j = 0; j < p; ++j) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += X[static_cast<std::size_t>(i) * p + j] * r[i];
            out[j] = acc;
        }
    } else {
        colwise_dot_block(X, n, p, r, out, 0, p);
    }
}

void colwise_dot_and_norm2(const double* B, int n, int p, const double* r, double* corr,
                           double* norm2, Exec exec) {
    const std::size_t work = static_cast<std::size_t>(n) * p;
    if (go_parallel(exec, work)) {
#pragma omp parallel for schedule(static)
        for (int j = 0; j < p; ++j) {
            double c = 0.0, n2 = 0.0;
            for (int i = 0; i < n; ++i) {
                const double b = B[static_cast<std::size_t>(i) * p + j];
                c += b * r[i];
                n2 += b * b;
            }
            corr[j] = c;
            norm2[j] = n2;
        }
    } else {
        dot_and_norm2_block(B, n, p, r, corr, norm2, 0, p);
    }
}

void deflate_columns(double* B, int n, int p, const double* q, const double* t, Exec exec) {
    const std::size_t work = static_cast<std::size_t>(n) * p;
    if (go_parallel(exec, work)) {
#pragma omp parallel for schedule(static)
        for (int j = 0; j < p; ++j) {
            const double tj = t[j];
            for (int i = 0; i < n; ++i) B[static_cast<std::size_t>(i) * p + j] -= q[i] * tj;
        }
    } else {
        deflate_block(B, n, p, q, t, 0, p);
    }
}

void subtract_projection(double* v, int n, const double* Q, int k, const double* coef,
                         Exec exec) {
    const std::size_t work = static_cast<std::size_t>(n) * k;
    if (go_parallel(exec, work)) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) {
            double acc = v[i];
            for (int j = 0; j < k; ++j) acc -= Q[static_cast<std::size_t>(j) * n + i] * coef[j];
            v[i] = acc;
        }
    } else {
        for (int i = 0; i < n; ++i) {
            double acc = v[i];
            for (int j = 0; j < k; ++j) acc -= Q[static_cast<std::size_t>(j) * n + i] * coef[j];
            v[i] = acc;
        }
    }
}

void basis_dots(const double* Q, int n, int k, const double* v, double* coef, Exec exec) {
    const std::size_t work = static_cast<std::size_t>(n) * k;
    if (go_parallel(exec, work)) {
#pragma omp parallel for schedule(static)
        for (int j = 0; j < k; ++j) {
            const double* col = Q + static_cast<std::size_t>(j) * n;
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += col[i] * v[i];
            coef[j] = acc;
        }
    } else {
        for (int j = 0; j < k; ++j) {
            const double* col = Q + static_cast<std::size_t>(j) * n;
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += col[i] * v[i];
            coef[j] = acc;
        }
    }
}

int argmax_abs_masked(const double* v, int p, const unsigned char* mask) {
    int best = -1;
    double bestval = -1.0;
    for (int j = 0; j < p; ++j) {
        if (mask[j]) continue;
        const double a = std::fabs(v[j]);
        if (a > bestval) {
            bestval = a;
            best = j;
        }
    }
    return best;
}

double pairwise_sum(const double* v, std::size_t len) {
    if (len == 0) return 0.0;
    if (len <= 8) {
        double acc = v[0];
        for (std::size_t i = 1; i < len; ++i) acc += v[i];
        return acc;
    }
    const std::size_t half = len / 2;
    return pairwise_sum(v, half) + pairwise_sum(v + half, len - half);
}

double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

}  // namespace igp
