#include "igpkit/linalg.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace igp {

SensingMatrix normalize_columns(const SensingMatrix& m) {
    SensingMatrix out = m;
    for (int j = 0; j < out.p(); ++j) {
        const double nrm = out.data.col(j).norm();
        if (nrm < 1e-300) throw ZeroColumn(j);
        out.data.col(j) /= nrm;
    }
    return out;
}

ProjectionState make_projection_state(const Vec& y) {
    ProjectionState st;
    st.residual = y;
    st.residual_norm = y.norm();
    return st;
}

ProjectionState project_extend(const SensingMatrix& m, const ProjectionState& state, int t,
                               Exec exec) {
    const int n = m.n();
    if (t < 0 || t >= m.p()) throw ArgumentError("project_extend: column index out of range");
    if (std::find(state.support.begin(), state.support.end(), t) != state.support.end())
        throw ArgumentError("project_extend: column already in support");

    const int k = static_cast<int>(state.support.size());
    Vec v = m.col(t);
    std::vector<double> coef(static_cast<std::size_t>(std::max(k, 1)));
    // classical Gram-Schmidt plus one reorthogonalization pass
    for (int pass = 0; pass < 2 && k > 0; ++pass) {
        basis_dots(state.basis.data(), n, k, v.data(), coef.data(), exec);
        subtract_projection(v.data(), n, state.basis.data(), k, coef.data(), exec);
    }
    const double vnorm = v.norm();
    if (vnorm <= kRankTol) throw RankDeficientError(t);

    ProjectionState next;
    next.support = state.support;
    next.support.push_back(t);
    next.basis.resize(n, k + 1);
    if (k > 0) next.basis.leftCols(k) = state.basis;
    next.basis.col(k) = v / vnorm;

    next.residual = state.residual;
    const double proj = next.basis.col(k).dot(next.residual);
    next.residual -= proj * next.basis.col(k);
    next.residual_norm = next.residual.norm();
    return next;
}

Vec least_squares_on_support(const SensingMatrix& m, const std::vector<int>& support,
                             const Vec& y) {
    const int k = static_cast<int>(support.size());
    if (k == 0) return Vec::Zero(0);
    Eigen::MatrixXd sub(m.n(), k);
    for (int j = 0; j < k; ++j) {
        const int c = support[j];
        if (c < 0 || c >= m.p())
            throw ArgumentError("least_squares_on_support: column index out of range");
        sub.col(j) = m.data.col(c);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sub);
    qr.setThreshold(kRankTol);
    if (qr.rank() < k) throw RankDeficientError(support[static_cast<int>(qr.rank())]);
    return qr.solve(y);
}

Vec scatter_to_full(const Vec& coeffs, const std::vector<int>& support, int p) {
    Vec full = Vec::Zero(p);
    for (std::size_t i = 0; i < support.size(); ++i) full[support[i]] = coeffs[i];
    return full;
}

// --- file I/O ---------------------------------------------------------------

namespace {

void format_double(char* buf, std::size_t cap, double v) { std::snprintf(buf, cap, "%.17g", v); }

}  // namespace

SensingMatrix read_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ParseError(path + ": bad numeric cell '" + cell + "'");
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw ParseError(path + ": ragged rows");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(path + ": empty matrix");
    SensingMatrix m;
    m.data.resize(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.front().size(); ++j)
            m.data(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    return m;
}

void write_matrix_csv(const std::string& path, const SensingMatrix& m) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    char buf[40];
    for (int i = 0; i < m.n(); ++i) {
        for (int j = 0; j < m.p(); ++j) {
            format_double(buf, sizeof buf, m.data(i, j));
            out << buf << (j + 1 == m.p() ? "" : ",");
        }
        out << '\n';
    }
}

SensingMatrix read_matrix_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    std::uint32_t dims[2];
    in.read(reinterpret_cast<char*>(dims), sizeof dims);
    if (!in) throw ParseError(path + ": truncated header");
    const std::uint64_t n = dims[0], p = dims[1];
    if (n == 0 || p == 0 || n * p > (1ull << 32))
        throw ParseError(path + ": implausible dimensions in header");
    SensingMatrix m;
    m.data.resize(static_cast<int>(n), static_cast<int>(p));
    in.read(reinterpret_cast<char*>(m.data.data()),
            static_cast<std::streamsize>(n * p * sizeof(double)));
    if (!in) throw ParseError(path + ": truncated payload");
    return m;
}

void write_matrix_binary(const std::string& path, const SensingMatrix& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    const std::uint32_t dims[2] = {static_cast<std::uint32_t>(m.n()),
                                   static_cast<std::uint32_t>(m.p())};
    out.write(reinterpret_cast<const char*>(dims), sizeof dims);
    out.write(reinterpret_cast<const char*>(m.data.data()),
              static_cast<std::streamsize>(static_cast<std::uint64_t>(m.n()) * m.p() *
                                           sizeof(double)));
}

SensingMatrix read_matrix_auto(const std::string& path) {
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0)
        return read_matrix_csv(path);
    return read_matrix_binary(path);
}

Vec read_vector_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    std::vector<double> vals;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            vals.push_back(std::stod(line));
        } catch (const std::exception&) {
            throw ParseError(path + ": bad numeric line '" + line + "'");
        }
    }
    if (vals.empty()) throw ParseError(path + ": empty vector");
    Vec v(static_cast<int>(vals.size()));
    for (std::size_t i = 0; i < vals.size(); ++i) v[static_cast<int>(i)] = vals[i];
    return v;
}

void write_vector_csv(const std::string& path, const Vec& v) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    char buf[40];
    for (int i = 0; i < v.size(); ++i) {
        format_double(buf, sizeof buf, v[i]);
        out << buf << '\n';
    }
}

}  // namespace igp
