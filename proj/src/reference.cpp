#include "igpkit/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace igp {
namespace reference {

namespace {

bool contains(const std::vector<int>& v, int t) {
    return std::find(v.begin(), v.end(), t) != v.end();
}

Eigen::MatrixXd submatrix(const SensingMatrix& m, const std::vector<int>& support) {
    Eigen::MatrixXd sub(m.n(), static_cast<int>(support.size()));
    for (std::size_t j = 0; j < support.size(); ++j)
        sub.col(static_cast<int>(j)) = m.data.col(support[j]);
    return sub;
}

}  // namespace

Vec dense_residual(const SensingMatrix& m, const std::vector<int>& support, const Vec& y) {
    if (support.empty()) return y;
    Eigen::MatrixXd sub = submatrix(m, support);
    Vec coef = sub.colPivHouseholderQr().solve(y);
    return y - sub * coef;
}

int pick_omp(const SensingMatrix& m, const std::vector<int>& support, const Vec& r) {
    int best = -1;
    double bestval = -1.0;
    for (int j = 0; j < m.p(); ++j) {
        if (contains(support, j)) continue;
        const double v = std::fabs(m.data.col(j).dot(r));
        if (v > bestval) {
            bestval = v;
            best = j;
        }
    }
    return best;
}

int pick_ols(const SensingMatrix& m, const std::vector<int>& support, const Vec& y) {
    int best = -1;
    double bestval = std::numeric_limits<double>::infinity();
    std::vector<int> trial = support;
    trial.push_back(-1);
    for (int j = 0; j < m.p(); ++j) {
        if (contains(support, j)) continue;
        trial.back() = j;
        Eigen::MatrixXd sub = submatrix(m, trial);
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sub);
        qr.setThreshold(kRankTol);
        if (qr.rank() < static_cast<int>(trial.size())) continue;  // span unchanged
        const double v = (y - sub * qr.solve(y)).norm();
        if (v < bestval) {
            bestval = v;
            best = j;
        }
    }
    return best;
}

PursuitTrace run(const SensingMatrix& m, const Vec& y, Algorithm alg, KMax kmax) {
    const double ynorm = y.norm();
    if (ynorm <= 0.0) throw ZeroVector("reference::run: observation has zero norm");

    PursuitTrace trace;
    trace.algorithm = alg;
    trace.matrix = std::make_shared<SensingMatrix>(m);
    trace.y = y;
    trace.supports.push_back({});
    trace.residual_norms.push_back(ynorm);
    trace.termination = Termination::ReachedKmax;

    std::vector<int> support;
    const int limit = std::min(kmax.value, m.p());
    for (int k = 1; k <= limit; ++k) {
        const Vec r = dense_residual(m, support, y);
        if (r.norm() <= kResidualZeroTol * ynorm) {
            trace.termination = Termination::ResidualZero;
            return trace;
        }
        const int t = alg == Algorithm::Omp ? pick_omp(m, support, r) : pick_ols(m, support, y);
        if (t < 0) {
            trace.termination = Termination::RankDeficient;
            return trace;
        }
        // the max-correlation rule does not skip dependent picks
        if (alg == Algorithm::Omp) {
            std::vector<int> trial = support;
            trial.push_back(t);
            Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(submatrix(m, trial));
            qr.setThreshold(kRankTol);
            if (qr.rank() < static_cast<int>(trial.size())) {
                trace.termination = Termination::RankDeficient;
                return trace;
            }
        }
        support.push_back(t);
        trace.supports.push_back(support);
        const double rn = dense_residual(m, support, y).norm();
        trace.residual_norms.push_back(rn);
        trace.rr.push_back(std::min(rn / trace.residual_norms[static_cast<std::size_t>(k) - 1], 1.0));
    }
    return trace;
}

}  // namespace reference
}  // namespace igp
