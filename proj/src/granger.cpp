#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "ucn/error.hpp"
#include "ucn/eval.hpp"

namespace ucn {

namespace {

constexpr double kRidgePenalty = 1e-8;

double residual_sum_of_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, bool ridge) {
    Eigen::VectorXd beta;
    if (ridge) {
        const Eigen::Index p = X.cols();
        Eigen::MatrixXd aug(X.rows() + p, p);
        aug << X, std::sqrt(kRidgePenalty) * Eigen::MatrixXd::Identity(p, p);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(X.rows() + p);
        rhs.head(X.rows()) = y;
        beta = aug.householderQr().solve(rhs);
    } else {
        beta = X.householderQr().solve(y);
    }
    return (y - X * beta).squaredNorm();
}

}  // namespace

GrangerResult granger_scores(const TimeSeriesPanel& panel, int tau_max) {
    if (tau_max < 1) throw ConfigError("tau_max must be >= 1");
    const std::size_t n = panel.variables();
    const auto tau = static_cast<std::size_t>(tau_max);
    if (panel.steps() <= tau || panel.steps() - tau <= n * tau + 1) {
        throw InsufficientDataError("Granger regression needs more than n*tau_max + 1 rows");
    }
    const std::size_t rows = panel.steps() - tau;
    const std::size_t p = n * tau + 1;

    // Column 0 is the intercept; column 1 + (lag-1)*n + var holds x_{var,t-lag}.
    Eigen::MatrixXd full(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(p));
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t t = r + tau;
        full(static_cast<Eigen::Index>(r), 0) = 1.0;
        for (std::size_t lag = 1; lag <= tau; ++lag) {
            for (std::size_t v = 0; v < n; ++v) {
                full(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(1 + (lag - 1) * n + v)) =
                    panel.at(t - lag, v);
            }
        }
    }

    GrangerResult result;
    result.scores = {n, tau_max, std::vector<double>(n * n * tau, 0.0)};
    const auto rank = Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(full).rank();
    const bool ridge = rank < static_cast<Eigen::Index>(p);
    if (ridge) {
        result.notes.push_back("design rank " + std::to_string(rank) + " < " + std::to_string(p) +
                               " columns; ridge penalty 1e-8 applied to every fit");
    }

    for (std::size_t i = 0; i < n; ++i) {
        Eigen::VectorXd y(static_cast<Eigen::Index>(rows));
        for (std::size_t r = 0; r < rows; ++r) y(static_cast<Eigen::Index>(r)) = panel.at(r + tau, i);
        const double rss_full = residual_sum_of_squares(full, y, ridge);

        Eigen::MatrixXd restricted(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(p - 1));
        for (std::size_t c = 1; c < p; ++c) {
            const auto ci = static_cast<Eigen::Index>(c);
            restricted.leftCols(ci) = full.leftCols(ci);
            restricted.rightCols(static_cast<Eigen::Index>(p) - ci - 1) =
                full.rightCols(static_cast<Eigen::Index>(p) - ci - 1);
            const double rss_r = residual_sum_of_squares(restricted, y, ridge);
            double score = 0.0;
            if (rss_full > 0.0 && rss_r > 0.0) score = std::max(0.0, std::log(rss_r / rss_full));
            const std::size_t lag = (c - 1) / n + 1;
            const std::size_t j = (c - 1) % n;
            result.scores.values[(j * n + i) * tau + (lag - 1)] = score;
        }
    }
    return result;
}

}  // namespace ucn
