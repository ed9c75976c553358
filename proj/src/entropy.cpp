#include "ucn/entropy.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <vector>

#include "ucn/error.hpp"
#include "ucn/neighbor_kernels.hpp"
#include "ucn/rng.hpp"

namespace ucn {

void EstimatorConfig::validate(std::size_t samples) const {
    if (k < 1) throw ConfigError("estimator k must be >= 1");
    if (!(jitter_scale >= 0.0) || !std::isfinite(jitter_scale)) {
        throw ConfigError("jitter_scale must be finite and >= 0");
    }
    if (samples <= static_cast<std::size_t>(k)) {
        throw InsufficientDataError("estimator needs more than k=" + std::to_string(k) +
                                    " samples, got " + std::to_string(samples));
    }
}

double digamma_int(std::size_t n) {
    if (n == 0) throw ConfigError("digamma is undefined at 0");
    // psi(n) = -gamma + sum_{j<n} 1/j; summed small-to-large terms last.
    double h = 0.0;
    for (std::size_t j = n - 1; j >= 1; --j) h += 1.0 / static_cast<double>(j);
    return h - std::numbers::egamma;
}

namespace {

// psi(1..m) by the recurrence psi(n+1) = psi(n) + 1/n.
std::vector<double> digamma_table(std::size_t m) {
    std::vector<double> t(m + 1, 0.0);
    t[1] = -std::numbers::egamma;
    for (std::size_t n = 1; n < m; ++n) t[n + 1] = t[n] + 1.0 / static_cast<double>(n);
    return t;
}

void require_positive_radii(const std::vector<double>& radii) {
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0)) {
            throw ZeroDistanceError("sample " + std::to_string(i) +
                                    " has a zero k-th neighbour distance (duplicate points; "
                                    "use jitter_scale > 0)");
        }
    }
}

}  // namespace

Matrix jittered(const Matrix& points, double scale, std::uint64_t seed) {
    Matrix out = points;
    if (scale == 0.0) return out;
    for (std::size_t r = 0; r < out.rows(); ++r) {
        const std::uint64_t row_key = hash_combine(seed, r);
        for (std::size_t c = 0; c < out.cols(); ++c) {
            const double v = out(r, c);
            const double u = unit_interval(hash_combine(row_key, std::bit_cast<std::uint64_t>(v)));
            out(r, c) = v + scale * (2.0 * u - 1.0);
        }
    }
    return out;
}

double kl_entropy(const Matrix& points, const EstimatorConfig& config) {
    const std::size_t m = points.rows();
    const std::size_t d = points.cols();
    if (d == 0) throw ShapeError("kl_entropy needs at least one dimension");
    config.validate(m);
    const Matrix data = jittered(points, config.jitter_scale, config.seed);
    const auto radii = kernels::knn_radii(data, config.k);
    require_positive_radii(radii);
    double sum_log = 0.0;
    for (double r : radii) sum_log += std::log(r);
    const double dd = static_cast<double>(d);
    return digamma_int(m) - digamma_int(static_cast<std::size_t>(config.k)) +
           dd * std::numbers::ln2 + dd * sum_log / static_cast<double>(m);
}

double conditional_mutual_information(const Matrix& x, const Matrix& y, const Matrix& z,
                                      const EstimatorConfig& config) {
    const std::size_t m = x.rows();
    if (x.cols() == 0 || y.cols() == 0) throw ShapeError("X and Y need at least one column");
    if (y.rows() != m || (z.cols() > 0 && z.rows() != m)) {
        throw ShapeError("X, Y, Z are not row-aligned (" + std::to_string(m) + ", " +
                         std::to_string(y.rows()) + ", " + std::to_string(z.rows()) + " rows)");
    }
    config.validate(m);
    const Matrix joint = jittered(Matrix::hstack({&x, &y, &z}), config.jitter_scale, config.seed);
    const auto counts = kernels::cmi_neighbor_counts(joint, x.cols(), y.cols(), config.k);
    require_positive_radii(counts.radius);

    const auto psi = digamma_table(m);
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        acc += psi[counts.xz[i] + 1] + psi[counts.yz[i] + 1] - psi[counts.z[i] + 1];
    }
    return psi[static_cast<std::size_t>(config.k)] - acc / static_cast<double>(m);
}

double causal_entropy(std::span<const double> x, std::span<const double> y, const Matrix& z,
                      const EstimatorConfig& config) {
    if (x.size() != y.size()) {
        throw ShapeError("target and candidate lengths differ (" + std::to_string(x.size()) +
                         " vs " + std::to_string(y.size()) + ")");
    }
    return conditional_mutual_information(Matrix::column(x), Matrix::column(y), z, config);
}

double causal_entropy_by_entropies(std::span<const double> x, std::span<const double> y,
                                   const Matrix& z, const EstimatorConfig& config) {
    if (x.size() != y.size() || (z.cols() > 0 && z.rows() != x.size())) {
        throw ShapeError("X, Y, Z are not row-aligned");
    }
    const Matrix xm = Matrix::column(x);
    const Matrix ym = Matrix::column(y);
    double h = kl_entropy(Matrix::hstack({&xm, &z}), config) +
               kl_entropy(Matrix::hstack({&ym, &z}), config) -
               kl_entropy(Matrix::hstack({&xm, &ym, &z}), config);
    if (z.cols() > 0) h -= kl_entropy(z, config);
    return h;
}

}  // namespace ucn
