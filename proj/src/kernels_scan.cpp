#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ucn/neighbor_kernels.hpp"

// Exhaustive scan over column-major data. Per query sample it computes the
// per-block max-norm distance to every other sample in contiguous passes, so
// the inner loops vectorise; in high dimension this beats tree pruning.
namespace ucn::kernels::detail {

namespace {

std::vector<double> to_columns(const Matrix& pts) {
    const std::size_t m = pts.rows();
    const std::size_t d = pts.cols();
    std::vector<double> cols(m * d);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < d; ++c) cols[c * m + r] = pts(r, c);
    }
    return cols;
}

// dist[j] = max_{c in [from,to)} |col_c[j] - col_c[i]|, or 0 for an empty block.
void block_distances(const double* cols, std::size_t m, std::size_t i, std::size_t from,
                     std::size_t to, double* dist) {
    if (from == to) {
        std::fill(dist, dist + m, 0.0);
        return;
    }
    {
        const double* col = cols + from * m;
        const double q = col[i];
        for (std::size_t j = 0; j < m; ++j) dist[j] = std::abs(col[j] - q);
    }
    for (std::size_t c = from + 1; c < to; ++c) {
        const double* col = cols + c * m;
        const double q = col[i];
        for (std::size_t j = 0; j < m; ++j) {
            const double a = std::abs(col[j] - q);
            dist[j] = dist[j] > a ? dist[j] : a;
        }
    }
}

double kth_smallest(const double* dist, std::size_t m, std::size_t self, int k,
                    std::vector<double>& scratch) {
    constexpr int kSmall = 16;
    if (k <= kSmall) {
        double best[kSmall];
        std::fill(best, best + k, std::numeric_limits<double>::infinity());
        for (std::size_t j = 0; j < m; ++j) {
            const double v = dist[j];
            if (v >= best[k - 1] || j == self) continue;
            int pos = k - 1;
            while (pos > 0 && best[pos - 1] > v) {
                best[pos] = best[pos - 1];
                --pos;
            }
            best[pos] = v;
        }
        return best[k - 1];
    }
    scratch.assign(dist, dist + m);
    scratch[self] = std::numeric_limits<double>::infinity();
    std::nth_element(scratch.begin(), scratch.begin() + (k - 1), scratch.end());
    return scratch[static_cast<std::size_t>(k - 1)];
}

}  // namespace

std::vector<double> scan_knn_radii(const Matrix& points, int k) {
    const std::size_t m = points.rows();
    const std::size_t d = points.cols();
    const auto cols = to_columns(points);
    std::vector<double> out(m);
    const auto mm = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel
    {
        std::vector<double> dist(m), scratch;
#pragma omp for schedule(static)
        for (std::ptrdiff_t si = 0; si < mm; ++si) {
            const auto i = static_cast<std::size_t>(si);
            block_distances(cols.data(), m, i, 0, d, dist.data());
            out[i] = kth_smallest(dist.data(), m, i, k, scratch);
        }
    }
    return out;
}

CmiNeighborCounts scan_cmi_neighbor_counts(const Matrix& joint, std::size_t dx, std::size_t dy,
                                           int k) {
    const std::size_t m = joint.rows();
    const std::size_t d = joint.cols();
    const std::size_t zbeg = dx + dy;
    const bool has_z = d > zbeg;
    const auto cols = to_columns(joint);
    CmiNeighborCounts out;
    out.radius.resize(m);
    out.xz.resize(m);
    out.yz.resize(m);
    out.z.assign(m, m - 1);
    const auto mm = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel
    {
        std::vector<double> ax(m), ay(m), az(m), all(m), scratch;
#pragma omp for schedule(static)
        for (std::ptrdiff_t si = 0; si < mm; ++si) {
            const auto i = static_cast<std::size_t>(si);
            block_distances(cols.data(), m, i, 0, dx, ax.data());
            block_distances(cols.data(), m, i, dx, zbeg, ay.data());
            block_distances(cols.data(), m, i, zbeg, d, az.data());
            for (std::size_t j = 0; j < m; ++j) {
                const double a = ax[j] > ay[j] ? ax[j] : ay[j];
                all[j] = a > az[j] ? a : az[j];
            }
            const double eps = kth_smallest(all.data(), m, i, k, scratch);
            std::size_t cxz = 0, cyz = 0, cz = 0;
            for (std::size_t j = 0; j < m; ++j) {
                const double z = az[j];
                cxz += (ax[j] > z ? ax[j] : z) < eps;
                cyz += (ay[j] > z ? ay[j] : z) < eps;
                cz += z < eps;
            }
            // The sample itself sits at distance 0 in every subspace.
            const std::size_t self = eps > 0.0 ? 1 : 0;
            out.radius[i] = eps;
            out.xz[i] = cxz - self;
            out.yz[i] = cyz - self;
            if (has_z) out.z[i] = cz - self;
        }
    }
    return out;
}

}  // namespace ucn::kernels::detail
