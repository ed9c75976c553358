#include <algorithm>
#include <cmath>
#include <vector>

#include "ucn/error.hpp"
#include "ucn/neighbor_kernels.hpp"

namespace ucn::kernels::reference {

namespace {

double block_distance(const Matrix& pts, std::size_t a, std::size_t b, std::size_t from,
                      std::size_t to) {
    double d = 0.0;
    for (std::size_t c = from; c < to; ++c) d = std::max(d, std::abs(pts(a, c) - pts(b, c)));
    return d;
}

void check(const Matrix& pts, int k) {
    if (k < 1 || static_cast<std::size_t>(k) >= pts.rows()) {
        throw InsufficientDataError("need 1 <= k < sample count (k=" + std::to_string(k) +
                                    ", m=" + std::to_string(pts.rows()) + ")");
    }
}

}  // namespace

std::vector<double> knn_radii(const Matrix& points, int k) {
    check(points, k);
    const std::size_t m = points.rows();
    std::vector<double> out(m);
    std::vector<double> dist;
    dist.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        dist.clear();
        for (std::size_t j = 0; j < m; ++j) {
            if (j != i) dist.push_back(block_distance(points, i, j, 0, points.cols()));
        }
        std::nth_element(dist.begin(), dist.begin() + (k - 1), dist.end());
        out[i] = dist[static_cast<std::size_t>(k - 1)];
    }
    return out;
}

CmiNeighborCounts cmi_neighbor_counts(const Matrix& joint, std::size_t dx, std::size_t dy,
                                      int k) {
    check(joint, k);
    const std::size_t m = joint.rows();
    const std::size_t d = joint.cols();
    const std::size_t zbeg = dx + dy;
    CmiNeighborCounts out;
    out.radius.resize(m);
    out.xz.resize(m);
    out.yz.resize(m);
    out.z.resize(m);
    std::vector<double> ax(m), ay(m), az(m), dist;
    dist.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        dist.clear();
        for (std::size_t j = 0; j < m; ++j) {
            ax[j] = block_distance(joint, i, j, 0, dx);
            ay[j] = block_distance(joint, i, j, dx, zbeg);
            az[j] = block_distance(joint, i, j, zbeg, d);
            if (j != i) dist.push_back(std::max({ax[j], ay[j], az[j]}));
        }
        std::nth_element(dist.begin(), dist.begin() + (k - 1), dist.end());
        const double eps = dist[static_cast<std::size_t>(k - 1)];
        std::size_t cxz = 0, cyz = 0, cz = 0;
        for (std::size_t j = 0; j < m; ++j) {
            if (j == i) continue;
            cxz += std::max(ax[j], az[j]) < eps;
            cyz += std::max(ay[j], az[j]) < eps;
            cz += az[j] < eps;
        }
        out.radius[i] = eps;
        out.xz[i] = cxz;
        out.yz[i] = cyz;
        out.z[i] = (d == zbeg) ? m - 1 : cz;
    }
    return out;
}

}  // namespace ucn::kernels::reference
