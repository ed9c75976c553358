#include <numeric>
#include <vector>

#include "ucn/error.hpp"
#include "ucn/kdtree.hpp"
#include "ucn/neighbor_kernels.hpp"

namespace ucn::kernels {

namespace {

void check(const Matrix& pts, int k) {
    if (k < 1 || static_cast<std::size_t>(k) >= pts.rows()) {
        throw InsufficientDataError("need 1 <= k < sample count (k=" + std::to_string(k) +
                                    ", m=" + std::to_string(pts.rows()) + ")");
    }
}

std::vector<std::size_t> iota_columns(std::size_t from, std::size_t to) {
    std::vector<std::size_t> cols(to - from);
    std::iota(cols.begin(), cols.end(), from);
    return cols;
}

}  // namespace

namespace detail {

std::vector<double> tree_knn_radii(const Matrix& points, int k) {
    const KdTree tree(points);
    const auto m = static_cast<std::ptrdiff_t>(points.rows());
    std::vector<double> out(points.rows());
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t i = 0; i < m; ++i) {
        out[static_cast<std::size_t>(i)] = tree.kth_distance(static_cast<std::size_t>(i), k);
    }
    return out;
}

CmiNeighborCounts tree_cmi_neighbor_counts(const Matrix& joint, std::size_t dx, std::size_t dy,
                                           int k) {
    const std::size_t d = joint.cols();
    const std::size_t zbeg = dx + dy;
    const bool has_z = d > zbeg;

    auto xz_cols = iota_columns(0, dx);
    auto yz_cols = iota_columns(dx, zbeg);
    const auto z_cols = iota_columns(zbeg, d);
    xz_cols.insert(xz_cols.end(), z_cols.begin(), z_cols.end());
    yz_cols.insert(yz_cols.end(), z_cols.begin(), z_cols.end());

    const KdTree joint_tree(joint);
    const KdTree xz_tree(joint.select_columns(xz_cols));
    const KdTree yz_tree(joint.select_columns(yz_cols));
    const KdTree z_tree = has_z ? KdTree(joint.select_columns(z_cols)) : KdTree(Matrix(0, 1));

    const std::size_t m = joint.rows();
    CmiNeighborCounts out;
    out.radius.resize(m);
    out.xz.resize(m);
    out.yz.resize(m);
    out.z.assign(m, m - 1);
    const auto mm = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t si = 0; si < mm; ++si) {
        const auto i = static_cast<std::size_t>(si);
        const double eps = joint_tree.kth_distance(i, k);
        out.radius[i] = eps;
        out.xz[i] = xz_tree.count_within(i, eps);
        out.yz[i] = yz_tree.count_within(i, eps);
        if (has_z) out.z[i] = z_tree.count_within(i, eps);
    }
    return out;
}

}  // namespace detail

std::vector<double> knn_radii(const Matrix& points, int k) {
    check(points, k);
    if (points.rows() < kBruteForceBelow) return reference::knn_radii(points, k);
    if (points.cols() > kTreeMaxDims) return detail::scan_knn_radii(points, k);
    return detail::tree_knn_radii(points, k);
}

CmiNeighborCounts cmi_neighbor_counts(const Matrix& joint, std::size_t dx, std::size_t dy,
                                      int k) {
    check(joint, k);
    if (joint.rows() < kBruteForceBelow) return reference::cmi_neighbor_counts(joint, dx, dy, k);
    if (joint.cols() > kTreeMaxDims) return detail::scan_cmi_neighbor_counts(joint, dx, dy, k);
    return detail::tree_cmi_neighbor_counts(joint, dx, dy, k);
}

}  // namespace ucn::kernels
