#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "ucn/kdtree.hpp"
#include "ucn/neighbor_kernels.hpp"

using namespace ucn;

TEST_CASE("kd-tree agrees with brute force") {
    for (std::size_t d : {1u, 2u, 3u}) {
        const auto pts = test::gaussian(300, d, 11 + d);
        const KdTree tree(pts, 4);
        for (std::size_t i = 0; i < pts.rows(); i += 17) {
            std::vector<double> dist;
            for (std::size_t j = 0; j < pts.rows(); ++j) {
                if (j == i) continue;
                double m = 0;
                for (std::size_t c = 0; c < d; ++c) m = std::max(m, std::abs(pts(i, c) - pts(j, c)));
                dist.push_back(m);
            }
            std::sort(dist.begin(), dist.end());
            CHECK(tree.kth_distance(i, 1) == dist[0]);
            CHECK(tree.kth_distance(i, 5) == dist[4]);
            const double r = dist[9];
            const auto below = static_cast<std::size_t>(
                std::lower_bound(dist.begin(), dist.end(), r) - dist.begin());
            CHECK(tree.count_within(i, r) == below);
        }
    }
}

TEST_CASE("count_within is strict and excludes the query point") {
    Matrix pts(3, 1, std::vector<double>{0.0, 1.0, 2.0});
    const KdTree tree(pts);
    CHECK(tree.count_within(0, 1.0) == 0);
    CHECK(tree.count_within(0, 1.5) == 1);
    CHECK(tree.count_within(1, 1.5) == 2);
    CHECK(tree.count_within(1, 0.0) == 0);
}

TEST_CASE("tree, scan and reference kernels give identical counts") {
    for (std::size_t d : {2u, 3u, 5u, 8u}) {
        const auto joint = test::gaussian(400, d, 100 + d);
        const auto ref = kernels::reference::cmi_neighbor_counts(joint, 1, 1, 4);
        const auto tree = kernels::detail::tree_cmi_neighbor_counts(joint, 1, 1, 4);
        const auto scan = kernels::detail::scan_cmi_neighbor_counts(joint, 1, 1, 4);
        const auto dispatched = kernels::cmi_neighbor_counts(joint, 1, 1, 4);
        CHECK(ref.radius == tree.radius);
        CHECK(ref.xz == tree.xz);
        CHECK(ref.yz == tree.yz);
        CHECK(ref.z == tree.z);
        CHECK(ref.radius == scan.radius);
        CHECK(ref.xz == scan.xz);
        CHECK(ref.yz == scan.yz);
        CHECK(ref.z == scan.z);
        CHECK(ref.xz == dispatched.xz);
        CHECK(kernels::reference::knn_radii(joint, 3) == kernels::detail::tree_knn_radii(joint, 3));
        CHECK(kernels::reference::knn_radii(joint, 3) == kernels::detail::scan_knn_radii(joint, 3));
    }
}
