#pragma once

#include <cstddef>
#include <vector>

#include "ucn/matrix.hpp"

// Per-sample neighbour statistics behind the entropy estimators. Two
// implementations share one contract: the production kernels (k-d tree,
// OpenMP over samples) and a serial brute-force reference kept for testing
// and benchmarking. For identical input both return identical values: every
// distance is a max of absolute coordinate differences, which is exact.
namespace ucn::kernels {

// Below this many samples the production kernels scan instead of building a tree.
inline constexpr std::size_t kBruteForceBelow = 64;

// Joint dimensions above which the vectorised scan outruns the k-d tree.
inline constexpr std::size_t kTreeMaxDims = 4;

struct CmiNeighborCounts {
    std::vector<double> radius;   // k-th neighbour distance in the joint (x, y, z) space
    std::vector<std::size_t> xz;  // others strictly inside `radius` in the (x, z) subspace
    std::vector<std::size_t> yz;
    std::vector<std::size_t> z;   // m - 1 for every sample when dz == 0
};

// k-th nearest-neighbour distance of every point, self excluded.
std::vector<double> knn_radii(const Matrix& points, int k);

// `joint` holds column blocks [x (dx) | y (dy) | z (rest)].
CmiNeighborCounts cmi_neighbor_counts(const Matrix& joint, std::size_t dx, std::size_t dy, int k);

namespace detail {

// Variants behind the production entry points, exposed for benchmarking.
std::vector<double> tree_knn_radii(const Matrix& points, int k);
CmiNeighborCounts tree_cmi_neighbor_counts(const Matrix& joint, std::size_t dx, std::size_t dy,
                                           int k);
std::vector<double> scan_knn_radii(const Matrix& points, int k);
CmiNeighborCounts scan_cmi_neighbor_counts(const Matrix& joint, std::size_t dx, std::size_t dy,
                                           int k);

}  // namespace detail

namespace reference {

std::vector<double> knn_radii(const Matrix& points, int k);
CmiNeighborCounts cmi_neighbor_counts(const Matrix& joint, std::size_t dx, std::size_t dy, int k);

}  // namespace reference

}  // namespace ucn::kernels
