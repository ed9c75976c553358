#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ucn/matrix.hpp"

namespace ucn {

// Static k-d tree over a fixed point set, max-norm (Chebyshev) metric.
// Queries are issued by point index and always exclude the query point
// itself, which is what every nearest-neighbour entropy estimate needs.
// Nodes carry tight bounding boxes; both query kinds prune on box distance.
class KdTree {
public:
    explicit KdTree(const Matrix& points, std::size_t leaf_size = 8);

    std::size_t size() const noexcept { return slot_of_.size(); }
    std::size_t dims() const noexcept { return dims_; }

    // Max-norm distance from point `index` to its k-th nearest other point.
    double kth_distance(std::size_t index, int k) const;

    // Number of other points at max-norm distance strictly below `radius`.
    std::size_t count_within(std::size_t index, double radius) const;

private:
    struct Node {
        std::uint32_t begin = 0;
        std::uint32_t end = 0;
        std::int32_t left = -1;
        std::int32_t right = -1;
    };

    std::int32_t build(std::vector<std::uint32_t>& order, std::uint32_t begin, std::uint32_t end,
                       const Matrix& points);
    double box_min_distance(std::int32_t node, const double* q) const;
    double box_max_distance(std::int32_t node, const double* q) const;
    void knn(std::int32_t node, const double* q, std::uint32_t self, double* best, int k) const;
    std::size_t count(std::int32_t node, const double* q, double radius) const;

    std::size_t dims_ = 0;
    std::size_t leaf_size_ = 8;
    std::vector<double> pts_;             // points in tree order, row-major
    std::vector<std::uint32_t> slot_of_;  // original index -> tree position
    std::vector<double> lo_;              // node bounding boxes, dims_ per node
    std::vector<double> hi_;
    std::vector<Node> nodes_;
};

}  // namespace ucn
