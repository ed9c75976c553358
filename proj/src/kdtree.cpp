#include "ucn/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ucn/error.hpp"

namespace ucn {

KdTree::KdTree(const Matrix& points, std::size_t leaf_size)
    : dims_(points.cols()), leaf_size_(std::max<std::size_t>(leaf_size, 1)) {
    if (dims_ == 0) throw ShapeError("k-d tree needs at least one dimension");
    const auto m = static_cast<std::uint32_t>(points.rows());
    std::vector<std::uint32_t> order(m);
    std::iota(order.begin(), order.end(), 0u);
    nodes_.reserve(2 * (m / leaf_size_ + 1));
    if (m > 0) build(order, 0, m, points);

    pts_.resize(static_cast<std::size_t>(m) * dims_);
    slot_of_.resize(m);
    for (std::uint32_t pos = 0; pos < m; ++pos) {
        const auto src = points.row(order[pos]);
        std::copy(src.begin(), src.end(), pts_.begin() + static_cast<std::ptrdiff_t>(pos * dims_));
        slot_of_[order[pos]] = pos;
    }
}

std::int32_t KdTree::build(std::vector<std::uint32_t>& order, std::uint32_t begin,
                           std::uint32_t end, const Matrix& points) {
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back({begin, end, -1, -1});
    lo_.resize(lo_.size() + dims_, std::numeric_limits<double>::infinity());
    hi_.resize(hi_.size() + dims_, -std::numeric_limits<double>::infinity());
    double* lo = &lo_[static_cast<std::size_t>(id) * dims_];
    double* hi = &hi_[static_cast<std::size_t>(id) * dims_];
    for (std::uint32_t p = begin; p < end; ++p) {
        const auto row = points.row(order[p]);
        for (std::size_t d = 0; d < dims_; ++d) {
            lo[d] = std::min(lo[d], row[d]);
            hi[d] = std::max(hi[d], row[d]);
        }
    }
    if (end - begin <= leaf_size_) return id;

    std::size_t split = 0;
    double spread = -1.0;
    for (std::size_t d = 0; d < dims_; ++d) {
        if (hi[d] - lo[d] > spread) {
            spread = hi[d] - lo[d];
            split = d;
        }
    }
    if (!(spread > 0.0)) return id;  // all points coincide

    const std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(order.begin() + begin, order.begin() + mid, order.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) {
                         return points(a, split) < points(b, split);
                     });
    const std::int32_t left = build(order, begin, mid, points);
    const std::int32_t right = build(order, mid, end, points);
    nodes_[static_cast<std::size_t>(id)].left = left;
    nodes_[static_cast<std::size_t>(id)].right = right;
    return id;
}

double KdTree::box_min_distance(std::int32_t node, const double* q) const {
    const double* lo = &lo_[static_cast<std::size_t>(node) * dims_];
    const double* hi = &hi_[static_cast<std::size_t>(node) * dims_];
    double m = 0.0;
    for (std::size_t d = 0; d < dims_; ++d) {
        m = std::max(m, std::max(lo[d] - q[d], q[d] - hi[d]));
    }
    return m;
}

double KdTree::box_max_distance(std::int32_t node, const double* q) const {
    const double* lo = &lo_[static_cast<std::size_t>(node) * dims_];
    const double* hi = &hi_[static_cast<std::size_t>(node) * dims_];
    double m = 0.0;
    for (std::size_t d = 0; d < dims_; ++d) {
        m = std::max(m, std::max(q[d] - lo[d], hi[d] - q[d]));
    }
    return m;
}

// `best` is sorted ascending, length k; best[k-1] is the current k-th distance.
void KdTree::knn(std::int32_t node, const double* q, std::uint32_t self, double* best,
                 int k) const {
    const Node& nd = nodes_[static_cast<std::size_t>(node)];
    if (nd.left < 0) {
        for (std::uint32_t p = nd.begin; p < nd.end; ++p) {
            if (p == self) continue;
            const double* x = &pts_[static_cast<std::size_t>(p) * dims_];
            const double worst = best[k - 1];
            double dist = 0.0;
            std::size_t d = 0;
            for (; d < dims_; ++d) {
                dist = std::max(dist, std::abs(x[d] - q[d]));
                if (dist >= worst) break;
            }
            if (d < dims_) continue;
            int pos = k - 1;
            while (pos > 0 && best[pos - 1] > dist) {
                best[pos] = best[pos - 1];
                --pos;
            }
            best[pos] = dist;
        }
        return;
    }
    const double dl = box_min_distance(nd.left, q);
    const double dr = box_min_distance(nd.right, q);
    const bool left_first = dl <= dr;
    const std::int32_t first = left_first ? nd.left : nd.right;
    const std::int32_t second = left_first ? nd.right : nd.left;
    const double d_first = left_first ? dl : dr;
    const double d_second = left_first ? dr : dl;
    if (d_first < best[k - 1]) knn(first, q, self, best, k);
    if (d_second < best[k - 1]) knn(second, q, self, best, k);
}

double KdTree::kth_distance(std::size_t index, int k) const {
    if (k < 1 || static_cast<std::size_t>(k) >= size()) {
        throw InsufficientDataError("k-th neighbour query needs 1 <= k < point count");
    }
    const std::uint32_t self = slot_of_[index];
    const double* q = &pts_[static_cast<std::size_t>(self) * dims_];
    constexpr int kStack = 32;
    double stack_buf[kStack];
    std::vector<double> heap_buf;
    double* best = stack_buf;
    if (k > kStack) {
        heap_buf.resize(static_cast<std::size_t>(k));
        best = heap_buf.data();
    }
    std::fill(best, best + k, std::numeric_limits<double>::infinity());
    knn(0, q, self, best, k);
    return best[k - 1];
}

std::size_t KdTree::count(std::int32_t node, const double* q, double radius) const {
    if (box_min_distance(node, q) >= radius) return 0;
    const Node& nd = nodes_[static_cast<std::size_t>(node)];
    if (box_max_distance(node, q) < radius) return nd.end - nd.begin;
    if (nd.left < 0) {
        std::size_t c = 0;
        for (std::uint32_t p = nd.begin; p < nd.end; ++p) {
            const double* x = &pts_[static_cast<std::size_t>(p) * dims_];
            std::size_t d = 0;
            for (; d < dims_; ++d) {
                if (std::abs(x[d] - q[d]) >= radius) break;
            }
            c += (d == dims_);
        }
        return c;
    }
    return count(nd.left, q, radius) + count(nd.right, q, radius);
}

std::size_t KdTree::count_within(std::size_t index, double radius) const {
    if (!(radius > 0.0) || size() == 0) return 0;
    const std::uint32_t self = slot_of_[index];
    const double* q = &pts_[static_cast<std::size_t>(self) * dims_];
    // The query point is always inside its own ball.
    return count(0, q, radius) - 1;
}

}  // namespace ucn
