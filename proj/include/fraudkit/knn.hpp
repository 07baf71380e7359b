#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace fraudkit {

/// Exact k-nearest-neighbour search under squared Euclidean distance.
///
/// Neighbours are ordered by (distance, point index), so results with
/// distance ties are deterministic and identical to a brute-force scan.
class KdTree {
public:
    /// `points` is row-major with `dim` values per point; the tree keeps its own copy.
    KdTree(std::span<const double> points, std::size_t dim, std::size_t leaf_size = 64);

    std::size_t size() const { return n_; }
    std::size_t dim() const { return dim_; }

    /// k nearest points to `query`, skipping point `exclude` (pass npos to keep all).
    std::vector<std::size_t> nearest(std::span<const double> query, std::size_t k,
                                     std::size_t exclude = npos) const;

    /// Row-major n x k table: the k nearest other points of every point, in index order.
    std::vector<std::size_t> all_nearest(std::size_t k) const;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    struct Node {
        std::size_t begin, end;      // range in order_
        int left = -1, right = -1;   // -1 marks a leaf
    };

    int build(std::span<const double> pts, std::size_t begin, std::size_t end, std::size_t leaf_size);
    using Entry = std::pair<double, std::size_t>;  // (dist2, index), compared lexicographically
    double box_dist2(int node, const double* q) const;
    /// Leaves the k best entries of `heap` sorted ascending.
    void search(const double* q, std::size_t k, std::size_t exclude, std::vector<Entry>& heap) const;

    std::size_t dim_ = 0;
    std::size_t n_ = 0;
    std::vector<std::size_t> order_;  // tree position -> original index
    std::vector<double> data_;        // points in tree order
    std::vector<Node> nodes_;
    std::vector<double> lo_, hi_;  // per-node bounding boxes, dim_ values each
};

double squared_distance(std::span<const double> a, std::span<const double> b);

}  // namespace fraudkit
