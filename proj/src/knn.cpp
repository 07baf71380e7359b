#include "fraudkit/knn.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <utility>

namespace fraudkit {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = a[j] - b[j];
        s += d * d;
    }
    return s;
}

KdTree::KdTree(std::span<const double> points, std::size_t dim, std::size_t leaf_size)
    : dim_(dim), n_(dim == 0 ? 0 : points.size() / dim) {
    if (dim == 0 || points.size() % dim != 0) throw std::invalid_argument("KdTree: bad point buffer");
    order_.resize(n_);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    if (n_ == 0) return;
    build(points, 0, n_, std::max<std::size_t>(leaf_size, 1));
    // Leaf scans read rows in tree order from one contiguous block.
    data_.resize(n_ * dim_);
    for (std::size_t p = 0; p < n_; ++p)
        std::copy_n(points.data() + order_[p] * dim_, dim_, data_.data() + p * dim_);
}

int KdTree::build(std::span<const double> pts, std::size_t begin, std::size_t end, std::size_t leaf_size) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{begin, end});
    lo_.resize(lo_.size() + dim_, std::numeric_limits<double>::infinity());
    hi_.resize(hi_.size() + dim_, -std::numeric_limits<double>::infinity());
    double* lo = lo_.data() + static_cast<std::size_t>(id) * dim_;
    double* hi = hi_.data() + static_cast<std::size_t>(id) * dim_;
    for (std::size_t p = begin; p < end; ++p) {
        const double* x = pts.data() + order_[p] * dim_;
        for (std::size_t j = 0; j < dim_; ++j) {
            lo[j] = std::min(lo[j], x[j]);
            hi[j] = std::max(hi[j], x[j]);
        }
    }
    if (end - begin <= leaf_size) return id;

    std::size_t best = 0;
    double spread = -1.0;
    for (std::size_t j = 0; j < dim_; ++j) {
        if (hi[j] - lo[j] > spread) {
            spread = hi[j] - lo[j];
            best = j;
        }
    }
    if (spread <= 0.0) return id;  // all points identical

    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin), order_.begin() + static_cast<std::ptrdiff_t>(mid),
                     order_.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](std::size_t a, std::size_t b) { return pts[a * dim_ + best] < pts[b * dim_ + best]; });
    const int left = build(pts, begin, mid, leaf_size);
    const int right = build(pts, mid, end, leaf_size);
    Node& node = nodes_[static_cast<std::size_t>(id)];
    node.left = left;
    node.right = right;
    return id;
}

double KdTree::box_dist2(int node, const double* q) const {
    const double* lo = lo_.data() + static_cast<std::size_t>(node) * dim_;
    const double* hi = hi_.data() + static_cast<std::size_t>(node) * dim_;
    double s = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) {
        const double d = q[j] < lo[j] ? lo[j] - q[j] : q[j] > hi[j] ? q[j] - hi[j] : 0.0;
        s += d * d;
    }
    return s;
}

void KdTree::search(const double* q, std::size_t k, std::size_t exclude, std::vector<Entry>& heap) const {
    heap.clear();
    constexpr double kInf = std::numeric_limits<double>::infinity();
    auto worst = [&] { return heap.size() == k ? heap.front().first : kInf; };

    auto scan_leaf = [&](const Node& node) {
        for (std::size_t p = node.begin; p < node.end; ++p) {
            const std::size_t i = order_[p];
            if (i == exclude) continue;
            const double* x = data_.data() + p * dim_;
            const double bound = worst();
            // Same summation order as squared_distance; bail out once the partial sum is strictly worse.
            double s = 0.0;
            std::size_t j = 0;
            for (; j < dim_; ++j) {
                const double d = x[j] - q[j];
                s += d * d;
                if ((j & 7) == 7 && s > bound) break;
            }
            if (j < dim_) continue;
            const Entry e{s, i};
            if (heap.size() < k) {
                heap.push_back(e);
                std::push_heap(heap.begin(), heap.end());
            } else if (e < heap.front()) {
                std::pop_heap(heap.begin(), heap.end());
                heap.back() = e;
                std::push_heap(heap.begin(), heap.end());
            }
        }
    };

    auto visit = [&](auto&& self, int id, double box) -> void {
        if (box > worst()) return;
        const Node& node = nodes_[static_cast<std::size_t>(id)];
        if (node.left < 0) {
            scan_leaf(node);
            return;
        }
        const double bl = box_dist2(node.left, q), br = box_dist2(node.right, q);
        if (bl <= br) {
            self(self, node.left, bl);
            self(self, node.right, br);
        } else {
            self(self, node.right, br);
            self(self, node.left, bl);
        }
    };
    visit(visit, 0, box_dist2(0, q));
    std::sort_heap(heap.begin(), heap.end());
}

std::vector<std::size_t> KdTree::nearest(std::span<const double> query, std::size_t k,
                                         std::size_t exclude) const {
    if (query.size() != dim_) throw std::invalid_argument("KdTree: query dimension mismatch");
    if (k == 0 || n_ == 0) return {};
    std::vector<Entry> heap;
    search(query.data(), k, exclude, heap);
    std::vector<std::size_t> out;
    for (const auto& e : heap) out.push_back(e.second);
    return out;
}

std::vector<std::size_t> KdTree::all_nearest(std::size_t k) const {
    if (k == 0 || k >= n_) throw std::invalid_argument("KdTree: all_nearest needs 0 < k < size()");
    std::vector<std::size_t> out(n_ * k);
    std::vector<Entry> heap;
    // Tree order keeps consecutive queries in the same region of the tree.
    for (std::size_t p = 0; p < n_; ++p) {
        const std::size_t i = order_[p];
        search(data_.data() + p * dim_, k, i, heap);
        for (std::size_t r = 0; r < k; ++r) out[i * k + r] = heap[r].second;
    }
    return out;
}

}  // namespace fraudkit
