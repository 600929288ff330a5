#include "twinkit/masked_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "twinkit/error.hpp"

namespace twinkit {

namespace {

struct Candidate {
  double d2;
  RowIndex row;
  bool operator<(const Candidate& o) const noexcept {
    return d2 < o.d2 || (d2 == o.d2 && row < o.row);
  }
};

float round_down(double x) {
  float f = static_cast<float>(x);
  return static_cast<double>(f) > x ? std::nextafter(f, -std::numeric_limits<float>::infinity()) : f;
}

float round_up(double x) {
  float f = static_cast<float>(x);
  return static_cast<double>(f) < x ? std::nextafter(f, std::numeric_limits<float>::infinity()) : f;
}

}  // namespace

// Bounded max-heap on (d2, row); the top is the current k-th best.
class MaskedIndex::Heap {
public:
  explicit Heap(std::size_t k) : k_(k) { items_.reserve(k); }

  bool full() const noexcept { return items_.size() == k_; }
  const Candidate& worst() const noexcept { return items_.front(); }

  void offer(double d2, RowIndex row) {
    Candidate c{d2, row};
    if (!full()) {
      items_.push_back(c);
      std::push_heap(items_.begin(), items_.end());
    } else if (c < worst()) {
      std::pop_heap(items_.begin(), items_.end());
      items_.back() = c;
      std::push_heap(items_.begin(), items_.end());
    }
  }

  std::vector<Neighbor> sorted() && {
    std::sort_heap(items_.begin(), items_.end());
    std::vector<Neighbor> out;
    out.reserve(items_.size());
    for (const auto& c : items_) out.push_back({c.row, std::sqrt(c.d2)});
    return out;
  }

private:
  std::size_t k_;
  std::vector<Candidate> items_;
};

MaskedIndex::MaskedIndex(const Matrix& points, std::size_t leaf_size)
    : points_(&points), leaf_size_(std::max<std::size_t>(1, leaf_size)) {
  const std::size_t n = points.rows();
  if (n == 0) throw DataError("cannot build a nearest-neighbor index over an empty dataset");
  if (n >= kNone) throw DataError("too many points for the nearest-neighbor index");
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), RowIndex{0});
  leaf_of_.assign(n, kNone);
  alive_.assign(n, 1);
  nodes_.reserve(2 * (n / leaf_size_ + 1));
  build(make_node(0, static_cast<std::uint32_t>(n), kNone));
  const std::size_t d = points.cols();
  coords_.resize(n * d);
  for (std::size_t k = 0; k < n; ++k) {
    auto p = points.row(order_[k]);
    std::copy(p.begin(), p.end(), coords_.begin() + static_cast<std::ptrdiff_t>(k * d));
  }
}

std::uint32_t MaskedIndex::make_node(std::uint32_t begin, std::uint32_t end, std::uint32_t parent) {
  const std::size_t d = points_->cols();
  const auto id = static_cast<std::uint32_t>(nodes_.size());
  std::vector<double> lo(d, std::numeric_limits<double>::infinity());
  std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
  for (auto k = begin; k < end; ++k) {
    auto p = points_->row(order_[k]);
    for (std::size_t j = 0; j < d; ++j) {
      lo[j] = std::min(lo[j], p[j]);
      hi[j] = std::max(hi[j], p[j]);
    }
  }
  std::uint32_t axis = 0;
  double widest = -1.0;
  for (std::size_t j = 0; j < d; ++j) {
    if (hi[j] - lo[j] > widest) {
      widest = hi[j] - lo[j];
      axis = static_cast<std::uint32_t>(j);
    }
  }
  nodes_.push_back(Node{begin, end, kNone, kNone, parent, axis, end - begin});
  for (std::size_t j = 0; j < d; ++j) boxes_.push_back(round_down(lo[j]));
  for (std::size_t j = 0; j < d; ++j) boxes_.push_back(round_up(hi[j]));
  return id;
}

// Siblings are allocated next to each other.
void MaskedIndex::build(std::uint32_t id) {
  const auto begin = nodes_[id].begin, end = nodes_[id].end;
  if (end - begin <= leaf_size_) {
    for (auto k = begin; k < end; ++k) leaf_of_[order_[k]] = id;
    return;
  }

  const std::size_t axis = nodes_[id].axis;
  const auto mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](RowIndex a, RowIndex b) {
                     const double pa = (*points_)(a, axis), pb = (*points_)(b, axis);
                     return pa < pb || (pa == pb && a < b);
                   });
  const auto left = make_node(begin, mid, id);
  const auto right = make_node(mid, end, id);
  nodes_[id].left = left;
  nodes_[id].right = right;
  build(left);
  build(right);
}

double MaskedIndex::distance2(std::uint32_t position, std::span<const double> query) const {
  const std::size_t d = query.size();
  const double* p = coords_.data() + position * d;
  double s = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    const double t = p[j] - query[j];
    s += t * t;
  }
  return s;
}

// Lower bound on distance2() for every unmasked point below the node. Each term is no
// larger than the matching term for any contained point, so the bound is exact-safe.
double MaskedIndex::box_distance2(std::uint32_t node, std::span<const double> query,
                                  double bound) const {
  const std::size_t d = points_->cols();
  const float* lo = boxes_.data() + 2 * d * node;
  const float* hi = lo + d;
  double s = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    double t = 0.0;
    if (query[j] < double{lo[j]}) {
      t = lo[j] - query[j];
    } else if (query[j] > double{hi[j]}) {
      t = query[j] - hi[j];
    }
    s += t * t;
    if (s > bound) break;
  }
  return s;
}

void MaskedIndex::search(std::uint32_t node_id, std::span<const double> query, Heap& best,
                         QueryStats* stats) const {
  const Node& node = nodes_[node_id];
  if (stats) {
    ++stats->nodes_visited;
    if (node.alive == 0) ++stats->empty_nodes_descended;
  }
  if (node.leaf()) {
    for (auto k = node.begin; k < node.end; ++k) {
      const RowIndex row = order_[k];
      if (!alive_[row]) continue;
      if (stats) ++stats->points_examined;
      best.offer(distance2(k, query), row);
    }
    return;
  }
  const double inf = std::numeric_limits<double>::infinity();
  auto bound = [&] { return best.full() ? best.worst().d2 : inf; };
  std::uint32_t first = node.left, second = node.right;
  const bool first_alive = nodes_[first].alive > 0, second_alive = nodes_[second].alive > 0;
  if (!first_alive && !second_alive) return;
  if (!second_alive || !first_alive) {
    const auto only = first_alive ? first : second;
    if (!(box_distance2(only, query, bound()) > bound())) search(only, query, best, stats);
    return;
  }
  double first_d2 = box_distance2(first, query, inf);
  double second_d2 = box_distance2(second, query, inf);
  if (second_d2 < first_d2) {
    std::swap(first, second);
    std::swap(first_d2, second_d2);
  }
  // Equal bounds must still be explored: a tie at the bound may have a lower row index.
  if (!(first_d2 > bound())) search(first, query, best, stats);
  if (!(second_d2 > bound())) search(second, query, best, stats);
}

Neighbor MaskedIndex::nearest(std::span<const double> query, QueryStats* stats) const {
  auto found = k_nearest(query, 1, stats);
  return found.front();
}

std::vector<Neighbor> MaskedIndex::k_nearest(std::span<const double> query, std::size_t k,
                                             QueryStats* stats) const {
  if (query.size() != dims()) {
    throw DataError("query has " + std::to_string(query.size()) + " coordinates, index has " +
                    std::to_string(dims()));
  }
  if (k == 0) return {};
  if (alive_count() < k) {
    throw DataError("requested " + std::to_string(k) + " neighbors but only " +
                    std::to_string(alive_count()) + " points are unmasked");
  }
  Heap best(k);
  search(0, query, best, stats);
  return std::move(best).sorted();
}

void MaskedIndex::mask(RowIndex row) {
  if (row >= alive_.size()) {
    throw DataError("cannot mask row " + std::to_string(row) + ": index has " +
                    std::to_string(alive_.size()) + " points");
  }
  if (!alive_[row]) throw DataError("row " + std::to_string(row) + " is already masked");
  alive_[row] = 0;
  for (auto node = leaf_of_[row]; node != kNone; node = nodes_[node].parent) --nodes_[node].alive;

  // Shrink boxes to the remaining points; stop once an ancestor's box is unchanged.
  auto node = leaf_of_[row];
  fit_leaf(node);
  for (node = nodes_[node].parent; node != kNone && fit_inner(node); node = nodes_[node].parent) {
  }
}

void MaskedIndex::fit_leaf(std::uint32_t node) {
  const std::size_t d = points_->cols();
  float* lo = boxes_.data() + 2 * d * node;
  float* hi = lo + d;
  std::fill(lo, lo + d, std::numeric_limits<float>::infinity());
  std::fill(hi, hi + d, -std::numeric_limits<float>::infinity());
  for (auto k = nodes_[node].begin; k < nodes_[node].end; ++k) {
    if (!alive_[order_[k]]) continue;
    const double* p = coords_.data() + std::size_t{k} * d;
    for (std::size_t j = 0; j < d; ++j) {
      lo[j] = std::min(lo[j], round_down(p[j]));
      hi[j] = std::max(hi[j], round_up(p[j]));
    }
  }
}

bool MaskedIndex::fit_inner(std::uint32_t node) {
  const std::size_t d = points_->cols();
  float* lo = boxes_.data() + 2 * d * node;
  float* hi = lo + d;
  const float* a = boxes_.data() + 2 * d * nodes_[node].left;
  const float* b = boxes_.data() + 2 * d * nodes_[node].right;
  bool changed = false;
  for (std::size_t j = 0; j < d; ++j) {
    const float l = std::min(a[j], b[j]), h = std::max(a[j + d], b[j + d]);
    changed = changed || l != lo[j] || h != hi[j];
    lo[j] = l;
    hi[j] = h;
  }
  return changed;
}

std::size_t MaskedIndex::recount_alive(std::size_t node) const {
  const Node& n = nodes_.at(node);
  std::size_t count = 0;
  for (auto k = n.begin; k < n.end; ++k) count += alive_[order_[k]];
  return count;
}

}  // namespace twinkit
