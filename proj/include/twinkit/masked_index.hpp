#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "twinkit/dataset.hpp"

namespace twinkit {

struct Neighbor {
  RowIndex row = 0;
  double distance = 0.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Traversal counters, filled in when a query is given a non-null stats pointer.
struct QueryStats {
  std::size_t nodes_visited = 0;
  std::size_t empty_nodes_descended = 0;  // must stay 0: dead subtrees are pruned
  std::size_t points_examined = 0;
};

/// Exact Euclidean kd-tree whose points can be masked out without restructuring.
///
/// Nodes split at the median of the coordinate with the largest spread and hold an
/// axis-aligned bounding box plus a count of unmasked points below them. Subtrees whose
/// count reaches zero are skipped. Ties on distance go to the lowest row index.
///
/// The index keeps a pointer to `points`, which must outlive it. Queries on a fixed
/// mask state may run concurrently; mask() needs exclusive access.
class MaskedIndex {
public:
  static constexpr std::size_t kLeafSize = 16;

  explicit MaskedIndex(const Matrix& points, std::size_t leaf_size = kLeafSize);

  std::size_t size() const noexcept { return alive_.size(); }
  std::size_t dims() const noexcept { return points_->cols(); }
  std::size_t alive_count() const noexcept { return nodes_.empty() ? 0 : nodes_[0].alive; }
  bool is_alive(RowIndex row) const { return alive_.at(row) != 0; }

  Neighbor nearest(std::span<const double> query, QueryStats* stats = nullptr) const;

  /// k closest unmasked points, ascending by (distance, row).
  std::vector<Neighbor> k_nearest(std::span<const double> query, std::size_t k,
                                  QueryStats* stats = nullptr) const;

  void mask(RowIndex row);

  /// Number of nodes and the alive count stored at each; exposed for invariant checks.
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t node_alive(std::size_t node) const { return nodes_.at(node).alive; }
  /// Unmasked points actually present below `node`, recounted from scratch.
  std::size_t recount_alive(std::size_t node) const;

private:
  static constexpr std::uint32_t kNone = UINT32_MAX;

  struct Node {
    std::uint32_t begin = 0, end = 0;  // range in order_
    std::uint32_t left = kNone, right = kNone, parent = kNone;
    std::uint32_t axis = 0;
    std::size_t alive = 0;
    bool leaf() const noexcept { return left == kNone; }
  };

  std::uint32_t make_node(std::uint32_t begin, std::uint32_t end, std::uint32_t parent);
  void build(std::uint32_t node);
  double box_distance2(std::uint32_t node, std::span<const double> query, double bound) const;
  double distance2(std::uint32_t position, std::span<const double> query) const;
  void fit_leaf(std::uint32_t node);
  bool fit_inner(std::uint32_t node);

  class Heap;
  void search(std::uint32_t node, std::span<const double> query, Heap& best,
              QueryStats* stats) const;

  const Matrix* points_;
  std::size_t leaf_size_;
  std::vector<Node> nodes_;
  std::vector<float> boxes_;  // per node: lo[0..d), hi[0..d) of its unmasked points, rounded outward
  std::vector<RowIndex> order_;
  std::vector<double> coords_;  // points in order_ sequence
  std::vector<std::uint32_t> leaf_of_;
  std::vector<std::uint8_t> alive_;
};

}  // namespace twinkit
