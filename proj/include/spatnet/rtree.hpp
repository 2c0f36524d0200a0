#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "spatnet/geometry.hpp"

namespace spatnet {

using NodeId = std::uint64_t;

// One indexed record: a point key plus an opaque handle owned by the caller.
struct Entry {
  Point key;
  NodeId handle = 0;
  friend bool operator==(const Entry&, const Entry&) = default;
};

// Traversal effort counters, reset by every query that takes them.
struct QueryStats {
  std::uint64_t nodes_visited = 0;
  std::uint64_t leaves_visited = 0;
  std::uint64_t candidates_returned = 0;
};

// Dynamic R-tree over 2-D point entries (quadratic split, least-enlargement
// descent, condense-on-underflow removal). Page capacity M is a runtime
// parameter, minimum fill m = max(2, ceil(0.4*M)). The tree stays balanced:
// every leaf sits at the same depth. Same insert/remove sequence, same tree
// shape: all tie-breaks are deterministic.
class RTree {
 public:
  struct Node;  // defined in rtree.cpp

  // Maps a handle to the footprint rectangle stored for it by the caller.
  using FootprintFn = std::function<Rect(const Entry&)>;

  explicit RTree(int max_entries = 16);
  ~RTree();
  RTree(RTree&&) noexcept;
  RTree& operator=(RTree&&) noexcept;
  RTree(const RTree&) = delete;
  RTree& operator=(const RTree&) = delete;

  int max_entries() const { return max_entries_; }
  int min_entries() const { return min_entries_; }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  // Levels including the leaf level; 1 for an empty or leaf-only tree.
  int height() const;

  // Bounding box of everything stored; nullopt when empty.
  std::optional<Rect> bounds() const;

  void insert(const Entry& e);

  // Removes the exact (key, handle) record. Throws std::runtime_error when
  // absent. Underfull nodes are condensed and their surviving entries
  // reinserted at the leaf level.
  void remove(const Entry& e);

  void clear();

  // Rebuilds node storage in depth-first order. Structure, entry order and
  // query results are unchanged; incremental construction scatters nodes
  // across the heap and this puts each descent path back on adjacent lines.
  void repack();

  // All entries within the closed ball dist(key, center) <= radius.
  // Throws std::invalid_argument for a negative (or NaN) radius.
  std::vector<Entry> query_radius(Point center, double radius,
                                  QueryStats* stats = nullptr) const;
  // Allocation-free variant for hot loops; out is cleared first.
  void query_radius(Point center, double radius, std::vector<Entry>& out,
                    QueryStats* stats = nullptr) const;

  // The k nearest entries, ascending by distance; ties broken by handle
  // ascending. Returns all entries when k >= size. Throws for k < 1.
  std::vector<Entry> query_knn(Point center, std::size_t k,
                               QueryStats* stats = nullptr) const;

  // All entries whose key lies inside or on the (possibly degenerate)
  // triangle.
  std::vector<Entry> query_triangle(const Triangle& t,
                                    QueryStats* stats = nullptr) const;
  void query_triangle(const Triangle& t, std::vector<Entry>& out,
                      QueryStats* stats = nullptr) const;

  // All entries whose footprint rect intersects the segment. footprint
  // resolves a stored entry to its rect (defaults to the degenerate rect at
  // the key, turning this into a point-on-segment test). margin_x/margin_y
  // must bound how far any footprint extends beyond its key on each axis;
  // they only widen internal-node pruning, never the final test.
  std::vector<Entry> query_segment(const Segment& s,
                                   const FootprintFn& footprint = nullptr,
                                   double margin_x = 0.0, double margin_y = 0.0,
                                   QueryStats* stats = nullptr) const;

  // Structural audit: balanced leaf depths, fan-out bounds, tight bounding
  // boxes, size bookkeeping. Empty result means every invariant holds.
  std::vector<std::string> validate() const;

  // Deterministic structural dump (shape, boxes, entries) for tests.
  std::string describe() const;

 private:
  std::unique_ptr<Node> split(Node& node) const;
  std::size_t choose_subtree(const Node& node, const Rect& r) const;
  std::unique_ptr<Node> insert_rec(Node& node, const Entry& e) const;
  bool remove_rec(Node& node, const Entry& e,
                  std::vector<std::unique_ptr<Node>>& orphans) const;
  void grow_root(std::unique_ptr<Node> sibling);

  int max_entries_;
  int min_entries_;
  std::size_t size_ = 0;
  std::unique_ptr<Node> root_;
};

}  // namespace spatnet
