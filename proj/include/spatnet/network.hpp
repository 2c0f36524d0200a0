#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spatnet/rtree.hpp"

namespace spatnet {

enum class NodeKind { MacroBS, SmallBS, UE, Blockage };

std::string_view to_string(NodeKind k);
NodeKind kind_from_string(std::string_view s);

// Sectored antenna: main_gain inside the beamwidth, side_gain elsewhere.
// Gains are linear; beamwidth in (0, 2*pi).
struct AntennaPattern {
  double beamwidth_rad = kPi / 6;
  double main_gain = 10.0;
  double side_gain = 2.0 / 11.0;
};

// Radio front-end state for transceiver-capable nodes.
struct TrxParams {
  double carrier_freq_hz = 28e9;
  double tx_power_dbm = 30.0;
  double max_range_m = 200.0;
  double boresight_rad = 0.0;
  AntennaPattern antenna;
};

// One network element. Every kind except Blockage carries TrxParams.
// width/length span the footprint rect centered on loc; height is carried
// as metadata and plays no role in the planar queries.
struct NetNode {
  NodeId id = 0;
  NodeKind kind = NodeKind::SmallBS;
  Point loc;
  double width_m = 0.0;
  double length_m = 0.0;
  double height_m = 0.0;
  std::optional<TrxParams> trx;
};

inline Rect footprint(const NetNode& n) {
  return {{n.loc.x - n.width_m / 2, n.loc.y - n.length_m / 2},
          {n.loc.x + n.width_m / 2, n.loc.y + n.length_m / 2}};
}

// Owns the node registry and keeps a point R-tree over node locations in
// lockstep with it: every mutation goes through both or neither.
class Container {
 public:
  explicit Container(int rtree_max_entries = 16);

  // Throws std::invalid_argument on duplicate id, non-finite location,
  // negative footprint extent, or a trx/kind mismatch (all kinds except
  // Blockage need trx, Blockage must not have one). Leaves the container
  // untouched on failure.
  void add(const NetNode& n);

  // Throws std::out_of_range for an unknown id.
  void remove(NodeId id);

  // Relocates a node: registry update plus R-tree reinsertion.
  void move(NodeId id, Point new_loc);

  // Registry-only update of the antenna boresight.
  void set_boresight(NodeId id, double boresight_rad);

  const NetNode& node(NodeId id) const;          // throws out_of_range
  const NetNode* find(NodeId id) const;          // nullptr when absent
  std::size_t size() const { return registry_.size(); }
  std::size_t count(NodeKind k) const;
  const RTree& tree() const { return tree_; }
  const std::map<NodeId, NetNode>& nodes() const { return registry_; }

  // Repacks index storage after bulk construction; no observable change.
  void compact() { tree_.repack(); }

  // Contiguous id-ascending copy of every node: the array-index baseline.
  std::vector<NetNode> snapshot() const;

  // Maps query results back to nodes, optionally filtered by kind. A handle
  // with no registry record is an internal consistency violation and throws
  // std::runtime_error.
  std::vector<const NetNode*> resolve(std::span<const Entry> entries,
                                      std::optional<NodeKind> kind = {}) const;

  // Nodes within the closed ball around id's location, excluding id itself.
  std::vector<const NetNode*> neighbors_within(
      NodeId id, double radius, std::optional<NodeKind> kind = {},
      QueryStats* stats = nullptr) const;

  // Blockage nodes whose footprint intersects the path a->b, id-ascending.
  // Throws std::invalid_argument when a == b.
  std::vector<const NetNode*> blockers_along(Point a, Point b,
                                             QueryStats* stats = nullptr) const;

  // True when no Blockage footprint intersects the open path a->b.
  // Throws std::invalid_argument when a == b.
  bool los_clear(Point a, Point b) const;

  // R-tree structural audit plus registry/tree agreement.
  std::vector<std::string> validate() const;

 private:
  RTree::FootprintFn footprint_resolver() const;

  std::map<NodeId, NetNode> registry_;
  RTree tree_;
  double max_half_w_ = 0.0;  // conservative pruning margins for segment
  double max_half_l_ = 0.0;  // queries; never shrink on removal
};

}  // namespace spatnet
