#include "spatnet/network.hpp"

#include <algorithm>
#include <stdexcept>

namespace spatnet {

std::string_view to_string(NodeKind k) {
  switch (k) {
    case NodeKind::MacroBS: return "mbs";
    case NodeKind::SmallBS: return "sbs";
    case NodeKind::UE: return "ue";
    case NodeKind::Blockage: return "blockage";
  }
  throw std::invalid_argument("to_string: bad NodeKind");
}

NodeKind kind_from_string(std::string_view s) {
  if (s == "mbs") return NodeKind::MacroBS;
  if (s == "sbs") return NodeKind::SmallBS;
  if (s == "ue") return NodeKind::UE;
  if (s == "blockage") return NodeKind::Blockage;
  throw std::invalid_argument("kind_from_string: unknown kind '" +
                              std::string(s) + "'");
}

Container::Container(int rtree_max_entries) : tree_(rtree_max_entries) {}

void Container::add(const NetNode& n) {
  if (registry_.contains(n.id))
    throw std::invalid_argument("Container::add: duplicate id " +
                                std::to_string(n.id));
  if (!finite(n.loc))
    throw std::invalid_argument("Container::add: non-finite location for id " +
                                std::to_string(n.id));
  if (n.width_m < 0 || n.length_m < 0 || n.height_m < 0)
    throw std::invalid_argument(
        "Container::add: negative footprint extent for id " +
        std::to_string(n.id));
  const bool needs_trx = n.kind != NodeKind::Blockage;
  if (needs_trx != n.trx.has_value())
    throw std::invalid_argument(
        needs_trx ? "Container::add: missing trx for transceiver node id " +
                        std::to_string(n.id)
                  : "Container::add: blockage id " + std::to_string(n.id) +
                        " must not carry trx");
  registry_.emplace(n.id, n);
  tree_.insert({n.loc, n.id});
  max_half_w_ = std::max(max_half_w_, n.width_m / 2);
  max_half_l_ = std::max(max_half_l_, n.length_m / 2);
}

void Container::remove(NodeId id) {
  auto it = registry_.find(id);
  if (it == registry_.end())
    throw std::out_of_range("Container::remove: unknown id " +
                            std::to_string(id));
  tree_.remove({it->second.loc, id});
  registry_.erase(it);
}

void Container::move(NodeId id, Point new_loc) {
  auto it = registry_.find(id);
  if (it == registry_.end())
    throw std::out_of_range("Container::move: unknown id " +
                            std::to_string(id));
  if (!finite(new_loc))
    throw std::invalid_argument("Container::move: non-finite location");
  tree_.remove({it->second.loc, id});
  it->second.loc = new_loc;
  tree_.insert({new_loc, id});
}

void Container::set_boresight(NodeId id, double boresight_rad) {
  auto it = registry_.find(id);
  if (it == registry_.end())
    throw std::out_of_range("Container::set_boresight: unknown id " +
                            std::to_string(id));
  if (!it->second.trx.has_value())
    throw std::invalid_argument("Container::set_boresight: id " +
                                std::to_string(id) + " has no trx");
  it->second.trx->boresight_rad = boresight_rad;
}

const NetNode& Container::node(NodeId id) const {
  auto it = registry_.find(id);
  if (it == registry_.end())
    throw std::out_of_range("Container::node: unknown id " +
                            std::to_string(id));
  return it->second;
}

const NetNode* Container::find(NodeId id) const {
  auto it = registry_.find(id);
  return it == registry_.end() ? nullptr : &it->second;
}

std::size_t Container::count(NodeKind k) const {
  std::size_t n = 0;
  for (const auto& [id, node] : registry_)
    if (node.kind == k) ++n;
  return n;
}

std::vector<NetNode> Container::snapshot() const {
  std::vector<NetNode> out;
  out.reserve(registry_.size());
  for (const auto& [id, node] : registry_) out.push_back(node);
  return out;
}

std::vector<const NetNode*> Container::resolve(
    std::span<const Entry> entries, std::optional<NodeKind> kind) const {
  std::vector<const NetNode*> out;
  out.reserve(entries.size());
  for (const Entry& e : entries) {
    const NetNode* n = find(e.handle);
    if (!n)
      throw std::runtime_error("Container::resolve: dangling handle " +
                               std::to_string(e.handle));
    if (!kind || n->kind == *kind) out.push_back(n);
  }
  return out;
}

std::vector<const NetNode*> Container::neighbors_within(
    NodeId id, double radius, std::optional<NodeKind> kind,
    QueryStats* stats) const {
  const NetNode& center = node(id);
  const auto entries = tree_.query_radius(center.loc, radius, stats);
  std::vector<const NetNode*> out;
  out.reserve(entries.size());
  for (const NetNode* n : resolve(entries, kind))
    if (n->id != id) out.push_back(n);
  return out;
}

RTree::FootprintFn Container::footprint_resolver() const {
  return [this](const Entry& e) {
    const NetNode* n = find(e.handle);
    if (!n)
      throw std::runtime_error("Container: dangling handle " +
                               std::to_string(e.handle));
    return footprint(*n);
  };
}

std::vector<const NetNode*> Container::blockers_along(Point a, Point b,
                                                      QueryStats* stats) const {
  if (a == b)
    throw std::invalid_argument("Container::blockers_along: degenerate path");
  const auto hits = tree_.query_segment({a, b}, footprint_resolver(),
                                        max_half_w_, max_half_l_, stats);
  auto out = resolve(hits, NodeKind::Blockage);
  std::sort(out.begin(), out.end(),
            [](const NetNode* x, const NetNode* y) { return x->id < y->id; });
  return out;
}

bool Container::los_clear(Point a, Point b) const {
  if (a == b)
    throw std::invalid_argument("Container::los_clear: degenerate path");
  const auto hits = tree_.query_segment({a, b}, footprint_resolver(),
                                        max_half_w_, max_half_l_);
  for (const NetNode* n : resolve(hits))
    if (n->kind == NodeKind::Blockage) return false;
  return true;
}

std::vector<std::string> Container::validate() const {
  std::vector<std::string> out = tree_.validate();
  if (tree_.size() != registry_.size())
    out.push_back("tree holds " + std::to_string(tree_.size()) +
                  " entries, registry " + std::to_string(registry_.size()));
  for (const auto& [id, n] : registry_) {
    const auto hits = tree_.query_radius(n.loc, 0.0);
    std::size_t found = 0;
    for (const Entry& e : hits)
      if (e.handle == id && e.key == n.loc) ++found;
    if (found != 1)
      out.push_back("id " + std::to_string(id) + " indexed " +
                    std::to_string(found) + " times at its location");
  }
  return out;
}

}  // namespace spatnet
