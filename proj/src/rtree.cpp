#include "spatnet/rtree.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace spatnet {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kNoCount = std::numeric_limits<std::size_t>::max();

inline void prefetch(const void* p) {
#if defined(__GNUC__) || defined(__clang__)
  __builtin_prefetch(p);
#else
  (void)p;
#endif
}
}

// Internal nodes keep each child's box inline next to the child pointer, so
// pruning scans one contiguous run and dereferences only the children it
// accepts. branch.mbr mirrors child->mbr; every mutation re-syncs it and
// validate() audits the mirror.
struct RTree::Node {
  struct Branch {
    Rect mbr{};
    std::unique_ptr<Node> child;
  };

  Rect mbr{};
  bool leaf = true;
  std::vector<Entry> entries;    // leaf payload
  std::vector<Branch> branches;  // internal fan-out

  std::size_t count() const { return leaf ? entries.size() : branches.size(); }

  Rect item_rect(std::size_t i) const {
    return leaf ? point_rect(entries[i].key) : branches[i].mbr;
  }

  // min/max folds are exact, so recomputation keeps boxes bitwise tight.
  void recompute_mbr() {
    Rect r = item_rect(0);
    for (std::size_t i = 1; i < count(); ++i) r = rect_union(r, item_rect(i));
    mbr = r;
  }
};

RTree::RTree(int max_entries)
    : max_entries_(max_entries),
      min_entries_(std::max(2, static_cast<int>(std::ceil(0.4 * max_entries)))),
      root_(std::make_unique<Node>()) {
  if (max_entries < 3)
    throw std::invalid_argument("RTree: max_entries must be >= 3");
}

RTree::~RTree() = default;
RTree::RTree(RTree&&) noexcept = default;
RTree& RTree::operator=(RTree&&) noexcept = default;

int RTree::height() const {
  int h = 1;
  for (const Node* n = root_.get(); !n->leaf;
       n = n->branches.front().child.get())
    ++h;
  return h;
}

std::optional<Rect> RTree::bounds() const {
  if (size_ == 0) return std::nullopt;
  return root_->mbr;
}

void RTree::clear() {
  root_ = std::make_unique<Node>();
  size_ = 0;
}

namespace {

// Pre-order deep copy; fresh allocations land roughly in descent order.
std::unique_ptr<RTree::Node> clone_rec(const RTree::Node& n) {
  auto copy = std::make_unique<RTree::Node>();
  copy->mbr = n.mbr;
  copy->leaf = n.leaf;
  copy->entries = n.entries;
  if (!n.leaf) {
    copy->branches.reserve(n.branches.size());
    for (const auto& b : n.branches)
      copy->branches.push_back({b.mbr, clone_rec(*b.child)});
  }
  return copy;
}

}  // namespace

void RTree::repack() {
  if (!root_) return;
  auto packed = clone_rec(*root_);  // build the copy before freeing the old
  root_ = std::move(packed);        // tree so it cannot reuse its holes
}

std::size_t RTree::choose_subtree(const Node& node, const Rect& r) const {
  std::size_t best = 0;
  double best_enl = kInf;
  double best_area = kInf;
  std::size_t best_count = kNoCount;  // fetched lazily, ties are rare
  for (std::size_t i = 0; i < node.branches.size(); ++i) {
    const double enl = rect_enlargement(node.branches[i].mbr, r);
    const double a = area(node.branches[i].mbr);
    // Least enlargement, then smaller area, then fewer children, then
    // lowest index: fully deterministic descent.
    bool better = enl < best_enl || (enl == best_enl && a < best_area);
    if (!better && enl == best_enl && a == best_area) {
      if (best_count == kNoCount)
        best_count = node.branches[best].child->count();
      if (node.branches[i].child->count() < best_count) better = true;
    }
    if (better) {
      best = i;
      best_enl = enl;
      best_area = a;
      best_count = kNoCount;
    }
  }
  return best;
}

// Guttman's quadratic split. node keeps group 1, the returned sibling takes
// group 2. Ties resolve to the lowest index / group 1 so that identical input
// sequences always produce identical trees.
std::unique_ptr<RTree::Node> RTree::split(Node& node) const {
  const std::size_t n = node.count();
  std::vector<Rect> rects(n);
  for (std::size_t i = 0; i < n; ++i) rects[i] = node.item_rect(i);

  // PickSeeds: the pair that would waste the most area together.
  std::size_t seed_a = 0;
  std::size_t seed_b = 1;
  double worst = -kInf;
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double waste =
          area(rect_union(rects[i], rects[j])) - area(rects[i]) - area(rects[j]);
      if (waste > worst) {
        worst = waste;
        seed_a = i;
        seed_b = j;
      }
    }

  std::vector<std::size_t> g1{seed_a};
  std::vector<std::size_t> g2{seed_b};
  Rect mbr1 = rects[seed_a];
  Rect mbr2 = rects[seed_b];
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < n; ++i)
    if (i != seed_a && i != seed_b) rest.push_back(i);

  const std::size_t min_fill = static_cast<std::size_t>(min_entries_);
  while (!rest.empty()) {
    // Hand everything over when a group needs all that is left to reach
    // the minimum fill.
    if (g1.size() + rest.size() == min_fill) {
      for (std::size_t i : rest) {
        g1.push_back(i);
        mbr1 = rect_union(mbr1, rects[i]);
      }
      break;
    }
    if (g2.size() + rest.size() == min_fill) {
      for (std::size_t i : rest) {
        g2.push_back(i);
        mbr2 = rect_union(mbr2, rects[i]);
      }
      break;
    }

    // PickNext: strongest preference for one group over the other.
    std::size_t pick = 0;
    double best_diff = -kInf;
    double d1_pick = 0.0;
    double d2_pick = 0.0;
    for (std::size_t idx = 0; idx < rest.size(); ++idx) {
      const double d1 = rect_enlargement(mbr1, rects[rest[idx]]);
      const double d2 = rect_enlargement(mbr2, rects[rest[idx]]);
      const double diff = std::abs(d1 - d2);
      if (diff > best_diff) {
        best_diff = diff;
        pick = idx;
        d1_pick = d1;
        d2_pick = d2;
      }
    }
    const std::size_t item = rest[pick];
    rest.erase(rest.begin() + pick);

    bool to_g1;
    if (d1_pick != d2_pick) {
      to_g1 = d1_pick < d2_pick;
    } else {
      const double a1 = area(mbr1);
      const double a2 = area(mbr2);
      if (a1 != a2) to_g1 = a1 < a2;
      else to_g1 = g1.size() <= g2.size();
    }
    if (to_g1) {
      g1.push_back(item);
      mbr1 = rect_union(mbr1, rects[item]);
    } else {
      g2.push_back(item);
      mbr2 = rect_union(mbr2, rects[item]);
    }
  }

  auto sibling = std::make_unique<Node>();
  sibling->leaf = node.leaf;
  if (node.leaf) {
    std::vector<Entry> keep;
    keep.reserve(g1.size());
    for (std::size_t i : g1) keep.push_back(node.entries[i]);
    sibling->entries.reserve(g2.size());
    for (std::size_t i : g2) sibling->entries.push_back(node.entries[i]);
    node.entries = std::move(keep);
  } else {
    std::vector<Node::Branch> keep;
    keep.reserve(g1.size());
    for (std::size_t i : g1) keep.push_back(std::move(node.branches[i]));
    sibling->branches.reserve(g2.size());
    for (std::size_t i : g2)
      sibling->branches.push_back(std::move(node.branches[i]));
    node.branches = std::move(keep);
  }
  node.recompute_mbr();
  sibling->recompute_mbr();
  return sibling;
}

std::unique_ptr<RTree::Node> RTree::insert_rec(Node& node, const Entry& e) const {
  if (node.leaf) {
    node.entries.push_back(e);
    if (node.entries.size() > static_cast<std::size_t>(max_entries_))
      return split(node);
    node.recompute_mbr();
    return nullptr;
  }
  Node::Branch& b = node.branches[choose_subtree(node, point_rect(e.key))];
  auto sibling = insert_rec(*b.child, e);
  b.mbr = b.child->mbr;
  if (sibling) {
    Rect smbr = sibling->mbr;
    node.branches.push_back({smbr, std::move(sibling)});
    if (node.branches.size() > static_cast<std::size_t>(max_entries_))
      return split(node);
  }
  node.recompute_mbr();
  return nullptr;
}

void RTree::grow_root(std::unique_ptr<Node> sibling) {
  auto new_root = std::make_unique<Node>();
  new_root->leaf = false;
  new_root->branches.push_back({root_->mbr, std::move(root_)});
  new_root->branches.push_back({sibling->mbr, std::move(sibling)});
  new_root->recompute_mbr();
  root_ = std::move(new_root);
}

void RTree::insert(const Entry& e) {
  if (!finite(e.key))
    throw std::invalid_argument("RTree::insert: non-finite key");
  if (auto sibling = insert_rec(*root_, e)) grow_root(std::move(sibling));
  ++size_;
}

bool RTree::remove_rec(Node& node, const Entry& e,
                       std::vector<std::unique_ptr<Node>>& orphans) const {
  if (node.leaf) {
    auto it = std::find(node.entries.begin(), node.entries.end(), e);
    if (it == node.entries.end()) return false;
    node.entries.erase(it);
    if (!node.entries.empty()) node.recompute_mbr();
    return true;
  }
  for (std::size_t i = 0; i < node.branches.size(); ++i) {
    Node::Branch& b = node.branches[i];
    if (!rect_contains(b.mbr, e.key)) continue;
    if (!remove_rec(*b.child, e, orphans)) continue;
    if (b.child->count() < static_cast<std::size_t>(min_entries_)) {
      orphans.push_back(std::move(b.child));
      node.branches.erase(node.branches.begin() +
                          static_cast<std::ptrdiff_t>(i));
    } else {
      b.mbr = b.child->mbr;
    }
    if (!node.branches.empty()) node.recompute_mbr();
    return true;
  }
  return false;
}

namespace {

void collect_entries(const RTree::Node& node, std::vector<Entry>& out);

}  // namespace

void RTree::remove(const Entry& e) {
  std::vector<std::unique_ptr<Node>> orphans;
  if (!remove_rec(*root_, e, orphans))
    throw std::runtime_error("RTree::remove: entry not found");
  --size_;

  // Condensation: salvage every entry living under an orphaned node and
  // push it back through the normal insert path.
  std::vector<Entry> salvaged;
  for (const auto& orphan : orphans) collect_entries(*orphan, salvaged);
  for (const Entry& s : salvaged)
    if (auto sibling = insert_rec(*root_, s)) grow_root(std::move(sibling));

  // A root with a single child is one level too tall.
  while (!root_->leaf && root_->branches.size() == 1)
    root_ = std::move(root_->branches.front().child);
}

namespace {

void collect_entries(const RTree::Node& node, std::vector<Entry>& out) {
  if (node.leaf) {
    out.insert(out.end(), node.entries.begin(), node.entries.end());
    return;
  }
  for (const auto& b : node.branches) collect_entries(*b.child, out);
}

// Squared-distance verdicts everywhere except a narrow band around the
// boundary, where the plain distance comparison decides; the reported set
// is exactly the set passing dist(key, center) <= r. Internal boxes whose
// squared clearance falls inside the band are descended rather than cut,
// which can only add candidates the leaf test then settles.
void radius_rec(const RTree::Node& node, Point c, double r, double rsq,
                double band, std::vector<Entry>& out, QueryStats& st) {
  ++st.nodes_visited;
  if (node.leaf) {
    ++st.leaves_visited;
    for (const Entry& e : node.entries) {
      const double dx = e.key.x - c.x;
      const double dy = e.key.y - c.y;
      const double dsq = dx * dx + dy * dy;
      if (dsq > rsq + band) continue;
      if (dsq <= rsq - band || dist(e.key, c) <= r) out.push_back(e);
    }
    return;
  }
  // Each accepted child is visited once the following sibling tests have
  // run, giving its prefetch time to land; visit order is unchanged.
  const RTree::Node* pending = nullptr;
  for (const auto& b : node.branches) {
    const double dx = std::max({b.mbr.min.x - c.x, 0.0, c.x - b.mbr.max.x});
    const double dy = std::max({b.mbr.min.y - c.y, 0.0, c.y - b.mbr.max.y});
    if (dx * dx + dy * dy <= rsq + band) {
      prefetch(b.child.get());
      if (pending) radius_rec(*pending, c, r, rsq, band, out, st);
      pending = b.child.get();
    }
  }
  if (pending) radius_rec(*pending, c, r, rsq, band, out, st);
}

void triangle_rec(const RTree::Node& node, const Triangle& t,
                  std::vector<Entry>& out, QueryStats& st) {
  ++st.nodes_visited;
  if (node.leaf) {
    ++st.leaves_visited;
    for (const Entry& e : node.entries)
      if (tri_contains(t, e.key)) out.push_back(e);
    return;
  }
  for (const auto& b : node.branches)
    if (tri_intersects_rect(t, b.mbr)) triangle_rec(*b.child, t, out, st);
}

void segment_rec(const RTree::Node& node, const Segment& s,
                 const RTree::FootprintFn& fp, double mx, double my,
                 std::vector<Entry>& out, QueryStats& st) {
  ++st.nodes_visited;
  if (node.leaf) {
    ++st.leaves_visited;
    for (const Entry& e : node.entries) {
      const Rect r = fp ? fp(e) : point_rect(e.key);
      if (seg_intersects_rect(s, r)) out.push_back(e);
    }
    return;
  }
  for (const auto& b : node.branches)
    if (seg_intersects_rect(s, rect_expand(b.mbr, mx, my)))
      segment_rec(*b.child, s, fp, mx, my, out, st);
}

}  // namespace

void RTree::query_radius(Point center, double radius, std::vector<Entry>& out,
                         QueryStats* stats) const {
  if (!(radius >= 0.0))
    throw std::invalid_argument("RTree::query_radius: radius must be >= 0");
  out.clear();
  QueryStats local;
  QueryStats& st = stats ? *stats : local;
  st = {};
  if (size_ > 0) {
    const double rsq = radius * radius;
    const double band = 1e-12 * std::max(rsq, 1.0);
    radius_rec(*root_, center, radius, rsq, band, out, st);
  }
  st.candidates_returned = out.size();
}

std::vector<Entry> RTree::query_radius(Point center, double radius,
                                       QueryStats* stats) const {
  std::vector<Entry> out;
  query_radius(center, radius, out, stats);
  return out;
}

void RTree::query_triangle(const Triangle& t, std::vector<Entry>& out,
                           QueryStats* stats) const {
  out.clear();
  QueryStats local;
  QueryStats& st = stats ? *stats : local;
  st = {};
  if (size_ > 0) triangle_rec(*root_, t, out, st);
  st.candidates_returned = out.size();
}

std::vector<Entry> RTree::query_triangle(const Triangle& t,
                                         QueryStats* stats) const {
  std::vector<Entry> out;
  query_triangle(t, out, stats);
  return out;
}

std::vector<Entry> RTree::query_segment(const Segment& s,
                                        const FootprintFn& footprint,
                                        double margin_x, double margin_y,
                                        QueryStats* stats) const {
  if (!(margin_x >= 0.0) || !(margin_y >= 0.0))
    throw std::invalid_argument("RTree::query_segment: margins must be >= 0");
  std::vector<Entry> out;
  QueryStats local;
  QueryStats& st = stats ? *stats : local;
  st = {};
  if (size_ > 0) segment_rec(*root_, s, footprint, margin_x, margin_y, out, st);
  st.candidates_returned = out.size();
  return out;
}

std::vector<Entry> RTree::query_knn(Point center, std::size_t k,
                                    QueryStats* stats) const {
  if (k < 1) throw std::invalid_argument("RTree::query_knn: k must be >= 1");
  if (stats) *stats = {};

  struct Cand {
    double d;
    Entry e;
  };
  // Worst-first ordering over (distance, handle, key): the heap top is the
  // candidate to beat, which bakes the tie-break into the search itself.
  auto cand_less = [](const Cand& a, const Cand& b) {
    if (a.d != b.d) return a.d < b.d;
    if (a.e.handle != b.e.handle) return a.e.handle < b.e.handle;
    if (a.e.key.x != b.e.key.x) return a.e.key.x < b.e.key.x;
    return a.e.key.y < b.e.key.y;
  };

  std::vector<Cand> best;  // max-heap of the k best so far
  best.reserve(std::min(k, size_) + 1);

  struct Pending {
    double d;
    std::uint64_t seq;
    const Node* node;
    bool operator>(const Pending& o) const {
      return d != o.d ? d > o.d : seq > o.seq;
    }
  };
  std::priority_queue<Pending, std::vector<Pending>, std::greater<>> frontier;
  std::uint64_t seq = 0;
  if (size_ > 0) frontier.push({0.0, seq++, root_.get()});

  while (!frontier.empty()) {
    const Pending cur = frontier.top();
    frontier.pop();
    // Strictly farther than the current k-th: nothing below can win, even
    // on a handle tie-break.
    if (best.size() == k && cur.d > best.front().d) break;
    const Node& node = *cur.node;
    if (stats) {
      ++stats->nodes_visited;
      if (node.leaf) ++stats->leaves_visited;
    }
    if (node.leaf) {
      for (const Entry& e : node.entries) {
        const Cand c{dist(e.key, center), e};
        if (best.size() < k) {
          best.push_back(c);
          std::push_heap(best.begin(), best.end(), cand_less);
        } else if (cand_less(c, best.front())) {
          std::pop_heap(best.begin(), best.end(), cand_less);
          best.back() = c;
          std::push_heap(best.begin(), best.end(), cand_less);
        }
      }
      continue;
    }
    for (const auto& b : node.branches) {
      const double md = rect_min_dist(b.mbr, center);
      if (best.size() < k || md <= best.front().d)
        frontier.push({md, seq++, b.child.get()});
    }
  }

  std::sort(best.begin(), best.end(), cand_less);
  std::vector<Entry> out;
  out.reserve(best.size());
  for (const Cand& c : best) out.push_back(c.e);
  if (stats) stats->candidates_returned = out.size();
  return out;
}

namespace {

void validate_rec(const RTree::Node& node, const std::string& path, int depth,
                  bool is_root, int max_e, int min_e,
                  std::vector<std::string>& out, std::size_t& entry_count,
                  int& leaf_depth) {
  const std::size_t cnt = node.count();
  if (is_root) {
    if (!node.leaf && (cnt < 2 || cnt > static_cast<std::size_t>(max_e)))
      out.push_back(path + ": internal root fan-out " + std::to_string(cnt) +
                    " outside [2, " + std::to_string(max_e) + "]");
    if (node.leaf && cnt > static_cast<std::size_t>(max_e))
      out.push_back(path + ": root leaf holds " + std::to_string(cnt) +
                    " > " + std::to_string(max_e));
  } else if (cnt < static_cast<std::size_t>(min_e) ||
             cnt > static_cast<std::size_t>(max_e)) {
    out.push_back(path + ": fan-out " + std::to_string(cnt) + " outside [" +
                  std::to_string(min_e) + ", " + std::to_string(max_e) + "]");
  }

  if (node.leaf) {
    if (leaf_depth < 0) leaf_depth = depth;
    else if (depth != leaf_depth)
      out.push_back(path + ": leaf at depth " + std::to_string(depth) +
                    ", expected " + std::to_string(leaf_depth));
    entry_count += node.entries.size();
    for (const Entry& e : node.entries)
      if (!finite(e.key)) out.push_back(path + ": non-finite key");
  }

  if (cnt > 0) {
    Rect tight = node.item_rect(0);
    for (std::size_t i = 1; i < cnt; ++i)
      tight = rect_union(tight, node.item_rect(i));
    if (!(tight == node.mbr))
      out.push_back(path + ": loose bounding box");
  }

  if (!node.leaf)
    for (std::size_t i = 0; i < node.branches.size(); ++i) {
      const std::string cpath = path + "." + std::to_string(i);
      if (!(node.branches[i].mbr == node.branches[i].child->mbr))
        out.push_back(cpath + ": cached child box out of sync");
      validate_rec(*node.branches[i].child, cpath, depth + 1, false, max_e,
                   min_e, out, entry_count, leaf_depth);
    }
}

void describe_rec(const RTree::Node& node, int depth, std::ostringstream& os) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%*s%c n=%zu [%.17g,%.17g;%.17g,%.17g]",
                depth * 2, "", node.leaf ? 'L' : 'I', node.count(),
                node.mbr.min.x, node.mbr.min.y, node.mbr.max.x, node.mbr.max.y);
  os << buf;
  if (node.leaf) {
    for (const Entry& e : node.entries) {
      std::snprintf(buf, sizeof(buf), " (%llu@%.17g,%.17g)",
                    static_cast<unsigned long long>(e.handle), e.key.x,
                    e.key.y);
      os << buf;
    }
  }
  os << '\n';
  if (!node.leaf)
    for (const auto& b : node.branches) describe_rec(*b.child, depth + 1, os);
}

}  // namespace

std::vector<std::string> RTree::validate() const {
  std::vector<std::string> out;
  std::size_t entry_count = 0;
  int leaf_depth = -1;
  validate_rec(*root_, "root", 0, true, max_entries_, min_entries_, out,
               entry_count, leaf_depth);
  if (entry_count != size_)
    out.push_back("size mismatch: counted " + std::to_string(entry_count) +
                  ", recorded " + std::to_string(size_));
  return out;
}

std::string RTree::describe() const {
  std::ostringstream os;
  describe_rec(*root_, 0, os);
  return os.str();
}

}  // namespace spatnet
