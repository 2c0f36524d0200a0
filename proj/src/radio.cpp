#include "spatnet/radio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

#if defined(SPATNET_HAVE_MVEC) && defined(__x86_64__) && \
    (defined(__GNUC__) || defined(__clang__))
#define SPATNET_VEC_LOG10 1
#include <immintrin.h>
extern "C" __m256d _ZGVdN4v_log10(__m256d);
#endif

namespace spatnet {

namespace {

constexpr double kLightSpeed = 299'792'458.0;

inline void prefetch(const void* p) {
#if defined(__GNUC__) || defined(__clang__)
  __builtin_prefetch(p);
#else
  (void)p;
#endif
}

#ifdef SPATNET_VEC_LOG10
__attribute__((target("avx2"))) void log10_block4(double* vals) {
  _mm256_storeu_pd(vals, _ZGVdN4v_log10(_mm256_loadu_pd(vals)));
}
#endif

// 10*log10 applied in place to one field of every link. Values pass through
// a single evaluation path in fixed-size blocks, so both methods (which emit
// equal-length, identically ordered link lists) convert identically.
template <typename Slot>
void to_db_inplace(std::span<LinkMetric> links, const Slot& slot) {
#ifdef SPATNET_VEC_LOG10
  if (__builtin_cpu_supports("avx2")) {
    const std::size_t n = links.size();
    double tmp[4];
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
      for (int k = 0; k < 4; ++k) tmp[k] = *slot(links[i + k]);
      log10_block4(tmp);
      for (int k = 0; k < 4; ++k) *slot(links[i + k]) = 10.0 * tmp[k];
    }
    if (i < n) {
      double pad[4] = {1.0, 1.0, 1.0, 1.0};
      for (std::size_t k = 0; i + k < n; ++k) pad[k] = *slot(links[i + k]);
      log10_block4(pad);
      for (std::size_t k = 0; i + k < n; ++k) *slot(links[i + k]) = 10.0 * pad[k];
    }
    return;
  }
#endif
  for (LinkMetric& lm : links) *slot(lm) = 10.0 * std::log10(*slot(lm));
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double offset_or_zero(Point from, double boresight, Point to) {
  if (from == to) return 0.0;
  return angle_offset(from, boresight, to);
}

bool is_sbs(const NetNode& n) { return n.kind == NodeKind::SmallBS; }

// Precomputed trig for one antenna cone so membership tests need no
// transcendentals on the common path.
struct AngleGate {
  double cos_b = 1.0;
  double sin_b = 0.0;
  double cos_half = 1.0;
  double half_rad = 0.0;
};

AngleGate make_gate(double boresight_rad, double half_rad) {
  return {std::cos(boresight_rad), std::sin(boresight_rad),
          std::cos(half_rad), half_rad};
}

// Angular acceptance "offset from boresight <= half", decided by a dot
// product against cos(half) whenever the direction clears the cone edge by
// more than a narrow band, and by the plain trig form inside the band. Since
// |cos a - cos b| <= |a - b|, a quick verdict implies an angular gap far
// above the trig form's own rounding, so the verdict always matches it.
// (dx, dy, len) describe the from->to offset; callers that already know the
// separation pass it in rather than recomputing.
bool cone_covers(const AngleGate& g, Point from, double boresight_rad,
                 double dx, double dy, double len, Point to) {
  if (g.half_rad >= kPi) return true;
  if (g.half_rad < 0.0) return false;
  if (dx == 0.0 && dy == 0.0) return true;
  const double edge = dx * g.cos_b + dy * g.sin_b - len * g.cos_half;
  const double band = 1e-12 * std::max(len, 1.0);
  if (edge > band) return true;
  if (edge < -band) return false;
  return angle_offset(from, boresight_rad, to) <= g.half_rad;
}

bool within_cone(Point from, double boresight_rad, const AngleGate& g,
                 Point to) {
  const double dx = to.x - from.x;
  const double dy = to.y - from.y;
  return cone_covers(g, from, boresight_rad, dx, dy,
                     std::sqrt(dx * dx + dy * dy), to);
}

// Per-node projection of everything the link builders touch per pair, laid
// out flat so the hot loops stay off the registry.
struct Radio {
  const NetNode* node = nullptr;
  Point loc{};
  double boresight = 0.0;
  double range = 0.0;
  AngleGate gate{};
  double main_gain = 1.0;
  double side_gain = 1.0;
  double base_mw = 0.0;  // tx power through the reference loss, linear
};

Radio make_radio(const NetNode& n, const ChannelParams& ch) {
  const TrxParams& t = *n.trx;
  Radio r;
  r.node = &n;
  r.loc = n.loc;
  r.boresight = t.boresight_rad;
  r.range = t.max_range_m;
  r.gate = make_gate(t.boresight_rad, t.antenna.beamwidth_rad / 2);
  r.main_gain = t.antenna.main_gain;
  r.side_gain = t.antenna.side_gain;
  r.base_mw = db_to_linear(t.tx_power_dbm - ch.reference_loss_db);
  return r;
}

double gain_from(const Radio& r, Point target) {
  return within_cone(r.loc, r.boresight, r.gate, target) ? r.main_gain
                                                         : r.side_gain;
}

bool sector_covers(const Radio& r, Point target) {
  if (dist(r.loc, target) > r.range) return false;
  return within_cone(r.loc, r.boresight, r.gate, target);
}

// Distance term of the budget as a linear factor, clamped at the reference
// distance; the exponent-2 case needs no transcendentals.
double path_factor(const ChannelParams& ch, double d, bool los,
                   double nlos_mul) {
  double g = 1.0;
  if (d > ch.reference_distance_m) {
    const double ratio = d / ch.reference_distance_m;
    g = ch.pathloss_exponent == 2.0 ? 1.0 / (ratio * ratio)
                                    : std::pow(ratio, -ch.pathloss_exponent);
  }
  return los ? g : g * nlos_mul;
}

// Received power in mW over one directed path, antenna gains applied at
// both ends. The single evaluation used by every method so that array and
// spatial results agree bitwise.
double link_power_mw(const Radio& tx, const Radio& rx, const ChannelParams& ch,
                     double d, bool los, double nlos_mul) {
  return tx.base_mw * path_factor(ch, d, los, nlos_mul) *
         gain_from(tx, rx.loc) * gain_from(rx, tx.loc);
}

// Id-keyed lookup over the small-cell projections: a direct table when ids
// are dense enough, a sorted index otherwise.
struct RadioIndex {
  std::vector<Radio> radios;  // source order
  std::vector<std::uint32_t> table;  // id -> position + 1, 0 = absent
  std::vector<std::pair<NodeId, std::uint32_t>> sorted;

  const Radio* find(NodeId id) const {
    if (!table.empty())
      return id < table.size() && table[id] ? &radios[table[id] - 1] : nullptr;
    const auto it = std::lower_bound(
        sorted.begin(), sorted.end(), id,
        [](const std::pair<NodeId, std::uint32_t>& p, NodeId v) {
          return p.first < v;
        });
    return it != sorted.end() && it->first == id ? &radios[it->second]
                                                 : nullptr;
  }

  std::size_t pos(const Radio& r) const { return &r - radios.data(); }

  void finalize() {
    NodeId max_id = 0;
    for (const Radio& r : radios) max_id = std::max(max_id, r.node->id);
    if (!radios.empty() && max_id < 2 * radios.size() + 1024) {
      table.assign(static_cast<std::size_t>(max_id) + 1, 0);
      for (std::size_t i = 0; i < radios.size(); ++i)
        table[radios[i].node->id] = static_cast<std::uint32_t>(i) + 1;
    } else {
      sorted.reserve(radios.size());
      for (std::size_t i = 0; i < radios.size(); ++i)
        sorted.emplace_back(radios[i].node->id, static_cast<std::uint32_t>(i));
      std::sort(sorted.begin(), sorted.end());
    }
  }
};

RadioIndex index_radios(std::span<const NetNode> nodes,
                        const ChannelParams& ch) {
  RadioIndex ix;
  for (const NetNode& n : nodes)
    if (is_sbs(n)) ix.radios.push_back(make_radio(n, ch));
  ix.finalize();
  return ix;
}

RadioIndex index_radios(const Container& c, const ChannelParams& ch) {
  RadioIndex ix;
  ix.radios.reserve(c.count(NodeKind::SmallBS));
  for (const auto& [id, n] : c.nodes())
    if (is_sbs(n)) ix.radios.push_back(make_radio(n, ch));
  ix.finalize();
  return ix;
}

// Zero-length paths count as clear; both methods share that rule so the
// spatial side never has to pose a degenerate segment query.
bool clear_path_array(std::span<const NetNode> nodes, Point a, Point b) {
  if (a == b) return true;
  for (const NetNode& n : nodes)
    if (n.kind == NodeKind::Blockage &&
        seg_intersects_rect({a, b}, footprint(n)))
      return false;
  return true;
}

bool clear_path_spatial(const Container& c, Point a, Point b) {
  if (a == b) return true;
  return c.los_clear(a, b);
}

}  // namespace

AntennaPattern normalized_pattern(double beamwidth_rad, double main_gain) {
  if (!(beamwidth_rad > 0.0) || !(beamwidth_rad < kTwoPi))
    throw std::invalid_argument(
        "normalized_pattern: beamwidth must be in (0, 2*pi)");
  if (!(main_gain >= 1.0))
    throw std::invalid_argument("normalized_pattern: main_gain must be >= 1");
  const double side =
      (kTwoPi - beamwidth_rad * main_gain) / (kTwoPi - beamwidth_rad);
  if (!(side > 0.0))
    throw std::invalid_argument(
        "normalized_pattern: main_gain too large for this beamwidth");
  return {beamwidth_rad, main_gain, side};
}

bool is_normalized(const AntennaPattern& p, double tol) {
  const double integral =
      p.beamwidth_rad * p.main_gain + (kTwoPi - p.beamwidth_rad) * p.side_gain;
  return std::abs(integral - kTwoPi) <= tol * kTwoPi;
}

double gain(const AntennaPattern& p, double offset_rad) {
  if (!(offset_rad >= 0.0) || !(offset_rad <= kPi))
    throw std::invalid_argument("gain: offset must be in [0, pi]");
  return offset_rad <= p.beamwidth_rad / 2 ? p.main_gain : p.side_gain;
}

double gain_toward(const NetNode& n, Point target) {
  const TrxParams& t = *n.trx;
  return gain(t.antenna, offset_or_zero(n.loc, t.boresight_rad, target));
}

double free_space_reference_loss_db(double carrier_freq_hz, double d0_m) {
  if (!(carrier_freq_hz > 0.0) || !(d0_m > 0.0))
    throw std::invalid_argument(
        "free_space_reference_loss_db: frequency and d0 must be positive");
  return 20.0 * std::log10(4.0 * kPi * d0_m * carrier_freq_hz / kLightSpeed);
}

double thermal_noise_dbm(double bandwidth_hz, double noise_figure_db) {
  if (!(bandwidth_hz > 0.0))
    throw std::invalid_argument("thermal_noise_dbm: bandwidth must be > 0");
  return -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
}

double pathloss_db(const ChannelParams& ch, double d_m, bool los) {
  if (!(d_m >= 0.0)) throw std::invalid_argument("pathloss_db: d must be >= 0");
  const double penalty = los ? 0.0 : ch.nlos_penalty_db;
  if (d_m <= ch.reference_distance_m) return ch.reference_loss_db + penalty;
  return ch.reference_loss_db +
         10.0 * ch.pathloss_exponent * std::log10(d_m / ch.reference_distance_m) +
         penalty;
}

std::optional<Triangle> sector_triangle(Point origin, double boresight_rad,
                                        double beamwidth_rad, double range_m) {
  if (!(beamwidth_rad > 0.0))
    throw std::invalid_argument("sector_triangle: beamwidth must be > 0");
  if (!(range_m > 0.0))
    throw std::invalid_argument("sector_triangle: range must be > 0");
  if (beamwidth_rad >= kPi * (1.0 - 1e-6)) return std::nullopt;
  // Padded a hair beyond the exact circumscription so a member sitting on
  // the sector boundary can never round to the outside of the triangle.
  const double half = beamwidth_rad / 2 + 1e-9;
  const double leg = range_m / std::cos(half) * (1.0 + 1e-9);
  const double a1 = boresight_rad - half;
  const double a2 = boresight_rad + half;
  return Triangle{origin,
                  {origin.x + leg * std::cos(a1), origin.y + leg * std::sin(a1)},
                  {origin.x + leg * std::cos(a2), origin.y + leg * std::sin(a2)}};
}

bool in_sector(Point origin, double boresight_rad, double beamwidth_rad,
               double range_m, Point target) {
  if (dist(origin, target) > range_m) return false;
  return within_cone(origin, boresight_rad,
                     make_gate(boresight_rad, beamwidth_rad / 2), target);
}

std::vector<const NetNode*> directional_neighbors(const Container& c,
                                                  NodeId tx_id, bool exact,
                                                  QueryStats* stats) {
  const NetNode& tx = c.node(tx_id);
  if (!tx.trx.has_value())
    throw std::invalid_argument("directional_neighbors: node " +
                                std::to_string(tx_id) + " has no radio");
  const TrxParams& t = *tx.trx;
  const auto tri =
      sector_triangle(tx.loc, t.boresight_rad, t.antenna.beamwidth_rad,
                      t.max_range_m);
  auto entries = tri ? c.tree().query_triangle(*tri, stats)
                     : c.tree().query_radius(tx.loc, t.max_range_m, stats);
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.handle < b.handle; });
  std::vector<const NetNode*> out;
  for (const NetNode* n : c.resolve(entries)) {
    if (n->id == tx_id) continue;
    if (exact && !in_sector(tx.loc, t.boresight_rad, t.antenna.beamwidth_rad,
                            t.max_range_m, n->loc))
      continue;
    out.push_back(n);
  }
  return out;
}

namespace {

// One separation computation feeds the distance and both cone tests; the
// budget sequence matches link_power_mw factor for factor. Links are built
// in place at the back of the output with snr_db holding the linear ratio
// until the builder's final to_db_inplace pass.
void append_snr_link(std::vector<LinkMetric>& out, const Radio& tx,
                     const Radio& rx, const ChannelParams& ch, bool los,
                     double noise_mw, double nlos_mul) {
  LinkMetric& lm = out.emplace_back();
  lm.tx_id = tx.node->id;
  lm.rx_id = rx.node->id;
  const double dx = rx.loc.x - tx.loc.x;
  const double dy = rx.loc.y - tx.loc.y;
  const double d = std::sqrt(dx * dx + dy * dy);
  lm.distance_m = d;
  const double g_tx =
      cone_covers(tx.gate, tx.loc, tx.boresight, dx, dy, d, rx.loc)
          ? tx.main_gain
          : tx.side_gain;
  const double g_rx =
      cone_covers(rx.gate, rx.loc, rx.boresight, -dx, -dy, d, tx.loc)
          ? rx.main_gain
          : rx.side_gain;
  lm.snr_db =
      tx.base_mw * path_factor(ch, d, los, nlos_mul) * g_tx * g_rx / noise_mw;
}

auto snr_slot() {
  return [](LinkMetric& lm) { return &lm.snr_db; };
}

}  // namespace

std::vector<LinkMetric> snr_links_array(std::span<const NetNode> nodes,
                                        const ChannelParams& ch) {
  const double noise_mw = db_to_linear(ch.noise_power_dbm);
  const double nlos_mul = db_to_linear(-ch.nlos_penalty_db);
  bool has_blockage = false;
  for (const NetNode& n : nodes)
    if (n.kind == NodeKind::Blockage) has_blockage = true;

  const RadioIndex ix = index_radios(nodes, ch);
  std::vector<LinkMetric> out;
  for (const NetNode& tx : nodes) {
    if (!is_sbs(tx)) continue;
    const double range = tx.trx->max_range_m;
    const Radio& txr = *ix.find(tx.id);
    for (const NetNode& rx : nodes) {
      if (!is_sbs(rx) || rx.id == tx.id) continue;
      if (dist(tx.loc, rx.loc) > range) continue;
      const bool los =
          !has_blockage || clear_path_array(nodes, tx.loc, rx.loc);
      append_snr_link(out, txr, *ix.find(rx.id), ch, los, noise_mw, nlos_mul);
    }
  }
  to_db_inplace(out, snr_slot());
  return out;
}

std::vector<LinkMetric> snr_links_spatial(const Container& c,
                                          const ChannelParams& ch,
                                          QueryStats* stats) {
  const double noise_mw = db_to_linear(ch.noise_power_dbm);
  const double nlos_mul = db_to_linear(-ch.nlos_penalty_db);
  const bool has_blockage = c.count(NodeKind::Blockage) > 0;
  if (stats) *stats = {};

  const RadioIndex ix = index_radios(c, ch);

  // First pass resolves every query hit to a flat (tx, rx) position pair so
  // the links vector can be sized exactly before a single one is built. The
  // projection walks the registry in id order, so ascending position is
  // ascending id and the per-transmitter sort can work on bare positions.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  std::vector<Entry> buf;
  std::vector<std::uint32_t> scratch;
  QueryStats qs;
  for (const Radio& tx : ix.radios) {
    c.tree().query_radius(tx.loc, tx.range, buf, &qs);
    if (stats) {
      stats->nodes_visited += qs.nodes_visited;
      stats->leaves_visited += qs.leaves_visited;
      stats->candidates_returned += qs.candidates_returned;
    }
    const auto ti = static_cast<std::uint32_t>(ix.pos(tx));
    scratch.clear();
    for (const Entry& e : buf) {
      const Radio* rx = ix.find(e.handle);
      if (!rx) continue;
      const auto ri = static_cast<std::uint32_t>(ix.pos(*rx));
      if (ri != ti) scratch.push_back(ri);
    }
    std::sort(scratch.begin(), scratch.end());
    for (const std::uint32_t ri : scratch) pairs.emplace_back(ti, ri);
  }

  std::vector<LinkMetric> out;
  out.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i + 8 < pairs.size()) prefetch(&ix.radios[pairs[i + 8].second]);
    const Radio& tx = ix.radios[pairs[i].first];
    const Radio& rx = ix.radios[pairs[i].second];
    const bool los = !has_blockage || clear_path_spatial(c, tx.loc, rx.loc);
    append_snr_link(out, tx, rx, ch, los, noise_mw, nlos_mul);
  }
  to_db_inplace(out, snr_slot());
  return out;
}

namespace {

// Shared SINR assembly: both methods provide, per link, the id-ascending
// interferer list; signal and every contribution come from link_power_mw.
// sinr_db holds the linear ratio until the builder's conversion pass.
template <typename LosFn>
void finish_sinr_link(LinkMetric& lm, const Radio& tx, const Radio& rx,
                      std::span<const Radio* const> interferers,
                      const ChannelParams& ch, double noise_mw,
                      double nlos_mul, bool los, const LosFn& k_los) {
  const double signal_mw =
      link_power_mw(tx, rx, ch, lm.distance_m, los, nlos_mul);
  double interference_mw = 0.0;
  lm.interferer_ids.clear();
  for (const Radio* k : interferers) {
    interference_mw += link_power_mw(*k, rx, ch, dist(k->loc, rx.loc),
                                     k_los(*k), nlos_mul);
    lm.interferer_ids.push_back(k->node->id);
  }
  lm.sinr_db = signal_mw / (noise_mw + interference_mw);
}

auto sinr_slot() {
  return [](LinkMetric& lm) { return &*lm.sinr_db; };
}

}  // namespace

std::vector<LinkMetric> sinr_links_array(std::span<const NetNode> nodes,
                                         const ChannelParams& ch) {
  const double noise_mw = db_to_linear(ch.noise_power_dbm);
  const double nlos_mul = db_to_linear(-ch.nlos_penalty_db);
  bool has_blockage = false;
  for (const NetNode& n : nodes)
    if (n.kind == NodeKind::Blockage) has_blockage = true;

  std::vector<LinkMetric> out = snr_links_array(nodes, ch);
  const RadioIndex ix = index_radios(nodes, ch);
  std::vector<const Radio*> interferers;

  for (LinkMetric& lm : out) {
    const Radio& tx = *ix.find(lm.tx_id);
    const Radio& rx = *ix.find(lm.rx_id);
    interferers.clear();
    // O(n) rescan per link: every other active small cell whose own sector
    // reaches the receiver.
    for (const Radio& k : ix.radios) {
      if (k.node->id == lm.tx_id || k.node->id == lm.rx_id) continue;
      if (sector_covers(k, rx.loc)) interferers.push_back(&k);
    }
    const bool los =
        !has_blockage || clear_path_array(nodes, tx.loc, rx.loc);
    finish_sinr_link(lm, tx, rx, interferers, ch, noise_mw, nlos_mul, los,
                     [&](const Radio& k) {
                       return !has_blockage ||
                              clear_path_array(nodes, k.loc, rx.loc);
                     });
  }
  to_db_inplace(out, sinr_slot());
  return out;
}

std::vector<LinkMetric> sinr_links_spatial(const Container& c,
                                           const ChannelParams& ch,
                                           QueryStats* stats) {
  const double noise_mw = db_to_linear(ch.noise_power_dbm);
  const double nlos_mul = db_to_linear(-ch.nlos_penalty_db);
  const bool has_blockage = c.count(NodeKind::Blockage) > 0;

  std::vector<LinkMetric> out = snr_links_spatial(c, ch, stats);
  const RadioIndex ix = index_radios(c, ch);

  // One sector query per transmitter inverts into per-receiver interferer
  // lists; walking transmitters in id order keeps every list id-ascending.
  std::vector<std::vector<const Radio*>> reaching(ix.radios.size());
  QueryStats qs;
  for (const Radio& k : ix.radios) {
    const auto victims = directional_neighbors(c, k.node->id, /*exact=*/true,
                                               stats ? &qs : nullptr);
    if (stats) {
      stats->nodes_visited += qs.nodes_visited;
      stats->leaves_visited += qs.leaves_visited;
      stats->candidates_returned += qs.candidates_returned;
    }
    for (const NetNode* v : victims) {
      const Radio* vr = ix.find(v->id);
      if (vr) reaching[ix.pos(*vr)].push_back(&k);
    }
  }

  std::vector<const Radio*> interferers;
  for (LinkMetric& lm : out) {
    const Radio& tx = *ix.find(lm.tx_id);
    const Radio& rx = *ix.find(lm.rx_id);
    interferers.clear();
    for (const Radio* k : reaching[ix.pos(rx)])
      if (k->node->id != lm.tx_id) interferers.push_back(k);
    const bool los =
        !has_blockage || clear_path_spatial(c, tx.loc, rx.loc);
    finish_sinr_link(lm, tx, rx, interferers, ch, noise_mw, nlos_mul, los,
                     [&](const Radio& k) {
                       return !has_blockage ||
                              clear_path_spatial(c, k.loc, rx.loc);
                     });
  }
  to_db_inplace(out, sinr_slot());
  return out;
}

std::optional<std::string> links_mismatch(std::span<const LinkMetric> a,
                                          std::span<const LinkMetric> b,
                                          double rel_tol) {
  if (a.size() != b.size())
    return "link counts differ: " + std::to_string(a.size()) + " vs " +
           std::to_string(b.size());
  auto close = [rel_tol](double x, double y) {
    return std::abs(x - y) <= rel_tol * std::max({std::abs(x), std::abs(y), 1.0});
  };
  for (std::size_t i = 0; i < a.size(); ++i) {
    const LinkMetric& la = a[i];
    const LinkMetric& lb = b[i];
    const std::string tag = "link " + std::to_string(la.tx_id) + "->" +
                            std::to_string(la.rx_id) + ": ";
    if (la.tx_id != lb.tx_id || la.rx_id != lb.rx_id)
      return "link sets diverge at index " + std::to_string(i);
    if (la.distance_m != lb.distance_m) return tag + "distance differs";
    if (!close(la.snr_db, lb.snr_db)) return tag + "snr differs";
    if (la.sinr_db.has_value() != lb.sinr_db.has_value())
      return tag + "sinr presence differs";
    if (la.sinr_db && !close(*la.sinr_db, *lb.sinr_db))
      return tag + "sinr differs";
    if (la.interferer_ids != lb.interferer_ids)
      return tag + "interferer sets differ";
  }
  return std::nullopt;
}

void write_links_csv(std::ostream& os, std::span<const LinkMetric> links) {
  os << "tx_id,rx_id,distance_m,snr_db,sinr_db,num_interferers\n";
  char buf[128];
  for (const LinkMetric& lm : links) {
    os << lm.tx_id << ',' << lm.rx_id << ',';
    std::snprintf(buf, sizeof(buf), "%.10g,%.10g,", lm.distance_m, lm.snr_db);
    os << buf;
    if (lm.sinr_db) {
      std::snprintf(buf, sizeof(buf), "%.10g", *lm.sinr_db);
      os << buf;
    }
    os << ',' << lm.interferer_ids.size() << '\n';
  }
}

}  // namespace spatnet
