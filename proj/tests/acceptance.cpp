// Shipping gate: one self-contained check per release criterion. Each check
// prints a single [PASS]/[FAIL] line with its key numbers and elapsed time.
// Run with no arguments for the full gate, or name the checks to run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spatnet/bench.hpp"
#include "spatnet/radio.hpp"
#include "spatnet/scenario.hpp"

namespace {

using namespace spatnet;

double urand(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * ((rng() >> 11) * 0x1.0p-53);
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

std::vector<NodeId> sorted_ids(const std::vector<Entry>& es) {
  std::vector<NodeId> ids;
  ids.reserve(es.size());
  for (const Entry& e : es) ids.push_back(e.handle);
  std::sort(ids.begin(), ids.end());
  return ids;
}

// Every query type against a brute-force scan of the same node snapshot:
// radius and region results must be set-equal, nearest-neighbor results
// sequence-equal under the (distance, id) order.
bool check_queries(std::string& detail) {
  std::uint64_t queries = 0;
  for (int n : {100, 1000, 10000}) {
    for (int seed : {1, 2, 3}) {
      const ScenarioConfig cfg =
          for_node_count(n, 100.0, static_cast<std::uint64_t>(seed));
      const Container c = generate(cfg);
      const std::vector<NetNode> snap = c.snapshot();
      const RTree& tree = c.tree();
      const double w = cfg.area_width_m;
      const double h = cfg.area_height_m;
      std::mt19937_64 rng(1000003u * seed + static_cast<unsigned>(n));
      auto rand_pt = [&] {
        return Point{urand(rng, -50.0, w + 50.0), urand(rng, -50.0, h + 50.0)};
      };

      for (int q = 0; q < 100; ++q, ++queries) {
        const Point ctr = rand_pt();
        const double r = urand(rng, 0.0, 350.0);
        std::vector<NodeId> want;
        for (const NetNode& nd : snap)
          if (dist(nd.loc, ctr) <= r) want.push_back(nd.id);
        std::sort(want.begin(), want.end());
        if (sorted_ids(tree.query_radius(ctr, r)) != want) {
          detail = fmt("radius mismatch n=%d seed=%d query=%d", n, seed, q);
          return false;
        }
      }

      for (int q = 0; q < 100; ++q, ++queries) {
        const Point ctr = rand_pt();
        const std::size_t k =
            1 + rng() % std::min<std::size_t>(50, snap.size());
        std::vector<std::pair<double, NodeId>> order;
        order.reserve(snap.size());
        for (const NetNode& nd : snap)
          order.emplace_back(dist(nd.loc, ctr), nd.id);
        std::sort(order.begin(), order.end());
        const auto got = tree.query_knn(ctr, k);
        bool ok = got.size() == k;
        for (std::size_t i = 0; ok && i < k; ++i)
          ok = got[i].handle == order[i].second;
        if (!ok) {
          detail = fmt("knn mismatch n=%d seed=%d query=%d k=%zu", n, seed, q,
                       k);
          return false;
        }
      }

      for (int q = 0; q < 100; ++q, ++queries) {
        const Triangle t{rand_pt(), rand_pt(), rand_pt()};
        std::vector<NodeId> want;
        for (const NetNode& nd : snap)
          if (tri_contains(t, nd.loc)) want.push_back(nd.id);
        std::sort(want.begin(), want.end());
        if (sorted_ids(tree.query_triangle(t)) != want) {
          detail = fmt("triangle mismatch n=%d seed=%d query=%d", n, seed, q);
          return false;
        }
      }

      for (int q = 0; q < 100; ++q, ++queries) {
        // half free-floating segments, half anchored on node locations so
        // the hit path is exercised too
        Segment s{rand_pt(), rand_pt()};
        if (q % 2) {
          s.p = snap[rng() % snap.size()].loc;
          s.q = snap[rng() % snap.size()].loc;
          if (s.p.x == s.q.x && s.p.y == s.q.y) s.q = rand_pt();
        }
        std::vector<NodeId> want;
        for (const NetNode& nd : snap)
          if (seg_intersects_rect(s, point_rect(nd.loc))) want.push_back(nd.id);
        std::sort(want.begin(), want.end());
        if (sorted_ids(tree.query_segment(s)) != want) {
          detail = fmt("segment mismatch n=%d seed=%d query=%d", n, seed, q);
          return false;
        }
      }
    }
  }
  detail = fmt("%llu queries across 9 scenes, 4 query types, 0 mismatches",
               static_cast<unsigned long long>(queries));
  return true;
}

// Random interleaved insert/remove churn with a full structural audit after
// every operation, at three fan-out settings.
bool check_churn(std::string& detail) {
  for (int m : {3, 8, 16}) {
    std::mt19937_64 rng(9000u + m);
    RTree t(m);
    std::vector<Entry> alive;
    std::uint64_t next_id = 1;
    for (int op = 0; op < 10000; ++op) {
      if (alive.empty() || rng() % 100 < 60) {
        const Entry e{{urand(rng, 0.0, 2000.0), urand(rng, 0.0, 2000.0)},
                      next_id++};
        t.insert(e);
        alive.push_back(e);
      } else {
        const std::size_t i = rng() % alive.size();
        t.remove(alive[i]);
        alive[i] = alive.back();
        alive.pop_back();
      }
      const auto viol = t.validate();
      if (!viol.empty()) {
        detail = fmt("M=%d op=%d: %s", m, op, viol.front().c_str());
        return false;
      }
    }
    if (t.size() != alive.size()) {
      detail = fmt("M=%d size drift: tree=%zu alive=%zu", m, t.size(),
                   alive.size());
      return false;
    }
  }
  detail = "30000 audited operations at M=3/8/16, 0 violations";
  return true;
}

// Ten entries at max fan-out three must force two splits of the root path:
// a three-level tree.
bool check_height(std::string& detail) {
  RTree t(3);
  for (int i = 0; i < 10; ++i)
    t.insert({{static_cast<double>(i * 7 % 23), static_cast<double>(i * 13 % 17)},
              static_cast<NodeId>(i + 1)});
  const auto viol = t.validate();
  if (!viol.empty()) {
    detail = viol.front();
    return false;
  }
  detail = fmt("10 entries at M=3: height %d", t.height());
  return t.height() == 3;
}

// Link-budget sweep scaling: the array method must grow about quadratically
// and the indexed method close to linearly, with floor speedups at the two
// largest sizes.
bool check_snr_scaling(std::string& detail) {
  BenchConfig bc;
  bc.n_values = {1000, 10000, 100000};
  bc.repetitions = 3;
  const auto recs = bench_snr(bc);
  const double slope_a = fit_slope(recs, "snr", "array");
  const double slope_s = fit_slope(recs, "snr", "spatial");
  const double r4 = median_wall_seconds(recs, "snr", "array", 10000) /
                    median_wall_seconds(recs, "snr", "spatial", 10000);
  const double r5 = median_wall_seconds(recs, "snr", "array", 100000) /
                    median_wall_seconds(recs, "snr", "spatial", 100000);
  detail = fmt(
      "slopes array=%.2f (want 1.7..2.3) spatial=%.2f (want 0.8..1.5), "
      "speedup %.1fx at 1e4 (want >=10) %.0fx at 1e5 (want >=100)",
      slope_a, slope_s, r4, r5);
  return slope_a >= 1.7 && slope_a <= 2.3 && slope_s >= 0.8 &&
         slope_s <= 1.5 && r4 >= 10.0 && r5 >= 100.0;
}

// Interference sweep at n=5000: indexed method at least 20x faster while
// producing identical links (ids, interferer sets, values).
bool check_sinr_speedup(std::string& detail) {
  BenchConfig bc;
  bc.n_values = {5000};
  bc.repetitions = 3;
  const auto recs = bench_sinr(bc);  // warm-up enforces output equivalence
  const double ratio = median_wall_seconds(recs, "sinr", "array", 5000) /
                       median_wall_seconds(recs, "sinr", "spatial", 5000);

  const Container c = generate(for_node_count(5000, 100.0, 1));
  const ChannelParams ch;
  const auto mm =
      links_mismatch(sinr_links_array(c.snapshot(), ch), sinr_links_spatial(c, ch));
  if (mm) {
    detail = *mm;
    return false;
  }
  detail = fmt("speedup %.1fx at n=5000 (want >=20), methods agree", ratio);
  return ratio >= 20.0;
}

// Index construction must cost more than array construction at every size,
// but stay near-linear: time at 2n below 2.5x the time at n.
bool check_load_overhead(std::string& detail) {
  BenchConfig bc;
  bc.n_values = {3125, 6250, 12500, 25000, 50000, 100000};
  bc.repetitions = 7;  // builds are fast and the small sizes are noisy
  const auto recs = bench_load(bc);
  double worst_ratio = 0.0;
  for (std::size_t i = 0; i < bc.n_values.size(); ++i) {
    const int n = bc.n_values[i];
    const double a = median_wall_seconds(recs, "load", "array", n);
    const double s = median_wall_seconds(recs, "load", "spatial", n);
    if (s <= a) {
      detail = fmt("index build not slower at n=%d (%.3g s vs %.3g s)", n, s, a);
      return false;
    }
    if (i > 0) {
      const double prev =
          median_wall_seconds(recs, "load", "spatial", bc.n_values[i - 1]);
      worst_ratio = std::max(worst_ratio, s / prev);
    }
  }
  detail = fmt(
      "index build slower than array at all 6 sizes, worst doubling ratio "
      "%.2f (want <2.5)",
      worst_ratio);
  return worst_ratio < 2.5;
}

// The circumscribing triangle must cover the exact sector: no randomized
// sector member, including rim and edge-ray points, may fall outside it.
bool check_sector_cover(std::string& detail) {
  std::mt19937_64 rng(777);
  int members = 0;
  for (int i = 0; i < 100000; ++i) {
    const Point o{urand(rng, -1000.0, 1000.0), urand(rng, -1000.0, 1000.0)};
    const double bore = urand(rng, -4 * kPi, 4 * kPi);
    const double bw = urand(rng, 1e-3, kPi - 1e-4);
    const double rmax = urand(rng, 1.0, 500.0);
    const auto tri = sector_triangle(o, bore, bw, rmax);
    if (!tri) {
      detail = fmt("no triangle for beamwidth %.6f below pi", bw);
      return false;
    }
    double ang, r;
    switch (i % 4) {
      case 0:  // anywhere in a disc slightly past the rim
        ang = urand(rng, -kPi, kPi);
        r = rmax * 1.05 * std::sqrt(urand(rng, 0.0, 1.0));
        break;
      case 1:  // exactly on an edge ray at full radius
        ang = bore + (rng() % 2 ? 0.5 : -0.5) * bw;
        r = rmax;
        break;
      case 2:  // interior
        ang = bore + urand(rng, -0.5, 0.5) * bw;
        r = rmax * urand(rng, 0.0, 1.0);
        break;
      default:  // a hair around the rim
        ang = bore + urand(rng, -0.5, 0.5) * bw;
        r = rmax * (1.0 + urand(rng, -1e-9, 1e-9));
        break;
    }
    const Point tgt{o.x + r * std::cos(ang), o.y + r * std::sin(ang)};
    if (in_sector(o, bore, bw, rmax, tgt)) {
      ++members;
      if (!tri_contains(*tri, tgt)) {
        detail = fmt("sector member escapes triangle at sample %d", i);
        return false;
      }
    }
  }
  detail = fmt("100000 samples, %d sector members, 0 outside the triangle",
               members);
  return members > 10000;
}

// Normalized patterns must integrate to 2*pi around the circle. Midpoint
// sums split at the lobe edge, so no interval straddles the gain step and
// the only error left is floating-point.
bool check_pattern_norm(std::string& detail) {
  std::mt19937_64 rng(4242);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double bw = urand(rng, 0.05, 5.9);
    const double g = urand(rng, 1.0, std::min(8.0, 0.95 * kTwoPi / bw));
    const AntennaPattern p = normalized_pattern(bw, g);
    double integral = 0.0;
    const double edge = bw / 2;
    for (auto [lo, hi] : {std::pair{0.0, edge}, std::pair{edge, kPi}}) {
      const double step = (hi - lo) / 1000;
      double acc = 0.0;
      for (int k = 0; k < 1000; ++k) acc += gain(p, lo + (k + 0.5) * step);
      integral += acc * step;
    }
    worst = std::max(worst, std::abs(2.0 * integral - kTwoPi));
  }
  detail = fmt("100 patterns, worst |integral - 2pi| = %.3g (want <=1e-6)",
               worst);
  return worst <= 1e-6;
}

// Interference-aware quality can never beat noise-only quality, and with no
// interferer present the two must agree exactly.
bool check_sinr_bound(std::string& detail) {
  const ChannelParams ch;
  std::size_t links = 0;
  for (int n : {1000, 5000}) {
    const Container c = generate(for_node_count(n, 100.0, 7));
    const auto arr = sinr_links_array(c.snapshot(), ch);
    const auto spa = sinr_links_spatial(c, ch);
    if (const auto mm = links_mismatch(arr, spa)) {
      detail = *mm;
      return false;
    }
    for (const auto* v : {&arr, &spa})
      for (const LinkMetric& lm : *v) {
        ++links;
        if (!lm.sinr_db || *lm.sinr_db > lm.snr_db) {
          detail = fmt("sinr above snr on link %llu->%llu at n=%d",
                       static_cast<unsigned long long>(lm.tx_id),
                       static_cast<unsigned long long>(lm.rx_id), n);
          return false;
        }
      }
  }

  // two facing small cells, nothing else on the map: zero interferers
  Container pair(8);
  for (int i = 0; i < 2; ++i) {
    NetNode nd;
    nd.id = static_cast<NodeId>(i + 1);
    nd.kind = NodeKind::SmallBS;
    nd.loc = {50.0 * i, 0.0};
    nd.trx = TrxParams{};
    nd.trx->boresight_rad = i ? kPi : 0.0;
    pair.add(nd);
  }
  for (const auto& out :
       {sinr_links_array(pair.snapshot(), ch), sinr_links_spatial(pair, ch)}) {
    if (out.size() != 2) {
      detail = fmt("isolated pair built %zu links, want 2", out.size());
      return false;
    }
    for (const LinkMetric& lm : out)
      if (!lm.sinr_db || !lm.interferer_ids.empty() ||
          *lm.sinr_db != lm.snr_db) {
        detail = "isolated pair: sinr and snr differ";
        return false;
      }
  }
  detail = fmt("%zu links all hold sinr <= snr, isolated pair exact", links);
  return true;
}

struct Check {
  const char* name;
  bool (*run)(std::string&);
};

constexpr Check kChecks[] = {
    {"queries", check_queries},
    {"churn", check_churn},
    {"height", check_height},
    {"snr_scaling", check_snr_scaling},
    {"sinr_speedup", check_sinr_speedup},
    {"load_overhead", check_load_overhead},
    {"sector_cover", check_sector_cover},
    {"pattern_norm", check_pattern_norm},
    {"sinr_bound", check_sinr_bound},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<const Check*> selected;
  if (argc <= 1) {
    for (const Check& c : kChecks) selected.push_back(&c);
  } else {
    for (int i = 1; i < argc; ++i) {
      const Check* found = nullptr;
      for (const Check& c : kChecks)
        if (c.name == std::string_view(argv[i])) found = &c;
      if (!found) {
        std::fprintf(stderr, "unknown check: %s\n", argv[i]);
        return 2;
      }
      selected.push_back(found);
    }
  }

  bool all_ok = true;
  for (const Check* c : selected) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c->run(detail);
    } catch (const std::exception& e) {
      detail = fmt("exception: %s", e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::printf("[%s] %s: %s (%.1f s)\n", ok ? "PASS" : "FAIL", c->name,
                detail.c_str(), secs);
    std::fflush(stdout);
    all_ok = all_ok && ok;
  }
  return all_ok ? 0 : 1;
}
