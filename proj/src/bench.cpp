#include "spatnet/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>

#include "spatnet/radio.hpp"

namespace spatnet {

namespace {

template <typename F>
double time_call(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  const auto t1 = std::chrono::steady_clock::now();
  // clamp to the clock's plausible floor so downstream log fits stay finite
  return std::max(std::chrono::duration<double>(t1 - t0).count(), 1e-9);
}

void check_positive_reps(const BenchConfig& cfg) {
  if (cfg.repetitions < 1)
    throw std::invalid_argument("bench: repetitions must be >= 1");
  if (cfg.n_values.empty())
    throw std::invalid_argument("bench: empty n sweep");
}

// Shared skeleton for the two link benchmarks, which differ only in the
// pair of computations and the task label.
template <typename ArrayFn, typename SpatialFn>
std::vector<BenchRecord> bench_links(const BenchConfig& cfg,
                                     const std::string& task, int array_cap,
                                     ArrayFn array_fn, SpatialFn spatial_fn,
                                     bool require_sane_sinr) {
  check_positive_reps(cfg);
  std::vector<BenchRecord> out;
  const ChannelParams ch;

  for (int n : cfg.n_values) {
    Container c = generate(for_node_count(n, cfg.density_per_km2, cfg.seed));
    const std::vector<NetNode> snap = c.snapshot();
    const bool run_array = array_cap <= 0 || n <= array_cap;

    // warm-up doubles as the output-equivalence gate
    {
      QueryStats st;
      auto spa = spatial_fn(c, ch, &st);
      if (require_sane_sinr)
        for (const LinkMetric& lm : spa)
          if (lm.sinr_db && *lm.sinr_db > lm.snr_db)
            throw std::runtime_error(task + " benchmark aborted at n=" +
                                     std::to_string(n) +
                                     ": link with sinr above snr");
      if (run_array) {
        auto arr = array_fn(snap, ch);
        if (auto diff = links_mismatch(arr, spa, 1e-9))
          throw std::runtime_error(task + " benchmark aborted at n=" +
                                   std::to_string(n) + ": " + *diff);
      }
    }

    for (int rep = 0; rep < cfg.repetitions; ++rep) {
      if (run_array) {
        std::vector<LinkMetric> links;
        const double s = time_call([&] { links = array_fn(snap, ch); });
        out.push_back({task, "array", n, rep, s, 0});
      }
      std::vector<LinkMetric> links;
      QueryStats st;
      const double s = time_call([&] { links = spatial_fn(c, ch, &st); });
      out.push_back({task, "spatial", n, rep, s, st.nodes_visited});
    }
  }
  return out;
}

}  // namespace

std::vector<BenchRecord> bench_load(const BenchConfig& cfg) {
  check_positive_reps(cfg);
  std::vector<BenchRecord> out;

  for (int n : cfg.n_values) {
    const ScenarioConfig scfg =
        for_node_count(n, cfg.density_per_km2, cfg.seed);
    const std::vector<NetNode> nodes = generate_nodes(scfg);

    auto fill_array = [&] {
      std::vector<NetNode> v;
      for (const NetNode& nd : nodes) v.push_back(nd);
      if (v.size() != nodes.size())
        throw std::logic_error("bench_load: array build lost nodes");
    };
    auto fill_tree = [&] {
      RTree t(scfg.rtree_max_entries);
      for (const NetNode& nd : nodes) t.insert({nd.loc, nd.id});
      if (t.size() != nodes.size())
        throw std::logic_error("bench_load: tree build lost nodes");
    };

    fill_array();
    fill_tree();
    for (int rep = 0; rep < cfg.repetitions; ++rep) {
      out.push_back({"load", "array", n, rep, time_call(fill_array), 0});
      out.push_back({"load", "spatial", n, rep, time_call(fill_tree), 0});
    }
  }
  return out;
}

std::vector<BenchRecord> bench_snr(const BenchConfig& cfg) {
  return bench_links(
      cfg, "snr", cfg.array_snr_cap,
      [](std::span<const NetNode> nodes, const ChannelParams& ch) {
        return snr_links_array(nodes, ch);
      },
      [](const Container& c, const ChannelParams& ch, QueryStats* st) {
        return snr_links_spatial(c, ch, st);
      },
      false);
}

std::vector<BenchRecord> bench_sinr(const BenchConfig& cfg) {
  return bench_links(
      cfg, "sinr", cfg.array_sinr_cap,
      [](std::span<const NetNode> nodes, const ChannelParams& ch) {
        return sinr_links_array(nodes, ch);
      },
      [](const Container& c, const ChannelParams& ch, QueryStats* st) {
        return sinr_links_spatial(c, ch, st);
      },
      true);
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return (values[mid - 1] + values[mid]) / 2.0;
}

double median_wall_seconds(std::span<const BenchRecord> records,
                           std::string_view task, std::string_view method,
                           int n) {
  std::vector<double> v;
  for (const BenchRecord& r : records)
    if (r.task == task && r.method == method && r.n == n)
      v.push_back(r.wall_seconds);
  if (v.empty())
    throw std::invalid_argument("median_wall_seconds: no records for " +
                                std::string(task) + "/" + std::string(method) +
                                " at n=" + std::to_string(n));
  return median(std::move(v));
}

double fit_slope(std::span<const BenchRecord> records, std::string_view task,
                 std::string_view method) {
  std::map<int, std::vector<double>> by_n;
  for (const BenchRecord& r : records)
    if (r.task == task && r.method == method)
      by_n[r.n].push_back(r.wall_seconds);
  if (by_n.size() < 3)
    throw std::invalid_argument(
        "fit_slope: need records at >= 3 distinct n, have " +
        std::to_string(by_n.size()));

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto& [n, v] : by_n) {
    const double x = std::log(static_cast<double>(n));
    const double y = std::log(median(std::move(v)));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(by_n.size());
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

void write_bench_csv(std::ostream& os, std::span<const BenchRecord> records) {
  os << "task,method,n,rep,wall_seconds,visited_nodes\n";
  char buf[64];
  for (const BenchRecord& r : records) {
    std::snprintf(buf, sizeof(buf), "%.9g", r.wall_seconds);
    os << r.task << ',' << r.method << ',' << r.n << ',' << r.rep << ','
       << buf << ',';
    if (r.method != "array") os << r.visited_nodes;
    os << '\n';
  }
}

}  // namespace spatnet
