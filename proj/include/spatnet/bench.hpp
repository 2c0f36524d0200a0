#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spatnet/scenario.hpp"

namespace spatnet {

// One timed repetition of one benchmark task. visited_nodes aggregates the
// spatial method's traversal counters over the run; array rows carry 0.
struct BenchRecord {
  std::string task;     // load, snr, sinr
  std::string method;   // array, spatial
  int n = 0;
  int rep = 0;
  double wall_seconds = 0.0;
  std::uint64_t visited_nodes = 0;
};

// Shared sweep settings. Every scenario is a pure-small-cell deployment
// sized so the node count is exactly n at the fixed density; the timing
// protocol is one discarded warm-up (which doubles as the equivalence
// check) followed by `repetitions` recorded runs, single-threaded, on a
// monotonic clock. array_sinr_cap skips the array method above that n; the
// cubic blow-up makes large array runs pointless. 0 means no cap.
struct BenchConfig {
  std::vector<int> n_values{100, 1000, 10'000, 100'000};
  int repetitions = 5;
  std::uint64_t seed = 1;
  double density_per_km2 = 100.0;
  int array_sinr_cap = 10'000;
  int array_snr_cap = 0;
};

// Structure build time: appending every node to a plain vector vs inserting
// every node into the R-tree, fed from one identical node stream.
std::vector<BenchRecord> bench_load(const BenchConfig& cfg);

// All-links SNR under both methods. The warm-up aborts with
// std::runtime_error if the methods' links differ beyond 1e-9 relative.
std::vector<BenchRecord> bench_snr(const BenchConfig& cfg);

// All-links SINR under both methods, with the same equivalence gate plus a
// physical-sanity gate: any link with sinr above its snr aborts the run.
std::vector<BenchRecord> bench_sinr(const BenchConfig& cfg);

// Middle element (or the mean of the middle pair) of the values; throws
// std::invalid_argument when empty.
double median(std::vector<double> values);

// Median wall seconds over the repetitions of one (task, method, n) cell;
// throws std::invalid_argument when no record matches.
double median_wall_seconds(std::span<const BenchRecord> records,
                           std::string_view task, std::string_view method,
                           int n);

// Least-squares slope of log(median wall seconds) against log(n) for one
// task+method, the scaling exponent of the measured times. Requires
// records at >= 3 distinct n.
double fit_slope(std::span<const BenchRecord> records, std::string_view task,
                 std::string_view method);

// task,method,n,rep,wall_seconds,visited_nodes (blank for array rows).
void write_bench_csv(std::ostream& os, std::span<const BenchRecord> records);

}  // namespace spatnet
