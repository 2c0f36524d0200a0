#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "spatnet/radio.hpp"

namespace spatnet {

// Deployment recipe: small cells dropped as a fixed-count binomial point
// process (n = round(density * area)) over [0, width] x [0, height], plus
// fixed numbers of macro cells, terminals and blockage slabs. Every
// transceiver starts from the same radio defaults; boresights are assigned
// afterwards by the aim policy in generate().
struct ScenarioConfig {
  double area_width_m = 1000.0;
  double area_height_m = 1000.0;
  double sbs_density_per_km2 = 100.0;
  int mbs_count = 0;
  int ue_count = 0;
  int blockage_count = 0;
  double blockage_width_m = 10.0;
  double blockage_length_m = 10.0;
  std::uint64_t seed = 1;
  TrxParams radio;
  ChannelParams channel;
  int rtree_max_entries = 16;
};

// Throws std::invalid_argument on non-positive dimensions, negative density
// or counts, negative blockage dims, or rtree_max_entries < 3.
void validate_config(const ScenarioConfig& cfg);

double area_km2(const ScenarioConfig& cfg);

// round(density * area); the small-cell count the config commits to.
int n_sbs(const ScenarioConfig& cfg);

// Square area sized so that n_sbs(cfg) == n at the given density: the node
// count is the independent variable when sweeping, the density stays fixed.
ScenarioConfig for_node_count(int n, double density_per_km2 = 100.0,
                              std::uint64_t seed = 1);

// JSON round trip for configs. Keys mirror the field names; angles cross
// this boundary in degrees (boresight_deg, beamwidth_deg). Every key is
// optional and defaults apply; unknown keys and wrong types throw
// std::invalid_argument naming the key. An omitted antenna side gain is
// derived from beamwidth and main gain via normalized_pattern.
ScenarioConfig config_from_json(const std::string& text);
std::string config_to_json(const ScenarioConfig& cfg);

// The raw node list, before any container or boresight work: ids are
// contiguous from 1 in kind order MacroBS, SmallBS, UE, Blockage; every
// location is an independent uniform draw from one seeded generator, so a
// config (seed included) maps to exactly one node list.
std::vector<NetNode> generate_nodes(const ScenarioConfig& cfg);

// generate_nodes loaded into a container, then every transceiver aimed at
// its nearest other node (nearest-neighbor query; coincident neighbor or a
// one-node scenario leaves the default boresight).
Container generate(const ScenarioConfig& cfg);

// Scenario dump: {"rtree_max_entries": M, "nodes": [...]} with radians and
// full-precision doubles, so load(save(c)) reproduces every node bit for
// bit. load_scenario throws std::invalid_argument on malformed input or
// duplicate ids (naming the id).
void save_scenario(std::ostream& os, const Container& c);
Container load_scenario(std::istream& is);

// One node as a compact single-line JSON record, same schema as the dump's
// node entries.
std::string node_to_json_line(const NetNode& n);

}  // namespace spatnet
