#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "spatnet/network.hpp"

namespace spatnet {

// Pattern whose gain integrates to 2*pi over the full circle:
// beamwidth*main + (2*pi - beamwidth)*side == 2*pi. Requires
// 0 < beamwidth < 2*pi and main_gain in [1, 2*pi/beamwidth) so the derived
// side lobe stays positive and below the main lobe.
AntennaPattern normalized_pattern(double beamwidth_rad, double main_gain);

bool is_normalized(const AntennaPattern& p, double tol = kEps);

// Sectored gain at an angular offset from boresight, offset in [0, pi]:
// main_gain within half the beamwidth (inclusive), side_gain beyond.
double gain(const AntennaPattern& p, double offset_rad);

// Gain of n's antenna toward a target point. A coincident target counts as
// on-boresight.
double gain_toward(const NetNode& n, Point target);

// Log-distance path loss with an optional non-line-of-sight penalty,
// clamped below by the reference loss (no gain closer than d0).
struct ChannelParams {
  double pathloss_exponent = 2.0;
  double reference_distance_m = 1.0;
  double reference_loss_db = 61.4;   // free space at 1 m, 28 GHz
  double noise_power_dbm = -87.0;    // thermal floor + noise figure
  double nlos_penalty_db = 20.0;
};

// 20*log10(4*pi*d0*f/c): free-space loss at the reference distance.
double free_space_reference_loss_db(double carrier_freq_hz, double d0_m);

// -174 dBm/Hz + 10*log10(bandwidth) + noise figure.
double thermal_noise_dbm(double bandwidth_hz, double noise_figure_db);

double pathloss_db(const ChannelParams& ch, double d_m, bool los);

// Tight triangle circumscribing the circular sector (apex at origin,
// radius range_m, full angle beamwidth about the boresight): legs at
// boresight +- beamwidth/2 with length range_m / cos(beamwidth/2), padded
// by a sliver so sector members on the boundary stay inside under
// floating-point evaluation. Empty for beamwidth at or near pi, where no
// finite apex triangle covers the sector and callers fall back to a radius
// query plus an angle filter.
std::optional<Triangle> sector_triangle(Point origin, double boresight_rad,
                                        double beamwidth_rad, double range_m);

// Exact sector membership: within range of origin and within half the
// beamwidth of the boresight. Coincident targets count as on-boresight at
// distance zero. The single authority for this predicate; every method
// (array or spatial) funnels through it so results match bitwise.
bool in_sector(Point origin, double boresight_rad, double beamwidth_rad,
               double range_m, Point target);

// Nodes inside tx's antenna sector. exact=false returns the raw candidates
// of the circumscribing-triangle query (a superset); exact=true refines
// them with in_sector on node centers. tx itself is never included. Throws
// std::invalid_argument when tx has no radio. Results are id-ascending.
std::vector<const NetNode*> directional_neighbors(const Container& c,
                                                  NodeId tx_id, bool exact,
                                                  QueryStats* stats = nullptr);

// One directed link budget. sinr_db is set only by the sinr computations;
// interferer_ids is id-ascending.
struct LinkMetric {
  NodeId tx_id = 0;
  NodeId rx_id = 0;
  double distance_m = 0.0;
  double snr_db = 0.0;
  std::optional<double> sinr_db;
  std::vector<NodeId> interferer_ids;
};

// Every directed small-cell pair (t, r) with dist <= t's max range gets
// snr = tx power + both antenna gains - path loss - noise, evaluated in the
// linear power domain. The array method scans a contiguous node snapshot,
// the spatial method runs one radius query per transmitter; both emit links
// sorted by (tx, rx) and produce identical values. stats, when given,
// accumulates the spatial traversal counters.
std::vector<LinkMetric> snr_links_array(std::span<const NetNode> nodes,
                                        const ChannelParams& ch);
std::vector<LinkMetric> snr_links_spatial(const Container& c,
                                          const ChannelParams& ch,
                                          QueryStats* stats = nullptr);

// SNR links extended with co-channel interference: every other small cell
// whose sector covers the receiver within its own range contributes
// (full-buffer model), sinr = S / (N + sum I) in linear power. The array
// method re-scans all nodes per link; the spatial method runs one sector
// query per transmitter and inverts the victim sets. Contributions are
// accumulated in ascending interferer id order in both methods.
std::vector<LinkMetric> sinr_links_array(std::span<const NetNode> nodes,
                                         const ChannelParams& ch);
std::vector<LinkMetric> sinr_links_spatial(const Container& c,
                                           const ChannelParams& ch,
                                           QueryStats* stats = nullptr);

// Same link sets, same interferers, metrics within rel_tol relative error.
// Returns a description of the first mismatch, or nullopt when equal.
std::optional<std::string> links_mismatch(std::span<const LinkMetric> a,
                                          std::span<const LinkMetric> b,
                                          double rel_tol = kEps);

// tx_id,rx_id,distance_m,snr_db,sinr_db,num_interferers (sinr blank when
// unset).
void write_links_csv(std::ostream& os, std::span<const LinkMetric> links);

}  // namespace spatnet
