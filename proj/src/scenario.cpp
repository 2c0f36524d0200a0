#include "spatnet/scenario.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace spatnet {

namespace {

using nlohmann::json;

double deg2rad(double d) { return d * (kPi / 180.0); }
double rad2deg(double r) { return r * (180.0 / kPi); }

[[noreturn]] void bad(const std::string& what) {
  throw std::invalid_argument("config: " + what);
}

double as_num(const json& v, const char* key) {
  if (!v.is_number()) bad(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

int as_count(const json& v, const char* key) {
  if (!v.is_number_integer())
    bad(std::string("'") + key + "' must be an integer");
  return v.get<int>();
}

void parse_radio(const json& obj, TrxParams& radio) {
  bool side_given = false;
  for (const auto& [key, v] : obj.items()) {
    if (key == "carrier_freq_hz") radio.carrier_freq_hz = as_num(v, "carrier_freq_hz");
    else if (key == "tx_power_dbm") radio.tx_power_dbm = as_num(v, "tx_power_dbm");
    else if (key == "max_range_m") radio.max_range_m = as_num(v, "max_range_m");
    else if (key == "boresight_deg") radio.boresight_rad = deg2rad(as_num(v, "boresight_deg"));
    else if (key == "beamwidth_deg") radio.antenna.beamwidth_rad = deg2rad(as_num(v, "beamwidth_deg"));
    else if (key == "main_gain") radio.antenna.main_gain = as_num(v, "main_gain");
    else if (key == "side_gain") { radio.antenna.side_gain = as_num(v, "side_gain"); side_given = true; }
    else bad("unknown radio key '" + key + "'");
  }
  if (!side_given)
    radio.antenna = normalized_pattern(radio.antenna.beamwidth_rad,
                                       radio.antenna.main_gain);
}

void parse_channel(const json& obj, ChannelParams& ch) {
  for (const auto& [key, v] : obj.items()) {
    if (key == "pathloss_exponent") ch.pathloss_exponent = as_num(v, "pathloss_exponent");
    else if (key == "reference_distance_m") ch.reference_distance_m = as_num(v, "reference_distance_m");
    else if (key == "reference_loss_db") ch.reference_loss_db = as_num(v, "reference_loss_db");
    else if (key == "noise_power_dbm") ch.noise_power_dbm = as_num(v, "noise_power_dbm");
    else if (key == "nlos_penalty_db") ch.nlos_penalty_db = as_num(v, "nlos_penalty_db");
    else bad("unknown channel key '" + key + "'");
  }
}

}  // namespace

void validate_config(const ScenarioConfig& cfg) {
  if (!(cfg.area_width_m > 0) || !(cfg.area_height_m > 0))
    bad("area dimensions must be positive");
  if (!(cfg.sbs_density_per_km2 >= 0)) bad("density must be >= 0");
  if (cfg.mbs_count < 0 || cfg.ue_count < 0 || cfg.blockage_count < 0)
    bad("node counts must be >= 0");
  if (cfg.blockage_width_m < 0 || cfg.blockage_length_m < 0)
    bad("blockage dims must be >= 0");
  if (cfg.rtree_max_entries < 3) bad("rtree_max_entries must be >= 3");
}

double area_km2(const ScenarioConfig& cfg) {
  return cfg.area_width_m * cfg.area_height_m / 1e6;
}

int n_sbs(const ScenarioConfig& cfg) {
  return static_cast<int>(std::llround(cfg.sbs_density_per_km2 * area_km2(cfg)));
}

ScenarioConfig for_node_count(int n, double density_per_km2,
                              std::uint64_t seed) {
  if (n < 0) bad("node count must be >= 0");
  if (!(density_per_km2 > 0)) bad("density must be > 0");
  ScenarioConfig cfg;
  const double side_m = std::sqrt(n / density_per_km2) * 1000.0;
  cfg.area_width_m = side_m;
  cfg.area_height_m = side_m;
  cfg.sbs_density_per_km2 = density_per_km2;
  cfg.seed = seed;
  return cfg;
}

ScenarioConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    bad(std::string("parse error: ") + e.what());
  }
  if (!j.is_object()) bad("top level must be an object");

  ScenarioConfig cfg;
  for (const auto& [key, v] : j.items()) {
    if (key == "area_width_m") cfg.area_width_m = as_num(v, "area_width_m");
    else if (key == "area_height_m") cfg.area_height_m = as_num(v, "area_height_m");
    else if (key == "sbs_density_per_km2") cfg.sbs_density_per_km2 = as_num(v, "sbs_density_per_km2");
    else if (key == "mbs_count") cfg.mbs_count = as_count(v, "mbs_count");
    else if (key == "ue_count") cfg.ue_count = as_count(v, "ue_count");
    else if (key == "blockage_count") cfg.blockage_count = as_count(v, "blockage_count");
    else if (key == "blockage_width_m") cfg.blockage_width_m = as_num(v, "blockage_width_m");
    else if (key == "blockage_length_m") cfg.blockage_length_m = as_num(v, "blockage_length_m");
    else if (key == "seed") {
      if (!v.is_number_integer() && !v.is_number_unsigned())
        bad("'seed' must be an integer");
      cfg.seed = v.get<std::uint64_t>();
    } else if (key == "rtree_max_entries") {
      cfg.rtree_max_entries = as_count(v, "rtree_max_entries");
    } else if (key == "radio") {
      if (!v.is_object()) bad("'radio' must be an object");
      parse_radio(v, cfg.radio);
    } else if (key == "channel") {
      if (!v.is_object()) bad("'channel' must be an object");
      parse_channel(v, cfg.channel);
    } else {
      bad("unknown key '" + key + "'");
    }
  }
  validate_config(cfg);
  return cfg;
}

std::string config_to_json(const ScenarioConfig& cfg) {
  json j;
  j["area_width_m"] = cfg.area_width_m;
  j["area_height_m"] = cfg.area_height_m;
  j["sbs_density_per_km2"] = cfg.sbs_density_per_km2;
  j["mbs_count"] = cfg.mbs_count;
  j["ue_count"] = cfg.ue_count;
  j["blockage_count"] = cfg.blockage_count;
  j["blockage_width_m"] = cfg.blockage_width_m;
  j["blockage_length_m"] = cfg.blockage_length_m;
  j["seed"] = cfg.seed;
  j["rtree_max_entries"] = cfg.rtree_max_entries;
  j["radio"] = {{"carrier_freq_hz", cfg.radio.carrier_freq_hz},
                {"tx_power_dbm", cfg.radio.tx_power_dbm},
                {"max_range_m", cfg.radio.max_range_m},
                {"boresight_deg", rad2deg(cfg.radio.boresight_rad)},
                {"beamwidth_deg", rad2deg(cfg.radio.antenna.beamwidth_rad)},
                {"main_gain", cfg.radio.antenna.main_gain},
                {"side_gain", cfg.radio.antenna.side_gain}};
  j["channel"] = {{"pathloss_exponent", cfg.channel.pathloss_exponent},
                  {"reference_distance_m", cfg.channel.reference_distance_m},
                  {"reference_loss_db", cfg.channel.reference_loss_db},
                  {"noise_power_dbm", cfg.channel.noise_power_dbm},
                  {"nlos_penalty_db", cfg.channel.nlos_penalty_db}};
  return j.dump(2) + "\n";
}

std::vector<NetNode> generate_nodes(const ScenarioConfig& cfg) {
  validate_config(cfg);
  std::mt19937_64 rng(cfg.seed);
  auto uni = [&rng](double lo, double hi) {
    return lo + (hi - lo) * ((rng() >> 11) * 0x1.0p-53);
  };

  std::vector<NetNode> out;
  const int sbs = n_sbs(cfg);
  out.reserve(static_cast<std::size_t>(cfg.mbs_count) + sbs + cfg.ue_count +
              cfg.blockage_count);
  NodeId id = 1;
  auto drop = [&](NodeKind kind, int count) {
    for (int i = 0; i < count; ++i, ++id) {
      NetNode n;
      n.id = id;
      n.kind = kind;
      n.loc = {uni(0, cfg.area_width_m), uni(0, cfg.area_height_m)};
      if (kind == NodeKind::Blockage) {
        n.width_m = cfg.blockage_width_m;
        n.length_m = cfg.blockage_length_m;
      } else {
        n.trx = cfg.radio;
      }
      out.push_back(n);
    }
  };
  drop(NodeKind::MacroBS, cfg.mbs_count);
  drop(NodeKind::SmallBS, sbs);
  drop(NodeKind::UE, cfg.ue_count);
  drop(NodeKind::Blockage, cfg.blockage_count);
  return out;
}

Container generate(const ScenarioConfig& cfg) {
  Container c(cfg.rtree_max_entries);
  for (const NetNode& n : generate_nodes(cfg)) c.add(n);
  c.compact();

  for (const auto& [id, n] : c.nodes()) {
    if (!n.trx) continue;
    const Entry* nearest = nullptr;
    for (const Entry& e : c.tree().query_knn(n.loc, 2))
      if (e.handle != id && !nearest) nearest = &e;
    if (!nearest || nearest->key == n.loc) continue;
    c.set_boresight(id, azimuth(n.loc, nearest->key));
  }
  return c;
}

namespace {

json node_record(const NetNode& n) {
  json rec{{"id", n.id},
           {"kind", to_string(n.kind)},
           {"x", n.loc.x},
           {"y", n.loc.y},
           {"width_m", n.width_m},
           {"length_m", n.length_m},
           {"height_m", n.height_m}};
  if (n.trx) {
    const TrxParams& t = *n.trx;
    rec["trx"] = {{"carrier_freq_hz", t.carrier_freq_hz},
                  {"tx_power_dbm", t.tx_power_dbm},
                  {"max_range_m", t.max_range_m},
                  {"boresight_rad", t.boresight_rad},
                  {"beamwidth_rad", t.antenna.beamwidth_rad},
                  {"main_gain", t.antenna.main_gain},
                  {"side_gain", t.antenna.side_gain}};
  }
  return rec;
}

}  // namespace

std::string node_to_json_line(const NetNode& n) { return node_record(n).dump(); }

void save_scenario(std::ostream& os, const Container& c) {
  json nodes = json::array();
  for (const auto& [id, n] : c.nodes()) nodes.push_back(node_record(n));
  json j{{"rtree_max_entries", c.tree().max_entries()},
         {"nodes", std::move(nodes)}};
  os << j.dump(1) << "\n";
}

Container load_scenario(std::istream& is) {
  json j;
  try {
    j = json::parse(is);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("scenario: parse error: ") +
                                e.what());
  }
  if (!j.is_object() || !j.contains("nodes") || !j["nodes"].is_array())
    throw std::invalid_argument("scenario: expected object with a node array");

  Container c(j.value("rtree_max_entries", 16));
  try {
    for (const json& rec : j["nodes"]) {
      NetNode n;
      n.id = rec.at("id").get<NodeId>();
      n.kind = kind_from_string(rec.at("kind").get<std::string>());
      n.loc = {rec.at("x").get<double>(), rec.at("y").get<double>()};
      n.width_m = rec.value("width_m", 0.0);
      n.length_m = rec.value("length_m", 0.0);
      n.height_m = rec.value("height_m", 0.0);
      if (rec.contains("trx")) {
        const json& t = rec["trx"];
        TrxParams p;
        p.carrier_freq_hz = t.value("carrier_freq_hz", p.carrier_freq_hz);
        p.tx_power_dbm = t.value("tx_power_dbm", p.tx_power_dbm);
        p.max_range_m = t.value("max_range_m", p.max_range_m);
        p.boresight_rad = t.value("boresight_rad", p.boresight_rad);
        p.antenna.beamwidth_rad = t.value("beamwidth_rad", p.antenna.beamwidth_rad);
        p.antenna.main_gain = t.value("main_gain", p.antenna.main_gain);
        p.antenna.side_gain = t.value("side_gain", p.antenna.side_gain);
        n.trx = p;
      }
      c.add(n);
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("scenario: bad node record: ") +
                                e.what());
  }
  c.compact();
  return c;
}

}  // namespace spatnet
