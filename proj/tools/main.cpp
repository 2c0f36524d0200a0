#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "spatnet/bench.hpp"

namespace {

using namespace spatnet;

constexpr double kDegToRad = kPi / 180.0;

Point parse_point(const std::string& flag, const std::string& s) {
  double x = 0.0;
  double y = 0.0;
  char tail = 0;
  if (std::sscanf(s.c_str(), "%lf,%lf%c", &x, &y, &tail) != 2)
    throw CLI::ValidationError(flag, "expected X,Y");
  return {x, y};
}

ScenarioConfig read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

Container read_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file " + path);
  return load_scenario(in);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write to " + path);
  return out;
}

void require_flags(bool present, const std::string& names) {
  if (!present) throw CLI::RequiredError(names);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"R-tree indexed directional network toolkit"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand(
      "gen", "Generate a deployment and write the scenario JSON");
  std::string gen_config;
  std::string gen_out;
  int gen_n = 0;
  double gen_density = 100.0;
  std::uint64_t gen_seed = 1;
  auto* gen_config_opt =
      gen->add_option("--config", gen_config, "scenario config JSON file");
  auto* gen_n_opt = gen->add_option(
      "--n", gen_n, "small-cell count; the area is sized for it at --density");
  gen->add_option("--density", gen_density, "small cells per km^2");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output scenario file")->required();
  gen_config_opt->excludes(gen_n_opt);
  gen_n_opt->excludes(gen_config_opt);
  gen->callback([&] {
    require_flags(gen_config_opt->count() || gen_n_opt->count(),
                  "--config or --n");
    const ScenarioConfig cfg = gen_config_opt->count()
                                   ? read_config_file(gen_config)
                                   : for_node_count(gen_n, gen_density, gen_seed);
    Container c = generate(cfg);
    auto out = open_out(gen_out);
    save_scenario(out, c);
    std::cout << "wrote " << c.size() << " nodes to " << gen_out << "\n";
  });

  // query
  auto* query =
      app.add_subcommand("query", "Run one spatial query against a scenario");
  std::string q_scn;
  std::string q_type;
  std::string q_center;
  std::string q_origin;
  std::string q_from;
  std::string q_to;
  double q_radius = 0.0;
  double q_boresight = 0.0;
  double q_beamwidth = 0.0;
  double q_range = 0.0;
  std::size_t q_k = 1;
  query->add_option("--scenario", q_scn, "scenario JSON file")->required();
  query->add_option("--type", q_type, "radius|knn|sector|los")
      ->required()
      ->check(CLI::IsMember({"radius", "knn", "sector", "los"}));
  auto* q_center_opt =
      query->add_option("--center", q_center, "query point X,Y");
  auto* q_radius_opt =
      query->add_option("--radius", q_radius, "ball radius in meters");
  auto* q_k_opt = query->add_option("--k", q_k, "neighbor count");
  auto* q_origin_opt =
      query->add_option("--origin", q_origin, "sector apex X,Y");
  auto* q_boresight_opt = query->add_option("--boresight", q_boresight,
                                            "sector boresight in degrees");
  auto* q_beamwidth_opt = query->add_option("--beamwidth", q_beamwidth,
                                            "sector beamwidth in degrees");
  auto* q_range_opt =
      query->add_option("--range", q_range, "sector range in meters");
  auto* q_from_opt = query->add_option("--from", q_from, "segment start X,Y");
  auto* q_to_opt = query->add_option("--to", q_to, "segment end X,Y");
  query->callback([&] {
    Container c = read_scenario_file(q_scn);
    QueryStats st;
    std::vector<const NetNode*> matched;
    bool is_los = false;
    bool clear = false;

    if (q_type == "radius") {
      require_flags(q_center_opt->count() && q_radius_opt->count(),
                    "--center and --radius");
      auto entries = c.tree().query_radius(parse_point("--center", q_center),
                                           q_radius, &st);
      std::sort(entries.begin(), entries.end(),
                [](const Entry& a, const Entry& b) { return a.handle < b.handle; });
      matched = c.resolve(entries);
    } else if (q_type == "knn") {
      require_flags(q_center_opt->count() && q_k_opt->count(),
                    "--center and --k");
      const auto entries =
          c.tree().query_knn(parse_point("--center", q_center), q_k, &st);
      matched = c.resolve(entries);  // keep nearest-first order
    } else if (q_type == "sector") {
      require_flags(q_origin_opt->count() && q_boresight_opt->count() &&
                        q_beamwidth_opt->count() && q_range_opt->count(),
                    "--origin, --boresight, --beamwidth and --range");
      const Point origin = parse_point("--origin", q_origin);
      const double bs = q_boresight * kDegToRad;
      const double bw = q_beamwidth * kDegToRad;
      const auto tri = sector_triangle(origin, bs, bw, q_range);
      auto entries = tri ? c.tree().query_triangle(*tri, &st)
                         : c.tree().query_radius(origin, q_range, &st);
      std::erase_if(entries, [&](const Entry& e) {
        return !in_sector(origin, bs, bw, q_range, e.key);
      });
      std::sort(entries.begin(), entries.end(),
                [](const Entry& a, const Entry& b) { return a.handle < b.handle; });
      matched = c.resolve(entries);
    } else {
      require_flags(q_from_opt->count() && q_to_opt->count(),
                    "--from and --to");
      is_los = true;
      matched = c.blockers_along(parse_point("--from", q_from),
                                 parse_point("--to", q_to), &st);
      clear = matched.empty();
    }

    for (const NetNode* n : matched)
      std::cout << node_to_json_line(*n) << "\n";
    nlohmann::json summary{{"nodes_visited", st.nodes_visited},
                           {"leaves_visited", st.leaves_visited},
                           {"candidates_returned", st.candidates_returned},
                           {"matches", matched.size()}};
    if (is_los) summary["clear"] = clear;
    std::cout << summary.dump() << "\n";
  });

  // snr / sinr
  std::string l_scn;
  std::string l_out;
  std::string l_config;
  std::string l_method = "both";
  auto add_links_cmd = [&](const std::string& name, const std::string& desc,
                           bool with_interference) {
    auto* cmd = app.add_subcommand(name, desc);
    cmd->add_option("--scenario", l_scn, "scenario JSON file")->required();
    cmd->add_option("--method", l_method, "array|spatial|both")
        ->check(CLI::IsMember({"array", "spatial", "both"}));
    cmd->add_option("--out", l_out, "output CSV file")->required();
    cmd->add_option("--config", l_config,
                    "config JSON supplying the channel parameters");
    cmd->callback([&, with_interference] {
      Container c = read_scenario_file(l_scn);
      const ChannelParams ch =
          l_config.empty() ? ChannelParams{} : read_config_file(l_config).channel;
      auto array_fn = [&] {
        const auto snap = c.snapshot();
        return with_interference ? sinr_links_array(snap, ch)
                                 : snr_links_array(snap, ch);
      };
      auto spatial_fn = [&] {
        return with_interference ? sinr_links_spatial(c, ch)
                                 : snr_links_spatial(c, ch);
      };

      std::vector<LinkMetric> links;
      if (l_method == "array") {
        links = array_fn();
      } else if (l_method == "spatial") {
        links = spatial_fn();
      } else {
        auto arr = array_fn();
        links = spatial_fn();
        if (auto diff = links_mismatch(arr, links, 1e-9))
          throw std::runtime_error("methods disagree: " + *diff);
        std::cout << "array and spatial methods agree on " << links.size()
                  << " links\n";
      }
      auto out = open_out(l_out);
      write_links_csv(out, links);
      std::cout << "wrote " << links.size() << " links to " << l_out << "\n";
    });
  };
  add_links_cmd("snr", "Compute the SNR of every link and write a CSV", false);
  add_links_cmd("sinr", "Compute the SINR of every link and write a CSV", true);

  // bench
  auto* bench = app.add_subcommand(
      "bench", "Time array vs spatial methods over a node-count sweep");
  std::string b_task = "all";
  std::string b_out;
  std::vector<int> b_n;
  BenchConfig b_cfg;
  bench->add_option("--task", b_task, "load|snr|sinr|all")
      ->check(CLI::IsMember({"load", "snr", "sinr", "all"}));
  bench->add_option("--n-list", b_n, "node counts to sweep")->delimiter(',');
  bench->add_option("--reps", b_cfg.repetitions, "timed repetitions per cell");
  bench->add_option("--seed", b_cfg.seed, "scenario seed");
  bench->add_option("--density", b_cfg.density_per_km2, "small cells per km^2");
  bench->add_option("--array-sinr-cap", b_cfg.array_sinr_cap,
                    "skip array sinr above this n (0 = no cap)");
  bench->add_option("--out", b_out, "output CSV file")->required();
  bench->callback([&] {
    if (!b_n.empty()) b_cfg.n_values = b_n;
    std::vector<BenchRecord> records;
    auto run = [&](const std::string& task) {
      std::vector<BenchRecord> rs = task == "load" ? bench_load(b_cfg)
                                    : task == "snr" ? bench_snr(b_cfg)
                                                    : bench_sinr(b_cfg);
      records.insert(records.end(), rs.begin(), rs.end());
    };
    if (b_task == "all") {
      run("load");
      run("snr");
      run("sinr");
    } else {
      run(b_task);
    }
    auto out = open_out(b_out);
    write_bench_csv(out, records);
    std::cout << "wrote " << records.size() << " records to " << b_out << "\n";
    for (const char* task : {"load", "snr", "sinr"})
      for (const char* method : {"array", "spatial"}) {
        try {
          const double s = fit_slope(records, task, method);
          std::printf("slope %s/%s = %.3f\n", task, method, s);
        } catch (const std::invalid_argument&) {
          // fewer than three n values for this cell; nothing to fit
        }
      }
  });

  // validate
  auto* validate = app.add_subcommand(
      "validate", "Check a scenario's index structure and consistency");
  std::string v_scn;
  validate->add_option("--scenario", v_scn, "scenario JSON file")->required();
  validate->callback([&] {
    Container c = read_scenario_file(v_scn);
    const auto issues = c.validate();
    if (!issues.empty()) {
      for (const std::string& s : issues) std::cerr << s << "\n";
      throw std::runtime_error(std::to_string(issues.size()) +
                               " validation issues");
    }
    std::cout << "scenario ok: " << c.size() << " nodes indexed, tree height "
              << c.tree().height() << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
