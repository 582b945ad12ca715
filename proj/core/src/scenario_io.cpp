#include "lwr/scenario_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lwr/errors.hpp"

namespace lwr {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw schema_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double require_number(const json& obj, const std::string& field,
                      const std::string& ctx) {
  if (!obj.contains(field))
    throw schema_error(ctx + ": missing field '" + field + "'");
  if (!obj[field].is_number())
    throw schema_error(ctx + ": field '" + field + "' must be a number");
  return obj[field].get<double>();
}

// Shortest representation that round-trips exactly; locale-independent.
std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Active: return "active";
    case Regime::InactiveLowFlow: return "inactive_low_flow";
    case Regime::InactiveCongested: return "inactive_congested";
  }
  return "unknown";
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw schema_error(std::string("scenario: invalid JSON: ") + e.what());
  }

  if (!doc.contains("fd")) throw schema_error("scenario: missing 'fd'");
  const json& jfd = doc["fd"];
  const double v = require_number(jfd, "v_mps", "fd");
  const double k_c = require_number(jfd, "k_c_veh_per_m", "fd");
  const double k_j = require_number(jfd, "k_j_veh_per_m", "fd");

  Scenario sc = [&] {
    try {
      return Scenario{jfd.contains("w_mps")
                          ? FundamentalDiagram(
                                v, require_number(jfd, "w_mps", "fd"), k_c, k_j)
                          : FundamentalDiagram::with_derived_w(v, k_c, k_j)};
    } catch (const std::invalid_argument& e) {
      throw schema_error(std::string("fd: ") + e.what());
    }
  }();

  if (!doc.contains("lanes") || !doc["lanes"].is_number_integer())
    throw schema_error("scenario: missing integer 'lanes'");
  sc.lanes = doc["lanes"].get<int>();

  if (!doc.contains("domain")) throw schema_error("scenario: missing 'domain'");
  sc.domain.x0 = require_number(doc["domain"], "x0_m", "domain");
  sc.domain.xn = require_number(doc["domain"], "xn_m", "domain");
  sc.domain.t_end = require_number(doc["domain"], "t_end_s", "domain");

  if (!doc.contains("initial_density") || !doc["initial_density"].is_array())
    throw schema_error("scenario: missing array 'initial_density'");
  for (std::size_t i = 0; i < doc["initial_density"].size(); ++i) {
    const json& p = doc["initial_density"][i];
    const std::string ctx = "initial_density[" + std::to_string(i) + "]";
    sc.initial.push_back(DensityPiece{require_number(p, "x_lo_m", ctx),
                                      require_number(p, "x_hi_m", ctx),
                                      require_number(p, "k_veh_per_m", ctx)});
  }

  auto read_flows = [&](const char* key, const char* rate_field) {
    std::vector<FlowPiece> pieces;
    if (!doc.contains(key)) return pieces;
    if (!doc[key].is_array())
      throw schema_error(std::string("scenario: '") + key + "' must be an array");
    for (std::size_t i = 0; i < doc[key].size(); ++i) {
      const json& p = doc[key][i];
      const std::string ctx = std::string(key) + "[" + std::to_string(i) + "]";
      pieces.push_back(FlowPiece{require_number(p, "t_lo_s", ctx),
                                 require_number(p, "t_hi_s", ctx),
                                 require_number(p, rate_field, ctx)});
    }
    return pieces;
  };
  sc.upstream = read_flows("upstream_flow", "q_veh_per_s");
  sc.downstream = read_flows("downstream_flow", "p_veh_per_s");

  if (doc.contains("moving_bottlenecks")) {
    for (std::size_t i = 0; i < doc["moving_bottlenecks"].size(); ++i) {
      const json& m = doc["moving_bottlenecks"][i];
      const std::string ctx = "moving_bottlenecks[" + std::to_string(i) + "]";
      sc.movers.push_back(MovingBottleneckSpec{
          require_number(m, "x_entry_m", ctx), require_number(m, "t_entry_s", ctx),
          require_number(m, "x_exit_m", ctx), require_number(m, "v_max_mps", ctx)});
    }
  }
  if (doc.contains("signals")) {
    for (std::size_t i = 0; i < doc["signals"].size(); ++i) {
      const json& s = doc["signals"][i];
      const std::string ctx = "signals[" + std::to_string(i) + "]";
      sc.signals.push_back(TrafficSignalSpec{
          require_number(s, "x_m", ctx), require_number(s, "cycle_s", ctx),
          require_number(s, "green_s", ctx),
          s.contains("offset_s") ? require_number(s, "offset_s", ctx) : 0.0});
    }
  }
  if (doc.contains("notes") && doc["notes"].is_string())
    sc.notes = doc["notes"].get<std::string>();

  validate_scenario(sc);
  return sc;
}

Scenario load_scenario(const std::string& path) {
  try {
    return parse_scenario(read_file(path));
  } catch (const std::domain_error& e) {
    // Builder-level range problems reported against the file.
    throw schema_error(path + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw schema_error(path + ": " + e.what());
  }
}

std::string scenario_to_json(const Scenario& sc) {
  json doc;
  doc["fd"] = {{"v_mps", sc.fd.v()},
               {"w_mps", sc.fd.w()},
               {"k_c_veh_per_m", sc.fd.k_c()},
               {"k_j_veh_per_m", sc.fd.k_j()}};
  doc["lanes"] = sc.lanes;
  doc["domain"] = {{"x0_m", sc.domain.x0},
                   {"xn_m", sc.domain.xn},
                   {"t_end_s", sc.domain.t_end}};
  doc["initial_density"] = json::array();
  for (const DensityPiece& p : sc.initial)
    doc["initial_density"].push_back(
        {{"x_lo_m", p.x_lo}, {"x_hi_m", p.x_hi}, {"k_veh_per_m", p.k}});
  doc["upstream_flow"] = json::array();
  for (const FlowPiece& p : sc.upstream)
    doc["upstream_flow"].push_back(
        {{"t_lo_s", p.t_lo}, {"t_hi_s", p.t_hi}, {"q_veh_per_s", p.rate}});
  doc["downstream_flow"] = json::array();
  for (const FlowPiece& p : sc.downstream)
    doc["downstream_flow"].push_back(
        {{"t_lo_s", p.t_lo}, {"t_hi_s", p.t_hi}, {"p_veh_per_s", p.rate}});
  doc["moving_bottlenecks"] = json::array();
  for (const MovingBottleneckSpec& m : sc.movers)
    doc["moving_bottlenecks"].push_back({{"x_entry_m", m.x_entry},
                                         {"t_entry_s", m.t_entry},
                                         {"x_exit_m", m.x_exit},
                                         {"v_max_mps", m.v_max}});
  doc["signals"] = json::array();
  for (const TrafficSignalSpec& s : sc.signals)
    doc["signals"].push_back({{"x_m", s.x_pos},
                              {"cycle_s", s.cycle},
                              {"green_s", s.green},
                              {"offset_s", s.offset}});
  if (!sc.notes.empty()) doc["notes"] = sc.notes;
  return doc.dump(2) + "\n";
}

void save_scenario(const Scenario& sc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot write file: " + path);
  out << scenario_to_json(sc);
}

GAConfig load_ga_config(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw schema_error(std::string("ga config: invalid JSON: ") + e.what());
  }
  GAConfig cfg;
  if (doc.contains("population")) cfg.population = doc["population"].get<int>();
  if (doc.contains("generations")) cfg.generations = doc["generations"].get<int>();
  if (doc.contains("tournament_size"))
    cfg.tournament = doc["tournament_size"].get<int>();
  if (doc.contains("mutation_prob"))
    cfg.mutation_prob = doc["mutation_prob"].get<double>();
  if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
  if (doc.contains("elitism")) cfg.elitism = doc["elitism"].get<int>();
  if (doc.contains("entry_offset_bound_s"))
    cfg.bounds.entry_offset_bound = doc["entry_offset_bound_s"].get<double>();
  if (doc.contains("timing_scale_bound"))
    cfg.bounds.timing_scale_bound = doc["timing_scale_bound"].get<double>();
  if (cfg.population < 2) throw schema_error("ga config: population must be >= 2");
  if (cfg.tournament < 1 || cfg.tournament > cfg.population)
    throw schema_error("ga config: tournament_size outside [1, population]");
  if (cfg.mutation_prob < 0.0 || cfg.mutation_prob > 1.0)
    throw schema_error("ga config: mutation_prob outside [0, 1]");
  return cfg;
}

std::string report_to_json(const RunReport& report) {
  json doc;
  doc["phases"] = {{"internal_conditions_s", report.internal_conditions_s},
                   {"grid_s", report.grid_s},
                   {"oracle_s", report.oracle_s},
                   {"optimize_s", report.optimize_s}};
  doc["summary"] = {{"total_outflow_veh", report.total_outflow}};
  doc["summary"]["per_bottleneck_delay_s"] = report.per_bottleneck_delay;
  doc["outputs"] = json::object();
  for (const auto& [label, path] : report.outputs) doc["outputs"][label] = path;
  return doc.dump(2) + "\n";
}

void write_trajectories_csv(const std::string& path, const MultiResult& result) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot write file: " + path);
  out << "bottleneck_id,t,x,regime\n";
  for (std::size_t id = 0; id < result.movers.size(); ++id) {
    const auto& segs = result.movers[id].segments;
    for (const TrajectorySegment& seg : segs)
      out << id << ',' << fmt(seg.t0) << ',' << fmt(seg.x0) << ','
          << regime_name(seg.regime) << '\n';
    if (!segs.empty())
      out << id << ',' << fmt(segs.back().t1) << ',' << fmt(segs.back().x1)
          << ',' << regime_name(segs.back().regime) << '\n';
  }
}

void write_internal_conditions_csv(const std::string& path,
                                   const MultiResult& result) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot write file: " + path);
  out << "t_b,x_b,t_e,x_e,N_b,N_e\n";
  auto row = [&](const InternalBlock& b) {
    out << fmt(b.t_b) << ',' << fmt(b.x_b) << ',' << fmt(b.t_e) << ','
        << fmt(b.x_e) << ',' << fmt(b.N_b) << ',' << fmt(b.N_e) << '\n';
  };
  for (const MoverResult& mr : result.movers)
    for (const InternalBlock& b : mr.blocks) row(b);
  for (const SignalResult& sr : result.signals)
    for (const InternalBlock& b : sr.blocks) row(b);
}

void write_density_csv(const std::string& path, const DensityField& field) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot write file: " + path);
  out << "t";
  for (std::size_t ix = 0; ix < field.nx; ++ix)
    out << ',' << fmt(field.x0 + static_cast<double>(ix) * field.dx);
  out << '\n';
  for (std::size_t it = 0; it < field.nt; ++it) {
    out << fmt(field.t0 + static_cast<double>(it) * field.dt);
    for (std::size_t ix = 0; ix < field.nx; ++ix)
      out << ',' << fmt(field.at(it, ix));
    out << '\n';
  }
}

void write_ga_history_csv(const std::string& path, const FitnessReport& report) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot write file: " + path);
  out << "generation,best,mean\n";
  for (std::size_t g = 0; g < report.history.size(); ++g)
    out << g << ',' << fmt(report.history[g].best) << ','
        << fmt(report.history[g].mean) << '\n';
}

}  // namespace lwr
