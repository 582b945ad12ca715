#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "lwr/errors.hpp"
#include "lwr/scenario_io.hpp"
#include "support.hpp"

using namespace lwr;

TEST_CASE("load_scenario: reference fixture parses with derived w") {
  const Scenario sc =
      load_scenario(lwrtest::fixture("table12_single_bottleneck.json"));
  CHECK(sc.fd.v() == 30.0);
  CHECK(sc.fd.w() == doctest::Approx(7.5).epsilon(1e-12));
  CHECK(sc.fd.q_max() == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(sc.lanes == 2);
  CHECK(sc.domain.xn == 3000.0);
  REQUIRE(sc.initial.size() == 3);
  REQUIRE(sc.upstream.size() == 3);
  REQUIRE(sc.downstream.size() == 3);
  REQUIRE(sc.movers.size() == 1);
  CHECK(sc.movers[0].v_max == 5.0);
}

TEST_CASE("parse_scenario: diagnostics name the offending field") {
  const char* overlapping = R"({
    "fd": { "v_mps": 30.0, "k_c_veh_per_m": 0.04, "k_j_veh_per_m": 0.2 },
    "lanes": 2,
    "domain": { "x0_m": 0.0, "xn_m": 3000.0, "t_end_s": 300.0 },
    "initial_density": [
      { "x_lo_m": 0.0, "x_hi_m": 1200.0, "k_veh_per_m": 0.04 },
      { "x_lo_m": 1000.0, "x_hi_m": 3000.0, "k_veh_per_m": 0.02 }
    ],
    "upstream_flow": [ { "t_lo_s": 0.0, "t_hi_s": 300.0, "q_veh_per_s": 1.0 } ],
    "downstream_flow": [ { "t_lo_s": 0.0, "t_hi_s": 300.0, "p_veh_per_s": 0.9 } ]
  })";
  // Structure parses; the overlap surfaces when blocks are built.
  const Scenario sc = parse_scenario(overlapping);
  try {
    build_solution(sc);
    FAIL("expected schema_error");
  } catch (const schema_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("overlap") != std::string::npos);
    CHECK(msg.find("0") != std::string::npos);
    CHECK(msg.find("1") != std::string::npos);
  }

  CHECK_THROWS_AS(parse_scenario("{ not json"), schema_error);
  CHECK_THROWS_AS(parse_scenario(R"({"lanes": 2})"), schema_error);
  // Inconsistent explicit w.
  CHECK_THROWS_AS(parse_scenario(R"({
    "fd": { "v_mps": 30.0, "w_mps": 9.0, "k_c_veh_per_m": 0.04, "k_j_veh_per_m": 0.2 },
    "lanes": 2,
    "domain": { "x0_m": 0.0, "xn_m": 3000.0, "t_end_s": 300.0 },
    "initial_density": [ { "x_lo_m": 0.0, "x_hi_m": 3000.0, "k_veh_per_m": 0.02 } ]
  })"),
                  schema_error);
}

TEST_CASE("scenario JSON round-trip") {
  const Scenario sc = load_scenario(lwrtest::fixture("ga_scenario.json"));
  const Scenario back = parse_scenario(scenario_to_json(sc));
  CHECK(back.fd.v() == sc.fd.v());
  CHECK(back.fd.w() == sc.fd.w());
  CHECK(back.lanes == sc.lanes);
  REQUIRE(back.movers.size() == sc.movers.size());
  for (std::size_t i = 0; i < sc.movers.size(); ++i) {
    CHECK(back.movers[i].x_entry == sc.movers[i].x_entry);
    CHECK(back.movers[i].t_entry == sc.movers[i].t_entry);
  }
  REQUIRE(back.signals.size() == sc.signals.size());
  CHECK(back.signals[0].cycle == sc.signals[0].cycle);
}

TEST_CASE("ga config parsing and validation") {
  const GAConfig cfg = load_ga_config(lwrtest::fixture("ga_config.json"));
  CHECK(cfg.population == 30);
  CHECK(cfg.generations == 20);
  CHECK(cfg.tournament == 10);
  CHECK(cfg.mutation_prob == 0.1);
  CHECK(cfg.seed == 42);
  CHECK(cfg.bounds.entry_offset_bound == 10.0);
  CHECK(cfg.bounds.timing_scale_bound == 0.1);
}

TEST_CASE("CSV outputs: headers, dot decimals, newline-terminated rows") {
  MultiResult result;
  result.movers.resize(1);
  result.movers[0].segments = {
      {0.0, 1.0, 100.0, 105.5, Regime::Active, 0.5},
      {1.0, 2.0, 105.5, 111.0, Regime::InactiveLowFlow, 0.25}};
  result.movers[0].blocks = {{0.0, 1.0, 100.0, 105.5, 2.5, 3.0}};
  result.signals.resize(1);
  result.signals[0].blocks = {{120.0, 200.0, 1500.0, 1500.0, 7.0, 7.0}};

  const std::string traj = "/tmp/lwrsim_test_traj.csv";
  const std::string cond = "/tmp/lwrsim_test_cond.csv";
  write_trajectories_csv(traj, result);
  write_internal_conditions_csv(cond, result);

  std::ifstream tf(traj);
  std::string line;
  std::getline(tf, line);
  CHECK(line == "bottleneck_id,t,x,regime");
  std::getline(tf, line);
  CHECK(line == "0,0,100,active");
  std::getline(tf, line);
  CHECK(line == "0,1,105.5,inactive_low_flow");

  std::ifstream cf(cond);
  std::getline(cf, line);
  CHECK(line == "t_b,x_b,t_e,x_e,N_b,N_e");
  std::getline(cf, line);
  CHECK(line == "0,100,1,105.5,2.5,3");
  std::getline(cf, line);
  CHECK(line == "120,1500,200,1500,7,7");

  std::remove(traj.c_str());
  std::remove(cond.c_str());
}

TEST_CASE("density CSV layout: x header row, t first column") {
  DensityField field;
  field.x0 = 0.0;
  field.dx = 10.0;
  field.nx = 3;
  field.t0 = 0.0;
  field.dt = 1.0;
  field.nt = 2;
  field.k = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  const std::string path = "/tmp/lwrsim_test_density.csv";
  write_density_csv(path, field);
  std::ifstream f(path);
  std::string line;
  std::getline(f, line);
  CHECK(line == "t,0,10,20");
  std::getline(f, line);
  CHECK(line == "0,0.1,0.2,0.3");
  std::getline(f, line);
  CHECK(line == "1,0.4,0.5,0.6");
  std::remove(path.c_str());
}
