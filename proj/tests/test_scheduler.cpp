#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lwr/scenario.hpp"
#include "lwr/scenario_io.hpp"
#include "lwr/scheduler.hpp"
#include "support.hpp"

using namespace lwr;

namespace {

bool same_segments(const std::vector<TrajectorySegment>& a,
                   const std::vector<TrajectorySegment>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].t0 != b[i].t0 || a[i].t1 != b[i].t1 || a[i].x0 != b[i].x0 ||
        a[i].x1 != b[i].x1 || a[i].regime != b[i].regime ||
        a[i].passing_count != b[i].passing_count)
      return false;
  }
  return true;
}

bool same_blocks(const std::vector<InternalBlock>& a,
                 const std::vector<InternalBlock>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].t_b != b[i].t_b || a[i].t_e != b[i].t_e || a[i].x_b != b[i].x_b ||
        a[i].x_e != b[i].x_e || a[i].N_b != b[i].N_b || a[i].N_e != b[i].N_e)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("signal_red_intervals: phase arithmetic") {
  const auto reds1 =
      signal_red_intervals({1000.0, 200.0, 120.0, 0.0}, 300.0);
  REQUIRE(reds1.size() == 1);
  CHECK(reds1[0].first == doctest::Approx(120.0));
  CHECK(reds1[0].second == doctest::Approx(200.0));

  const auto reds2 =
      signal_red_intervals({1000.0, 100.0, 60.0, 50.0}, 250.0);
  REQUIRE(reds2.size() == 2);
  CHECK(reds2[0].first == doctest::Approx(110.0));
  CHECK(reds2[0].second == doctest::Approx(150.0));
  CHECK(reds2[1].first == doctest::Approx(210.0));
  CHECK(reds2[1].second == doctest::Approx(250.0));

  // Nearly all-green cycle shrinks the red to a sliver.
  const auto reds3 =
      signal_red_intervals({1000.0, 100.0, 99.9, 0.0}, 100.0);
  REQUIRE(reds3.size() == 1);
  CHECK(reds3[0].second - reds3[0].first == doctest::Approx(0.1).epsilon(1e-9));

  CHECK_THROWS_AS(signal_red_intervals({1000.0, 100.0, 100.0, 0.0}, 100.0),
                  std::invalid_argument);
}

TEST_CASE("in_influence: cone boundary") {
  const FundamentalDiagram fd = lwrtest::ref_fd();
  const TrajPoint src{1000.0, 100.0};
  CHECK(in_influence({1300.0, 110.0}, src, fd));        // slope exactly v
  CHECK_FALSE(in_influence({1301.0, 110.0}, src, fd));  // slope > v
  CHECK(in_influence({1000.0, 100.0}, src, fd));        // the source itself
  CHECK(in_influence({925.0, 110.0}, src, fd));         // slope exactly -w
  CHECK_FALSE(in_influence({924.0, 110.0}, src, fd));
  CHECK_FALSE(in_influence({1000.0, 99.0}, src, fd));   // earlier in time
}

TEST_CASE("in_influence over a trajectory uses every sample") {
  const FundamentalDiagram fd = lwrtest::ref_fd();
  const std::vector<TrajectorySegment> traj = {
      {0.0, 10.0, 0.0, 50.0, Regime::InactiveLowFlow, 0.0},
      {10.0, 20.0, 50.0, 100.0, Regime::InactiveLowFlow, 0.0}};
  CHECK(in_influence({400.0, 20.0}, traj, fd));   // from the (0,0) sample
  CHECK(in_influence({100.0, 20.0}, traj, fd));   // the trajectory end itself
  CHECK_FALSE(in_influence({700.0, 20.0}, traj, fd));
}

TEST_CASE("two far-apart bottlenecks match independent propagation exactly") {
  const Scenario base = lwrtest::uniform_scenario();

  // Far apart in time and space: cones never meet within the horizon.
  const MovingBottleneckSpec a{200.0, 0.0, 700.0, 5.0};
  const MovingBottleneckSpec b{2500.0, 250.0, 2900.0, 5.0};

  MoskowitzSolution sol_multi = build_solution(base);
  const MultiResult multi = propagate_all(std::vector{a, b}, {}, sol_multi,
                                          base.lanes, 1.0, 300.0);

  MoskowitzSolution sol_a = build_solution(base);
  const PropagationResult ra = propagate(a, sol_a, base.lanes, 1.0, 300.0);
  MoskowitzSolution sol_b = build_solution(base);
  const PropagationResult rb = propagate(b, sol_b, base.lanes, 1.0, 300.0);

  CHECK(same_segments(multi.movers[0].segments, ra.segments));
  CHECK(same_segments(multi.movers[1].segments, rb.segments));
  CHECK(same_blocks(multi.movers[0].blocks, ra.blocks));
  CHECK(same_blocks(multi.movers[1].blocks, rb.blocks));
}

TEST_CASE("overtaking pair: both complete, speed caps respected") {
  const Scenario base = lwrtest::uniform_scenario();
  // Slow vehicle ahead, fast one behind: the fast one crosses its wake.
  const MovingBottleneckSpec slow{1200.0, 0.0, 3000.0, 4.0};
  const MovingBottleneckSpec fast{800.0, 0.0, 3000.0, 12.0};

  MoskowitzSolution sol = build_solution(base);
  const MultiResult res = propagate_all(std::vector{slow, fast}, {}, sol,
                                        base.lanes, 1.0, 300.0);
  for (std::size_t m = 0; m < 2; ++m) {
    const auto& segs = res.movers[m].segments;
    REQUIRE(!segs.empty());
    const double v_cap = m == 0 ? 4.0 : 12.0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      const double speed = (segs[i].x1 - segs[i].x0) / (segs[i].t1 - segs[i].t0);
      CHECK(speed <= v_cap + 1e-9);
      CHECK(speed >= -1e-9);
      if (i > 0) {
        CHECK(segs[i].t0 == doctest::Approx(segs[i - 1].t1));
        CHECK(segs[i].x0 == doctest::Approx(segs[i - 1].x1));
      }
    }
  }
  // The fast vehicle does finish ahead.
  CHECK(res.movers[1].exited_by_position);
}

TEST_CASE("signal blocks: zero rate, constant count along red, queue formation") {
  Scenario sc = lwrtest::uniform_scenario();
  sc.signals = {{1500.0, 200.0, 120.0, 0.0}};
  MoskowitzSolution sol = build_solution(sc);
  const MultiResult res =
      propagate_all({}, sc.signals, sol, sc.lanes, 1.0, 300.0);

  REQUIRE(res.signals.size() == 1);
  REQUIRE(res.signals[0].blocks.size() == 1);
  const InternalBlock& red = res.signals[0].blocks[0];
  CHECK(red.t_b == doctest::Approx(120.0));
  CHECK(red.t_e == doctest::Approx(200.0));
  CHECK(red.N_b == red.N_e);  // r = 0 exactly
  CHECK(red.rate() == 0.0);

  // The count at the stop line is pinned during red.
  for (double t = 120.0; t <= 200.0; t += 10.0)
    CHECK(sol.evaluate(1500.0, t).value == doctest::Approx(red.N_b).epsilon(1e-12));
  // Jam density builds immediately upstream during the red.
  CHECK(sol.density(1495.0, 199.0, 5.0) ==
        doctest::Approx(sc.fd.k_j()).epsilon(1e-6));
  // After the green, the queue discharges at capacity at the stop line.
  const double after = sol.evaluate(1500.0, 210.0).value;
  CHECK(after - red.N_e == doctest::Approx(10.0 * sc.fd.q_max()).epsilon(1e-9));
}

TEST_CASE("propagate_all is deterministic and order-independent for non-interacting input") {
  const Scenario base = lwrtest::uniform_scenario();
  const MovingBottleneckSpec a{200.0, 0.0, 700.0, 5.0};
  const MovingBottleneckSpec b{2500.0, 250.0, 2900.0, 5.0};

  MoskowitzSolution s1 = build_solution(base);
  const MultiResult r1 =
      propagate_all(std::vector{a, b}, {}, s1, base.lanes, 1.0, 300.0);
  MoskowitzSolution s2 = build_solution(base);
  const MultiResult r2 =
      propagate_all(std::vector{b, a}, {}, s2, base.lanes, 1.0, 300.0);

  // Identical runs bitwise after mapping ids through the permutation.
  CHECK(same_segments(r1.movers[0].segments, r2.movers[1].segments));
  CHECK(same_segments(r1.movers[1].segments, r2.movers[0].segments));
  CHECK(same_blocks(r1.movers[0].blocks, r2.movers[1].blocks));
  CHECK(same_blocks(r1.movers[1].blocks, r2.movers[0].blocks));

  MoskowitzSolution s3 = build_solution(base);
  const MultiResult r3 =
      propagate_all(std::vector{a, b}, {}, s3, base.lanes, 1.0, 300.0);
  CHECK(same_segments(r1.movers[0].segments, r3.movers[0].segments));
  CHECK(same_blocks(r1.movers[1].blocks, r3.movers[1].blocks));
}

TEST_CASE("progress bound: step count stays within the structural limit") {
  const Scenario sc = load_scenario(lwrtest::fixture("table3_multi.json"));
  MoskowitzSolution sol = build_solution(sc);
  const double dt = 1.0;
  const MultiResult res =
      propagate_all(sc.movers, sc.signals, sol, sc.lanes, dt, sc.domain.t_end);
  std::size_t reds = 0;
  for (const TrafficSignalSpec& sig : sc.signals)
    reds += signal_red_intervals(sig, sc.domain.t_end).size();
  const std::size_t limit = (sc.movers.size() + reds) *
                            (static_cast<std::size_t>(std::ceil(
                                 sc.domain.t_end / dt)) +
                             1);
  CHECK(res.step_count <= limit);
  // Every red interval produced exactly one zero-rate block.
  std::size_t blocks = 0;
  for (const SignalResult& sr : res.signals) {
    blocks += sr.blocks.size();
    for (const InternalBlock& blk : sr.blocks) CHECK(blk.rate() == 0.0);
  }
  CHECK(blocks == reds);
}
