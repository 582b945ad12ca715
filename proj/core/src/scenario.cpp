#include "lwr/scenario.hpp"

#include <cmath>
#include <string>

#include "lwr/errors.hpp"

namespace lwr {

void validate_scenario(const Scenario& sc) {
  if (!(sc.domain.x0 < sc.domain.xn))
    throw schema_error("domain: x0_m must be < xn_m");
  if (!(sc.domain.t_end > 0.0)) throw schema_error("domain: t_end_s must be > 0");
  if (sc.lanes < 1) throw schema_error("lanes: must be >= 1");
  if (sc.initial.empty()) throw schema_error("initial_density: empty");
  if (std::abs(sc.initial.front().x_lo - sc.domain.x0) > 1e-9)
    throw schema_error("initial_density: coverage must start at x0_m");
  if (std::abs(sc.initial.back().x_hi - sc.domain.xn) > 1e-9)
    throw schema_error("initial_density: coverage must end at xn_m");
  for (std::size_t i = 0; i < sc.movers.size(); ++i) {
    const MovingBottleneckSpec& m = sc.movers[i];
    const std::string tag = "moving_bottlenecks[" + std::to_string(i) + "]";
    if (!(m.x_entry >= sc.domain.x0 && m.x_entry < m.x_exit &&
          m.x_exit <= sc.domain.xn))
      throw schema_error(tag + ": need x0 <= x_entry_m < x_exit_m <= xn");
    if (!(m.v_max > 0.0 && m.v_max <= sc.fd.v()))
      throw schema_error(tag + ": need 0 < v_max_mps <= v");
    if (m.t_entry < 0.0) throw schema_error(tag + ": t_entry_s must be >= 0");
  }
  for (std::size_t i = 0; i < sc.signals.size(); ++i) {
    const TrafficSignalSpec& s = sc.signals[i];
    const std::string tag = "signals[" + std::to_string(i) + "]";
    if (!(s.x_pos > sc.domain.x0 && s.x_pos < sc.domain.xn))
      throw schema_error(tag + ": x_m must lie strictly inside the link");
    if (!(s.green > 0.0 && s.green < s.cycle))
      throw schema_error(tag + ": need 0 < green_s < cycle_s");
    if (s.offset < 0.0) throw schema_error(tag + ": offset_s must be >= 0");
  }
}

double initial_count_at(const Scenario& sc, double x) {
  double val = 0.0;
  for (const DensityPiece& p : sc.initial) {
    if (x <= p.x_lo) break;
    const double hi = std::min(x, p.x_hi);
    val -= p.k * (hi - p.x_lo);
    if (x <= p.x_hi) break;
  }
  return val;
}

MoskowitzSolution build_solution(const Scenario& sc) {
  validate_scenario(sc);
  auto initial = build_initial(sc.fd, sc.initial, sc.domain.x0);
  // Empty boundary lists mean "no condition imposed" at that edge.
  std::vector<UpstreamBlock> upstream;
  if (!sc.upstream.empty()) upstream = build_upstream(sc.fd, sc.upstream);
  std::vector<DownstreamBlock> downstream;
  if (!sc.downstream.empty())
    downstream = build_downstream(sc.fd, sc.downstream,
                                  initial_count_at(sc, sc.domain.xn));
  return MoskowitzSolution(sc.fd, sc.domain, std::move(initial),
                           std::move(upstream), std::move(downstream));
}

}  // namespace lwr
