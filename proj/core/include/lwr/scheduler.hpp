#pragma once

#include <span>
#include <utility>
#include <vector>

#include "lwr/bottleneck.hpp"
#include "lwr/lax_hopf.hpp"

namespace lwr {

/// A traffic signal: green-first cycles anchored at `offset`.
struct TrafficSignalSpec {
  double x_pos;
  double cycle;
  double green;
  double offset;
};

/// Red phases of the signal clipped to [0, t_end]:
/// [offset + k*cycle + green, offset + (k+1)*cycle] for k = 0, 1, ...
std::vector<std::pair<double, double>> signal_red_intervals(
    const TrafficSignalSpec& sig, double t_end);

struct TrajPoint {
  double x;
  double t;
};

/// True iff `point` lies in the forward cone of `source`: there is a
/// characteristic with slope in [-w, v] from source to point. The source
/// point itself counts as inside.
bool in_influence(TrajPoint point, TrajPoint source,
                  const FundamentalDiagram& fd);

/// True iff any sample of the trajectory (segment start/end points)
/// influences `point`.
bool in_influence(TrajPoint point, std::span<const TrajectorySegment> trajectory,
                  const FundamentalDiagram& fd);

struct MoverResult {
  std::vector<TrajectorySegment> segments;
  std::vector<InternalBlock> blocks;
  bool exited_by_position = false;
  double final_t = 0.0;
  double final_x = 0.0;
};

struct SignalResult {
  std::vector<InternalBlock> blocks;  ///< one zero-rate block per red interval
};

struct MultiResult {
  std::vector<MoverResult> movers;    ///< one per input bottleneck, same order
  std::vector<SignalResult> signals;  ///< one per input signal, same order
  std::size_t step_count = 0;         ///< marcher steps plus signal anchors
};

/// Marches every moving bottleneck and schedules every signal red interval.
///
/// Signals act as zero-speed bottlenecks: each red interval contributes one
/// internal block with zero passing rate, anchored lazily to N(x_pos, red
/// start) so earlier conditions are included. The scheduler advances, in
/// ascending (clock, index) order, any entity whose next probes lie outside
/// every other active entity's forward influence cone; when none qualifies
/// (crossing trajectories), all blocked entities advance one fixed dt with
/// the currently stored conditions.
MultiResult propagate_all(std::span<const MovingBottleneckSpec> movers,
                          std::span<const TrafficSignalSpec> signals,
                          MoskowitzSolution& sol, int lanes, double dt,
                          double t_end);

}  // namespace lwr
