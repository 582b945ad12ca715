#include "lwr/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace lwr {

std::vector<std::pair<double, double>> signal_red_intervals(
    const TrafficSignalSpec& sig, double t_end) {
  if (!(t_end > 0.0))
    throw std::invalid_argument("signal_red_intervals: t_end must be > 0");
  if (!(sig.green > 0.0 && sig.green < sig.cycle))
    throw std::invalid_argument("signal_red_intervals: need 0 < green < cycle");
  std::vector<std::pair<double, double>> reds;
  for (int k = 0;; ++k) {
    const double start = sig.offset + k * sig.cycle + sig.green;
    const double end = sig.offset + (k + 1) * sig.cycle;
    if (start >= t_end) break;
    const double lo = std::max(start, 0.0);
    const double hi = std::min(end, t_end);
    if (hi > lo) reds.emplace_back(lo, hi);
  }
  return reds;
}

bool in_influence(TrajPoint point, TrajPoint source,
                  const FundamentalDiagram& fd) {
  const double dt = point.t - source.t;
  if (dt < 0.0) return false;
  if (dt == 0.0) return point.x == source.x;
  const double slope = (point.x - source.x) / dt;
  return slope >= -fd.w() && slope <= fd.v();
}

bool in_influence(TrajPoint point, std::span<const TrajectorySegment> trajectory,
                  const FundamentalDiagram& fd) {
  for (const TrajectorySegment& seg : trajectory) {
    if (in_influence(point, TrajPoint{seg.x0, seg.t0}, fd)) return true;
    if (in_influence(point, TrajPoint{seg.x1, seg.t1}, fd)) return true;
  }
  return false;
}

namespace {

// Unified scheduler entity: a marching bottleneck or one signal red
// interval waiting to anchor its block.
struct Entity {
  bool is_signal;
  std::size_t input_index;           // index into movers or signals input
  std::unique_ptr<BottleneckMarcher> marcher;  // movers only
  // Signal-interval state.
  double x_pos = 0.0;
  double red_start = 0.0;
  double red_end = 0.0;
  bool fired = false;

  bool done() const { return is_signal ? fired : marcher->done(); }
  double clock() const { return is_signal ? red_start : marcher->t(); }
  TrajPoint current() const {
    return is_signal ? TrajPoint{x_pos, red_start}
                     : TrajPoint{marcher->x(), marcher->t()};
  }
};

}  // namespace

MultiResult propagate_all(std::span<const MovingBottleneckSpec> movers,
                          std::span<const TrafficSignalSpec> signals,
                          MoskowitzSolution& sol, int lanes, double dt,
                          double t_end) {
  if (!(dt > 0.0)) throw std::invalid_argument("propagate_all: dt must be > 0");
  const Domain& dom = sol.domain();
  const double horizon = std::min(t_end, dom.t_end);
  const FundamentalDiagram& fd = sol.fd();

  MultiResult result;
  result.movers.resize(movers.size());
  result.signals.resize(signals.size());

  std::vector<Entity> entities;
  for (std::size_t i = 0; i < movers.size(); ++i) {
    Entity e;
    e.is_signal = false;
    e.input_index = i;
    e.marcher = std::make_unique<BottleneckMarcher>(
        movers[i], max_passing_rate(fd, movers[i].v_max, lanes), horizon);
    entities.push_back(std::move(e));
  }
  for (std::size_t s = 0; s < signals.size(); ++s) {
    for (const auto& [lo, hi] : signal_red_intervals(signals[s], horizon)) {
      Entity e;
      e.is_signal = true;
      e.input_index = s;
      e.x_pos = signals[s].x_pos;
      e.red_start = lo;
      e.red_end = hi;
      entities.push_back(std::move(e));
    }
  }

  auto clamp_x = [&](double x) { return std::clamp(x, dom.x0, dom.xn); };

  // Points the entity's next step will read from the solution. Kept
  // conservative: current point, the density probe extremes, and the
  // forward probe one nominal dt ahead.
  auto probe_points = [&](const Entity& e) {
    std::vector<TrajPoint> pts;
    if (e.is_signal) {
      pts.push_back(TrajPoint{e.x_pos, e.red_start});
    } else {
      const double x = e.marcher->x();
      const double t = e.marcher->t();
      const double reach = e.marcher->spec().v_max * dt;
      const double t1 = std::min(t + dt, horizon);
      pts.push_back(TrajPoint{x, t});
      pts.push_back(TrajPoint{clamp_x(x - reach), t});
      pts.push_back(TrajPoint{clamp_x(x + reach), t});
      pts.push_back(TrajPoint{clamp_x(x + reach), t1});
    }
    return pts;
  };

  auto advance = [&](Entity& e) {
    if (e.is_signal) {
      const double value = sol.evaluate(e.x_pos, e.red_start).value;
      const InternalBlock blk{e.red_start, e.red_end, e.x_pos,
                              e.x_pos,     value,     value};
      sol.add_internal(blk);
      result.signals[e.input_index].blocks.push_back(blk);
      e.fired = true;
    } else {
      e.marcher->step(sol, dt);
    }
    ++result.step_count;
  };

  std::vector<std::size_t> order;
  for (;;) {
    order.clear();
    for (std::size_t i = 0; i < entities.size(); ++i)
      if (!entities[i].done()) order.push_back(i);
    if (order.empty()) break;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return entities[a].clock() < entities[b].clock();
    });

    bool progressed = false;
    for (std::size_t idx : order) {
      bool blocked = false;
      const auto pts = probe_points(entities[idx]);
      for (std::size_t other : order) {
        if (other == idx) continue;
        const TrajPoint src = entities[other].current();
        for (const TrajPoint& p : pts) {
          if (in_influence(p, src, fd)) {
            blocked = true;
            break;
          }
        }
        if (blocked) break;
      }
      if (!blocked) {
        advance(entities[idx]);
        progressed = true;
        break;
      }
    }
    if (!progressed) {
      // Every active entity is influenced by another (crossing
      // trajectories). Advance the earliest one a fixed step with the
      // conditions stored so far; successive rounds interleave the whole
      // crossing cluster at dt resolution without ever firing a far-future
      // entity against stale conditions.
      advance(entities[order.front()]);
    }
  }

  for (Entity& e : entities) {
    if (e.is_signal) continue;
    MoverResult& mr = result.movers[e.input_index];
    mr.segments = e.marcher->segments();
    mr.blocks = e.marcher->emitted(sol);
    mr.exited_by_position = e.marcher->exited_by_position();
    mr.final_t = e.marcher->t();
    mr.final_x = e.marcher->x();
  }
  return result;
}

}  // namespace lwr
