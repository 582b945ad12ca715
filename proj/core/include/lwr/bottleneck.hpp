#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lwr/lax_hopf.hpp"

namespace lwr {

/// A slow vehicle: enters at (x_entry, t_entry), leaves the link at x_exit,
/// never drives faster than v_max.
struct MovingBottleneckSpec {
  double x_entry;
  double t_entry;
  double x_exit;
  double v_max;
};

enum class Regime { InactiveLowFlow, Active, InactiveCongested };

/// One marched piece of a bottleneck trajectory.
struct TrajectorySegment {
  double t0;
  double t1;
  double x0;
  double x1;
  Regime regime;
  double passing_count;  ///< vehicles overtaking during the segment
};

/// Classifies one step from the relative flow (M1 - M0)/dt seen by the
/// moving observer. Ties are deterministic: zero relative flow is
/// InactiveLowFlow, relative flow exactly q_r is Active.
Regime classify(double M0, double M1, double dt, double q_r);

/// Marches one bottleneck through the solution, appending internal
/// condition blocks for active phases. Consecutive active steps extend a
/// single block in place, so one activity run yields one block.
class BottleneckMarcher {
public:
  /// `horizon` caps the march in time; it is clipped to the solution domain
  /// on every step.
  BottleneckMarcher(const MovingBottleneckSpec& spec, double q_r,
                    double horizon);

  struct StepOutcome {
    Regime regime;
    bool exited;
  };

  /// Advances one step of at most dt (truncated to land exactly on the exit
  /// position or the time horizon). Probes M0 at the current point and M1 at
  /// the v_max reach; active steps extend the current internal block inside
  /// `sol`.
  StepOutcome step(MoskowitzSolution& sol, double dt);

  /// Closes any open active run. Called automatically when the bottleneck
  /// exits; call manually when abandoning a march early.
  void finish();

  bool done() const { return done_; }
  double x() const { return x_; }
  double t() const { return t_; }
  double q_r() const { return q_r_; }
  bool exited_by_position() const { return exited_by_position_; }
  const MovingBottleneckSpec& spec() const { return spec_; }
  const std::vector<TrajectorySegment>& segments() const { return segments_; }
  /// Closed internal blocks emitted so far (copies of what lives in the
  /// solution).
  std::vector<InternalBlock> emitted(const MoskowitzSolution& sol) const;

private:
  void close_run(MoskowitzSolution* sol);

  MovingBottleneckSpec spec_;
  double q_r_;
  double horizon_;
  double x_;
  double t_;
  bool done_ = false;
  bool exited_by_position_ = false;
  std::vector<TrajectorySegment> segments_;
  std::vector<std::size_t> block_indices_;  ///< indices into sol.internal()
  std::optional<std::size_t> open_block_;
  double run_t_b_ = 0.0;
  double run_N_b_ = 0.0;
};

/// Result of marching a single bottleneck to exit or horizon.
struct PropagationResult {
  std::vector<TrajectorySegment> segments;
  std::vector<InternalBlock> blocks;
  bool exited_by_position = false;
  double final_t = 0.0;
  double final_x = 0.0;
};

/// Runs Algorithm-1 style propagation of one bottleneck: steps of dt until
/// t > t_end or x reaches x_exit. Internal blocks are appended to `sol` and
/// returned as copies.
PropagationResult propagate(const MovingBottleneckSpec& spec,
                            MoskowitzSolution& sol, int lanes, double dt,
                            double t_end);

}  // namespace lwr
