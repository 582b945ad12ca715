#include "lwr/bottleneck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lwr {

Regime classify(double M0, double M1, double dt, double q_r) {
  if (!(dt > 0.0)) throw std::invalid_argument("classify: dt must be > 0");
  const double flow_rel = (M1 - M0) / dt;
  // The boundaries themselves are deterministic: zero relative flow is
  // low-flow, exactly q_r is active. The tolerance absorbs rounding noise of
  // the count evaluations so exact-tie scenarios classify as intended.
  constexpr double tol = 1e-9;
  if (flow_rel < -tol) return Regime::InactiveCongested;
  if (flow_rel <= tol) return Regime::InactiveLowFlow;
  if (flow_rel >= q_r - tol) return Regime::Active;
  return Regime::InactiveLowFlow;
}

BottleneckMarcher::BottleneckMarcher(const MovingBottleneckSpec& spec,
                                     double q_r, double horizon)
    : spec_(spec), q_r_(q_r), horizon_(horizon), x_(spec.x_entry),
      t_(spec.t_entry) {
  if (!(spec.v_max > 0.0))
    throw std::invalid_argument("MovingBottleneckSpec: v_max must be > 0");
  if (!(spec.x_entry < spec.x_exit))
    throw std::invalid_argument("MovingBottleneckSpec: x_entry must be < x_exit");
}

void BottleneckMarcher::close_run(MoskowitzSolution*) {
  open_block_.reset();
}

BottleneckMarcher::StepOutcome BottleneckMarcher::step(MoskowitzSolution& sol,
                                                       double dt) {
  if (done_) return {Regime::InactiveLowFlow, true};
  const double t_end = std::min(horizon_, sol.domain().t_end);

  // Truncate the step so probes never leave the domain and the trajectory
  // lands exactly on the exit position or the horizon.
  double dt_step = dt;
  bool exit_trunc = false;
  if (t_ + dt_step > t_end) dt_step = t_end - t_;
  if (x_ + spec_.v_max * dt_step >= spec_.x_exit) {
    dt_step = (spec_.x_exit - x_) / spec_.v_max;
    exit_trunc = true;
  }
  // dt_step can round to no time progress right at the horizon; stop there.
  if (!(dt_step > 0.0) || t_ + dt_step == t_) {
    if (exit_trunc || x_ >= spec_.x_exit) exited_by_position_ = true;
    done_ = true;
    close_run(&sol);
    return {Regime::InactiveLowFlow, true};
  }

  const double probe_x = exit_trunc ? spec_.x_exit : x_ + spec_.v_max * dt_step;
  const double M0 = sol.evaluate(x_, t_).value;
  const double M1 = sol.evaluate(probe_x, t_ + dt_step).value;
  const Regime regime = classify(M0, M1, dt_step, q_r_);

  switch (regime) {
    case Regime::Active: {
      if (!open_block_) {
        run_t_b_ = t_;
        run_N_b_ = M0;
        open_block_ = sol.add_internal(InternalBlock{
            t_, t_ + dt_step, x_, probe_x, M0, M0 + q_r_ * dt_step});
        block_indices_.push_back(*open_block_);
      } else {
        sol.extend_internal(*open_block_, t_ + dt_step, probe_x,
                            run_N_b_ + q_r_ * (t_ + dt_step - run_t_b_));
      }
      segments_.push_back(TrajectorySegment{t_, t_ + dt_step, x_, probe_x,
                                            regime, q_r_ * dt_step});
      x_ = probe_x;
      t_ += dt_step;
      break;
    }
    case Regime::InactiveLowFlow: {
      close_run(&sol);
      segments_.push_back(TrajectorySegment{t_, t_ + dt_step, x_, probe_x,
                                            regime, std::max(0.0, M1 - M0)});
      x_ = probe_x;
      t_ += dt_step;
      break;
    }
    case Regime::InactiveCongested: {
      close_run(&sol);
      // Local density over a probe of 2*v_max*dt, clamped to the congested
      // branch before converting to a speed; the bottleneck never exceeds
      // its own v_max.
      const double k0 =
          std::clamp(sol.density(x_, t_, 2.0 * spec_.v_max * dt),
                     sol.fd().k_c(), sol.fd().k_j());
      const double sp = std::min(congested_speed(sol.fd(), k0), spec_.v_max);
      double x1 = x_ + sp * dt_step;
      if (x1 >= spec_.x_exit) x1 = spec_.x_exit;
      segments_.push_back(
          TrajectorySegment{t_, t_ + dt_step, x_, x1, regime, 0.0});
      x_ = x1;
      t_ += dt_step;
      break;
    }
  }

  if (x_ >= spec_.x_exit) {
    exited_by_position_ = true;
    done_ = true;
    close_run(&sol);
  } else if (t_ >= t_end) {
    done_ = true;
    close_run(&sol);
  }
  return {regime, done_};
}

void BottleneckMarcher::finish() { open_block_.reset(); }

std::vector<InternalBlock> BottleneckMarcher::emitted(
    const MoskowitzSolution& sol) const {
  std::vector<InternalBlock> out;
  out.reserve(block_indices_.size());
  for (std::size_t idx : block_indices_) out.push_back(sol.internal()[idx]);
  return out;
}

PropagationResult propagate(const MovingBottleneckSpec& spec,
                            MoskowitzSolution& sol, int lanes, double dt,
                            double t_end) {
  if (!(dt > 0.0)) throw std::invalid_argument("propagate: dt must be > 0");
  const double horizon = std::min(t_end, sol.domain().t_end);
  PropagationResult result;
  if (spec.t_entry >= horizon) {
    result.final_t = spec.t_entry;
    result.final_x = spec.x_entry;
    return result;
  }
  BottleneckMarcher marcher(spec, max_passing_rate(sol.fd(), spec.v_max, lanes),
                            horizon);
  while (!marcher.done()) marcher.step(sol, dt);
  result.segments = marcher.segments();
  result.blocks = marcher.emitted(sol);
  result.exited_by_position = marcher.exited_by_position();
  result.final_t = marcher.t();
  result.final_x = marcher.x();
  return result;
}

}  // namespace lwr
