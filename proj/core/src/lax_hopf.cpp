#include "lwr/lax_hopf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lwr/parallel.hpp"

namespace lwr {

// Each component below evaluates inf over departure points y (or times tau)
// on the block of  c(departure) + T*R(u),  R(u) = k_c*(v - u),  u the
// characteristic slope reaching (x, t). The objective is linear in the
// departure coordinate, so the infimum sits at an endpoint of the feasible
// interval; the closed forms pick it directly.

double solve_initial_block(const InitialBlock& blk, const FundamentalDiagram& fd,
                           double x, double t) {
  if (t < 0.0) return kUnreached;
  const double v = fd.v();
  const double w = fd.w();
  const double k_c = fd.k_c();
  // Feasible departure positions: on the block and within slopes [-w, v].
  const double y_lo = std::max(blk.x_lo, x - v * t);
  const double y_hi = std::min(blk.x_hi, x + w * t);
  if (y_lo > y_hi) return kUnreached;
  // Coefficient of y in the objective is (k_c - k).
  const double y = blk.k <= k_c ? y_lo : y_hi;
  return -blk.k * y + blk.b + t * k_c * v - k_c * (x - y);
}

double solve_upstream_block(const UpstreamBlock& blk,
                            const FundamentalDiagram& fd, double x_up, double x,
                            double t) {
  if (x < x_up) return kUnreached;
  const double v = fd.v();
  const double k_c = fd.k_c();
  // Latest admissible departure: the free-flow characteristic, or the end of
  // the block. Coefficient of tau is (q - q_max) <= 0, so latest is best.
  const double tau = std::min(blk.t_hi, t - (x - x_up) / v);
  if (tau < blk.t_lo) return kUnreached;
  return blk.q * tau + blk.d + (t - tau) * k_c * v - k_c * (x - x_up);
}

double solve_downstream_block(const DownstreamBlock& blk,
                              const FundamentalDiagram& fd, double x_down,
                              double x, double t) {
  if (x > x_down) return kUnreached;
  const double v = fd.v();
  const double w = fd.w();
  const double k_c = fd.k_c();
  // Latest admissible departure: the backward wave at speed -w, or the end
  // of the block.
  const double tau = std::min(blk.t_hi, t - (x_down - x) / w);
  if (tau < blk.t_lo) return kUnreached;
  return blk.p * tau + blk.b + (t - tau) * k_c * v + k_c * (x_down - x);
}

double solve_internal_block(const InternalBlock& blk,
                            const FundamentalDiagram& fd, double x, double t) {
  if (t < blk.t_b) return kUnreached;
  const double v = fd.v();
  const double w = fd.w();
  const double k_c = fd.k_c();
  const double dtb = t - blk.t_b;
  // The whole trajectory's influence cone is that of its start point (the
  // trajectory is slower than v and faster than -w).
  if (x > blk.x_b + v * dtb || x < blk.x_b - w * dtb) return kUnreached;
  if (dtb == 0.0) return blk.N_b;  // degenerate cone: x == x_b here

  const double s = blk.speed();
  const double r = blk.rate();

  // Capture value: depart at the latest admissible trajectory time.
  double best;
  if (t <= blk.t_e) {
    const double x_traj = blk.x_b + s * dtb;
    if (x >= x_traj) {
      // Ahead of (or on) the trajectory: capture where the slope-v
      // characteristic meets it; cost along u = v is zero.
      const double tau = (v == s) ? t : t - (x - x_traj) / (v - s);
      best = blk.N_b + r * (tau - blk.t_b);
    } else {
      // Behind: capture where the slope -w characteristic meets it.
      const double tau = t - (x_traj - x) / (s + w);
      best = blk.N_b + r * (tau - blk.t_b) + (t - tau) * k_c * (v + w);
    }
  } else {
    const double dte = t - blk.t_e;
    if (x >= blk.x_e + v * dte) {
      // Beyond the endpoint's free-flow line: capture before t_e at u = v.
      const double x_traj = blk.x_b + s * dtb;
      const double tau = (v == s) ? blk.t_e : t - (x - x_traj) / (v - s);
      best = blk.N_b + r * (tau - blk.t_b);
    } else if (x >= blk.x_e - w * dte) {
      // Endpoint fan: capture exactly at the trajectory end.
      best = blk.N_e + k_c * (v * dte - (x - blk.x_e));
    } else {
      const double x_traj = blk.x_b + s * dtb;
      const double tau = t - (x_traj - x) / (s + w);
      best = blk.N_b + r * (tau - blk.t_b) + (t - tau) * k_c * (v + w);
    }
  }

  // Departing right at the block start is the other endpoint of the linear
  // objective; taking the min keeps the component exact for any rate.
  const double from_start = blk.N_b + dtb * k_c * v - k_c * (x - blk.x_b);
  return std::min(best, from_start);
}

MoskowitzSolution::MoskowitzSolution(FundamentalDiagram fd, Domain dom,
                                     std::vector<InitialBlock> initial,
                                     std::vector<UpstreamBlock> upstream,
                                     std::vector<DownstreamBlock> downstream)
    : fd_(fd),
      dom_(dom),
      initial_(std::move(initial)),
      upstream_(std::move(upstream)),
      downstream_(std::move(downstream)) {
  if (!(dom_.x0 < dom_.xn) || !(dom_.t_end > 0.0))
    throw std::invalid_argument("MoskowitzSolution: empty domain");
}

EvalResult MoskowitzSolution::evaluate(double x, double t) const {
  if (x < dom_.x0 || x > dom_.xn || t < 0.0 || t > dom_.t_end)
    throw std::domain_error("evaluate: point outside the solution domain");

  EvalResult res;
  auto consider = [&res](double value, BlockKind kind, std::size_t index) {
    if (value < res.value) {
      res.value = value;
      res.contributing = BlockRef{kind, index};
    }
  };

  for (std::size_t i = 0; i < initial_.size(); ++i)
    consider(solve_initial_block(initial_[i], fd_, x, t), BlockKind::Initial, i);
  for (std::size_t i = 0; i < upstream_.size(); ++i)
    consider(solve_upstream_block(upstream_[i], fd_, dom_.x0, x, t),
             BlockKind::Upstream, i);
  for (std::size_t i = 0; i < downstream_.size(); ++i)
    consider(solve_downstream_block(downstream_[i], fd_, dom_.xn, x, t),
             BlockKind::Downstream, i);
  for (std::size_t i = 0; i < internal_.size(); ++i)
    consider(solve_internal_block(internal_[i], fd_, x, t), BlockKind::Internal,
             i);
  return res;
}

double MoskowitzSolution::density(double x, double t, double delta_x) const {
  if (!(delta_x > 0.0))
    throw std::invalid_argument("density: probe length must be > 0");
  // One-sided when the centered probe sticks out of the domain.
  const double lo = std::max(dom_.x0, x - 0.5 * delta_x);
  const double hi = std::min(dom_.xn, x + 0.5 * delta_x);
  const double n_lo = evaluate(lo, t).value;
  const double n_hi = evaluate(hi, t).value;
  const double k = -(n_hi - n_lo) / (hi - lo);
  return std::clamp(k, 0.0, fd_.k_j());
}

DensityField MoskowitzSolution::grid(double dx, double dt_out) const {
  if (!(dx > 0.0) || !(dt_out > 0.0))
    throw std::invalid_argument("grid: spacings must be > 0");
  DensityField field;
  field.x0 = dom_.x0;
  field.dx = dx;
  field.t0 = 0.0;
  field.dt = dt_out;
  field.nx = static_cast<std::size_t>(std::floor((dom_.xn - dom_.x0) / dx + 0.5)) + 1;
  field.nt = static_cast<std::size_t>(std::floor(dom_.t_end / dt_out + 0.5)) + 1;
  field.k.assign(field.nx * field.nt, 0.0);
  const double probe = std::max(2.0 * dx, 1.0);
  parallel_for(field.nt, [&](std::size_t it) {
    const double t = std::min(field.t0 + static_cast<double>(it) * dt_out,
                              dom_.t_end);
    for (std::size_t ix = 0; ix < field.nx; ++ix) {
      const double x = std::min(dom_.x0 + static_cast<double>(ix) * dx, dom_.xn);
      field.k[it * field.nx + ix] = density(x, t, probe);
    }
  });
  return field;
}

std::size_t MoskowitzSolution::add_internal(const InternalBlock& blk) {
  validate_internal(blk, fd_);
  internal_.push_back(blk);
  return internal_.size() - 1;
}

void MoskowitzSolution::extend_internal(std::size_t index, double t_e,
                                        double x_e, double N_e) {
  InternalBlock blk = internal_.at(index);
  blk.t_e = t_e;
  blk.x_e = x_e;
  blk.N_e = N_e;
  validate_internal(blk, fd_);
  internal_[index] = blk;
}

}  // namespace lwr
