#include "lwr/godunov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lwr/errors.hpp"

namespace lwr {

double CellField::total_vehicles() const {
  double sum = 0.0;
  for (double ki : k) sum += ki;
  return sum * dx;
}

double demand(const FundamentalDiagram& fd, double k) {
  if (k < 0.0 || k > fd.k_j())
    throw std::domain_error("demand: density outside [0, k_j]");
  return std::min(fd.v() * k, fd.q_max());
}

double supply(const FundamentalDiagram& fd, double k) {
  if (k < 0.0 || k > fd.k_j())
    throw std::domain_error("supply: density outside [0, k_j]");
  return std::min(fd.q_max(), fd.w() * (fd.k_j() - k));
}

void step_field(CellField& field, const FundamentalDiagram& fd, double dt,
                double inflow_demand, double outflow_supply,
                std::span<const FluxCap> caps, double* influx,
                double* outflux) {
  const std::size_t n = field.k.size();
  if (n == 0) throw config_error("step_field: empty field");
  const double max_speed = std::max(fd.v(), fd.w());
  if (dt > field.dx / max_speed * (1.0 + 1e-12))
    throw config_error("step_field: CFL violation, need dt <= dx / max(v, w)");

  // Interface i sits at x0 + i*dx, between cells i-1 and i.
  std::vector<double> flux(n + 1);
  flux[0] = std::min(inflow_demand, supply(fd, field.k[0]));
  for (std::size_t i = 1; i < n; ++i)
    flux[i] = std::min(demand(fd, field.k[i - 1]), supply(fd, field.k[i]));
  flux[n] = std::min(demand(fd, field.k[n - 1]), outflow_supply);

  for (const FluxCap& cap : caps) {
    const double rel = (cap.position - field.x0) / field.dx;
    const std::size_t i = static_cast<std::size_t>(
        std::clamp(std::llround(rel), 0LL, static_cast<long long>(n)));
    flux[i] = std::min(flux[i], cap.cap);
  }

  const double lambda = dt / field.dx;
  for (std::size_t i = 0; i < n; ++i)
    field.k[i] += lambda * (flux[i] - flux[i + 1]);
  field.time += dt;
  if (influx) *influx = flux[0];
  if (outflux) *outflux = flux[n];
}

double compare_fields(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || b.empty())
    throw std::invalid_argument("compare_fields: shape mismatch");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::abs(a[i] - b[i]);
    den += std::abs(b[i]);
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return num / den;
}

double piecewise_rate(std::span<const FlowPiece> pieces, double t) {
  for (const FlowPiece& p : pieces)
    if (t >= p.t_lo && t < p.t_hi) return p.rate;
  if (!pieces.empty() && t >= pieces.back().t_hi) return pieces.back().rate;
  return 0.0;
}

GodunovSimulator::GodunovSimulator(
    FundamentalDiagram fd, double x0, double xn, double dx,
    std::vector<double> initial_densities, std::vector<FlowPiece> inflow,
    std::vector<FlowPiece> outflow, std::vector<MovingBottleneckSpec> specs,
    std::vector<double> q_rs,
    std::vector<std::vector<TrajectorySegment>> trajectories,
    std::vector<TrafficSignalSpec> signals, BottleneckMode mode)
    : fd_(fd),
      xn_(xn),
      inflow_(std::move(inflow)),
      outflow_(std::move(outflow)),
      specs_(std::move(specs)),
      q_rs_(std::move(q_rs)),
      trajectories_(std::move(trajectories)),
      signals_(std::move(signals)),
      mode_(mode) {
  if (!(dx > 0.0) || !(xn > x0)) throw config_error("GodunovSimulator: bad grid");
  field_.x0 = x0;
  field_.dx = dx;
  field_.time = 0.0;
  field_.k = std::move(initial_densities);
  if (field_.k.empty()) throw config_error("GodunovSimulator: empty field");
  if (specs_.size() != q_rs_.size())
    throw std::invalid_argument("GodunovSimulator: specs/q_rs size mismatch");
  if (mode_ == BottleneckMode::FollowTrajectories &&
      trajectories_.size() != specs_.size())
    throw std::invalid_argument(
        "GodunovSimulator: one trajectory per bottleneck required");
  for (const MovingBottleneckSpec& s : specs_) endo_x_.push_back(s.x_entry);
}

double GodunovSimulator::cfl_dt() const {
  return field_.dx / std::max(fd_.v(), fd_.w());
}

// Absolute flux cap of an active restriction moving at speed s with relative
// passing rate q_r. On the triangular diagram the freed state downstream has
// flow q_r * v / (v - s); a fixed restriction (s = 0) caps at q_r itself.
static double absolute_cap(const FundamentalDiagram& fd, double q_r, double s) {
  if (s <= 0.0) return q_r;
  if (s >= fd.v()) return fd.q_max();
  return q_r * fd.v() / (fd.v() - s);
}

std::vector<FluxCap> GodunovSimulator::active_caps(double t, double dt) {
  std::vector<FluxCap> caps;
  if (mode_ == BottleneckMode::FollowTrajectories) {
    for (std::size_t b = 0; b < specs_.size(); ++b) {
      for (const TrajectorySegment& seg : trajectories_[b]) {
        if (t < seg.t0 || t >= seg.t1) continue;
        if (seg.regime == Regime::Active) {
          const double frac = (t - seg.t0) / (seg.t1 - seg.t0);
          const double x = seg.x0 + frac * (seg.x1 - seg.x0);
          const double s = (seg.x1 - seg.x0) / (seg.t1 - seg.t0);
          caps.push_back(FluxCap{x, absolute_cap(fd_, q_rs_[b], s)});
        }
        break;
      }
    }
  } else {
    for (std::size_t b = 0; b < specs_.size(); ++b) {
      if (t < specs_[b].t_entry || endo_x_[b] >= specs_[b].x_exit) continue;
      const std::size_t cell = static_cast<std::size_t>(std::clamp(
          (endo_x_[b] - field_.x0) / field_.dx, 0.0,
          static_cast<double>(field_.k.size() - 1)));
      const double k = field_.k[cell];
      const double v_max = specs_[b].v_max;
      // Active when the flow passing a v_max observer exceeds the cap.
      const double rel_flow = flow(fd_, k) - v_max * k;
      if (rel_flow > q_rs_[b])
        caps.push_back(FluxCap{endo_x_[b], absolute_cap(fd_, q_rs_[b], v_max)});
    }
  }
  // Signals: zero flux during red.
  for (std::size_t s = 0; s < signals_.size(); ++s) {
    for (const auto& [lo, hi] : red_intervals_[s]) {
      if (t >= lo && t < hi) {
        caps.push_back(FluxCap{signals_[s].x_pos, 0.0});
        break;
      }
    }
  }
  (void)dt;
  return caps;
}

void GodunovSimulator::advance_endogenous_movers(double dt) {
  for (std::size_t b = 0; b < specs_.size(); ++b) {
    if (field_.time < specs_[b].t_entry || endo_x_[b] >= specs_[b].x_exit)
      continue;
    const std::size_t cell = static_cast<std::size_t>(std::clamp(
        (endo_x_[b] - field_.x0) / field_.dx, 0.0,
        static_cast<double>(field_.k.size() - 1)));
    const double k = field_.k[cell];
    const double traffic_speed = k > 1e-12 ? flow(fd_, k) / k : fd_.v();
    const double sp = std::min(specs_[b].v_max, traffic_speed);
    endo_x_[b] = std::min(endo_x_[b] + sp * dt, specs_[b].x_exit);
  }
}

GodunovSimulator::History GodunovSimulator::run(double t_target,
                                                std::size_t sample_every) {
  if (sample_every == 0) sample_every = 1;
  red_intervals_.clear();
  for (const TrafficSignalSpec& s : signals_)
    red_intervals_.push_back(signal_red_intervals(s, t_target));

  const double dt = cfl_dt();
  const std::size_t steps =
      static_cast<std::size_t>(std::ceil(t_target / dt - 1e-9));
  History hist;
  hist.cells = field_.k.size();
  hist.times.push_back(field_.time);
  hist.k.insert(hist.k.end(), field_.k.begin(), field_.k.end());

  for (std::size_t n = 0; n < steps; ++n) {
    const double t = field_.time;
    const double step_dt = std::min(dt, t_target - t);
    if (!(step_dt > 0.0)) break;
    // External queue: demand carried over when the entry was supply-limited.
    const double arriving = piecewise_rate(inflow_, t);
    const double entry_demand =
        std::min(fd_.q_max(), arriving + queue_ / step_dt);
    const double exit_supply = piecewise_rate(outflow_, t);
    const auto caps = active_caps(t, step_dt);
    double fin = 0.0;
    double fout = 0.0;
    step_field(field_, fd_, step_dt, entry_demand, exit_supply, caps, &fin,
               &fout);
    queue_ += (arriving - fin) * step_dt;
    if (queue_ < 0.0) queue_ = 0.0;
    cum_in_ += fin * step_dt;
    cum_out_ += fout * step_dt;
    if (mode_ == BottleneckMode::Endogenous) advance_endogenous_movers(step_dt);
    if ((n + 1) % sample_every == 0 || n + 1 == steps) {
      hist.times.push_back(field_.time);
      hist.k.insert(hist.k.end(), field_.k.begin(), field_.k.end());
    }
  }
  return hist;
}

}  // namespace lwr
