#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lwr/bottleneck.hpp"
#include "lwr/fundamental_diagram.hpp"
#include "lwr/scheduler.hpp"

namespace lwr {

/// First-order finite-volume state: cell densities of width dx starting at
/// x0, plus the current time.
struct CellField {
  double x0 = 0.0;
  double dx = 0.0;
  double time = 0.0;
  std::vector<double> k;

  double total_vehicles() const;
  double cell_center(std::size_t i) const { return x0 + (i + 0.5) * dx; }
};

/// Godunov sending function: min(v*k, q_max).
double demand(const FundamentalDiagram& fd, double k);
/// Godunov receiving function: min(q_max, w*(k_j - k)).
double supply(const FundamentalDiagram& fd, double k);

/// Absolute flux cap applied at the interface nearest `position`.
struct FluxCap {
  double position;
  double cap;
};

/// One conservative update of length dt. Interface fluxes are
/// min(demand(left), supply(right)); the entry uses `inflow_demand`, the
/// exit uses `outflow_supply`; each cap clips the nearest interface. Throws
/// config_error if dt violates the CFL bound dx / max(v, w). The realized
/// boundary fluxes are written to influx/outflux when given.
void step_field(CellField& field, const FundamentalDiagram& fd, double dt,
                double inflow_demand, double outflow_supply,
                std::span<const FluxCap> caps, double* influx = nullptr,
                double* outflux = nullptr);

/// Relative L1 difference sum|a - b| / sum|b| with b the reference. Throws
/// std::invalid_argument on shape mismatch.
double compare_fields(std::span<const double> a, std::span<const double> b);

/// How the oracle treats moving bottlenecks.
enum class BottleneckMode {
  FollowTrajectories,  ///< positions/regimes taken from the primary scheme
  Endogenous,          ///< re-derive speed and activity from cell densities
};

/// Piecewise-constant rate lookup for boundary data.
double piecewise_rate(std::span<const FlowPiece> pieces, double t);

/// Scenario-level Godunov driver: boundary queue handling, cumulative
/// counts, and bottleneck flux caps in either mode.
class GodunovSimulator {
public:
  /// Trajectories (used in FollowTrajectories mode) may be empty in
  /// Endogenous mode; specs/q_rs/trajectories are indexed together.
  GodunovSimulator(FundamentalDiagram fd, double x0, double xn, double dx,
                   std::vector<double> initial_densities,
                   std::vector<FlowPiece> inflow, std::vector<FlowPiece> outflow,
                   std::vector<MovingBottleneckSpec> specs,
                   std::vector<double> q_rs,
                   std::vector<std::vector<TrajectorySegment>> trajectories,
                   std::vector<TrafficSignalSpec> signals, BottleneckMode mode);

  /// Advances to `t_target` in CFL steps, sampling the density field every
  /// `sample_every` steps into the returned row-major history (one row per
  /// sample, cells across).
  struct History {
    std::vector<double> times;
    std::vector<double> k;  // times.size() x cells, row-major
    std::size_t cells = 0;
  };
  History run(double t_target, std::size_t sample_every);

  double cfl_dt() const;
  const CellField& field() const { return field_; }
  double queue() const { return queue_; }
  double cumulative_inflow() const { return cum_in_; }
  double cumulative_outflow() const { return cum_out_; }

private:
  std::vector<FluxCap> active_caps(double t, double dt);
  void advance_endogenous_movers(double dt);

  FundamentalDiagram fd_;
  double xn_;
  CellField field_;
  std::vector<FlowPiece> inflow_;
  std::vector<FlowPiece> outflow_;
  std::vector<MovingBottleneckSpec> specs_;
  std::vector<double> q_rs_;
  std::vector<std::vector<TrajectorySegment>> trajectories_;
  std::vector<TrafficSignalSpec> signals_;
  std::vector<std::vector<std::pair<double, double>>> red_intervals_;
  BottleneckMode mode_;
  // Endogenous mover state.
  std::vector<double> endo_x_;
  double queue_ = 0.0;
  double cum_in_ = 0.0;
  double cum_out_ = 0.0;
};

}  // namespace lwr
