#pragma once

#include <vector>

#include "lwr/fundamental_diagram.hpp"

namespace lwr {

/// One linear piece of the initial vehicle-count profile: value -k*x + b on
/// [x_lo, x_hi].
struct InitialBlock {
  double x_lo;
  double x_hi;
  double k;  ///< density (veh/m)
  double b;  ///< intercept (veh)

  double value_at(double x) const { return -k * x + b; }
};

/// One linear piece of the upstream boundary count: value q*t + d on
/// [t_lo, t_hi].
struct UpstreamBlock {
  double t_lo;
  double t_hi;
  double q;  ///< inflow (veh/s)
  double d;  ///< intercept (veh)

  double value_at(double t) const { return q * t + d; }
};

/// One linear piece of the downstream boundary count: value p*t + b on
/// [t_lo, t_hi].
struct DownstreamBlock {
  double t_lo;
  double t_hi;
  double p;  ///< outflow (veh/s)
  double b;  ///< intercept (veh)

  double value_at(double t) const { return p * t + b; }
};

/// A condition along a trajectory inside the domain: the count is pinned to
/// the line from (t_b, x_b, N_b) to (t_e, x_e, N_e). Speed and passing rate
/// are derived, never stored, so they are consistent by construction.
struct InternalBlock {
  double t_b;
  double t_e;
  double x_b;
  double x_e;
  double N_b;
  double N_e;

  double speed() const { return (x_e - x_b) / (t_e - t_b); }
  double rate() const { return (N_e - N_b) / (t_e - t_b); }
};

/// Input piece for build_initial: density k on [x_lo, x_hi].
struct DensityPiece {
  double x_lo;
  double x_hi;
  double k;
};

/// Input piece for the boundary builders: flow `rate` on [t_lo, t_hi].
struct FlowPiece {
  double t_lo;
  double t_hi;
  double rate;
};

/// Builds the initial blocks for contiguous ordered density pieces. The
/// intercepts make the value 0 at x_origin and continuous at every junction,
/// i.e. the value at x equals -integral of k from x_origin to x.
///
/// Throws schema_error on gaps/overlaps/empty input, std::domain_error on
/// densities outside [0, k_j].
std::vector<InitialBlock> build_initial(const FundamentalDiagram& fd,
                                        const std::vector<DensityPiece>& pieces,
                                        double x_origin);

/// Builds upstream boundary blocks from contiguous flow pieces starting at
/// t = 0. The count starts at zero: d_0 = 0, later intercepts keep the
/// cumulative count continuous.
std::vector<UpstreamBlock> build_upstream(const FundamentalDiagram& fd,
                                          const std::vector<FlowPiece>& pieces);

/// Builds downstream boundary blocks; the first block is anchored so its
/// value at t = 0 equals the initial count at the exit.
std::vector<DownstreamBlock> build_downstream(
    const FundamentalDiagram& fd, const std::vector<FlowPiece>& pieces,
    double initial_count_at_exit);

/// Checks an internal block against the diagram: positive duration, derived
/// speed within [-w, v], nonnegative passing rate. Throws
/// std::invalid_argument on violation.
void validate_internal(const InternalBlock& blk, const FundamentalDiagram& fd);

}  // namespace lwr
