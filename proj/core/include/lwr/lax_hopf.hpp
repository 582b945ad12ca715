#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "lwr/conditions.hpp"
#include "lwr/fundamental_diagram.hpp"

namespace lwr {

/// Distinguished "no block reaches this point" value. IEEE infinity compares
/// exactly, so min() against it never loses a finite candidate.
inline constexpr double kUnreached = std::numeric_limits<double>::infinity();

/// Per-block solution components. Each returns the exact infimum of
/// condition value plus transform cost over all admissible characteristics
/// (speeds in [-w, v]) departing from the block, or kUnreached when the
/// point lies outside the block's influence cone.
double solve_initial_block(const InitialBlock& blk, const FundamentalDiagram& fd,
                           double x, double t);
double solve_upstream_block(const UpstreamBlock& blk,
                            const FundamentalDiagram& fd, double x_up, double x,
                            double t);
double solve_downstream_block(const DownstreamBlock& blk,
                              const FundamentalDiagram& fd, double x_down,
                              double x, double t);
double solve_internal_block(const InternalBlock& blk,
                            const FundamentalDiagram& fd, double x, double t);

/// Solution domain rectangle [x0, xn] x [0, t_end].
struct Domain {
  double x0;
  double xn;
  double t_end;
};

enum class BlockKind { None, Initial, Upstream, Downstream, Internal };

/// Identifies the block whose component attains the evaluated minimum.
struct BlockRef {
  BlockKind kind = BlockKind::None;
  std::size_t index = 0;
};

struct EvalResult {
  double value = kUnreached;
  BlockRef contributing;

  bool reached() const { return value != kUnreached; }
};

/// Regular row-major density field: sample (it, ix) is at
/// (x0 + ix*dx, t0 + it*dt).
struct DensityField {
  double x0 = 0.0;
  double dx = 0.0;
  std::size_t nx = 0;
  double t0 = 0.0;
  double dt = 0.0;
  std::size_t nt = 0;
  std::vector<double> k;

  double at(std::size_t it, std::size_t ix) const { return k[it * nx + ix]; }
};

/// Cumulative-count solution: the value condition (initial, boundary and
/// internal blocks) plus an evaluator computing N(x, t) as the pointwise
/// minimum of per-block components. Immutable except for appending or
/// extending internal blocks, which only ever lowers values.
class MoskowitzSolution {
public:
  MoskowitzSolution(FundamentalDiagram fd, Domain dom,
                    std::vector<InitialBlock> initial,
                    std::vector<UpstreamBlock> upstream,
                    std::vector<DownstreamBlock> downstream);

  /// Minimum over all block components. Ties pick the first block in the
  /// fixed order initial, upstream, downstream, internal (list order within
  /// each). Throws std::domain_error outside the domain rectangle.
  EvalResult evaluate(double x, double t) const;

  /// Density from a central difference of N over probe length delta_x,
  /// clamped to [0, k_j]. Falls back to a one-sided difference when the
  /// probe would leave the domain.
  double density(double x, double t, double delta_x) const;

  /// Density field on the regular grid with spacing (dx, dt_out), inclusive
  /// of domain edges. The difference probe is max(2*dx, 1 m). Rows are
  /// computed in parallel.
  DensityField grid(double dx, double dt_out) const;

  std::size_t add_internal(const InternalBlock& blk);
  void extend_internal(std::size_t index, double t_e, double x_e, double N_e);

  const FundamentalDiagram& fd() const { return fd_; }
  const Domain& domain() const { return dom_; }
  const std::vector<InitialBlock>& initial() const { return initial_; }
  const std::vector<UpstreamBlock>& upstream() const { return upstream_; }
  const std::vector<DownstreamBlock>& downstream() const { return downstream_; }
  const std::vector<InternalBlock>& internal() const { return internal_; }

private:
  FundamentalDiagram fd_;
  Domain dom_;
  std::vector<InitialBlock> initial_;
  std::vector<UpstreamBlock> upstream_;
  std::vector<DownstreamBlock> downstream_;
  std::vector<InternalBlock> internal_;
};

}  // namespace lwr
