#include "lwr/conditions.hpp"

#include <cmath>
#include <string>

#include "lwr/errors.hpp"

namespace lwr {

namespace {

constexpr double kJunctionTol = 1e-9;

void check_contiguous_time(const std::vector<FlowPiece>& pieces,
                           const FundamentalDiagram& fd, const char* which) {
  if (pieces.empty())
    throw schema_error(std::string(which) + ": no flow pieces");
  if (std::abs(pieces.front().t_lo) > kJunctionTol)
    throw schema_error(std::string(which) + ": pieces must start at t = 0");
  for (std::size_t j = 0; j < pieces.size(); ++j) {
    const FlowPiece& p = pieces[j];
    if (!(p.t_lo < p.t_hi))
      throw schema_error(std::string(which) + ": piece " + std::to_string(j) +
                         " has t_lo >= t_hi");
    if (p.rate < 0.0 || p.rate > fd.q_max())
      throw std::domain_error(std::string(which) + ": piece " +
                              std::to_string(j) +
                              " flow outside [0, q_max]");
    if (j > 0 && std::abs(p.t_lo - pieces[j - 1].t_hi) > kJunctionTol)
      throw schema_error(std::string(which) + ": gap or overlap between pieces " +
                         std::to_string(j - 1) + " and " + std::to_string(j));
  }
}

}  // namespace

std::vector<InitialBlock> build_initial(const FundamentalDiagram& fd,
                                        const std::vector<DensityPiece>& pieces,
                                        double x_origin) {
  if (pieces.empty()) throw schema_error("initial: no density pieces");
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const DensityPiece& p = pieces[i];
    if (!(p.x_lo < p.x_hi))
      throw schema_error("initial: piece " + std::to_string(i) +
                         " has x_lo >= x_hi");
    if (p.k < 0.0 || p.k > fd.k_j())
      throw std::domain_error("initial: piece " + std::to_string(i) +
                              " density outside [0, k_j]");
    if (i > 0 && std::abs(p.x_lo - pieces[i - 1].x_hi) > kJunctionTol)
      throw schema_error("initial: gap or overlap between pieces " +
                         std::to_string(i - 1) + " and " + std::to_string(i));
  }

  // First pass: continuity with value 0 at the left edge of the coverage.
  std::vector<InitialBlock> blocks;
  blocks.reserve(pieces.size());
  double val = 0.0;  // value at the current piece's left edge
  for (const DensityPiece& p : pieces) {
    blocks.push_back(InitialBlock{p.x_lo, p.x_hi, p.k, val + p.k * p.x_lo});
    val -= p.k * (p.x_hi - p.x_lo);
  }

  // Shift so the value at x_origin is exactly 0.
  double at_origin = blocks.front().value_at(x_origin);
  for (const InitialBlock& blk : blocks)
    if (x_origin >= blk.x_lo && x_origin <= blk.x_hi)
      at_origin = blk.value_at(x_origin);
  for (InitialBlock& blk : blocks) blk.b -= at_origin;
  return blocks;
}

std::vector<UpstreamBlock> build_upstream(const FundamentalDiagram& fd,
                                          const std::vector<FlowPiece>& pieces) {
  check_contiguous_time(pieces, fd, "upstream");
  std::vector<UpstreamBlock> blocks;
  blocks.reserve(pieces.size());
  double val = 0.0;  // cumulative count at the current piece's start
  for (const FlowPiece& p : pieces) {
    blocks.push_back(UpstreamBlock{p.t_lo, p.t_hi, p.rate, val - p.rate * p.t_lo});
    val += p.rate * (p.t_hi - p.t_lo);
  }
  return blocks;
}

std::vector<DownstreamBlock> build_downstream(
    const FundamentalDiagram& fd, const std::vector<FlowPiece>& pieces,
    double initial_count_at_exit) {
  check_contiguous_time(pieces, fd, "downstream");
  std::vector<DownstreamBlock> blocks;
  blocks.reserve(pieces.size());
  double val = initial_count_at_exit;
  for (const FlowPiece& p : pieces) {
    blocks.push_back(DownstreamBlock{p.t_lo, p.t_hi, p.rate, val - p.rate * p.t_lo});
    val += p.rate * (p.t_hi - p.t_lo);
  }
  return blocks;
}

void validate_internal(const InternalBlock& blk, const FundamentalDiagram& fd) {
  if (!(blk.t_b < blk.t_e))
    throw std::invalid_argument("InternalBlock: t_b must be < t_e");
  const double s = blk.speed();
  if (s < -fd.w() - kJunctionTol || s > fd.v() + kJunctionTol)
    throw std::invalid_argument("InternalBlock: speed outside [-w, v]");
  if (blk.rate() < -kJunctionTol)
    throw std::invalid_argument("InternalBlock: negative passing rate");
}

}  // namespace lwr
