#pragma once

#include <string>
#include <vector>

#include "lwr/bottleneck.hpp"
#include "lwr/conditions.hpp"
#include "lwr/fundamental_diagram.hpp"
#include "lwr/lax_hopf.hpp"
#include "lwr/scheduler.hpp"

namespace lwr {

/// A complete simulation input: diagram, link geometry, piecewise value
/// conditions and the exogenous bottlenecks.
struct Scenario {
  explicit Scenario(FundamentalDiagram diagram) : fd(diagram) {}

  FundamentalDiagram fd;
  int lanes = 1;
  Domain domain{0.0, 0.0, 0.0};
  std::vector<DensityPiece> initial;
  std::vector<FlowPiece> upstream;
  std::vector<FlowPiece> downstream;
  std::vector<MovingBottleneckSpec> movers;
  std::vector<TrafficSignalSpec> signals;
  std::string notes;
};

/// Validates cross-field constraints (coverage, spec ranges). Throws
/// schema_error with the offending field named.
void validate_scenario(const Scenario& sc);

/// Initial cumulative count at position x (zero at the domain entry).
double initial_count_at(const Scenario& sc, double x);

/// Builds the base solution: initial blocks anchored at x0, boundary blocks
/// anchored for corner compatibility. Bottlenecks are not propagated here.
MoskowitzSolution build_solution(const Scenario& sc);

}  // namespace lwr
