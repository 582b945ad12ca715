#pragma once

#include <stdexcept>

namespace lwr {

/// Triangular flow-density relation.
///
/// The congested wave speed w is stored as a positive magnitude; the
/// congested branch of the flow law has slope -w. Capacity q_max = v*k_c is
/// always derived, never stored, so v*k_c = w*(k_j - k_c) cannot drift.
class FundamentalDiagram {
public:
  /// Throws std::invalid_argument unless v > 0, w > 0, 0 < k_c < k_j and
  /// v*k_c matches w*(k_j - k_c) to 1e-9 relative.
  FundamentalDiagram(double v, double w, double k_c, double k_j);

  /// Convenience: w implied by the capacity identity v*k_c = w*(k_j - k_c).
  static FundamentalDiagram with_derived_w(double v, double k_c, double k_j);

  double v() const { return v_; }
  double w() const { return w_; }
  double k_c() const { return k_c_; }
  double k_j() const { return k_j_; }
  double q_max() const { return v_ * k_c_; }

private:
  double v_;
  double w_;
  double k_c_;
  double k_j_;
};

/// Flow Q(k): v*k on [0, k_c], -w*(k - k_c) + v*k_c on [k_c, k_j].
inline double flow(const FundamentalDiagram& fd, double k) {
  if (!(k >= 0.0) || k > fd.k_j())
    throw std::domain_error("flow: density outside [0, k_j]");
  if (k <= fd.k_c()) return fd.v() * k;
  return -fd.w() * (k - fd.k_c()) + fd.v() * fd.k_c();
}

/// Convex transform R(u) = sup_k (Q(k) - u*k) = k_c*(v - u) for u in [-w, v].
inline double legendre_transform(const FundamentalDiagram& fd, double u) {
  if (u < -fd.w() || u > fd.v())
    throw std::domain_error("legendre_transform: observer speed outside [-w, v]");
  return fd.k_c() * (fd.v() - u);
}

/// Maximum rate at which traffic can overtake a bottleneck moving at v_max
/// on a road with `lanes` lanes: (v - v_max)*k_c*(lanes - 1)/lanes.
inline double max_passing_rate(const FundamentalDiagram& fd, double v_max,
                               int lanes) {
  if (v_max < 0.0 || v_max > fd.v())
    throw std::domain_error("max_passing_rate: v_max outside [0, v]");
  if (lanes < 1)
    throw std::domain_error("max_passing_rate: lane count must be >= 1");
  return (fd.v() - v_max) * fd.k_c() * (lanes - 1) / lanes;
}

/// Speed of traffic on the congested branch at density k0:
/// -w*(k0 - k_j)/k0, which equals Q(k0)/k0 there.
inline double congested_speed(const FundamentalDiagram& fd, double k0) {
  if (k0 < fd.k_c() || k0 > fd.k_j())
    throw std::domain_error("congested_speed: density outside [k_c, k_j]");
  if (k0 <= 0.0) throw std::domain_error("congested_speed: zero density");
  return -fd.w() * (k0 - fd.k_j()) / k0;
}

}  // namespace lwr
