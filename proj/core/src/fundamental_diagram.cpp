#include "lwr/fundamental_diagram.hpp"

#include <cmath>

namespace lwr {

FundamentalDiagram::FundamentalDiagram(double v, double w, double k_c,
                                       double k_j)
    : v_(v), w_(w), k_c_(k_c), k_j_(k_j) {
  if (!(v > 0.0)) throw std::invalid_argument("FundamentalDiagram: v must be > 0");
  if (!(w > 0.0)) throw std::invalid_argument("FundamentalDiagram: w must be > 0");
  if (!(k_c > 0.0 && k_c < k_j))
    throw std::invalid_argument("FundamentalDiagram: need 0 < k_c < k_j");
  const double lhs = v * k_c;
  const double rhs = w * (k_j - k_c);
  if (std::abs(lhs - rhs) > 1e-9 * std::abs(lhs))
    throw std::invalid_argument(
        "FundamentalDiagram: capacity inconsistency, v*k_c != w*(k_j - k_c)");
}

FundamentalDiagram FundamentalDiagram::with_derived_w(double v, double k_c,
                                                      double k_j) {
  if (!(k_c > 0.0 && k_c < k_j))
    throw std::invalid_argument("FundamentalDiagram: need 0 < k_c < k_j");
  return FundamentalDiagram(v, v * k_c / (k_j - k_c), k_c, k_j);
}

}  // namespace lwr
