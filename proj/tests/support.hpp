#pragma once

#include <random>
#include <string>
#include <vector>

#include "lwr/scenario.hpp"

namespace lwrtest {

inline std::string fixture(const std::string& name) {
  return std::string(LWRSIM_FIXTURE_DIR) + "/" + name;
}

/// Reference diagram used throughout: v=30, k_c=0.04, k_j=0.2, so w=7.5 and
/// q_max=1.2.
inline lwr::FundamentalDiagram ref_fd() {
  return lwr::FundamentalDiagram(30.0, 7.5, 0.04, 0.2);
}

/// Uniform free-flow state k=0.02 with matching boundary flows 0.6 veh/s on
/// a 3000 m x 300 s domain.
inline lwr::Scenario uniform_scenario() {
  lwr::Scenario sc(ref_fd());
  sc.lanes = 2;
  sc.domain = lwr::Domain{0.0, 3000.0, 300.0};
  sc.initial = {{0.0, 3000.0, 0.02}};
  sc.upstream = {{0.0, 300.0, 0.6}};
  sc.downstream = {{0.0, 300.0, 0.6}};
  return sc;
}

/// Random but always-valid scenario: contiguous piecewise conditions,
/// optional movers and signals.
inline lwr::Scenario random_scenario(std::mt19937_64& rng, int max_movers = 5,
                                     int max_signals = 2) {
  lwr::Scenario sc(ref_fd());
  sc.lanes = 2;
  sc.domain = lwr::Domain{0.0, 3000.0, 300.0};

  std::uniform_int_distribution<int> n_init(2, 6);
  std::uniform_real_distribution<double> kpick(0.0, sc.fd.k_j());
  const int ni = n_init(rng);
  for (int i = 0; i < ni; ++i) {
    const double lo = 3000.0 * i / ni;
    const double hi = 3000.0 * (i + 1) / ni;
    sc.initial.push_back({lo, hi, kpick(rng)});
  }

  std::uniform_int_distribution<int> n_bd(1, 4);
  std::uniform_real_distribution<double> qpick(0.0, sc.fd.q_max());
  auto make_flows = [&](std::vector<lwr::FlowPiece>& out) {
    const int nb = n_bd(rng);
    for (int j = 0; j < nb; ++j)
      out.push_back({300.0 * j / nb, 300.0 * (j + 1) / nb, qpick(rng)});
  };
  make_flows(sc.upstream);
  make_flows(sc.downstream);

  std::uniform_int_distribution<int> n_mv(0, max_movers);
  std::uniform_real_distribution<double> xpick(100.0, 2000.0);
  std::uniform_real_distribution<double> tpick(0.0, 250.0);
  std::uniform_real_distribution<double> vpick(3.0, 15.0);
  const int nm = n_mv(rng);
  for (int m = 0; m < nm; ++m)
    sc.movers.push_back({xpick(rng), tpick(rng), 3000.0, vpick(rng)});

  std::uniform_int_distribution<int> n_sg(0, max_signals);
  std::uniform_real_distribution<double> spick(200.0, 2800.0);
  std::uniform_real_distribution<double> cpick(60.0, 240.0);
  std::uniform_real_distribution<double> gfrac(0.3, 0.8);
  std::uniform_real_distribution<double> opick(0.0, 100.0);
  const int ns = n_sg(rng);
  for (int s = 0; s < ns; ++s) {
    const double cycle = cpick(rng);
    sc.signals.push_back({spick(rng), cycle, gfrac(rng) * cycle, opick(rng)});
  }
  return sc;
}

}  // namespace lwrtest
