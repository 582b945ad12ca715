#include <doctest.h>

#include <algorithm>
#include <random>

#include "lwr/fundamental_diagram.hpp"
#include "support.hpp"

using namespace lwr;

// Independent check of the closed-form transform: brute-force sup over a
// dense density grid of Q(k) - u*k.
static double sampled_sup_transform(const FundamentalDiagram& fd, double u,
                                    int grid_points) {
  double best = -1e300;
  for (int i = 0; i <= grid_points; ++i) {
    const double k = fd.k_j() * i / grid_points;
    best = std::max(best, flow(fd, k) - u * k);
  }
  return best;
}

TEST_CASE("constructor enforces the capacity identity") {
  CHECK_NOTHROW(FundamentalDiagram(30.0, 7.5, 0.04, 0.2));
  CHECK_THROWS_AS(FundamentalDiagram(30.0, 8.0, 0.04, 0.2),
                  std::invalid_argument);
  CHECK_THROWS_AS(FundamentalDiagram(-1.0, 7.5, 0.04, 0.2),
                  std::invalid_argument);
  CHECK_THROWS_AS(FundamentalDiagram(30.0, 7.5, 0.2, 0.04),
                  std::invalid_argument);
  const FundamentalDiagram derived =
      FundamentalDiagram::with_derived_w(30.0, 0.04, 0.2);
  CHECK(derived.w() == doctest::Approx(7.5).epsilon(1e-12));
  CHECK(derived.q_max() == doctest::Approx(1.2).epsilon(1e-12));
}

TEST_CASE("flow values") {
  const FundamentalDiagram fd = lwrtest::ref_fd();
  CHECK(flow(fd, 0.0) == 0.0);
  CHECK(flow(fd, 0.04) == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(std::abs(flow(fd, 0.2)) < 1e-12);
  CHECK(flow(fd, 0.12) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK_THROWS_AS(flow(fd, -0.01), std::domain_error);
  CHECK_THROWS_AS(flow(fd, 0.21), std::domain_error);
}

TEST_CASE("flow is concave piecewise linear, zero at both ends, peaked at k_c") {
  const FundamentalDiagram fd = lwrtest::ref_fd();
  CHECK(flow(fd, 0.0) == 0.0);
  CHECK(std::abs(flow(fd, fd.k_j())) < 1e-12);
  const double peak = flow(fd, fd.k_c());
  CHECK(peak == doctest::Approx(fd.q_max()).epsilon(1e-12));
  for (int i = 1; i < 100; ++i) {
    const double k = fd.k_j() * i / 100.0;
    CHECK(flow(fd, k) <= peak + 1e-12);
    const double kl = fd.k_j() * (i - 1) / 100.0;
    const double kr = fd.k_j() * (i + 1) / 100.0;
    // Midpoint concavity.
    CHECK(flow(fd, k) >= 0.5 * (flow(fd, kl) + flow(fd, kr)) - 1e-12);
  }
}

TEST_CASE("legendre transform values") {
  const FundamentalDiagram fd = lwrtest::ref_fd();
  CHECK(std::abs(legendre_transform(fd, fd.v())) < 1e-12);
  CHECK(legendre_transform(fd, -7.5) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(legendre_transform(fd, 0.0) == doctest::Approx(1.2).epsilon(1e-12));
  CHECK_THROWS_AS(legendre_transform(fd, -7.6), std::domain_error);
  CHECK_THROWS_AS(legendre_transform(fd, 30.1), std::domain_error);
}

TEST_CASE("legendre transform matches the sampled sup over the diagram") {
  const FundamentalDiagram fd = lwrtest::ref_fd();
  for (int i = 0; i <= 200; ++i) {
    const double u = -fd.w() + (fd.v() + fd.w()) * i / 200.0;
    const double closed = legendre_transform(fd, u);
    const double sampled = sampled_sup_transform(fd, u, 10000);
    CHECK(std::abs(closed - sampled) < 1e-6);
  }
}

TEST_CASE("max passing rate") {
  const FundamentalDiagram fd = lwrtest::ref_fd();
  CHECK(max_passing_rate(fd, 5.0, 2) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(max_passing_rate(fd, 17.0, 1) == 0.0);
  const FundamentalDiagram fd2 =
      FundamentalDiagram::with_derived_w(30.0, 0.02, 0.1);
  CHECK(max_passing_rate(fd2, 20.0, 2) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK_THROWS_AS(max_passing_rate(fd, 31.0, 2), std::domain_error);
  CHECK_THROWS_AS(max_passing_rate(fd, 5.0, 0), std::domain_error);
}

TEST_CASE("congested speed") {
  const FundamentalDiagram fd = lwrtest::ref_fd();
  CHECK(std::abs(congested_speed(fd, fd.k_j())) < 1e-12);
  CHECK(congested_speed(fd, 0.1) == doctest::Approx(7.5).epsilon(1e-12));
  CHECK(congested_speed(fd, 0.04) == doctest::Approx(30.0).epsilon(1e-12));
  CHECK_THROWS_AS(congested_speed(fd, 0.039), std::domain_error);
  CHECK_THROWS_AS(congested_speed(fd, 0.21), std::domain_error);
}

TEST_CASE("congested speed equals the congested-branch flow slope q/k") {
  const FundamentalDiagram fd = lwrtest::ref_fd();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> kpick(fd.k_c(), fd.k_j());
  for (int i = 0; i < 200; ++i) {
    const double k0 = kpick(rng);
    CHECK(std::abs(flow(fd, k0) / k0 - congested_speed(fd, k0)) < 1e-9);
  }
}
