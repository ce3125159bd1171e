#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "hodoshock/model_core.hpp"
#include "hodoshock/numerics.hpp"

using namespace hodoshock;

namespace {
// independent bisection root of (1/4)(q^2 - u^2)u = flux on [q/sqrt(3), q]
double bisect_ubar(double flux, double q) {
  double lo = q / std::sqrt(3.0), hi = q;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f = 0.25 * (q * q - mid * mid) * mid;
    (f > flux ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}
}  // namespace

TEST_CASE("gas relations at gamma = 2", "[model_core]") {
  FlowConstants fc(1.0);
  CHECK(density({0.0, 0.0}, fc) == Catch::Approx(0.25));
  CHECK(density({0.2, 0.4}, fc) == Catch::Approx(0.2));
  CHECK(sound_speed_sq({0.2, 0.4}, fc) == Catch::Approx(0.4));
  CHECK(sound_speed_sq({0.0, 0.0}, fc) == Catch::Approx(0.5));

  // limit-speed vacuum and the guard beyond it
  CHECK(density({0.0, 1.0 - 1e-9}, fc) < 1e-8);
  CHECK_THROWS_AS(density({1.0, 0.1}, fc), NonPhysicalState);

  // sonic state where q^2 = c^2 sits at q = q_bar/sqrt(3)
  const double qs = 1.0 / std::sqrt(3.0);
  CHECK(sound_speed_sq({qs, 0.0}, fc) == Catch::Approx(qs * qs));

  // c^2 = 2 rho identically for gamma = 2
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> d(-0.4, 0.4);
  for (int i = 0; i < 100; ++i) {
    Velocity U{d(rng), std::abs(d(rng))};
    CHECK(sound_speed_sq(U, fc) ==
          Catch::Approx(2.0 * density(U, fc)).epsilon(1e-14));
  }

  CHECK_THROWS_AS(FlowConstants(1.0, 1.4), BadState);
  CHECK_THROWS_AS(FlowConstants(-1.0), BadState);
}

TEST_CASE("incoming flow from mass flux", "[model_core]") {
  FlowConstants fc(1.0);
  const IncomingFlow zero = incoming_from_flux(0.0, fc);
  CHECK(zero.u_in == 1.0);
  CHECK(zero.rho_in == 0.0);

  const IncomingFlow in = incoming_from_flux(1e-3, fc);
  CHECK(in.u_in == Catch::Approx(bisect_ubar(1e-3, 1.0)).epsilon(1e-10));
  CHECK(std::abs(in.rho_in * in.u_in - 1e-3) < 1e-13);

  // monotone near q_bar: larger flux, smaller u_in
  double prev = 1.0;
  for (double e : {1e-4, 1e-3, 5e-3, 1e-2}) {
    const double u = incoming_from_flux(e, fc).u_in;
    CHECK(u < prev);
    prev = u;
  }

  // near the maximum it converges; above it is rejected
  CHECK_NOTHROW(incoming_from_flux(0.95 * fc.eps_max(), fc));
  CHECK_THROWS_AS(incoming_from_flux(1.01 * fc.eps_max(), fc),
                  FluxTooLarge);
  CHECK_THROWS_AS(incoming_from_flux(-1e-5, fc), FluxTooLarge);

  // eps_max matches the analytic critical value q^3/(6 sqrt(3))
  CHECK(fc.eps_max() ==
        Catch::Approx(1.0 / (6.0 * std::sqrt(3.0))).epsilon(1e-14));

  // q_bar != 1 scaling: eps_max homogeneous of degree 3
  FlowConstants fc2(2.0);
  CHECK(fc2.eps_max() == Catch::Approx(8.0 * fc.eps_max()).epsilon(1e-14));
}

TEST_CASE("shock polar G and its gradient", "[model_core]") {
  FlowConstants fc(1.0);
  const IncomingFlow limit = incoming_from_flux(0.0, fc);

  // on the limit circle u^2 + v^2 = q u
  CHECK(polar_G({0.2, 0.4}, limit, fc) == Catch::Approx(0.0).margin(1e-15));
  // off the circle: u(u - q) + v^2
  CHECK(polar_G({0.3, 0.3}, limit, fc) == Catch::Approx(-0.12));
  // normal-shock point has v = 0 and u = u_in
  const IncomingFlow in = incoming_from_flux(2e-3, fc);
  CHECK(polar_G({in.u_in, 0.0}, in, fc) == Catch::Approx(0.0).margin(1e-15));

  // gradient at eps = 0 is (2u - q, 2v)
  const Gradient g0 = polar_grad({0.2, 0.4}, limit, fc);
  CHECK(g0.du == Catch::Approx(-0.6));
  CHECK(g0.dv == Catch::Approx(0.8));

  // analytic gradient vs Richardson central differences, random states
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dk(0.05, 0.69);
  std::uniform_real_distribution<double> de(0.0, 5e-3);
  for (int i = 0; i < 1000; ++i) {
    const IncomingFlow inf = incoming_from_flux(de(rng), fc);
    const Velocity U = limit_polar_point(dk(rng), fc);
    const Gradient gr = polar_grad(U, inf, fc);
    const double fdu = num::fd_richardson(
        [&](double x) { return polar_G({x, U.v}, inf, fc); }, U.u, 1e-5);
    const double fdv = num::fd_richardson(
        [&](double x) { return polar_G({U.u, x}, inf, fc); }, U.v, 1e-5);
    CHECK(gr.du == Catch::Approx(fdu).epsilon(1e-8));
    CHECK(gr.dv == Catch::Approx(fdv).epsilon(1e-8));
  }
}

TEST_CASE("limit polar point", "[model_core]") {
  FlowConstants fc(1.0);
  const Velocity U = limit_polar_point(0.5, fc);
  CHECK(U.u == Catch::Approx(0.2).epsilon(1e-14));
  CHECK(U.v == Catch::Approx(0.4).epsilon(1e-14));

  // k -> 0 approaches the origin of the circle
  const Velocity small = limit_polar_point(1e-6, fc);
  CHECK(small.speed() < 2e-6);

  // upper sonic point at k = 1/sqrt(2)
  const double ks = 1.0 / std::sqrt(2.0) - 1e-15;
  const Velocity S = limit_polar_point(ks, fc);
  CHECK(S.u == Catch::Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(S.v == Catch::Approx(std::sqrt(2.0) / 3.0).epsilon(1e-9));

  CHECK_THROWS_AS(limit_polar_point(0.0, fc), BadSlope);
  CHECK_THROWS_AS(limit_polar_point(0.8, fc), BadSlope);

  // circle membership and slope round-trip at many k
  for (int i = 1; i < 200; ++i) {
    const double k = 0.703 * i / 200.0 + 1e-3;
    const Velocity P = limit_polar_point(k, fc);
    CHECK(std::abs(P.u * P.u + P.v * P.v - P.u) < 1e-14);
    CHECK(std::abs(P.u / P.v - k) < 1e-14);
  }
}

TEST_CASE("polar point off the limit circle", "[model_core]") {
  FlowConstants fc(1.0);
  const IncomingFlow limit = incoming_from_flux(0.0, fc);
  const Velocity L = polar_point(0.5, limit, fc);
  const Velocity L0 = limit_polar_point(0.5, fc);
  CHECK(L.u == L0.u);
  CHECK(L.v == L0.v);

  const IncomingFlow in = incoming_from_flux(1e-3, fc);
  const Velocity P = polar_point(0.5, in, fc);
  CHECK(std::abs(polar_G(P, in, fc)) < 1e-12);
  CHECK(std::abs(P.u - 0.5 * P.v) < 1e-13);
  CHECK(in.u_in > P.speed());  // entropy condition

  // independent oracle: bisection along the ray u = k v
  const double k = 0.5;
  double lo = 0.3, hi = 0.5;  // bracketing v values around the root
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double g = polar_G({k * mid, mid}, in, fc);
    (g < 0.0 ? hi : lo) = mid;
  }
  CHECK(P.v == Catch::Approx(0.5 * (lo + hi)).epsilon(1e-10));
}
