#include <doctest.h>

#include <cmath>

#include "rrl/noise.hpp"

using namespace rrl;

TEST_SUITE("noise") {

TEST_CASE("theta = 0 and sigma = 0 leave xi unchanged forever") {
  OuProcess proc(2, 0.0, 0.0);
  proc.xi = {0.4, -0.7};
  Rng rng(1);
  for (int k = 0; k < 50; ++k) proc.step(rng);
  CHECK(proc.xi[0] == 0.4);
  CHECK(proc.xi[1] == -0.7);
}

TEST_CASE("deterministic mean reversion: theta 0.15, dt 1, xi0 1 gives 0.85") {
  OuProcess proc(1, 0.15, 0.0, 1.0);
  proc.xi = {1.0};
  Rng rng(1);
  proc.step(rng);
  CHECK(proc.xi[0] == doctest::Approx(0.85).epsilon(1e-15));
}

TEST_CASE("with sigma 0 the gap to mu decays geometrically by (1 - theta*dt)") {
  OuProcess proc(1, 0.2, 0.0, 1.0, {0.5});
  proc.xi = {2.0};
  Rng rng(1);
  double gap = 1.5;
  for (int k = 0; k < 20; ++k) {
    proc.step(rng);
    gap *= 0.8;
    CHECK(std::fabs(proc.xi[0] - 0.5 - gap) < 1e-12);
  }
}

TEST_CASE("reset returns xi to mu and holds there when frozen") {
  OuProcess proc(3, 0.0, 0.0, 1.0, {0.1, 0.2, 0.3});
  proc.xi = {9, 9, 9};
  proc.reset();
  CHECK(proc.xi[0] == 0.1);
  CHECK(proc.xi[1] == 0.2);
  CHECK(proc.xi[2] == 0.3);
  Rng rng(2);
  proc.step(rng);
  CHECK(proc.xi[0] == 0.1);
}

TEST_CASE("same seed stream after reset reproduces the sample path") {
  OuProcess a(2, 0.15, 0.2), b(2, 0.15, 0.2);
  Rng rng_a(77), rng_b(77);
  a.reset();
  b.reset();
  for (int k = 0; k < 100; ++k) {
    a.step(rng_a);
    b.step(rng_b);
    CHECK(a.xi[0] == b.xi[0]);
    CHECK(a.xi[1] == b.xi[1]);
  }
}

TEST_CASE("stationary variance over 1e6 steps is within 5% of the AR(1) value") {
  const double theta = 0.15, sigma = 0.2, dt = 1.0;
  OuProcess proc(1, theta, sigma, dt);
  Rng rng(2024);
  const int burn_in = 10000, steps = 1000000;
  for (int k = 0; k < burn_in; ++k) proc.step(rng);
  double sum = 0.0, sum_sq = 0.0;
  for (int k = 0; k < steps; ++k) {
    proc.step(rng);
    sum += proc.xi[0];
    sum_sq += proc.xi[0] * proc.xi[0];
  }
  const double mean = sum / steps;
  const double var = sum_sq / steps - mean * mean;
  const double phi = 1.0 - theta * dt;
  const double stationary = sigma * sigma * dt / (1.0 - phi * phi);
  CHECK(std::fabs(var - stationary) / stationary < 0.05);
  // long-run mean reverts to mu = 0
  CHECK(std::fabs(mean) < 0.02);
}

}  // TEST_SUITE
