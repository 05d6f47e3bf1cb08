#pragma once

#include <vector>

#include "rrl/rng.hpp"

namespace rrl {

// Ornstein-Uhlenbeck exploration noise:
//   xi_{k+1} = xi_k + theta * (mu - xi_k) * dt + sigma * sqrt(dt) * eps_k
// with eps_k ~ N(0, I). With dt = 1 this is a plain AR(1) process.
struct OuProcess {
  OuProcess(std::size_t dim, double theta, double sigma, double dt = 1.0,
            std::vector<double> mu = {});

  const std::vector<double>& step(Rng& rng);
  void reset();  // xi <- mu, at episode start

  std::size_t dim;
  double theta;
  double sigma;
  double dt;
  std::vector<double> mu;
  std::vector<double> xi;
};

}  // namespace rrl
