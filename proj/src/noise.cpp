#include "rrl/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace rrl {

OuProcess::OuProcess(std::size_t dim_, double theta_, double sigma_, double dt_,
                     std::vector<double> mu_)
    : dim(dim_), theta(theta_), sigma(sigma_), dt(dt_), mu(std::move(mu_)) {
  if (dim == 0) throw std::invalid_argument("ou: dim must be >= 1");
  if (theta < 0.0 || sigma < 0.0 || dt <= 0.0)
    throw std::invalid_argument("ou: need theta >= 0, sigma >= 0, dt > 0");
  if (mu.empty()) mu.assign(dim, 0.0);
  if (mu.size() != dim) throw std::invalid_argument("ou: mu dimension mismatch");
  xi = mu;
}

const std::vector<double>& OuProcess::step(Rng& rng) {
  const double sqrt_dt = std::sqrt(dt);
  for (std::size_t i = 0; i < dim; ++i)
    xi[i] += theta * (mu[i] - xi[i]) * dt + sigma * sqrt_dt * rng.normal();
  return xi;
}

void OuProcess::reset() { xi = mu; }

}  // namespace rrl
