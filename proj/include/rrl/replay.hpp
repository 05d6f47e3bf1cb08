#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "rrl/rng.hpp"

namespace rrl {

// One environment step: (s, a, w, c, s', terminal).
struct Transition {
  std::vector<double> state;
  std::vector<double> action;
  std::vector<double> disturbance;
  double cost = 0.0;
  std::vector<double> next_state;
  bool terminal = false;
};

// Fixed-capacity FIFO ring with uniform sampling (with replacement).
class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, std::size_t state_dim, std::size_t action_dim,
               std::size_t disturbance_dim);

  // Validates dimensions, finiteness and cost positivity; throws
  // std::invalid_argument on violation.
  void store(Transition t);

  // Empty when fewer than batch_size transitions are stored (warm-up gate).
  std::optional<std::vector<Transition>> sample_uniform(std::size_t batch_size,
                                                        Rng& rng) const;

  std::size_t size() const { return len_; }
  std::size_t capacity() const { return capacity_; }
  const Transition& at(std::size_t logical_index) const;  // 0 = oldest

 private:
  std::size_t capacity_;
  std::size_t state_dim_, action_dim_, disturbance_dim_;
  std::vector<Transition> storage_;
  std::size_t write_cursor_ = 0;
  std::size_t len_ = 0;
};

}  // namespace rrl
