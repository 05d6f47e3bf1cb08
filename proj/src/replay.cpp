#include "rrl/replay.hpp"

#include <cmath>
#include <stdexcept>

#include "rrl/matrix.hpp"

namespace rrl {

ReplayBuffer::ReplayBuffer(std::size_t capacity, std::size_t state_dim,
                           std::size_t action_dim, std::size_t disturbance_dim)
    : capacity_(capacity), state_dim_(state_dim), action_dim_(action_dim),
      disturbance_dim_(disturbance_dim) {
  if (capacity_ == 0) throw std::invalid_argument("replay: capacity must be >= 1");
  storage_.reserve(capacity_);
}

void ReplayBuffer::store(Transition t) {
  if (t.state.size() != state_dim_ || t.next_state.size() != state_dim_)
    throw std::invalid_argument("replay: state dimension mismatch");
  if (t.action.size() != action_dim_)
    throw std::invalid_argument("replay: action dimension mismatch");
  if (t.disturbance.size() != disturbance_dim_)
    throw std::invalid_argument("replay: disturbance dimension mismatch");
  if (!std::isfinite(t.cost) || t.cost <= 0.0)
    throw std::invalid_argument("replay: cost must be finite and > 0");
  if (!all_finite(t.state) || !all_finite(t.action) || !all_finite(t.disturbance) ||
      !all_finite(t.next_state))
    throw std::invalid_argument("replay: non-finite transition entry");

  if (storage_.size() < capacity_) {
    storage_.push_back(std::move(t));
  } else {
    storage_[write_cursor_] = std::move(t);
  }
  write_cursor_ = (write_cursor_ + 1) % capacity_;
  if (len_ < capacity_) ++len_;
}

std::optional<std::vector<Transition>> ReplayBuffer::sample_uniform(
    std::size_t batch_size, Rng& rng) const {
  if (batch_size == 0 || len_ < batch_size) return std::nullopt;
  std::vector<Transition> batch;
  batch.reserve(batch_size);
  for (std::size_t i = 0; i < batch_size; ++i)
    batch.push_back(storage_[rng.uniform_int(len_)]);
  return batch;
}

const Transition& ReplayBuffer::at(std::size_t logical_index) const {
  if (logical_index >= len_) throw std::out_of_range("replay: index out of range");
  if (len_ < capacity_) return storage_[logical_index];
  return storage_[(write_cursor_ + logical_index) % capacity_];
}

}  // namespace rrl
