#pragma once

#include <cstdint>
#include <string>

#include "rrl/agents.hpp"

namespace rrl {

// Binary checkpoint holding every network (layer sizes, weights, biases,
// targets) and Adam state, plus the owning run's config hash. Doubles are
// written raw, so a load reproduces bit-identical policy outputs.
void save_checkpoint(const std::string& path, Agent& agent, std::uint64_t config_hash);

// Loads into an agent constructed with matching algorithm and dimensions;
// throws std::runtime_error on format or shape mismatch.
// Returns the stored config hash.
std::uint64_t load_checkpoint(const std::string& path, Agent& agent);

// Algorithm name stored in a checkpoint without loading the networks.
std::string peek_checkpoint_algorithm(const std::string& path);

}  // namespace rrl
