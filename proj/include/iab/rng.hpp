#pragma once

#include <cstdint>
#include <random>

namespace iab {

using Rng = std::mt19937_64;

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z);

// Independent stream `index` of a root seed. Streams depend only on
// (root, index), never on which thread consumes them.
Rng make_stream(std::uint64_t root, std::uint64_t index);

// Child seed for a sub-experiment (e.g. one sweep point).
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index);

}  // namespace iab
