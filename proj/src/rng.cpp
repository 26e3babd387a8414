#include "iab/rng.hpp"

namespace iab {

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) {
    return mix64(mix64(root) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

Rng make_stream(std::uint64_t root, std::uint64_t index) { return Rng(derive_seed(root, index)); }

}  // namespace iab
