#include "aed/sim/rng.hpp"

namespace aed::sim {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index,
                          std::uint32_t stage_tag) {
    std::uint64_t h = splitmix64(master_seed);
    h = splitmix64(h ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
    h = splitmix64(h ^ (static_cast<std::uint64_t>(stage_tag) * 0xD6E8FEB86659FD93ULL));
    return h;
}

Rng derive_stream(std::uint64_t master_seed, std::uint64_t replication,
                  std::uint32_t stage_tag) {
    return Rng(derive_seed(master_seed, replication, stage_tag));
}

}  // namespace aed::sim
