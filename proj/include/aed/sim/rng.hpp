#pragma once

#include <cstdint>
#include <random>

namespace aed::sim {

using Rng = std::mt19937_64;

/// Stage tags keep the streams of different pipeline stages apart even when
/// they share a replication index.
enum class StageTag : std::uint32_t {
    kExperiment = 0,
    kPrior = 1,
    kCalibration = 2,
    kResample = 3,
    kPolicy = 4,
    kTieBreak = 5,
    kOracle = 6,
};

std::uint64_t splitmix64(std::uint64_t x);

/// Deterministic stream for (master_seed, replication, stage).  The three
/// inputs are hashed through independent splitmix64 rounds, so neighbouring
/// replications land on unrelated generator states.
Rng derive_stream(std::uint64_t master_seed, std::uint64_t replication,
                  std::uint32_t stage_tag);

inline Rng derive_stream(std::uint64_t master_seed, std::uint64_t replication,
                         StageTag tag) {
    return derive_stream(master_seed, replication, static_cast<std::uint32_t>(tag));
}

/// Child seed used when a stage needs to hand a fresh master seed to a
/// nested procedure (e.g. one calibration per grid point).
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index,
                          std::uint32_t stage_tag);

inline double uniform01(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace aed::sim
