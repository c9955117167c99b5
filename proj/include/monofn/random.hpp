#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

#include "monofn/distributions.hpp"

namespace monofn {

using Engine = std::mt19937_64;

// Independent stream for replication `index` under `root_seed`. Streams
// depend only on (root_seed, index), so results do not depend on how the
// replications are scheduled across threads.
Engine stream_engine(std::uint64_t root_seed, std::uint64_t index);

std::uint64_t splitmix64(std::uint64_t& state);

double draw(const KnownDistribution& dist, Engine& engine);

// Runs body(i) for i in [0, count) on up to `threads` workers (0 picks the
// hardware concurrency). Each index runs exactly once; exceptions from a
// worker are rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body, unsigned threads = 0);

}  // namespace monofn
