#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <vector>

#include <omp.h>

#include "flatfloor/rng.hpp"

namespace flatfloor {

/// Per-block accumulators. Block b always draws from RngStream(seed, b), so a
/// block's tally does not depend on which worker ran it.
struct BlockTally {
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;  // trials returning a nonzero value
  double sum = 0.0;
  double sum_sq = 0.0;
};

inline std::uint64_t block_count(std::uint64_t samples, std::uint64_t block_size) {
  return (samples + block_size - 1) / block_size;
}

template <class Trial>
BlockTally run_block(Trial& trial, std::uint64_t seed, std::uint64_t block, std::uint64_t samples,
                     std::uint64_t block_size) {
  RngStream rng(seed, block);
  const std::uint64_t begin = block * block_size;
  const std::uint64_t end = std::min(samples, begin + block_size);
  BlockTally tally;
  for (std::uint64_t i = begin; i < end; ++i) {
    const double v = trial(rng);
    ++tally.trials;
    if (v != 0.0) ++tally.hits;
    tally.sum += v;
    tally.sum_sq += v * v;
  }
  return tally;
}

/// Sequential reference: blocks in index order on the calling thread.
template <class MakeTrial>
std::vector<BlockTally> run_blocks_serial(std::uint64_t samples, std::uint64_t seed, std::uint64_t block_size,
                                          MakeTrial make_trial) {
  const std::uint64_t blocks = block_count(samples, block_size);
  std::vector<BlockTally> tallies(blocks);
  auto trial = make_trial();
  for (std::uint64_t b = 0; b < blocks; ++b) tallies[b] = run_block(trial, seed, b, samples, block_size);
  return tallies;
}

/// OpenMP path: blocks are handed out dynamically, each worker owns its trial state.
template <class MakeTrial>
std::vector<BlockTally> run_blocks_parallel(std::uint64_t samples, std::uint64_t seed, std::uint64_t block_size,
                                            int workers, MakeTrial make_trial) {
  const std::int64_t blocks = static_cast<std::int64_t>(block_count(samples, block_size));
  std::vector<BlockTally> tallies(static_cast<std::size_t>(blocks));
  std::exception_ptr failure;
#pragma omp parallel num_threads(workers)
  {
    auto trial = make_trial();
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t b = 0; b < blocks; ++b) {
      try {
        tallies[b] = run_block(trial, seed, static_cast<std::uint64_t>(b), samples, block_size);
      } catch (...) {
#pragma omp critical(flatfloor_mc_failure)
        if (!failure) failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
  return tallies;
}

/// Order-fixed reduction.
inline BlockTally reduce_tallies(const std::vector<BlockTally>& tallies) {
  BlockTally total;
  for (const auto& t : tallies) {
    total.trials += t.trials;
    total.hits += t.hits;
    total.sum += t.sum;
    total.sum_sq += t.sum_sq;
  }
  return total;
}

}  // namespace flatfloor
