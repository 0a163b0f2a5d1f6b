#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace clustvar {

/// The engine used everywhere. mt19937_64 output is fixed by the standard;
/// the helpers below avoid the implementation-defined std distributions so
/// that a seed gives the same draws on every platform.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
std::uint64_t mix_seed(std::uint64_t x) noexcept;

/// Seed of an independent stream, e.g. (seed, start) or (seed, replicate, attempt).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) noexcept;

/// Uniform integer in [0, bound) by rejection; bound must be > 0.
std::uint64_t uniform_index(Rng& rng, std::uint64_t bound);

/// k distinct values from [0, n), in draw order (partial Fisher-Yates).
std::vector<std::size_t> sample_without_replacement(Rng& rng, std::size_t n, std::size_t k);

/// n row indices drawn with replacement from [0, n).
std::vector<std::size_t> bootstrap_rows(Rng& rng, std::size_t n);

}  // namespace clustvar
