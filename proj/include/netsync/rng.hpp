#pragma once

#include <cstdint>
#include <random>

namespace netsync {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; a bijective 64-bit mix.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Derives an independent child seed from (master, stream, index). Used for
/// per-cell / per-trial / per-snapshot seeding so that parallel or resumed
/// runs never share a stream.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) noexcept;

/// Uniform double in [0, 1) built from the top 53 bits of one draw. Unlike
/// std::uniform_real_distribution its output is fixed by the engine alone.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Standard normal via the Marsaglia polar method (engine-determined output).
double standard_normal(Rng& rng);

}  // namespace netsync
