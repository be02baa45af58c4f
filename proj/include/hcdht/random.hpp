#pragma once

#include "hcdht/topology.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace hcdht {

std::uint64_t splitmix64(std::uint64_t x);

/// Seeded generator whose output sequence is identical on every platform.
/// std::uniform_int_distribution is implementation-defined, so bounded draws
/// use rejection sampling on the raw 64-bit engine output.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound);
    /// Uniform in [lo, hi].
    std::uint64_t between(std::uint64_t lo, std::uint64_t hi);

private:
    std::mt19937_64 engine_;
};

/// The keyword universe used by generated workloads: 4r strings, exactly four
/// of which hash to each position under `hasher`.
std::vector<std::string> workload_keywords(Dimension r, const KeywordHasher& hasher);

/// A keyset of uniformly drawn size in [1, r] made of distinct universe words.
KeywordSet random_keyset(Rng& rng, const std::vector<std::string>& universe, Dimension r);

}  // namespace hcdht
