#include "hcdht/random.hpp"

#include "hcdht/errors.hpp"

#include <algorithm>
#include <limits>

namespace hcdht {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw Error("Rng::below requires a positive bound");
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % bound;
}

std::uint64_t Rng::between(std::uint64_t lo, std::uint64_t hi) {
    if (hi < lo) throw Error("Rng::between requires lo <= hi");
    if (lo == 0 && hi == std::numeric_limits<std::uint64_t>::max()) return engine_();
    return lo + below(hi - lo + 1);
}

std::vector<std::string> workload_keywords(Dimension r, const KeywordHasher& hasher) {
    constexpr std::size_t kPerPosition = 4;
    std::vector<std::vector<std::string>> buckets(r.value());
    std::size_t filled = 0;
    for (std::uint64_t n = 0; filled < buckets.size(); ++n) {
        std::string word = "kw" + std::to_string(r.value()) + "-" + std::to_string(n);
        auto& bucket = buckets[keyword_bit(word, r, hasher)];
        if (bucket.size() < kPerPosition) {
            bucket.push_back(std::move(word));
            if (bucket.size() == kPerPosition) ++filled;
        }
        if (n > 1'000'000) throw Error("keyword hasher does not reach every position");
    }
    std::vector<std::string> out;
    out.reserve(r.value() * kPerPosition);
    for (auto& bucket : buckets) {
        for (auto& word : bucket) out.push_back(std::move(word));
    }
    return out;
}

KeywordSet random_keyset(Rng& rng, const std::vector<std::string>& universe, Dimension r) {
    const std::size_t size = rng.between(1, r.value());
    if (size > universe.size()) throw Error("keyword universe smaller than requested keyset");
    std::vector<std::string> pool = universe;
    // Partial Fisher-Yates over the first `size` slots.
    for (std::size_t i = 0; i < size; ++i) {
        const std::size_t j = i + rng.below(pool.size() - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(size);
    return KeywordSet(std::move(pool));
}

}  // namespace hcdht
