#ifndef BBF_RANDOM_HPP
#define BBF_RANDOM_HPP

#include "bbf/types.hpp"

#include <cstdint>
#include <initializer_list>
#include <random>

namespace bbf {

// SplitMix64 finalizer; used to derive independent per-task seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) noexcept
{
    std::uint64_t h = mix64(seed);
    for (auto t : tags)
        h = mix64(h ^ mix64(t + 0x632be59bd9b4e019ULL));
    return h;
}

/// Seedable generator with a platform-stable output contract.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The std distributions are implementation-defined, so uniform
/// reals, bounded integers and normals are derived here by hand: uniform()
/// takes the top 53 bits, below() rejects on a power-of-two mask and
/// normal() is Box-Muller handing out both variates in turn.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform integer on [0, n).
    Index below(Index n);

    double normal();

    // Fills column-major storage in order.
    Matrix gaussian_matrix(Index rows, Index cols);

private:
    std::mt19937_64 engine_;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

// `count` distinct indices from [0, n), in draw order (Floyd's algorithm).
IndexList sample_without_replacement(Index n, Index count, Rng& rng);

// `count` distinct indices from [0, n) not present in `exclude`. When fewer
// than `count` candidates remain, all of them are returned.
IndexList sample_excluding(Index n, Index count, IndexSpan exclude, Rng& rng);

// Order-preserving union of `a` then `b`, duplicates dropped.
IndexList ordered_union(IndexSpan a, IndexSpan b);

// Deduplicates `base` and pads it with fresh uniform draws from [0, n) up to
// min(target, n) entries.
IndexList dedup_and_pad(IndexSpan base, Index target, Index n, Rng& rng);

} // namespace bbf

#endif
