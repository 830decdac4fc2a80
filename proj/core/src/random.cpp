#include "bbf/random.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <unordered_set>

namespace bbf {

Index Rng::below(Index n)
{
    if (n <= 0)
        throw InvalidArgument("Rng::below: n must be positive");
    const auto un = static_cast<std::uint64_t>(n);
    if (un == 1)
        return 0;
    const std::uint64_t mask = std::bit_ceil(un) - 1;
    for (;;) {
        const std::uint64_t x = engine_() & mask;
        if (x < un)
            return static_cast<Index>(x);
    }
}

double Rng::normal()
{
    if (has_cached_) {
        has_cached_ = false;
        return cached_normal_;
    }
    double u1 = uniform();
    while (u1 <= 0.0)
        u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_normal_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
}

Matrix Rng::gaussian_matrix(Index rows, Index cols)
{
    Matrix g(rows, cols);
    double* p = g.data();
    for (Index i = 0; i < rows * cols; ++i)
        p[i] = normal();
    return g;
}

IndexList sample_without_replacement(Index n, Index count, Rng& rng)
{
    if (count < 0 || count > n)
        throw InvalidArgument("sample_without_replacement: count out of range");
    IndexList out;
    out.reserve(static_cast<std::size_t>(count));
    std::unordered_set<Index> seen;
    seen.reserve(static_cast<std::size_t>(count) * 2);
    for (Index j = n - count; j < n; ++j) {
        const Index t = rng.below(j + 1);
        if (seen.insert(t).second) {
            out.push_back(t);
        } else {
            seen.insert(j);
            out.push_back(j);
        }
    }
    return out;
}

IndexList sample_excluding(Index n, Index count, IndexSpan exclude, Rng& rng)
{
    std::unordered_set<Index> excluded(exclude.begin(), exclude.end());
    const Index available = n - static_cast<Index>(excluded.size());
    if (count <= 0 || available <= 0)
        return {};
    if (available <= count) {
        IndexList rest;
        rest.reserve(static_cast<std::size_t>(available));
        for (Index i = 0; i < n; ++i)
            if (!excluded.count(i))
                rest.push_back(i);
        return rest;
    }

    IndexList out;
    out.reserve(static_cast<std::size_t>(count));
    if (static_cast<Index>(excluded.size()) + count <= n / 2) {
        // Sparse exclusion: rejection is cheap and keeps the cost O(count).
        while (static_cast<Index>(out.size()) < count) {
            const Index t = rng.below(n);
            if (excluded.insert(t).second)
                out.push_back(t);
        }
        return out;
    }

    IndexList rest;
    rest.reserve(static_cast<std::size_t>(available));
    for (Index i = 0; i < n; ++i)
        if (!excluded.count(i))
            rest.push_back(i);
    for (Index i = 0; i < count; ++i) {
        const Index j = i + rng.below(available - i);
        std::swap(rest[static_cast<std::size_t>(i)], rest[static_cast<std::size_t>(j)]);
        out.push_back(rest[static_cast<std::size_t>(i)]);
    }
    return out;
}

IndexList ordered_union(IndexSpan a, IndexSpan b)
{
    IndexList out;
    out.reserve(a.size() + b.size());
    std::unordered_set<Index> seen;
    seen.reserve((a.size() + b.size()) * 2);
    for (auto s : {a, b})
        for (Index v : s)
            if (seen.insert(v).second)
                out.push_back(v);
    return out;
}

IndexList dedup_and_pad(IndexSpan base, Index target, Index n, Rng& rng)
{
    IndexList out = ordered_union(base, {});
    const Index want = std::min(target, n);
    if (static_cast<Index>(out.size()) < want) {
        const auto extra = sample_excluding(n, want - static_cast<Index>(out.size()), out, rng);
        out.insert(out.end(), extra.begin(), extra.end());
    }
    return out;
}

} // namespace bbf
