#include "bbf/bbf.hpp"

#include "bbf/colsample.hpp"
#include "bbf/parallel.hpp"
#include "bbf/random.hpp"
#include "bbf/rla.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace bbf {

namespace {

IndexList iota_list(Index n)
{
    IndexList v(static_cast<std::size_t>(n));
    std::iota(v.begin(), v.end(), Index{0});
    return v;
}

IndexList to_list(IndexSpan s) { return IndexList(s.begin(), s.end()); }

IndexList gather(IndexSpan table, const IndexList& local)
{
    IndexList out;
    out.reserve(local.size());
    for (Index v : local)
        out.push_back(table[static_cast<std::size_t>(v)]);
    return out;
}

Matrix gather_rows(const Matrix& A, const IndexList& rows)
{
    Matrix out(static_cast<Index>(rows.size()), A.cols());
    for (std::size_t a = 0; a < rows.size(); ++a)
        out.row(static_cast<Index>(a)) = A.row(rows[a]);
    return out;
}

// Top singular values of a symmetric PSD block from a Nystrom sketch on
// sampled columns; O(n_i w^2) work for sketch width w.
Vector nystrom_spectrum(const MatrixSource& block, Index cap, Index l, std::uint64_t seed)
{
    const Index m = block.rows();
    const Index width = std::min(cap + l, m);
    const auto sample = sample_columns(block, cap, std::min(l, m - cap), seed);
    Rng rng(derive_seed(seed, {7}));
    IndexList cols = sample.important_cols;
    const auto extra = sample_excluding(m, width - static_cast<Index>(cols.size()), cols, rng);
    cols.insert(cols.end(), extra.begin(), extra.end());

    const Matrix C = block.block(iota_list(m), cols);
    const Matrix W = gather_rows(C, cols);
    Eigen::HouseholderQR<Matrix> qr(C);
    const Matrix R = qr.matrixQR().topRows(C.cols()).triangularView<Eigen::Upper>();
    Matrix core = R * pinv_truncated(W) * R.transpose();
    core = 0.5 * (core + core.transpose()).eval();
    Vector lambda = symmetric_eigen(core, false).values.cwiseAbs();
    std::sort(lambda.data(), lambda.data() + lambda.size(), std::greater<>());
    return lambda.head(std::min(cap, lambda.size()));
}

} // namespace

Index RankProfile::n() const
{
    return std::accumulate(cluster_sizes.begin(), cluster_sizes.end(), Index{0});
}

bool RankProfile::any_accuracy_risk() const
{
    return std::any_of(accuracy_risk.begin(), accuracy_risk.end(), [](char c) { return c != 0; });
}

double estimate_frobenius(const MatrixSource& M, Index sample_size, std::uint64_t seed)
{
    const Index n = M.rows();
    if (M.cols() != n)
        throw InvalidArgument("estimate_frobenius: matrix must be square");
    if (sample_size < 1)
        throw InvalidArgument("estimate_frobenius: sample_size must be positive");

    double diagonal = 0.0;
    for (Index i = 0; i < n; ++i) {
        const double v = M.entry(i, i);
        diagonal += v * v;
    }
    if (n == 1)
        return diagonal;

    const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    if (static_cast<double>(sample_size) >= pairs) {
        double off = 0.0;
        const IndexList all = iota_list(n);
        for (Index a = 0; a + 1 < n; ++a) {
            const Index row[1] = {a};
            const auto tail = IndexSpan(all).subspan(static_cast<std::size_t>(a + 1));
            off += M.block(row, tail).squaredNorm();
        }
        return diagonal + 2.0 * off;
    }

    Rng rng(seed);
    double sum = 0.0;
    for (Index s = 0; s < sample_size; ++s) {
        const Index a = rng.below(n);
        Index b = rng.below(n - 1);
        if (b >= a)
            ++b;
        const double v = M.entry(a, b);
        sum += v * v;
    }
    return diagonal + static_cast<double>(n) * static_cast<double>(n - 1) * (sum / static_cast<double>(sample_size));
}

double frobenius_squared(const MatrixSource& M, Index exact_cap, Index samples_per_point, std::uint64_t seed)
{
    const Index n = M.rows();
    if (n <= exact_cap) {
        const Index pairs = n * (n - 1) / 2;
        return estimate_frobenius(M, std::max<Index>(pairs, 1), seed);
    }
    return estimate_frobenius(M, samples_per_point * n, seed);
}

Index tail_rank(const Vector& sigma, double residual, double threshold)
{
    // tail[k] = sum_{j >= k} sigma_j^2 + residual (0-based), accumulated from the end.
    const Index m = sigma.size();
    std::vector<double> tail(static_cast<std::size_t>(m + 1), residual);
    for (Index j = m - 1; j >= 0; --j)
        tail[static_cast<std::size_t>(j)] = tail[static_cast<std::size_t>(j + 1)] + sigma(j) * sigma(j);
    for (Index k = 1; k <= m; ++k)
        if (tail[static_cast<std::size_t>(k)] < threshold)
            return k;
    return m + 1;
}

RankProfile estimate_ranks(const KernelMatrix& acc, const Clustering& c, double epsilon, std::uint64_t seed,
                           const RankOptions& opts, std::optional<double> frob_estimate)
{
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw InvalidArgument("estimate_ranks: epsilon must lie in (0, 1)");
    if (opts.r_max < 1)
        throw InvalidArgument("estimate_ranks: r_max must be positive");
    if (c.n() != acc.rows())
        throw InvalidArgument("estimate_ranks: clustering does not match the data");

    const Index n = acc.rows();
    const double frob = frob_estimate ? *frob_estimate
                                      : frobenius_squared(acc, opts.exact_frob_cap, opts.frob_samples_per_point,
                                                          derive_seed(seed, {0xf20b}));
    RankProfile profile;
    profile.epsilon = epsilon;
    profile.r_max = opts.r_max;
    profile.frob_estimate = frob;
    profile.cluster_sizes = c.sizes;
    profile.ranks.assign(static_cast<std::size_t>(c.k), 1);
    profile.sigma_profiles.assign(static_cast<std::size_t>(c.k), Vector());
    profile.accuracy_risk.assign(static_cast<std::size_t>(c.k), 0);

    parallel_for(c.k, [&](Index i) {
        const auto ui = static_cast<std::size_t>(i);
        const Index ni = c.sizes[ui];
        const Index cap = std::min(opts.r_max, ni);
        const IndexList members = to_list(c.members(i));
        const SubmatrixSource block(acc, members, members);
        const std::uint64_t block_seed = derive_seed(seed, {static_cast<std::uint64_t>(i), 1});

        Vector sigma;
        double block_frob2 = 0.0;
        if (ni <= opts.dense_block_cap) {
            const Matrix D = block.dense();
            block_frob2 = D.squaredNorm();
            sigma = randomized_svd(D, cap, opts.oversample, opts.power_iters, block_seed).S;
        } else {
            sigma = nystrom_spectrum(block, cap, opts.oversample, block_seed);
            block_frob2 = frobenius_squared(block, opts.exact_frob_cap, opts.frob_samples_per_point,
                                            derive_seed(block_seed, {2}));
        }

        // Mass beyond the computed spectrum; zero when the spectrum is complete.
        const double residual = cap == ni ? 0.0 : std::max(0.0, block_frob2 - sigma.squaredNorm());
        const double share = static_cast<double>(ni) / static_cast<double>(n);
        const double threshold = share * share * frob * epsilon * epsilon;

        Index rank = tail_rank(sigma, residual, threshold);
        if (rank > sigma.size()) {
            rank = cap;
            profile.accuracy_risk[ui] = cap < ni ? 1 : 0;
        }
        profile.ranks[ui] = std::clamp<Index>(rank, 1, cap);
        profile.sigma_profiles[ui] = std::move(sigma);
    });
    return profile;
}

RankProfile fixed_rank_profile(const Clustering& c, Index rank, double epsilon, double frob_estimate)
{
    if (rank < 1)
        throw InvalidArgument("fixed_rank_profile: rank must be positive");
    RankProfile p;
    p.epsilon = epsilon;
    p.r_max = rank;
    p.frob_estimate = frob_estimate;
    p.cluster_sizes = c.sizes;
    for (Index ni : c.sizes)
        p.ranks.push_back(std::min(rank, ni));
    p.sigma_profiles.assign(c.sizes.size(), Vector());
    p.accuracy_risk.assign(c.sizes.size(), 0);
    return p;
}

double memory_cost(const RankProfile& profile, const BlockMask& skipped)
{
    const Index k = profile.k();
    if (!skipped.empty() && static_cast<Index>(skipped.size()) != k * k)
        throw InvalidArgument("memory_cost: skip mask must be k x k");
    double total = 0.0;
    for (Index i = 0; i < k; ++i)
        total += static_cast<double>(profile.cluster_sizes[static_cast<std::size_t>(i)]) *
                 static_cast<double>(profile.ranks[static_cast<std::size_t>(i)]);
    for (Index i = 0; i < k; ++i)
        for (Index j = 0; j < k; ++j)
            if (skipped.empty() || !skipped[static_cast<std::size_t>(i * k + j)])
                total += static_cast<double>(profile.ranks[static_cast<std::size_t>(i)]) *
                         static_cast<double>(profile.ranks[static_cast<std::size_t>(j)]);
    return total;
}

SelectKResult select_k(const KernelMatrix& acc, double epsilon, Index k_min, Index k_max, std::uint64_t seed,
                       Partitioner partitioner, const RankOptions& opts, std::optional<double> frob_estimate)
{
    const Index n = acc.rows();
    const auto sqrt_n = static_cast<Index>(std::ceil(std::sqrt(static_cast<double>(n))));
    if (k_max < k_min)
        throw InvalidArgument("select_k: k_max < k_min");
    if (k_min < 1 || k_max > sqrt_n)
        throw InvalidArgument("select_k: need 1 <= k_min <= k_max <= ceil(sqrt(n)) = " + std::to_string(sqrt_n));

    const double frob = frob_estimate ? *frob_estimate
                                      : frobenius_squared(acc, opts.exact_frob_cap, opts.frob_samples_per_point,
                                                          derive_seed(seed, {0xf20b}));

    struct Evaluation {
        double cost;
        Clustering clustering;
        RankProfile profile;
    };
    std::map<Index, Evaluation> memo;
    auto f = [&](Index k) -> double {
        if (auto it = memo.find(k); it != memo.end())
            return it->second.cost;
        Clustering c = cluster_points(acc.data(), partitioner, k, derive_seed(seed, {static_cast<std::uint64_t>(k), 1}));
        RankProfile p = estimate_ranks(acc, c, epsilon, derive_seed(seed, {static_cast<std::uint64_t>(k), 2}), opts, frob);
        const double cost = memory_cost(p);
        memo.emplace(k, Evaluation{cost, std::move(c), std::move(p)});
        return cost;
    };

    Index lo = k_min;
    Index hi = k_max;
    while (hi - lo > 2) {
        const Index m1 = lo + (hi - lo) / 3;
        const Index m2 = hi - (hi - lo) / 3;
        const double f1 = f(m1);
        const double f2 = f(m2);
        if (f1 < f2) {
            hi = m2 - 1;
        } else if (f1 > f2) {
            lo = m1 + 1;
        } else {
            lo = m1;
            hi = m2;
        }
    }
    for (Index k = lo; k <= hi; ++k)
        f(k);

    // An interior probe exceeding a smaller value on each side by more than
    // the tolerance means f is not unimodal here; smaller bumps are noise
    // from the randomized rank estimates.
    constexpr double kPeakTolerance = 0.10;
    bool peaked = false;
    {
        double best_left = std::numeric_limits<double>::infinity();
        std::vector<double> values;
        for (const auto& [k, e] : memo)
            values.push_back(e.cost);
        double suffix_min = std::numeric_limits<double>::infinity();
        std::vector<double> right_min(values.size());
        for (std::size_t t = values.size(); t-- > 0;) {
            right_min[t] = suffix_min;
            suffix_min = std::min(suffix_min, values[t]);
        }
        for (std::size_t t = 0; t < values.size(); ++t) {
            const double lower_side = std::max(best_left, right_min[t]);
            if (values[t] > (1.0 + kPeakTolerance) * lower_side)
                peaked = true;
            best_left = std::min(best_left, values[t]);
        }
    }

    SelectKResult result;
    if (peaked) {
        result.exhaustive = true;
        for (Index k = k_min; k <= k_max; ++k)
            f(k);
    }

    Index best = -1;
    double best_cost = std::numeric_limits<double>::infinity();
    for (const auto& [k, e] : memo) {
        result.evaluated[k] = e.cost;
        if (e.cost < best_cost) {
            best_cost = e.cost;
            best = k;
        }
    }
    auto& chosen = memo.at(best);
    result.k = best;
    result.clustering = std::move(chosen.clustering);
    result.profile = std::move(chosen.profile);
    return result;
}

BBFactorization::BBFactorization(Clustering clustering, std::vector<Matrix> bases, std::vector<InnerBlock> inner,
                                 KernelSpec kernel, double epsilon, double frob_estimate)
    : clustering_(std::move(clustering)), bases_(std::move(bases)), inner_(std::move(inner)), kernel_(kernel),
      epsilon_(epsilon), frob_estimate_(frob_estimate)
{
    const Index k = clustering_.k;
    if (static_cast<Index>(bases_.size()) != k || static_cast<Index>(inner_.size()) != k * k)
        throw InvalidArgument("BBFactorization: inconsistent block counts");
    for (Index i = 0; i < k; ++i) {
        if (bases_[static_cast<std::size_t>(i)].rows() != clustering_.sizes[static_cast<std::size_t>(i)])
            throw InvalidArgument("BBFactorization: basis height does not match cluster size");
    }
    for (Index i = 0; i < k; ++i)
        for (Index j = 0; j < k; ++j) {
            const auto& b = block(i, j);
            if (!b.skipped && (b.C.rows() != basis(i).cols() || b.C.cols() != basis(j).cols()))
                throw InvalidArgument("BBFactorization: inner block shape does not match the bases");
        }
    position_.assign(static_cast<std::size_t>(n()), 0);
    for (Index p = 0; p < n(); ++p)
        position_[static_cast<std::size_t>(clustering_.permutation[static_cast<std::size_t>(p)])] = p;
}

IndexList BBFactorization::ranks() const
{
    IndexList r;
    for (const auto& U : bases_)
        r.push_back(U.cols());
    return r;
}

BlockMask BBFactorization::skipped_mask() const
{
    BlockMask m(inner_.size());
    for (std::size_t t = 0; t < inner_.size(); ++t)
        m[t] = inner_[t].skipped ? 1 : 0;
    return m;
}

Index BBFactorization::skipped_count() const
{
    return std::count_if(inner_.begin(), inner_.end(), [](const InnerBlock& b) { return b.skipped; });
}

Vector BBFactorization::apply(const Vector& v) const
{
    if (v.size() != n())
        throw InvalidArgument("BBFactorization::apply: length mismatch");
    const Index kk = k();
    const Vector pv = permute_vector(clustering_, v, PermuteDirection::Forward);

    std::vector<Vector> projected(static_cast<std::size_t>(kk));
    for (Index j = 0; j < kk; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        projected[uj] = bases_[uj].transpose() * pv.segment(clustering_.offsets[uj], clustering_.sizes[uj]);
    }

    Vector out(n());
    for (Index i = 0; i < kk; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        Vector z = Vector::Zero(bases_[ui].cols());
        for (Index j = 0; j < kk; ++j) {
            const auto& b = block(i, j);
            if (!b.skipped)
                z.noalias() += b.C * projected[static_cast<std::size_t>(j)];
        }
        out.segment(clustering_.offsets[ui], clustering_.sizes[ui]).noalias() = bases_[ui] * z;
    }
    return permute_vector(clustering_, out, PermuteDirection::Inverse);
}

double BBFactorization::entry(Index a, Index b) const
{
    if (a < 0 || a >= n() || b < 0 || b >= n())
        throw InvalidArgument("BBFactorization::entry: index out of range");
    const Index ia = clustering_.assignment[static_cast<std::size_t>(a)];
    const Index ib = clustering_.assignment[static_cast<std::size_t>(b)];
    const auto& blk = block(ia, ib);
    if (blk.skipped)
        return 0.0;
    const Index la = position_[static_cast<std::size_t>(a)] - clustering_.offsets[static_cast<std::size_t>(ia)];
    const Index lb = position_[static_cast<std::size_t>(b)] - clustering_.offsets[static_cast<std::size_t>(ib)];
    return basis(ia).row(la) * blk.C * basis(ib).row(lb).transpose();
}

Matrix BBFactorization::to_dense(Index cap) const
{
    check_dense_cap(n(), cap);
    Matrix out = Matrix::Zero(n(), n());
    for (Index i = 0; i < k(); ++i) {
        const auto rows = clustering_.members(i);
        for (Index j = 0; j < k(); ++j) {
            const auto& b = block(i, j);
            if (b.skipped)
                continue;
            const auto cols = clustering_.members(j);
            const Matrix tile = basis(i) * b.C * basis(j).transpose();
            for (std::size_t q = 0; q < cols.size(); ++q)
                for (std::size_t p = 0; p < rows.size(); ++p)
                    out(rows[p], cols[q]) = tile(static_cast<Index>(p), static_cast<Index>(q));
        }
    }
    return out;
}

double BBFactorization::memory_count() const
{
    double total = 0.0;
    for (const auto& U : bases_)
        total += static_cast<double>(U.size());
    for (const auto& b : inner_)
        if (!b.skipped)
            total += static_cast<double>(b.C.size());
    return total;
}

Matrix inner_from_samples(const Matrix& U_rows, const Matrix& M_IJ, const Matrix& V_rows, double pinv_tol)
{
    if (U_rows.rows() != M_IJ.rows() || V_rows.rows() != M_IJ.cols())
        throw InvalidArgument("inner_from_samples: shape mismatch");
    return pinv_truncated(U_rows, pinv_tol) * M_IJ * pinv_truncated(V_rows, pinv_tol).transpose();
}

SkipCertificate cutoff_certificate(const KernelSpec& spec, const Clustering& c, Index i, Index j, double threshold)
{
    const double d = static_cast<double>(c.centers.cols());
    const double scale = spec.family == KernelFamily::Gaussian ? 1.0 : std::sqrt(d);
    const double gap = spec.distance(c.centers.row(i), c.centers.row(j)) -
                       scale * (c.radii[static_cast<std::size_t>(i)] + c.radii[static_cast<std::size_t>(j)]);
    SkipCertificate cert;
    // Shrunk slightly so rounding in the distances cannot overstate the gap.
    cert.distance_lower_bound = std::max(0.0, gap * (1.0 - 1e-12));
    cert.envelope_value = envelope(spec, cert.distance_lower_bound);
    cert.threshold = threshold;
    return cert;
}

BBFactorization build_bbf(const KernelMatrix& acc, const Clustering& c, const RankProfile& profile,
                          std::uint64_t seed, const BuildOptions& opts)
{
    const Index n = acc.rows();
    const Index k = c.k;
    if (c.n() != n)
        throw InvalidArgument("build_bbf: clustering does not match the data");
    if (profile.k() != k)
        throw InvalidArgument("build_bbf: rank profile does not match the clustering");
    if (opts.oversample < 0)
        throw InvalidArgument("build_bbf: oversampling must be nonnegative");

    std::vector<Matrix> bases(static_cast<std::size_t>(k));
    std::vector<IndexList> important_rows(static_cast<std::size_t>(k));
    IndexList row_target(static_cast<std::size_t>(k));

    parallel_for(k, [&](Index i) {
        const auto ui = static_cast<std::size_t>(i);
        const Index ni = c.sizes[ui];
        const Index ri = profile.ranks[ui];
        if (ri < 1 || ri > ni)
            throw InvalidArgument("build_bbf: rank of cluster " + std::to_string(i) + " out of range");
        const Index l = std::min(opts.oversample, n - ri);
        const IndexList members = to_list(c.members(i));
        const SubmatrixSource slab(acc, members, {});
        const std::uint64_t s = derive_seed(seed, {static_cast<std::uint64_t>(i), 0xba5e});

        auto sample = sample_columns(slab, ri, l, s);
        row_target[ui] = static_cast<Index>(sample.important_rows.size()) + ri;
        Rng rng(derive_seed(s, {1}));
        IndexList cols = sample.important_cols;
        const auto extra = sample_excluding(n, l, cols, rng);
        cols.insert(cols.end(), extra.begin(), extra.end());

        const Matrix A = slab.block(iota_list(ni), cols);
        bases[ui] = randomized_svd(A, std::min(ri, A.cols()), l, opts.power_iters, derive_seed(s, {2})).U;
        // Pivot rows of the basis keep U_i(I, :) well conditioned even when a
        // basis vector is concentrated on a row the sampling never touched.
        important_rows[ui] = ordered_union(sample.important_rows, pivot_rows_lq(bases[ui], bases[ui].cols()));
    });

    const double threshold = std::sqrt(std::max(profile.frob_estimate, 0.0)) * profile.epsilon / static_cast<double>(n);
    std::vector<std::pair<Index, Index>> pairs;
    for (Index i = 0; i < k; ++i)
        for (Index j = i; j < k; ++j)
            pairs.emplace_back(i, j);

    std::vector<InnerBlock> inner(static_cast<std::size_t>(k * k));
    parallel_for(static_cast<Index>(pairs.size()), [&](Index t) {
        const auto [i, j] = pairs[static_cast<std::size_t>(t)];
        InnerBlock blk;
        if (opts.cutoff && i != j) {
            const auto cert = cutoff_certificate(acc.spec(), c, i, j, threshold);
            if (cert.envelope_value <= threshold) {
                blk.skipped = true;
                blk.certificate = cert;
                inner[static_cast<std::size_t>(i * k + j)] = blk;
                inner[static_cast<std::size_t>(j * k + i)] = blk;
                return;
            }
        }

        const Matrix& Ui = bases[static_cast<std::size_t>(i)];
        const Matrix& Uj = bases[static_cast<std::size_t>(j)];
        const std::uint64_t s = derive_seed(seed, {static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j), 0xc0de});
        Rng rng(s);
        auto sample_side = [&](Index cluster) {
            const auto uc = static_cast<std::size_t>(cluster);
            const IndexList& base = important_rows[uc];
            const Index target = std::min(c.sizes[uc], row_target[uc]);
            IndexList local = base;
            const auto fresh = sample_excluding(c.sizes[uc], target - static_cast<Index>(base.size()), base, rng);
            local.insert(local.end(), fresh.begin(), fresh.end());
            return local;
        };
        const IndexList I = sample_side(i);
        const IndexList J = sample_side(j);

        const Matrix M_IJ = acc.block(gather(c.members(i), I), gather(c.members(j), J));
        blk.C = inner_from_samples(gather_rows(Ui, I), M_IJ, gather_rows(Uj, J), opts.pinv_tol);
        if (i == j) {
            blk.C = 0.5 * (blk.C + blk.C.transpose()).eval();
            inner[static_cast<std::size_t>(i * k + i)] = std::move(blk);
            return;
        }
        InnerBlock mirrored;
        mirrored.C = blk.C.transpose();
        inner[static_cast<std::size_t>(i * k + j)] = std::move(blk);
        inner[static_cast<std::size_t>(j * k + i)] = std::move(mirrored);
    });

    return BBFactorization(c, std::move(bases), std::move(inner), acc.spec(), profile.epsilon, profile.frob_estimate);
}

Matrix reconstruct_dense(const BBFactorization& f, Index cap)
{
    return f.to_dense(cap);
}

void check_dense_cap(Index n, Index cap)
{
    if (cap > kHardDenseCap)
        throw CapExceeded("dense cap " + std::to_string(cap) + " exceeds the hard limit " + std::to_string(kHardDenseCap));
    if (n > cap)
        throw CapExceeded("n = " + std::to_string(n) + " exceeds the dense cap " + std::to_string(cap));
}

} // namespace bbf
