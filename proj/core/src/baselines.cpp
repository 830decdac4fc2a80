#include "bbf/baselines.hpp"

#include "bbf/cluster.hpp"
#include "bbf/random.hpp"
#include "bbf/rla.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace bbf {

namespace {

constexpr double kEigenTol = 1e-10;

IndexList iota_list(Index n)
{
    IndexList v(static_cast<std::size_t>(n));
    std::iota(v.begin(), v.end(), Index{0});
    return v;
}

// C W^+ C^T with W^+ restricted to the top `rank` eigenpairs of W.
LowRankFactor nystrom_from(LowRankKind kind, const Matrix& C, const Matrix& W, Index rank, IndexList landmarks)
{
    const Matrix Ws = 0.5 * (W + W.transpose());
    const auto eig = symmetric_eigen(Ws, true);
    const double top = eig.values.size() > 0 ? eig.values(0) : 0.0;
    Index keep = 0;
    while (keep < std::min(rank, eig.values.size()) && eig.values(keep) > kEigenTol * top)
        ++keep;
    if (keep == 0)
        throw Error("nystrom: landmark block is numerically zero");
    const Matrix left = C * eig.vectors.leftCols(keep);
    const Matrix core = eig.values.head(keep).cwiseInverse().asDiagonal();
    return LowRankFactor(kind, left, core, rank, std::move(landmarks));
}

} // namespace

std::string_view to_string(LowRankKind kind)
{
    switch (kind) {
    case LowRankKind::NystromUniform:
        return "nys";
    case LowRankKind::NystromKMeans:
        return "knys";
    case LowRankKind::NystromLeverage:
        return "lsnys";
    case LowRankKind::RandomFeatures:
        return "rks";
    case LowRankKind::TruncatedSVD:
        return "svd";
    }
    return "unknown";
}

LowRankFactor::LowRankFactor(LowRankKind kind, Matrix left, Matrix core, Index effective_rank, IndexList landmarks)
    : kind_(kind), left_(std::move(left)), core_(std::move(core)), rank_(effective_rank),
      landmarks_(std::move(landmarks))
{
    if (core_.size() != 0 && (core_.rows() != left_.cols() || core_.cols() != left_.cols()))
        throw InvalidArgument("LowRankFactor: core shape does not match the left factor");
    if (rank_ < 1)
        throw InvalidArgument("LowRankFactor: effective rank must be positive");
}

Vector LowRankFactor::apply(const Vector& v) const
{
    if (v.size() != n())
        throw InvalidArgument("LowRankFactor::apply: length mismatch");
    const Vector t = left_.transpose() * v;
    if (core_.size() == 0)
        return left_ * t;
    return left_ * (core_ * t);
}

double LowRankFactor::entry(Index a, Index b) const
{
    if (a < 0 || a >= n() || b < 0 || b >= n())
        throw InvalidArgument("LowRankFactor::entry: index out of range");
    if (core_.size() == 0)
        return left_.row(a).dot(left_.row(b));
    return left_.row(a) * core_ * left_.row(b).transpose();
}

Matrix LowRankFactor::to_dense(Index cap) const
{
    check_dense_cap(n(), cap);
    if (core_.size() == 0)
        return left_ * left_.transpose();
    return left_ * core_ * left_.transpose();
}

double LowRankFactor::memory_count() const
{
    return static_cast<double>(n()) * static_cast<double>(rank_);
}

LowRankFactor nystrom_uniform(const KernelMatrix& acc, Index r, std::uint64_t seed)
{
    const Index n = acc.rows();
    if (r < 1 || 2 * r > n)
        throw InvalidArgument("nystrom_uniform: need 1 <= r and 2r <= n (r = " + std::to_string(r) + ", n = " +
                              std::to_string(n) + ")");
    Rng rng(seed);
    IndexList landmarks = sample_without_replacement(n, 2 * r, rng);
    const Matrix C = acc.block(iota_list(n), landmarks);
    Matrix W(2 * r, 2 * r);
    for (Index a = 0; a < 2 * r; ++a)
        W.row(a) = C.row(landmarks[static_cast<std::size_t>(a)]);
    return nystrom_from(LowRankKind::NystromUniform, C, W, r, std::move(landmarks));
}

LowRankFactor nystrom_kmeans(const KernelMatrix& acc, Index r, std::uint64_t seed)
{
    const DataMatrix& data = acc.data();
    if (r < 1 || r > data.n())
        throw InvalidArgument("nystrom_kmeans: need 1 <= r <= n");
    const Clustering c = kmeans(data, r, seed);
    const Matrix C = cross_kernel(acc.spec(), data.points, c.centers);
    const Matrix W = cross_kernel(acc.spec(), c.centers, c.centers);
    return nystrom_from(LowRankKind::NystromKMeans, C, W, r, {});
}

Vector leverage_scores_exact(const KernelMatrix& acc, Index r, Index cap)
{
    const Index n = acc.rows();
    check_dense_cap(n, cap);
    if (r < 1 || r > n)
        throw InvalidArgument("leverage_scores_exact: need 1 <= r <= n");
    const auto eig = symmetric_eigen_top(acc.dense(), r, true);
    return eig.vectors.rowwise().squaredNorm();
}

LowRankFactor nystrom_leverage(const KernelMatrix& acc, Index r, std::uint64_t seed, Index cap, const Vector* scores)
{
    const Index n = acc.rows();
    if (r < 1 || 2 * r > n)
        throw InvalidArgument("nystrom_leverage: need 1 <= r and 2r <= n");
    const Vector lev = scores ? *scores : leverage_scores_exact(acc, r, cap);
    if (lev.size() != n)
        throw InvalidArgument("nystrom_leverage: score vector has the wrong length");

    const double total = lev.sum();
    std::vector<double> cumulative(static_cast<std::size_t>(n));
    double running = 0.0;
    for (Index i = 0; i < n; ++i) {
        running += std::max(lev(i), 0.0) / total;
        cumulative[static_cast<std::size_t>(i)] = running;
    }

    const Index s = 2 * r;
    Rng rng(seed);
    IndexList landmarks;
    Vector scale(s);
    for (Index t = 0; t < s; ++t) {
        const double u = rng.uniform() * running;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        Index pick = std::min<Index>(it - cumulative.begin(), n - 1);
        while (pick > 0 && lev(pick) <= 0.0)
            --pick;
        const double p = std::max(lev(pick), 0.0) / total;
        landmarks.push_back(pick);
        scale(t) = 1.0 / std::sqrt(static_cast<double>(s) * p);
    }

    Matrix C = acc.block(iota_list(n), landmarks);
    Matrix W(s, s);
    for (Index a = 0; a < s; ++a)
        W.row(a) = C.row(landmarks[static_cast<std::size_t>(a)]);
    C = C * scale.asDiagonal();
    W = scale.asDiagonal() * W * scale.asDiagonal();
    return nystrom_from(LowRankKind::NystromLeverage, C, W, r, std::move(landmarks));
}

LowRankFactor rks_features(const KernelMatrix& acc, Index features, std::uint64_t seed)
{
    if (acc.spec().family != KernelFamily::Gaussian)
        throw InvalidArgument("rks_features: only the Gaussian kernel is supported");
    if (features < 1)
        throw InvalidArgument("rks_features: feature count must be positive");
    const DataMatrix& data = acc.data();
    Rng rng(seed);
    const Matrix omega = rng.gaussian_matrix(data.d(), features) * (std::sqrt(2.0) / acc.spec().h);
    Vector phase(features);
    for (Index j = 0; j < features; ++j)
        phase(j) = 2.0 * std::numbers::pi * rng.uniform();

    Matrix Z = data.points * omega;
    Z.rowwise() += phase.transpose();
    Z = Z.array().cos() * std::sqrt(2.0 / static_cast<double>(features));
    return LowRankFactor(LowRankKind::RandomFeatures, std::move(Z), Matrix(), features);
}

LowRankFactor truncated_svd_baseline(const Matrix& K, Index r)
{
    if (K.rows() != K.cols())
        throw InvalidArgument("truncated_svd_baseline: matrix must be square");
    if (r < 1 || r > K.rows())
        throw InvalidArgument("truncated_svd_baseline: need 1 <= r <= n");
    const auto eig = symmetric_eigen_top(K, r, true);
    return LowRankFactor(LowRankKind::TruncatedSVD, eig.vectors, eig.values.asDiagonal(), r);
}

} // namespace bbf
