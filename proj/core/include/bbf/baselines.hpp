#ifndef BBF_BASELINES_HPP
#define BBF_BASELINES_HPP

#include "bbf/approximation.hpp"
#include "bbf/kernel.hpp"
#include "bbf/types.hpp"

#include <cstdint>
#include <string_view>

namespace bbf {

enum class LowRankKind { NystromUniform, NystromKMeans, NystromLeverage, RandomFeatures, TruncatedSVD };

std::string_view to_string(LowRankKind kind);

/// K_hat = left * core * left^T with left n x w and core w x w symmetric.
///
/// Memory is reported as n * r for effective rank r, so every baseline is
/// compared under the same convention.
class LowRankFactor final : public KernelApproximation {
public:
    LowRankFactor(LowRankKind kind, Matrix left, Matrix core, Index effective_rank, IndexList landmarks = {});

    Index n() const override { return left_.rows(); }
    Vector apply(const Vector& v) const override;
    double entry(Index a, Index b) const override;
    Matrix to_dense(Index cap = kDefaultDenseCap) const override;
    double memory_count() const override;

    LowRankKind kind() const noexcept { return kind_; }
    Index effective_rank() const noexcept { return rank_; }
    const Matrix& left() const noexcept { return left_; }
    const Matrix& core() const noexcept { return core_; }
    // Sampled column indices for the sampling-based Nystrom variants.
    const IndexList& landmarks() const noexcept { return landmarks_; }

private:
    LowRankKind kind_;
    Matrix left_;
    Matrix core_;
    Index rank_;
    IndexList landmarks_;
};

// 2r landmarks uniformly without replacement; W^+ truncated to its top r
// eigenpairs. Throws InvalidArgument if 2r > n.
LowRankFactor nystrom_uniform(const KernelMatrix& acc, Index r, std::uint64_t seed);

// Landmarks are the r k-means centroids (synthetic points).
LowRankFactor nystrom_kmeans(const KernelMatrix& acc, Index r, std::uint64_t seed);

/// l_i = ||V_r(i, :)||^2 for the top-r eigenvectors of the dense kernel
/// matrix. O(n^2) memory; n is limited by `cap`.
Vector leverage_scores_exact(const KernelMatrix& acc, Index r, Index cap = kDefaultDenseCap);

// 2r columns drawn with replacement with probability l_i / r, rescaled by
// 1 / sqrt(s p_i). Scores may be supplied to avoid recomputing them.
LowRankFactor nystrom_leverage(const KernelMatrix& acc, Index r, std::uint64_t seed, Index cap = kDefaultDenseCap,
                               const Vector* scores = nullptr);

// Random Fourier features for the Gaussian kernel: omega ~ N(0, 2/h^2 I),
// b ~ U[0, 2 pi), z(x) = sqrt(2/D) cos(omega^T x + b).
LowRankFactor rks_features(const KernelMatrix& acc, Index features, std::uint64_t seed);

// Best rank-r approximation of a symmetric positive semidefinite matrix
// from its top r eigenpairs.
LowRankFactor truncated_svd_baseline(const Matrix& K, Index r);

} // namespace bbf

#endif
