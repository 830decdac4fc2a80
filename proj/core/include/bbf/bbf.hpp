#ifndef BBF_BBF_HPP
#define BBF_BBF_HPP

#include "bbf/approximation.hpp"
#include "bbf/cluster.hpp"
#include "bbf/kernel.hpp"
#include "bbf/types.hpp"

#include <cstdint>
#include <map>
#include <optional>

namespace bbf {

/// Per-cluster ranks chosen for a target relative Frobenius accuracy.
struct RankProfile {
    double epsilon = 0.0;
    IndexList ranks;
    Index r_max = 0;
    std::vector<Vector> sigma_profiles;
    double frob_estimate = 0.0;
    IndexList cluster_sizes;
    // Set for clusters whose rank hit r_max before the tail criterion held.
    std::vector<char> accuracy_risk;

    Index k() const noexcept { return static_cast<Index>(ranks.size()); }
    Index n() const;
    bool any_accuracy_risk() const;
};

struct RankOptions {
    Index r_max = 300;
    Index oversample = 10;
    Index power_iters = 2;
    // Diagonal blocks up to this size are formed densely; larger ones go
    // through column sampling and a Nystrom eigenvalue estimate.
    Index dense_block_cap = 2048;
    // Frobenius norms are computed exactly up to this size, sampled above it.
    Index exact_frob_cap = 1000;
    Index frob_samples_per_point = 100;
};

/// Estimate of ||M||_F^2: exact diagonal plus n(n-1) times the mean squared
/// entry over `sample_size` uniformly drawn off-diagonal pairs. When the
/// budget covers every unordered pair the sum is computed exactly.
double estimate_frobenius(const MatrixSource& M, Index sample_size, std::uint64_t seed);

// ||M||_F^2 exactly for n <= exact_cap, else estimate_frobenius with
// samples_per_point * n pairs.
double frobenius_squared(const MatrixSource& M, Index exact_cap, Index samples_per_point, std::uint64_t seed);

/// r_i is the smallest k with  sum_{j>k} sigma_j^2 < (n_i^2 / n^2) ||M||_F^2 eps^2,
/// where sigma are the singular values of the diagonal block M_ii. Floored
/// at 1 and capped at min(r_max, n_i).
RankProfile estimate_ranks(const KernelMatrix& acc, const Clustering& c, double epsilon, std::uint64_t seed,
                           const RankOptions& opts = {}, std::optional<double> frob_estimate = std::nullopt);

// Smallest k whose spectral tail (plus `residual`) is below `threshold`.
// Returns sigma.size() + 1 if no k up to sigma.size() qualifies.
Index tail_rank(const Vector& sigma, double residual, double threshold);

// Every cluster at min(rank, n_i); for fixed-rank runs.
RankProfile fixed_rank_profile(const Clustering& c, Index rank, double epsilon, double frob_estimate);

// k x k row-major, nonzero = skipped.
using BlockMask = std::vector<char>;

/// sum_i n_i r_i + sum over kept (i, j) of r_i r_j.
double memory_cost(const RankProfile& profile, const BlockMask& skipped = {});

struct SelectKResult {
    Index k = 0;
    RankProfile profile;
    Clustering clustering;
    std::map<Index, double> evaluated; // k -> f(k)
    bool exhaustive = false;
};

/// Minimizes f(k) = sum n_i r_i + (sum r_i)^2 over [k_min, k_max] by
/// ternary search, assuming f is roughly unimodal. Falls back to a full
/// scan if the probes show an interior peak.
SelectKResult select_k(const KernelMatrix& acc, double epsilon, Index k_min, Index k_max, std::uint64_t seed,
                       Partitioner partitioner = Partitioner::KMeans, const RankOptions& opts = {},
                       std::optional<double> frob_estimate = std::nullopt);

struct SkipCertificate {
    double distance_lower_bound = 0.0;
    double envelope_value = 0.0;
    double threshold = 0.0;
};

struct InnerBlock {
    bool skipped = false;
    Matrix C;
    SkipCertificate certificate;
};

/// Block Basis Factorization  K ~ P^T U C U^T P.
///
/// U is block diagonal with one orthonormal basis per cluster; C is a k x k
/// grid of inner blocks, each dense (r_i x r_j) or skipped as zero. The
/// object is immutable after construction and apply() is reentrant.
class BBFactorization final : public KernelApproximation {
public:
    BBFactorization(Clustering clustering, std::vector<Matrix> bases, std::vector<InnerBlock> inner,
                    KernelSpec kernel, double epsilon, double frob_estimate);

    Index n() const override { return clustering_.n(); }
    Index k() const noexcept { return clustering_.k; }

    Vector apply(const Vector& v) const override;
    double entry(Index a, Index b) const override;
    Matrix to_dense(Index cap = kDefaultDenseCap) const override;
    double memory_count() const override;

    const Clustering& clustering() const noexcept { return clustering_; }
    const Matrix& basis(Index i) const { return bases_[static_cast<std::size_t>(i)]; }
    const InnerBlock& block(Index i, Index j) const { return inner_[static_cast<std::size_t>(i * k() + j)]; }
    const KernelSpec& kernel() const noexcept { return kernel_; }
    double epsilon() const noexcept { return epsilon_; }
    double frob_estimate() const noexcept { return frob_estimate_; }

    IndexList ranks() const;
    BlockMask skipped_mask() const;
    Index skipped_count() const;

private:
    Clustering clustering_;
    std::vector<Matrix> bases_;
    std::vector<InnerBlock> inner_;
    KernelSpec kernel_;
    double epsilon_;
    double frob_estimate_;
    IndexList position_; // original index -> position in cluster order
};

struct BuildOptions {
    Index oversample = 10;
    Index power_iters = 2;
    bool cutoff = true;
    double pinv_tol = 1e-10;
};

/// Builds the factorization from sampled entries only: per cluster, a basis
/// from the randomized SVD of r_i + l sampled columns of its row slab; per
/// pair i <= j, either a cutoff certificate or an inner block recovered from
/// sampled rows and columns, mirrored to (j, i).
BBFactorization build_bbf(const KernelMatrix& acc, const Clustering& c, const RankProfile& profile,
                          std::uint64_t seed, const BuildOptions& opts = {});

/// C = pinv(U_I) * M_IJ * pinv(V_J)^T, which equals the true core whenever
/// M = U C V^T and U_I, V_J have full column rank.
Matrix inner_from_samples(const Matrix& U_rows, const Matrix& M_IJ, const Matrix& V_rows, double pinv_tol = 1e-10);

// Upper bound on the kernel entries between clusters i and j, in the
// kernel's native metric; radii are converted from l2 where needed.
SkipCertificate cutoff_certificate(const KernelSpec& spec, const Clustering& c, Index i, Index j, double threshold);

Matrix reconstruct_dense(const BBFactorization& f, Index cap = kDefaultDenseCap);

} // namespace bbf

#endif
