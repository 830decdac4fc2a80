#ifndef BBF_RLA_HPP
#define BBF_RLA_HPP

#include "bbf/types.hpp"

#include <cstdint>

namespace bbf {

/// Truncated or full SVD, A ~ U diag(S) V^T with S nonincreasing.
struct SVDResult {
    Matrix U;
    Vector S;
    Matrix V;
    // Set when the sketch width was clamped and the exact SVD was used instead.
    bool exact_fallback = false;

    Index rank() const noexcept { return S.size(); }
    Matrix reconstruct() const { return U * S.asDiagonal() * V.transpose(); }
};

/// Randomized SVD with a Gaussian test matrix of width r + l and q rounds of
/// re-orthonormalized power iteration.
///
/// If r + l reaches min(m, n) the sketch would span the whole range anyway,
/// so the exact SVD is computed and truncated to r. The test matrix is filled
/// column by column from Rng(seed), which makes the result reproducible.
SVDResult randomized_svd(const Matrix& A, Index r, Index l = 10, Index q = 2, std::uint64_t seed = 0);

// Thin SVD, rank min(m, n).
SVDResult exact_svd(const Matrix& A);

// First r pivots of column-pivoted Householder QR, in pivot order.
IndexList pivot_columns_qr(const Matrix& A, Index r);

// First r pivot rows; the same as pivot_columns_qr on A^T.
IndexList pivot_rows_lq(const Matrix& A, Index r);

// SVD pseudo-inverse dropping singular values below rel_tol * sigma_max.
Matrix pinv_truncated(const Matrix& A, double rel_tol = 1e-10);

// Orthonormal basis of range(Y) from thin Householder QR (same column count as Y).
Matrix orthonormal_basis(const Matrix& Y);

/// Symmetric eigendecomposition, eigenvalues sorted in decreasing order.
/// `vectors` is empty unless requested.
struct SymmetricEigen {
    Vector values;
    Matrix vectors;
};

SymmetricEigen symmetric_eigen(const Matrix& A, bool with_vectors);
// Only the `count` largest eigenpairs (LAPACK dsyevr, index range).
SymmetricEigen symmetric_eigen_top(const Matrix& A, Index count, bool with_vectors);

} // namespace bbf

#endif
