#include "bbf/rla.hpp"

#include "bbf/random.hpp"

#include <lapacke.h>

#include <algorithm>

namespace bbf {

Matrix orthonormal_basis(const Matrix& Y)
{
    const Index w = std::min(Y.rows(), Y.cols());
    Eigen::HouseholderQR<Matrix> qr(Y);
    return qr.householderQ() * Matrix::Identity(Y.rows(), w);
}

SVDResult exact_svd(const Matrix& A)
{
    const Index m = A.rows();
    const Index n = A.cols();
    const Index p = std::min(m, n);
    SVDResult out;
    out.U.resize(m, p);
    out.S.resize(p);
    Matrix vt(p, n);
    if (p == 0) {
        out.V = vt.transpose();
        return out;
    }
    // Eigen 3.4.0's BDCSVD can index out of bounds during deflation and
    // return NaN; LAPACK divide and conquer with a QR-iteration fallback.
    Matrix work = A;
    lapack_int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'S', static_cast<lapack_int>(m), static_cast<lapack_int>(n),
                                     work.data(), static_cast<lapack_int>(m), out.S.data(), out.U.data(),
                                     static_cast<lapack_int>(m), vt.data(), static_cast<lapack_int>(p));
    if (info > 0) {
        work = A;
        Vector superb(p);
        info = LAPACKE_dgesvd(LAPACK_COL_MAJOR, 'S', 'S', static_cast<lapack_int>(m), static_cast<lapack_int>(n),
                              work.data(), static_cast<lapack_int>(m), out.S.data(), out.U.data(),
                              static_cast<lapack_int>(m), vt.data(), static_cast<lapack_int>(p), superb.data());
    }
    if (info != 0)
        throw Error("exact_svd: LAPACK SVD failed with info " + std::to_string(info));
    out.V = vt.transpose();
    return out;
}

namespace {

SVDResult truncate(SVDResult s, Index r)
{
    r = std::min(r, s.S.size());
    s.U = s.U.leftCols(r).eval();
    s.S = s.S.head(r).eval();
    s.V = s.V.leftCols(r).eval();
    return s;
}

} // namespace

SVDResult randomized_svd(const Matrix& A, Index r, Index l, Index q, std::uint64_t seed)
{
    const Index m = A.rows();
    const Index n = A.cols();
    if (r < 1 || r > std::min(m, n))
        throw InvalidArgument("randomized_svd: rank must satisfy 1 <= r <= min(m, n)");
    if (l < 0 || q < 0)
        throw InvalidArgument("randomized_svd: oversampling and power iterations must be nonnegative");

    const Index width = r + l;
    if (width >= std::min(m, n)) {
        auto out = truncate(exact_svd(A), r);
        out.exact_fallback = true;
        return out;
    }

    Rng rng(seed);
    const Matrix omega = rng.gaussian_matrix(n, width);
    Matrix Q = orthonormal_basis(A * omega);
    for (Index it = 0; it < q; ++it) {
        const Matrix Qhat = orthonormal_basis(A.transpose() * Q);
        Q = orthonormal_basis(A * Qhat);
    }
    const Matrix B = Q.transpose() * A;
    SVDResult small = exact_svd(B);
    SVDResult out;
    out.U = Q * small.U;
    out.S = std::move(small.S);
    out.V = std::move(small.V);
    return truncate(std::move(out), r);
}

IndexList pivot_columns_qr(const Matrix& A, Index r)
{
    if (r < 1 || r > A.cols())
        throw InvalidArgument("pivot_columns_qr: need 1 <= r <= number of columns");
    Eigen::ColPivHouseholderQR<Matrix> qr(A);
    const auto& perm = qr.colsPermutation().indices();
    IndexList out(static_cast<std::size_t>(r));
    for (Index i = 0; i < r; ++i)
        out[static_cast<std::size_t>(i)] = perm(i);
    return out;
}

IndexList pivot_rows_lq(const Matrix& A, Index r)
{
    return pivot_columns_qr(A.transpose(), r);
}

Matrix pinv_truncated(const Matrix& A, double rel_tol)
{
    if (A.size() == 0 || A.cwiseAbs().maxCoeff() == 0.0)
        throw InvalidArgument("pinv_truncated: matrix is zero");
    const SVDResult s = exact_svd(A);
    const double cutoff = rel_tol * s.S(0);
    Index keep = 0;
    while (keep < s.S.size() && s.S(keep) >= cutoff && s.S(keep) > 0.0)
        ++keep;
    const Vector inv = s.S.head(keep).cwiseInverse();
    return s.V.leftCols(keep) * inv.asDiagonal() * s.U.leftCols(keep).transpose();
}

SymmetricEigen symmetric_eigen(const Matrix& A, bool with_vectors)
{
    const Index n = A.rows();
    if (A.cols() != n)
        throw InvalidArgument("symmetric_eigen: matrix must be square");
    Matrix work = A;
    Vector w(n);
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, with_vectors ? 'V' : 'N', 'L',
                                           static_cast<lapack_int>(n), work.data(), static_cast<lapack_int>(n),
                                           w.data());
    if (info != 0)
        throw Error("symmetric_eigen: LAPACK dsyevd failed with info " + std::to_string(info));

    // LAPACK returns ascending order.
    SymmetricEigen out;
    out.values = w.reverse();
    if (with_vectors)
        out.vectors = work.rowwise().reverse();
    return out;
}

SymmetricEigen symmetric_eigen_top(const Matrix& A, Index count, bool with_vectors)
{
    const Index n = A.rows();
    if (A.cols() != n)
        throw InvalidArgument("symmetric_eigen_top: matrix must be square");
    if (count < 1 || count > n)
        throw InvalidArgument("symmetric_eigen_top: count must lie in [1, n]");
    Matrix work = A;
    Vector w(n);
    Matrix z(with_vectors ? n : 1, with_vectors ? count : 1);
    std::vector<lapack_int> support(static_cast<std::size_t>(2 * count));
    lapack_int found = 0;
    const lapack_int info = LAPACKE_dsyevr(
        LAPACK_COL_MAJOR, with_vectors ? 'V' : 'N', 'I', 'L', static_cast<lapack_int>(n), work.data(),
        static_cast<lapack_int>(n), 0.0, 0.0, static_cast<lapack_int>(n - count + 1), static_cast<lapack_int>(n),
        0.0, &found, w.data(), z.data(), static_cast<lapack_int>(z.rows()), support.data());
    if (info != 0 || found != count)
        throw Error("symmetric_eigen_top: LAPACK dsyevr failed with info " + std::to_string(info));

    SymmetricEigen out;
    out.values = w.head(count).reverse();
    if (with_vectors)
        out.vectors = z.rowwise().reverse();
    return out;
}

} // namespace bbf
