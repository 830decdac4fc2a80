#include "doctest.h"

#include "bbf/random.hpp"
#include "bbf/rla.hpp"

#include <algorithm>
#include <cmath>
#include <set>

using namespace bbf;

namespace {

Matrix random_orthonormal(Index m, Index k, Rng& rng) { return orthonormal_basis(rng.gaussian_matrix(m, k)); }

Matrix with_spectrum(Index m, Index n, const Vector& s, std::uint64_t seed)
{
    Rng rng(seed);
    return random_orthonormal(m, s.size(), rng) * s.asDiagonal() * random_orthonormal(n, s.size(), rng).transpose();
}

double orth_defect(const Matrix& Q) { return (Q.transpose() * Q - Matrix::Identity(Q.cols(), Q.cols())).norm(); }

} // namespace

TEST_CASE("randomized SVD of a diagonal matrix")
{
    Vector d(5);
    d << 3, 2, 1, 0, 0;
    const Matrix A = d.asDiagonal();
    for (Index l : {1, 10}) {
        const SVDResult s = randomized_svd(A, 2, l, 1, 3);
        CHECK(s.exact_fallback == (l == 10));
        REQUIRE(s.rank() == 2);
        CHECK(s.S(0) == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(s.S(1) == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(std::abs(std::abs(s.U(0, 0)) - 1.0) < 1e-12);
        CHECK(std::abs(std::abs(s.U(1, 1)) - 1.0) < 1e-12);
        CHECK(std::abs(std::abs(s.V(0, 0)) - 1.0) < 1e-12);
        CHECK(std::abs(std::abs(s.V(1, 1)) - 1.0) < 1e-12);
    }
}

TEST_CASE("randomized SVD recovers exact low rank")
{
    Vector s(3);
    s << 5, 2, 0.5;
    const Matrix A = with_spectrum(60, 40, s, 8);
    const SVDResult r = randomized_svd(A, 3, 5, 2, 1);
    CHECK_FALSE(r.exact_fallback);
    CHECK((A - r.reconstruct()).norm() <= 1e-9 * A.norm());
    CHECK(orth_defect(r.U) < 1e-10);
    CHECK(orth_defect(r.V) < 1e-10);
}

TEST_CASE("randomized SVD near the optimal tail for decaying spectra")
{
    int good = 0;
    for (std::uint64_t t = 0; t < 20; ++t) {
        Vector s(80);
        for (Index j = 0; j < 80; ++j)
            s(j) = std::pow(0.8, static_cast<double>(j));
        const Matrix A = with_spectrum(100, 80, s, 1000 + t);
        const SVDResult r = randomized_svd(A, 10, 10, 2, t);
        const double tail = s.tail(70).norm();
        good += (A - r.reconstruct()).norm() <= 3.0 * tail;
        CHECK(orth_defect(r.U) < 1e-10);
        for (Index j = 1; j < r.S.size(); ++j)
            CHECK(r.S(j) <= r.S(j - 1));
    }
    CHECK(good >= 19);
}

TEST_CASE("randomized SVD is reproducible and validates arguments")
{
    Rng rng(1);
    const Matrix A = rng.gaussian_matrix(50, 30);
    const SVDResult a = randomized_svd(A, 5, 5, 1, 42), b = randomized_svd(A, 5, 5, 1, 42);
    CHECK(a.U == b.U);
    CHECK(a.S == b.S);
    CHECK_THROWS_AS(randomized_svd(A, 0), InvalidArgument);
    CHECK_THROWS_AS(randomized_svd(A, 31), InvalidArgument);
    CHECK_THROWS_AS(randomized_svd(A, 3, -1), InvalidArgument);
}

TEST_CASE("exact SVD")
{
    CHECK((exact_svd(Matrix::Identity(4, 4)).S - Vector::Ones(4)).norm() < 1e-14);
    Matrix swap(2, 2);
    swap << 0, 1, 1, 0;
    const SVDResult s = exact_svd(swap);
    CHECK((s.S - Vector::Ones(2)).norm() < 1e-14);
    CHECK((s.reconstruct() - swap).norm() < 1e-14);
    Rng rng(5);
    const Matrix A = rng.gaussian_matrix(50, 30);
    const SVDResult e = exact_svd(A);
    CHECK(e.rank() == 30);
    CHECK((e.reconstruct() - A).norm() < 1e-12 * A.norm());
}

TEST_CASE("pivoted QR picks independent columns")
{
    Matrix A = Matrix::Zero(6, 5);
    Rng rng(3);
    A.col(1) = rng.gaussian_matrix(6, 1);
    A.col(4) = rng.gaussian_matrix(6, 1);
    const IndexList p = pivot_columns_qr(A, 2);
    CHECK(std::set<Index>(p.begin(), p.end()) == std::set<Index>{1, 4});

    Matrix B = Matrix::Zero(3, 3);
    B(0, 0) = 1;
    B(0, 1) = 2;
    B(1, 2) = 1;
    const IndexList q = pivot_columns_qr(B, 2);
    CHECK(std::set<Index>(q.begin(), q.end()) == std::set<Index>{1, 2});

    const IndexList all = pivot_columns_qr(rng.gaussian_matrix(4, 7), 7);
    CHECK(std::set<Index>(all.begin(), all.end()).size() == 7);
    CHECK_THROWS_AS(pivot_columns_qr(B, 4), InvalidArgument);
    CHECK_THROWS_AS(pivot_columns_qr(B, 0), InvalidArgument);
}

TEST_CASE("pivoted LQ is pivoted QR of the transpose")
{
    Rng rng(4);
    const Matrix A = rng.gaussian_matrix(9, 5);
    CHECK(pivot_rows_lq(A, 4) == pivot_columns_qr(A.transpose(), 4));
    Matrix B = Matrix::Zero(5, 3);
    B.row(2) = rng.gaussian_matrix(1, 3);
    B.row(3) = rng.gaussian_matrix(1, 3);
    const IndexList rows = pivot_rows_lq(B, 2);
    CHECK(std::set<Index>(rows.begin(), rows.end()) == std::set<Index>{2, 3});
}

TEST_CASE("truncated pseudo-inverse")
{
    Matrix D = Matrix::Zero(2, 2);
    D(0, 0) = 2;
    D(1, 1) = 4;
    Matrix want = Matrix::Zero(2, 2);
    want(0, 0) = 0.5;
    want(1, 1) = 0.25;
    CHECK((pinv_truncated(D) - want).norm() < 1e-15);

    Matrix tiny = Matrix::Zero(2, 2);
    tiny(0, 0) = 1;
    tiny(1, 1) = 1e-14;
    Matrix cut = Matrix::Zero(2, 2);
    cut(0, 0) = 1;
    CHECK((pinv_truncated(tiny) - cut).norm() < 1e-15);

    Rng rng(6);
    const Matrix T = rng.gaussian_matrix(8, 3);
    CHECK((pinv_truncated(T) * T - Matrix::Identity(3, 3)).norm() < 1e-12);
    CHECK((pinv_truncated(pinv_truncated(T)) - T).norm() < 1e-12 * T.norm());
    CHECK_THROWS_AS(pinv_truncated(Matrix::Zero(3, 3)), InvalidArgument);
}

TEST_CASE("symmetric eigensolvers agree")
{
    Rng rng(7);
    const Matrix G = rng.gaussian_matrix(30, 30);
    const Matrix S = G * G.transpose();
    const SymmetricEigen full = symmetric_eigen(S, true);
    for (Index j = 1; j < 30; ++j)
        CHECK(full.values(j) <= full.values(j - 1));
    CHECK((full.vectors * full.values.asDiagonal() * full.vectors.transpose() - S).norm() < 1e-10 * S.norm());
    const SymmetricEigen top = symmetric_eigen_top(S, 5, true);
    REQUIRE(top.values.size() == 5);
    CHECK((top.values - full.values.head(5)).norm() < 1e-10 * full.values(0));
    for (Index j = 0; j < 5; ++j)
        CHECK(std::abs(std::abs(top.vectors.col(j).dot(full.vectors.col(j))) - 1.0) < 1e-8);
    CHECK(symmetric_eigen_top(S, 3, false).vectors.size() == 0);
    CHECK_THROWS_AS(symmetric_eigen_top(S, 31, false), InvalidArgument);
    CHECK_THROWS_AS(symmetric_eigen(rng.gaussian_matrix(3, 4), false), InvalidArgument);
}

TEST_CASE("orthonormal basis spans the input")
{
    Rng rng(9);
    const Matrix Y = rng.gaussian_matrix(20, 6);
    const Matrix Q = orthonormal_basis(Y);
    CHECK(Q.cols() == 6);
    CHECK(orth_defect(Q) < 1e-12);
    CHECK((Q * (Q.transpose() * Y) - Y).norm() < 1e-12 * Y.norm());
}

TEST_CASE("exact SVD of rank-deficient blocks with repeated columns")
{
    Rng rng(12);
    const Matrix B = rng.gaussian_matrix(49, 3);
    Matrix A(49, 42);
    for (Index j = 0; j < 42; ++j)
        A.col(j) = B.col(j % 3) * (j < 21 ? 1.0 : 1e-12);
    const SVDResult s = exact_svd(A);
    CHECK(s.U.allFinite());
    CHECK(s.V.allFinite());
    CHECK((s.reconstruct() - A).norm() <= 1e-12 * A.norm());
    CHECK((s.U.transpose() * s.U - Matrix::Identity(42, 42)).norm() < 1e-10);
}
