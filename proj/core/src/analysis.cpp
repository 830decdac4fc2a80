#include "bbf/analysis.hpp"

#include "bbf/random.hpp"
#include "bbf/rla.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bbf {

double relative_error(const Matrix& K_hat, const Matrix& K)
{
    if (K_hat.rows() != K.rows() || K_hat.cols() != K.cols())
        throw InvalidArgument("relative_error: shape mismatch");
    const double denom = K.norm();
    if (denom == 0.0)
        throw InvalidArgument("relative_error: reference matrix is zero");
    return (K_hat - K).norm() / denom;
}

double relative_error(const KernelApproximation& approx, const Matrix& K)
{
    return relative_error(approx.to_dense(std::max<Index>(approx.n(), 1)), K);
}

double relative_error(const KernelApproximation& approx, const MatrixSource& K, Index cap)
{
    check_dense_cap(K.rows(), cap);
    return relative_error(approx.to_dense(cap), K.dense());
}

SampledError relative_error_sampled(const KernelApproximation& approx, const MatrixSource& K, Index budget,
                                    std::uint64_t seed)
{
    const Index n = K.rows();
    if (approx.n() != n || K.cols() != n)
        throw InvalidArgument("relative_error_sampled: size mismatch");
    if (budget < 2)
        throw InvalidArgument("relative_error_sampled: budget must be at least 2");

    Rng rng(seed);
    std::vector<double> num(static_cast<std::size_t>(budget));
    std::vector<double> den(static_cast<std::size_t>(budget));
    double sum_num = 0.0;
    double sum_den = 0.0;
    for (Index t = 0; t < budget; ++t) {
        const Index a = rng.below(n);
        const Index b = rng.below(n);
        const double exact = K.entry(a, b);
        const double diff = approx.entry(a, b) - exact;
        num[static_cast<std::size_t>(t)] = diff * diff;
        den[static_cast<std::size_t>(t)] = exact * exact;
        sum_num += diff * diff;
        sum_den += exact * exact;
    }
    const double s = static_cast<double>(budget);
    const double mean_num = sum_num / s;
    const double mean_den = sum_den / s;
    if (mean_den == 0.0)
        throw InvalidArgument("relative_error_sampled: sampled reference entries are all zero");

    const double ratio = mean_num / mean_den;
    double var_num = 0.0;
    double var_den = 0.0;
    double cov = 0.0;
    for (Index t = 0; t < budget; ++t) {
        const double x = num[static_cast<std::size_t>(t)] - mean_num;
        const double y = den[static_cast<std::size_t>(t)] - mean_den;
        var_num += x * x;
        var_den += y * y;
        cov += x * y;
    }
    var_num /= s - 1.0;
    var_den /= s - 1.0;
    cov /= s - 1.0;
    const double var_ratio =
        std::max(0.0, (var_num - 2.0 * ratio * cov + ratio * ratio * var_den) / (s * mean_den * mean_den));

    SampledError out;
    out.value = std::sqrt(ratio);
    out.std_error = out.value > 0.0 ? std::sqrt(var_ratio) / (2.0 * out.value) : 0.0;
    return out;
}

SpectralStats spectral_stats(const KernelMatrix& acc, Index r, bool with_leverage, Index cap)
{
    const Index n = acc.rows();
    check_dense_cap(n, cap);
    if (r < 1 || r >= n)
        throw InvalidArgument("spectral_stats: need 1 <= r < n");

    const Matrix K = acc.dense();
    const double frob2 = K.squaredNorm();
    const auto eig = symmetric_eigen_top(K, r + 1, with_leverage);
    const Vector& lambda = eig.values;

    SpectralStats out;
    out.r = r;
    out.inv_h2 = 1.0 / (acc.spec().h * acc.spec().h);
    out.stable_rank = std::max<Index>(1, static_cast<Index>(std::ceil(frob2 / (lambda(0) * lambda(0)))));
    out.eig_ratio = lambda(r) / lambda(r - 1);
    out.frob_capture = 100.0 * std::sqrt(std::min(1.0, lambda.head(r).squaredNorm() / frob2));
    out.scaled_leverage = std::numeric_limits<double>::quiet_NaN();
    if (with_leverage) {
        Vector lev = eig.vectors.leftCols(r).rowwise().squaredNorm();
        std::nth_element(lev.data(), lev.data() + (r - 1), lev.data() + n, std::greater<>());
        out.scaled_leverage = static_cast<double>(n) / static_cast<double>(r) * lev(r - 1);
    }
    return out;
}

} // namespace bbf
