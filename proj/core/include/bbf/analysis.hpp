#ifndef BBF_ANALYSIS_HPP
#define BBF_ANALYSIS_HPP

#include "bbf/approximation.hpp"
#include "bbf/kernel.hpp"
#include "bbf/types.hpp"

#include <cstdint>

namespace bbf {

// ||K_hat - K||_F / ||K||_F.
double relative_error(const Matrix& K_hat, const Matrix& K);
double relative_error(const KernelApproximation& approx, const Matrix& K);
// Dense mode: builds K and K_hat, both limited by `cap`.
double relative_error(const KernelApproximation& approx, const MatrixSource& K, Index cap = kDefaultDenseCap);

struct SampledError {
    double value = 0.0;
    double std_error = 0.0;
};

/// Estimates the error ratio from `budget` uniform ordered pairs (a, b),
/// diagonal included. Numerator and denominator use the same sample; the
/// standard error is the delta-method estimate for the ratio.
SampledError relative_error_sampled(const KernelApproximation& approx, const MatrixSource& K, Index budget,
                                    std::uint64_t seed);

struct SpectralStats {
    Index stable_rank = 0;
    double eig_ratio = 0.0;     // lambda_{r+1} / lambda_r
    double frob_capture = 0.0;  // 100 ||M_r||_F / ||M||_F
    double scaled_leverage = 0.0; // (n / r) * r-th largest leverage score
    Index r = 0;
    double inv_h2 = 0.0;
};

/// Table-style statistics from the exact dense kernel matrix. Only the top
/// r + 1 eigenpairs are computed. Leverage scores need eigenvectors and can
/// be skipped, in which case scaled_leverage is NaN.
SpectralStats spectral_stats(const KernelMatrix& acc, Index r, bool with_leverage = true,
                             Index cap = kHardDenseCap);

} // namespace bbf

#endif
