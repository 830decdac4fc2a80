#ifndef BBF_COLSAMPLE_HPP
#define BBF_COLSAMPLE_HPP

#include "bbf/kernel.hpp"
#include "bbf/types.hpp"

#include <cstdint>

namespace bbf {

struct SampleResult {
    IndexList important_cols;    // r columns
    IndexList important_rows;    // r + l rows (fewer only if the matrix has fewer rows)
    IndexList uniform_rows_used; // uniform row draws of both row passes
    IndexList uniform_cols_used;
};

/// Picks r important columns of a virtual m x n matrix by alternating
/// pivoted QR on sampled rows and pivoted LQ on sampled columns:
///
///   1. r uniform rows, pivoted QR -> r columns
///   2. add l uniform columns, pivoted LQ on those columns -> r + l rows
///   3. add l uniform rows, pivoted QR on those rows -> final r columns
///
/// Only the three sampled slabs are requested from `M`, so the cost is
/// O((r + l)^2 (m + n)) entries and flops. Matrices with fewer than r + l
/// rows use all of their rows.
SampleResult sample_columns(const MatrixSource& M, Index r, Index l, std::uint64_t seed);

} // namespace bbf

#endif
