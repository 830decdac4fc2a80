#include "bbf/colsample.hpp"

#include "bbf/random.hpp"
#include "bbf/rla.hpp"

#include <algorithm>
#include <numeric>

namespace bbf {

namespace {

IndexList iota_list(Index n)
{
    IndexList v(static_cast<std::size_t>(n));
    std::iota(v.begin(), v.end(), Index{0});
    return v;
}

} // namespace

SampleResult sample_columns(const MatrixSource& M, Index r, Index l, std::uint64_t seed)
{
    const Index m = M.rows();
    const Index n = M.cols();
    if (r < 1 || l < 0)
        throw InvalidArgument("sample_columns: need r >= 1 and l >= 0");
    if (r + l > n)
        throw InvalidArgument("sample_columns: r + l = " + std::to_string(r + l) + " exceeds the column count " +
                              std::to_string(n));
    if (m < 1)
        throw InvalidArgument("sample_columns: matrix has no rows");

    Rng rng(seed);
    const IndexList all_cols = iota_list(n);
    SampleResult out;

    // Step 1: important columns from uniformly sampled rows.
    const IndexList rows1 = m <= r ? iota_list(m) : sample_without_replacement(m, r, rng);
    IndexList cols = pivot_columns_qr(M.block(rows1, all_cols), r);

    // Step 2: important rows from the important columns plus l fresh ones.
    out.uniform_cols_used = sample_excluding(n, l, cols, rng);
    cols.insert(cols.end(), out.uniform_cols_used.begin(), out.uniform_cols_used.end());
    const IndexList all_rows = iota_list(m);
    const Index row_target = std::min(r + l, m);
    out.important_rows = pivot_rows_lq(M.block(all_rows, cols), row_target);

    // Step 3: refine the columns on the important rows plus l fresh rows.
    const IndexList rows3_extra = sample_excluding(m, l, out.important_rows, rng);
    IndexList rows3 = out.important_rows;
    rows3.insert(rows3.end(), rows3_extra.begin(), rows3_extra.end());
    out.important_cols = pivot_columns_qr(M.block(rows3, all_cols), r);

    out.uniform_rows_used = m <= r ? IndexList{} : rows1;
    out.uniform_rows_used.insert(out.uniform_rows_used.end(), rows3_extra.begin(), rows3_extra.end());
    return out;
}

} // namespace bbf
