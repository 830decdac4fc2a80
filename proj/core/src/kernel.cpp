#include "bbf/kernel.hpp"

namespace bbf {

namespace {

void check_indices(IndexSpan idx, Index bound, const char* what)
{
    for (Index v : idx)
        if (v < 0 || v >= bound)
            throw InvalidArgument(std::string(what) + " index " + std::to_string(v) + " out of range [0, " +
                                  std::to_string(bound) + ")");
}

} // namespace

std::string_view to_string(KernelFamily family)
{
    return family == KernelFamily::Gaussian ? "gaussian" : "laplacian";
}

KernelFamily parse_kernel_family(std::string_view name)
{
    if (name == "gaussian")
        return KernelFamily::Gaussian;
    if (name == "laplacian")
        return KernelFamily::Laplacian;
    throw InvalidArgument("unknown kernel '" + std::string(name) + "' (expected gaussian or laplacian)");
}

KernelSpec::KernelSpec(KernelFamily f, double bandwidth) : family(f), h(bandwidth)
{
    if (!(h > 0.0) || !std::isfinite(h))
        throw InvalidArgument("kernel bandwidth h must be positive and finite");
}

double eval_kernel(const KernelSpec& spec, const Vector& x, const Vector& y)
{
    if (x.size() != y.size())
        throw InvalidArgument("eval_kernel: dimension mismatch");
    if (!(spec.h > 0.0))
        throw InvalidArgument("eval_kernel: h must be positive");
    return spec(x, y);
}

double envelope(const KernelSpec& spec, double distance_lower_bound)
{
    if (distance_lower_bound < 0.0)
        throw InvalidArgument("envelope: distance bound must be nonnegative");
    return spec.profile(distance_lower_bound);
}

double MatrixSource::entry(Index row, Index col) const
{
    const Index r[1] = {row};
    const Index c[1] = {col};
    return block(r, c)(0, 0);
}

Matrix MatrixSource::dense() const
{
    IndexList r(static_cast<std::size_t>(rows()));
    IndexList c(static_cast<std::size_t>(cols()));
    for (Index i = 0; i < rows(); ++i)
        r[static_cast<std::size_t>(i)] = i;
    for (Index j = 0; j < cols(); ++j)
        c[static_cast<std::size_t>(j)] = j;
    return block(r, c);
}

KernelMatrix::KernelMatrix(const DataMatrix& data, KernelSpec spec)
    : data_(&data), spec_(spec), counter_(std::make_shared<std::atomic<std::uint64_t>>(0))
{
    if (!(spec_.h > 0.0))
        throw InvalidArgument("kernel bandwidth h must be positive");
}

Matrix KernelMatrix::block(IndexSpan rows, IndexSpan cols) const
{
    check_indices(rows, data_->n(), "row");
    check_indices(cols, data_->n(), "column");
    const auto m = static_cast<Index>(rows.size());
    const auto n = static_cast<Index>(cols.size());
    Matrix out(m, n);
    const auto& pts = data_->points;
    for (Index b = 0; b < n; ++b) {
        const auto y = pts.row(cols[static_cast<std::size_t>(b)]);
        for (Index a = 0; a < m; ++a)
            out(a, b) = spec_(pts.row(rows[static_cast<std::size_t>(a)]), y);
    }
    counter_->fetch_add(static_cast<std::uint64_t>(m * n), std::memory_order_relaxed);
    return out;
}

double KernelMatrix::entry(Index row, Index col) const
{
    if (row < 0 || row >= data_->n() || col < 0 || col >= data_->n())
        throw InvalidArgument("kernel entry index out of range");
    counter_->fetch_add(1, std::memory_order_relaxed);
    return spec_(data_->points.row(row), data_->points.row(col));
}

Matrix kernel_block(const KernelMatrix& acc, IndexSpan rows, IndexSpan cols)
{
    return acc.block(rows, cols);
}

Matrix cross_kernel(const KernelSpec& spec, const PointMatrix& a, const PointMatrix& b)
{
    if (a.cols() != b.cols())
        throw InvalidArgument("cross_kernel: dimension mismatch");
    Matrix out(a.rows(), b.rows());
    for (Index j = 0; j < b.rows(); ++j)
        for (Index i = 0; i < a.rows(); ++i)
            out(i, j) = spec(a.row(i), b.row(j));
    return out;
}

Matrix DenseSource::block(IndexSpan rows, IndexSpan cols) const
{
    check_indices(rows, m_.rows(), "row");
    check_indices(cols, m_.cols(), "column");
    Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
    for (std::size_t b = 0; b < cols.size(); ++b)
        for (std::size_t a = 0; a < rows.size(); ++a)
            out(static_cast<Index>(a), static_cast<Index>(b)) = m_(rows[a], cols[b]);
    return out;
}

SubmatrixSource::SubmatrixSource(const MatrixSource& parent, IndexList row_map, IndexList col_map)
    : parent_(&parent), row_map_(std::move(row_map)), col_map_(std::move(col_map))
{
    check_indices(row_map_, parent.rows(), "row map");
    check_indices(col_map_, parent.cols(), "column map");
}

Index SubmatrixSource::rows() const
{
    return row_map_.empty() ? parent_->rows() : static_cast<Index>(row_map_.size());
}

Index SubmatrixSource::cols() const
{
    return col_map_.empty() ? parent_->cols() : static_cast<Index>(col_map_.size());
}

IndexList SubmatrixSource::map(IndexSpan local, const IndexList& table) const
{
    if (table.empty())
        return IndexList(local.begin(), local.end());
    IndexList out;
    out.reserve(local.size());
    for (Index v : local) {
        if (v < 0 || v >= static_cast<Index>(table.size()))
            throw InvalidArgument("submatrix index out of range");
        out.push_back(table[static_cast<std::size_t>(v)]);
    }
    return out;
}

Matrix SubmatrixSource::block(IndexSpan rows, IndexSpan cols) const
{
    return parent_->block(map(rows, row_map_), map(cols, col_map_));
}

double SubmatrixSource::entry(Index row, Index col) const
{
    const Index r = row_map_.empty() ? row : row_map_.at(static_cast<std::size_t>(row));
    const Index c = col_map_.empty() ? col : col_map_.at(static_cast<std::size_t>(col));
    return parent_->entry(r, c);
}

Matrix CountingSource::block(IndexSpan rows, IndexSpan cols) const
{
    count_.fetch_add(static_cast<std::uint64_t>(rows.size() * cols.size()), std::memory_order_relaxed);
    return inner_->block(rows, cols);
}

double CountingSource::entry(Index row, Index col) const
{
    count_.fetch_add(1, std::memory_order_relaxed);
    return inner_->entry(row, col);
}

} // namespace bbf
