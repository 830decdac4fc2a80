#ifndef BBF_KERNEL_HPP
#define BBF_KERNEL_HPP

#include "bbf/data.hpp"
#include "bbf/types.hpp"

#include <atomic>
#include <cmath>
#include <memory>
#include <string>
#include <string_view>

namespace bbf {

enum class KernelFamily { Gaussian, Laplacian };

std::string_view to_string(KernelFamily family);
KernelFamily parse_kernel_family(std::string_view name);

/// Shift-invariant kernel.
///   Gaussian:  exp(-|x-y|_2^2 / h^2)
///   Laplacian: exp(-|x-y|_1 / h)
struct KernelSpec {
    KernelFamily family = KernelFamily::Gaussian;
    double h = 1.0;

    KernelSpec() = default;
    KernelSpec(KernelFamily f, double bandwidth);

    // Distance in the family's native metric (l2 for Gaussian, l1 for Laplacian).
    template <typename A, typename B>
    double distance(const A& x, const B& y) const
    {
        if (family == KernelFamily::Gaussian)
            return std::sqrt((x - y).squaredNorm());
        return (x - y).cwiseAbs().sum();
    }

    // Value as a function of native distance; also the cutoff envelope.
    double profile(double t) const
    {
        if (family == KernelFamily::Gaussian)
            return std::exp(-(t * t) / (h * h));
        return std::exp(-t / h);
    }

    template <typename A, typename B>
    double operator()(const A& x, const B& y) const
    {
        if (family == KernelFamily::Gaussian)
            return std::exp(-(x - y).squaredNorm() / (h * h));
        return std::exp(-(x - y).cwiseAbs().sum() / h);
    }
};

double eval_kernel(const KernelSpec& spec, const Vector& x, const Vector& y);

// Upper bound on any kernel entry whose points are at native distance >= t.
double envelope(const KernelSpec& spec, double distance_lower_bound);

/// A virtual dense matrix that can hand out arbitrary sub-blocks.
class MatrixSource {
public:
    virtual ~MatrixSource() = default;

    virtual Index rows() const = 0;
    virtual Index cols() const = 0;
    virtual Matrix block(IndexSpan rows, IndexSpan cols) const = 0;
    virtual double entry(Index row, Index col) const;

    Matrix dense() const;
};

/// K(I,J) for a point set and kernel, never storing more than the requested
/// block. Keeps a running count of evaluated entries.
class KernelMatrix final : public MatrixSource {
public:
    KernelMatrix(const DataMatrix& data, KernelSpec spec);

    Index rows() const override { return data_->n(); }
    Index cols() const override { return data_->n(); }
    Matrix block(IndexSpan rows, IndexSpan cols) const override;
    double entry(Index row, Index col) const override;

    const DataMatrix& data() const noexcept { return *data_; }
    const KernelSpec& spec() const noexcept { return spec_; }

    std::uint64_t entries_evaluated() const noexcept { return counter_->load(); }
    void reset_counter() noexcept { counter_->store(0); }

private:
    const DataMatrix* data_;
    KernelSpec spec_;
    std::shared_ptr<std::atomic<std::uint64_t>> counter_;
};

// Alias used where the role, not the type, matters.
using BlockAccessor = KernelMatrix;

Matrix kernel_block(const KernelMatrix& acc, IndexSpan rows, IndexSpan cols);

// Kernel between two arbitrary point sets (rows of a, rows of b).
Matrix cross_kernel(const KernelSpec& spec, const PointMatrix& a, const PointMatrix& b);

class DenseSource final : public MatrixSource {
public:
    explicit DenseSource(Matrix m) : m_(std::move(m)) {}

    Index rows() const override { return m_.rows(); }
    Index cols() const override { return m_.cols(); }
    Matrix block(IndexSpan rows, IndexSpan cols) const override;
    double entry(Index row, Index col) const override { return m_(row, col); }

    const Matrix& matrix() const noexcept { return m_; }

private:
    Matrix m_;
};

/// Restriction of a parent source to given row and column index maps.
class SubmatrixSource final : public MatrixSource {
public:
    // An empty map means "all indices of the parent".
    SubmatrixSource(const MatrixSource& parent, IndexList row_map, IndexList col_map);

    Index rows() const override;
    Index cols() const override;
    Matrix block(IndexSpan rows, IndexSpan cols) const override;
    double entry(Index row, Index col) const override;

private:
    IndexList map(IndexSpan local, const IndexList& table) const;

    const MatrixSource* parent_;
    IndexList row_map_;
    IndexList col_map_;
};

/// Decorator counting every entry requested from the wrapped source.
class CountingSource final : public MatrixSource {
public:
    explicit CountingSource(const MatrixSource& inner) : inner_(&inner) {}

    Index rows() const override { return inner_->rows(); }
    Index cols() const override { return inner_->cols(); }
    Matrix block(IndexSpan rows, IndexSpan cols) const override;
    double entry(Index row, Index col) const override;

    std::uint64_t count() const noexcept { return count_.load(); }

private:
    const MatrixSource* inner_;
    mutable std::atomic<std::uint64_t> count_{0};
};

} // namespace bbf

#endif
