#ifndef BBF_TYPES_HPP
#define BBF_TYPES_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bbf {

using Index = std::int64_t;

// Dense blocks are column-major; point sets are row-major so a point is contiguous.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using PointMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using IndexList = std::vector<Index>;
using IndexSpan = std::span<const Index>;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class CapExceeded : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, Index row, Index column)
        : Error(what), row_(row), column_(column) {}

    // 1-based, as a user would read them in an editor.
    Index row() const noexcept { return row_; }
    Index column() const noexcept { return column_; }

private:
    Index row_;
    Index column_;
};

} // namespace bbf

#endif
