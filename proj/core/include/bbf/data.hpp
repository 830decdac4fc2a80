#ifndef BBF_DATA_HPP
#define BBF_DATA_HPP

#include "bbf/types.hpp"

#include <cstdint>
#include <filesystem>

namespace bbf {

/// n points in d dimensions, one point per row.
///
/// When `standardized` is set, `feature_means` and `feature_stds` hold the
/// affine map that was applied; otherwise they are empty.
struct DataMatrix {
    PointMatrix points;
    bool standardized = false;
    Vector feature_means;
    Vector feature_stds;

    Index n() const noexcept { return points.rows(); }
    Index d() const noexcept { return points.cols(); }

    auto point(Index i) const { return points.row(i); }
};

// Validates shape and finiteness, throws InvalidArgument otherwise.
DataMatrix make_data(PointMatrix points);

// Comma separated, '.' decimal point, no quoting. `drop_columns` are 0-based
// indices of the file's columns.
DataMatrix load_csv(const std::filesystem::path& path, bool has_header = false,
                    const IndexList& drop_columns = {});

void save_csv(const std::filesystem::path& path, const DataMatrix& data, bool with_header = true);

// (x - mean) / std per feature with the n-1 denominator. Constant columns get
// std 1 and therefore map to zero.
DataMatrix standardize(const DataMatrix& data);

// Applies the stored means/stds in reverse.
DataMatrix destandardize(const DataMatrix& data);

// Blob centers uniform in [0,1]^d, isotropic normal noise with standard
// deviation `spread`; point p belongs to center p % num_centers.
DataMatrix synth_blobs(Index n, Index d, Index num_centers, double spread, std::uint64_t seed);

// Generation label of point p in synth_blobs output.
inline Index blob_label(Index p, Index num_centers) { return p % num_centers; }

} // namespace bbf

#endif
