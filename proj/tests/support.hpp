#ifndef BBF_TESTS_SUPPORT_HPP
#define BBF_TESTS_SUPPORT_HPP

#include "bbf/data.hpp"
#include "bbf/kernel.hpp"
#include "bbf/random.hpp"

#include <filesystem>
#include <fstream>
#include <string>

namespace bbf::test {

inline DataMatrix uniform_points(Index n, Index d, std::uint64_t seed, double scale = 1.0)
{
    Rng rng(seed);
    PointMatrix p(n, d);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < d; ++j)
            p(i, j) = scale * rng.uniform();
    return make_data(std::move(p));
}

// Loop oracle, independent of the blocked evaluator.
inline Matrix dense_kernel(const DataMatrix& data, const KernelSpec& spec)
{
    Matrix K(data.n(), data.n());
    for (Index a = 0; a < data.n(); ++a)
        for (Index b = 0; b < data.n(); ++b)
            K(a, b) = spec(data.point(a), data.point(b));
    return K;
}

inline double frob_ratio(const Matrix& A, const Matrix& B) { return (A - B).norm() / B.norm(); }

inline std::filesystem::path temp_file(const std::string& name, const std::string& contents)
{
    const auto path = std::filesystem::temp_directory_path() / ("bbf_test_" + name);
    std::ofstream(path) << contents;
    return path;
}

inline std::filesystem::path abalone_path() { return std::filesystem::path(BBF_DATA_DIR) / "abalone.csv"; }

} // namespace bbf::test

#endif
