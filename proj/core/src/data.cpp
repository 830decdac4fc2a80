#include "bbf/data.hpp"

#include "bbf/random.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string_view>
#include <unordered_set>

namespace bbf {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            return fields;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
}

} // namespace

DataMatrix make_data(PointMatrix points)
{
    if (points.rows() < 1 || points.cols() < 1)
        throw InvalidArgument("data matrix must have n >= 1 and d >= 1");
    if (!points.allFinite())
        throw InvalidArgument("data matrix contains non-finite entries");
    DataMatrix out;
    out.points = std::move(points);
    return out;
}

DataMatrix load_csv(const std::filesystem::path& path, bool has_header, const IndexList& drop_columns)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open data file: " + path.string());

    const std::unordered_set<Index> dropped(drop_columns.begin(), drop_columns.end());
    std::vector<double> values;
    Index rows = 0;
    Index arity = -1;
    Index kept = 0;
    Index line_no = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (has_header && line_no == 1)
            continue;
        if (trim(line).empty())
            continue;
        const auto fields = split_fields(line);
        const auto width = static_cast<Index>(fields.size());
        if (arity < 0) {
            arity = width;
            for (Index c = 0; c < arity; ++c)
                kept += dropped.count(c) ? 0 : 1;
            if (kept == 0)
                throw ParseError(path.string() + ": every column dropped", line_no, 0);
        } else if (width != arity) {
            throw ParseError(path.string() + ": row " + std::to_string(line_no) + " has " + std::to_string(width) +
                                 " fields, expected " + std::to_string(arity),
                             line_no, width);
        }
        for (Index c = 0; c < width; ++c) {
            if (dropped.count(c))
                continue;
            const auto field = fields[static_cast<std::size_t>(c)];
            double v = 0.0;
            const auto* end = field.data() + field.size();
            const auto [ptr, ec] = std::from_chars(field.data(), end, v);
            if (field.empty() || ec != std::errc{} || ptr != end || !std::isfinite(v))
                throw ParseError(path.string() + ": cannot parse '" + std::string(field) + "' at row " +
                                     std::to_string(line_no) + ", column " + std::to_string(c + 1),
                                 line_no, c + 1);
            values.push_back(v);
        }
        ++rows;
    }
    if (rows == 0)
        throw ParseError(path.string() + ": no data rows", line_no, 0);

    PointMatrix points(rows, kept);
    std::copy(values.begin(), values.end(), points.data());
    return make_data(std::move(points));
}

void save_csv(const std::filesystem::path& path, const DataMatrix& data, bool with_header)
{
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write data file: " + path.string());
    out << std::setprecision(17);
    if (with_header) {
        for (Index c = 0; c < data.d(); ++c)
            out << (c ? "," : "") << "x" << c;
        out << '\n';
    }
    for (Index i = 0; i < data.n(); ++i) {
        for (Index c = 0; c < data.d(); ++c)
            out << (c ? "," : "") << data.points(i, c);
        out << '\n';
    }
}

DataMatrix standardize(const DataMatrix& data)
{
    if (data.standardized)
        throw InvalidArgument("data is already standardized");
    const Index n = data.n();
    const Index d = data.d();
    DataMatrix out;
    out.points = data.points;
    out.feature_means = data.points.colwise().mean().transpose();
    out.feature_stds.resize(d);
    for (Index c = 0; c < d; ++c) {
        auto col = out.points.col(c);
        col.array() -= out.feature_means(c);
        const double sd = n > 1 ? std::sqrt(col.squaredNorm() / static_cast<double>(n - 1)) : 0.0;
        // Numerically constant column: rounding residue of the mean only.
        if (!(sd > 1e-14 * (1.0 + std::abs(out.feature_means(c))))) {
            out.feature_stds(c) = 1.0;
            col.setZero();
            continue;
        }
        out.feature_stds(c) = sd;
        col /= sd;
    }
    out.standardized = true;
    return out;
}

DataMatrix destandardize(const DataMatrix& data)
{
    if (!data.standardized)
        throw InvalidArgument("data is not standardized");
    DataMatrix out;
    out.points = data.points;
    for (Index c = 0; c < data.d(); ++c)
        out.points.col(c) = out.points.col(c).array() * data.feature_stds(c) + data.feature_means(c);
    return out;
}

DataMatrix synth_blobs(Index n, Index d, Index num_centers, double spread, std::uint64_t seed)
{
    if (num_centers < 1 || n < num_centers)
        throw InvalidArgument("synth_blobs requires n >= num_centers >= 1");
    if (d < 1)
        throw InvalidArgument("synth_blobs requires d >= 1");
    if (!(spread > 0.0))
        throw InvalidArgument("synth_blobs requires spread > 0");

    Rng rng(seed);
    PointMatrix centers(num_centers, d);
    for (Index c = 0; c < num_centers; ++c)
        for (Index j = 0; j < d; ++j)
            centers(c, j) = rng.uniform();

    PointMatrix points(n, d);
    for (Index p = 0; p < n; ++p) {
        const Index c = blob_label(p, num_centers);
        for (Index j = 0; j < d; ++j)
            points(p, j) = centers(c, j) + spread * rng.normal();
    }
    return make_data(std::move(points));
}

} // namespace bbf
