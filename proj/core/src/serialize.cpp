#include "bbf/serialize.hpp"

#include <array>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>

namespace bbf {

namespace {

constexpr std::array<char, 4> kMagic{'B', 'B', 'F', 'F'};
// Refuse absurd sizes from corrupt headers before allocating.
constexpr std::uint64_t kMaxCount = std::uint64_t{1} << 40;

class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    void u8(std::uint8_t v) { out_.put(static_cast<char>(v)); }
    void u32(std::uint32_t v) { le(v, 4); }
    void u64(std::uint64_t v) { le(v, 8); }
    void f64(double v) { le(std::bit_cast<std::uint64_t>(v), 8); }
    void index(Index v) { u64(static_cast<std::uint64_t>(v)); }

    template <typename M>
    void row_major(const M& m)
    {
        for (Index a = 0; a < m.rows(); ++a)
            for (Index b = 0; b < m.cols(); ++b)
                f64(m(a, b));
    }

private:
    void le(std::uint64_t v, int bytes)
    {
        char buf[8];
        for (int i = 0; i < bytes; ++i)
            buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
        out_.write(buf, bytes);
    }
    std::ostream& out_;
};

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(le(1)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
    std::uint64_t u64() { return le(8); }
    double f64() { return std::bit_cast<double>(le(8)); }
    Index count()
    {
        const std::uint64_t v = u64();
        if (v > kMaxCount)
            throw ParseError("bbf container: implausible size field", 0, 0);
        return static_cast<Index>(v);
    }

    Matrix row_major(Index rows, Index cols)
    {
        Matrix m(rows, cols);
        for (Index a = 0; a < rows; ++a)
            for (Index b = 0; b < cols; ++b)
                m(a, b) = f64();
        return m;
    }

private:
    std::uint64_t le(int bytes)
    {
        unsigned char buf[8];
        in_.read(reinterpret_cast<char*>(buf), bytes);
        if (in_.gcount() != bytes)
            throw ParseError("bbf container: unexpected end of data", 0, 0);
        std::uint64_t v = 0;
        for (int i = 0; i < bytes; ++i)
            v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
        return v;
    }
    std::istream& in_;
};

} // namespace

void write_bbf(std::ostream& out, const BBFactorization& f)
{
    const Clustering& c = f.clustering();
    const Index k = f.k();
    Writer w(out);
    out.write(kMagic.data(), kMagic.size());
    w.u32(kFormatVersion);
    w.u32(f.kernel().family == KernelFamily::Gaussian ? 0 : 1);
    w.f64(f.kernel().h);
    w.f64(f.epsilon());
    w.f64(f.frob_estimate());
    w.index(f.n());
    w.index(c.centers.cols());
    w.index(k);
    for (Index p : c.permutation)
        w.index(p);
    for (Index s : c.sizes)
        w.index(s);
    for (Index i = 0; i < k; ++i)
        w.index(f.basis(i).cols());
    w.row_major(c.centers);
    for (double r : c.radii)
        w.f64(r);
    for (Index i = 0; i < k; ++i)
        w.row_major(f.basis(i));
    for (Index i = 0; i < k; ++i)
        for (Index j = 0; j < k; ++j) {
            const auto& b = f.block(i, j);
            w.u8(b.skipped ? 1 : 0);
            if (b.skipped) {
                w.f64(b.certificate.distance_lower_bound);
                w.f64(b.certificate.envelope_value);
                w.f64(b.certificate.threshold);
            } else {
                w.row_major(b.C);
            }
        }
    if (!out)
        throw Error("bbf container: write failed");
}

BBFactorization read_bbf(std::istream& in)
{
    std::array<char, 4> magic{};
    in.read(magic.data(), magic.size());
    if (in.gcount() != 4 || magic != kMagic)
        throw ParseError("bbf container: bad magic", 0, 0);
    Reader r(in);
    const std::uint32_t version = r.u32();
    if (version != kFormatVersion)
        throw ParseError("bbf container: unsupported version " + std::to_string(version), 0, 0);
    const std::uint32_t family = r.u32();
    if (family > 1)
        throw ParseError("bbf container: unknown kernel family", 0, 0);
    const double h = r.f64();
    const double epsilon = r.f64();
    const double frob = r.f64();
    const Index n = r.count();
    const Index d = r.count();
    const Index k = r.count();
    if (k < 1 || k > n)
        throw ParseError("bbf container: inconsistent cluster count", 0, 0);

    Clustering c;
    c.k = k;
    for (Index p = 0; p < n; ++p)
        c.permutation.push_back(r.count());
    Index offset = 0;
    for (Index i = 0; i < k; ++i) {
        c.sizes.push_back(r.count());
        c.offsets.push_back(offset);
        offset += c.sizes.back();
    }
    if (offset != n)
        throw ParseError("bbf container: cluster sizes do not sum to n", 0, 0);
    IndexList ranks;
    for (Index i = 0; i < k; ++i)
        ranks.push_back(r.count());
    c.assignment.assign(static_cast<std::size_t>(n), -1);
    for (Index i = 0; i < k; ++i)
        for (Index p : c.members(i)) {
            if (p < 0 || p >= n || c.assignment[static_cast<std::size_t>(p)] != -1)
                throw ParseError("bbf container: permutation is not a bijection", 0, 0);
            c.assignment[static_cast<std::size_t>(p)] = i;
        }
    c.centers = r.row_major(k, d);
    for (Index i = 0; i < k; ++i)
        c.radii.push_back(r.f64());

    std::vector<Matrix> bases;
    for (Index i = 0; i < k; ++i)
        bases.push_back(r.row_major(c.sizes[static_cast<std::size_t>(i)], ranks[static_cast<std::size_t>(i)]));
    std::vector<InnerBlock> inner(static_cast<std::size_t>(k * k));
    for (Index i = 0; i < k; ++i)
        for (Index j = 0; j < k; ++j) {
            InnerBlock& b = inner[static_cast<std::size_t>(i * k + j)];
            b.skipped = r.u8() != 0;
            if (b.skipped) {
                b.certificate.distance_lower_bound = r.f64();
                b.certificate.envelope_value = r.f64();
                b.certificate.threshold = r.f64();
            } else {
                b.C = r.row_major(ranks[static_cast<std::size_t>(i)], ranks[static_cast<std::size_t>(j)]);
            }
        }
    const KernelSpec spec(family == 0 ? KernelFamily::Gaussian : KernelFamily::Laplacian, h);
    return BBFactorization(std::move(c), std::move(bases), std::move(inner), spec, epsilon, frob);
}

void save_bbf(const std::filesystem::path& path, const BBFactorization& f)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open output file: " + path.string());
    write_bbf(out, f);
}

BBFactorization load_bbf(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open factorization file: " + path.string());
    return read_bbf(in);
}

} // namespace bbf
