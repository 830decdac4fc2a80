#ifndef BBF_SERIALIZE_HPP
#define BBF_SERIALIZE_HPP

#include "bbf/bbf.hpp"

#include <filesystem>
#include <iosfwd>

namespace bbf {

/// Binary container, little-endian:
///
///   "BBFF" u32 version u32 family f64 h f64 epsilon f64 frob u64 n u64 d u64 k
///   u64 permutation[n]  u64 sizes[k]  u64 ranks[k]
///   f64 centers[k*d]  f64 radii[k]  f64 bases[i][n_i*r_i]
///   per (i, j) in row-major order: u8 skipped, then f64 C[r_i*r_j] or
///   f64 {distance_lower_bound, envelope_value, threshold}
///
/// Matrices are stored row-major.
inline constexpr std::uint32_t kFormatVersion = 1;

void write_bbf(std::ostream& out, const BBFactorization& f);
BBFactorization read_bbf(std::istream& in);

void save_bbf(const std::filesystem::path& path, const BBFactorization& f);
BBFactorization load_bbf(const std::filesystem::path& path);

} // namespace bbf

#endif
