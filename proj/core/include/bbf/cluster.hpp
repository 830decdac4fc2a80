#ifndef BBF_CLUSTER_HPP
#define BBF_CLUSTER_HPP

#include "bbf/data.hpp"
#include "bbf/types.hpp"

#include <cstdint>
#include <string_view>

namespace bbf {

enum class Partitioner { KMeans, KCenter };

std::string_view to_string(Partitioner p);
Partitioner parse_partitioner(std::string_view name);

/// Partition of n points into k nonempty clusters.
///
/// `permutation` lists original point indices in cluster order (cluster 0
/// first, original order kept inside a cluster); positions
/// [offsets[i], offsets[i] + sizes[i]) hold the members of cluster i. Radii
/// are Euclidean distances to the center.
struct Clustering {
    Index k = 0;
    IndexList assignment;
    PointMatrix centers;
    IndexList sizes;
    std::vector<double> radii;
    IndexList permutation;
    IndexList offsets;

    Index n() const noexcept { return static_cast<Index>(assignment.size()); }

    IndexSpan members(Index cluster) const
    {
        return IndexSpan(permutation).subspan(static_cast<std::size_t>(offsets[static_cast<std::size_t>(cluster)]),
                                              static_cast<std::size_t>(sizes[static_cast<std::size_t>(cluster)]));
    }
};

// Builds sizes, offsets, permutation and radii from an assignment and centers.
// Throws if any cluster is empty.
Clustering make_clustering(const DataMatrix& data, IndexList assignment, PointMatrix centers);

// Lloyd iteration seeded by farthest-point traversal. If `objective_trace` is
// given it receives the squared-distance objective after every assignment.
Clustering kmeans(const DataMatrix& data, Index k, std::uint64_t seed, Index max_iter = 100,
                  std::vector<double>* objective_trace = nullptr);

// Gonzalez farthest-point traversal; the first center is drawn from the seed.
Clustering kcenter_farthest(const DataMatrix& data, Index k, std::uint64_t seed);

Clustering cluster_points(const DataMatrix& data, Partitioner method, Index k, std::uint64_t seed);

enum class PermuteDirection { Forward, Inverse };

// Forward: original order -> cluster order. Inverse undoes it.
Vector permute_vector(const Clustering& c, const Vector& v, PermuteDirection direction);

} // namespace bbf

#endif
