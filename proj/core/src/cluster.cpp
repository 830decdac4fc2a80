#include "bbf/cluster.hpp"

#include "bbf/random.hpp"

#include <cmath>
#include <limits>

namespace bbf {

namespace {

void check_k(const DataMatrix& data, Index k)
{
    if (k < 1)
        throw InvalidArgument("cluster count k must be at least 1");
    if (k > data.n())
        throw InvalidArgument("cluster count k = " + std::to_string(k) + " exceeds n = " + std::to_string(data.n()));
}

// Farthest-point traversal. Returns chosen point indices in pick order.
IndexList farthest_points(const DataMatrix& data, Index k, std::uint64_t seed, std::vector<double>& min_dist2,
                          IndexList& nearest)
{
    const Index n = data.n();
    Rng rng(seed);
    IndexList chosen;
    chosen.reserve(static_cast<std::size_t>(k));
    min_dist2.assign(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
    nearest.assign(static_cast<std::size_t>(n), 0);

    Index next = rng.below(n);
    for (Index c = 0; c < k; ++c) {
        chosen.push_back(next);
        const auto center = data.point(next);
        Index far = 0;
        double far_d = -1.0;
        for (Index p = 0; p < n; ++p) {
            const double d2 = (data.point(p) - center).squaredNorm();
            auto& cur = min_dist2[static_cast<std::size_t>(p)];
            if (d2 < cur) {
                cur = d2;
                nearest[static_cast<std::size_t>(p)] = c;
            }
            if (cur > far_d) {
                far_d = cur;
                far = p;
            }
        }
        // Centers own themselves even when duplicated points tie at distance 0.
        min_dist2[static_cast<std::size_t>(next)] = 0.0;
        nearest[static_cast<std::size_t>(next)] = c;
        next = far;
        if (far_d <= 0.0 && c + 1 < k) {
            // Every point coincides with a chosen center: take the first unchosen index.
            std::vector<char> taken(static_cast<std::size_t>(n), 0);
            for (Index q : chosen)
                taken[static_cast<std::size_t>(q)] = 1;
            for (Index p = 0; p < n; ++p)
                if (!taken[static_cast<std::size_t>(p)]) {
                    next = p;
                    break;
                }
        }
    }
    return chosen;
}

PointMatrix gather_rows(const DataMatrix& data, const IndexList& rows)
{
    PointMatrix out(static_cast<Index>(rows.size()), data.d());
    for (std::size_t i = 0; i < rows.size(); ++i)
        out.row(static_cast<Index>(i)) = data.point(rows[i]);
    return out;
}

// Nearest center per point, lowest index on ties. Returns the objective.
double assign_nearest(const DataMatrix& data, const PointMatrix& centers, IndexList& assignment,
                      std::vector<double>& dist2)
{
    const Index n = data.n();
    const Index k = centers.rows();
    double total = 0.0;
    for (Index p = 0; p < n; ++p) {
        Index best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (Index c = 0; c < k; ++c) {
            const double d2 = (data.point(p) - centers.row(c)).squaredNorm();
            if (d2 < best_d) {
                best_d = d2;
                best = c;
            }
        }
        assignment[static_cast<std::size_t>(p)] = best;
        dist2[static_cast<std::size_t>(p)] = best_d;
        total += best_d;
    }
    return total;
}

// Gives every empty cluster the point farthest from its own center (taken
// from a cluster that can spare it). Returns the updated objective.
double repair_empty(const DataMatrix& data, PointMatrix& centers, IndexList& assignment, std::vector<double>& dist2,
                    double objective)
{
    const Index n = data.n();
    const Index k = centers.rows();
    IndexList sizes(static_cast<std::size_t>(k), 0);
    for (Index a : assignment)
        ++sizes[static_cast<std::size_t>(a)];
    for (Index e = 0; e < k; ++e) {
        if (sizes[static_cast<std::size_t>(e)] > 0)
            continue;
        Index far = -1;
        double far_d = -1.0;
        for (Index p = 0; p < n; ++p) {
            const auto owner = assignment[static_cast<std::size_t>(p)];
            if (sizes[static_cast<std::size_t>(owner)] > 1 && dist2[static_cast<std::size_t>(p)] > far_d) {
                far_d = dist2[static_cast<std::size_t>(p)];
                far = p;
            }
        }
        --sizes[static_cast<std::size_t>(assignment[static_cast<std::size_t>(far)])];
        ++sizes[static_cast<std::size_t>(e)];
        assignment[static_cast<std::size_t>(far)] = e;
        centers.row(e) = data.point(far);
        objective -= dist2[static_cast<std::size_t>(far)];
        dist2[static_cast<std::size_t>(far)] = 0.0;
    }
    return objective;
}

PointMatrix centroids(const DataMatrix& data, const IndexList& assignment, Index k)
{
    PointMatrix sums = PointMatrix::Zero(k, data.d());
    Vector counts = Vector::Zero(k);
    for (Index p = 0; p < data.n(); ++p) {
        const auto c = assignment[static_cast<std::size_t>(p)];
        sums.row(c) += data.point(p);
        counts(c) += 1.0;
    }
    for (Index c = 0; c < k; ++c)
        sums.row(c) /= counts(c);
    return sums;
}

} // namespace

std::string_view to_string(Partitioner p)
{
    return p == Partitioner::KMeans ? "kmeans" : "kcenter";
}

Partitioner parse_partitioner(std::string_view name)
{
    if (name == "kmeans")
        return Partitioner::KMeans;
    if (name == "kcenter")
        return Partitioner::KCenter;
    throw InvalidArgument("unknown partitioner '" + std::string(name) + "' (expected kmeans or kcenter)");
}

Clustering make_clustering(const DataMatrix& data, IndexList assignment, PointMatrix centers)
{
    const Index n = data.n();
    const Index k = centers.rows();
    if (static_cast<Index>(assignment.size()) != n)
        throw InvalidArgument("assignment length does not match n");

    Clustering c;
    c.k = k;
    c.sizes.assign(static_cast<std::size_t>(k), 0);
    for (Index a : assignment) {
        if (a < 0 || a >= k)
            throw InvalidArgument("cluster id out of range");
        ++c.sizes[static_cast<std::size_t>(a)];
    }
    for (Index i = 0; i < k; ++i)
        if (c.sizes[static_cast<std::size_t>(i)] == 0)
            throw InvalidArgument("cluster " + std::to_string(i) + " is empty");

    c.offsets.assign(static_cast<std::size_t>(k), 0);
    for (Index i = 1; i < k; ++i)
        c.offsets[static_cast<std::size_t>(i)] =
            c.offsets[static_cast<std::size_t>(i - 1)] + c.sizes[static_cast<std::size_t>(i - 1)];

    c.permutation.assign(static_cast<std::size_t>(n), 0);
    IndexList cursor = c.offsets;
    for (Index p = 0; p < n; ++p)
        c.permutation[static_cast<std::size_t>(cursor[static_cast<std::size_t>(assignment[static_cast<std::size_t>(p)])]++)] = p;

    c.radii.assign(static_cast<std::size_t>(k), 0.0);
    for (Index p = 0; p < n; ++p) {
        const auto a = assignment[static_cast<std::size_t>(p)];
        const double r = (data.point(p) - centers.row(a)).norm();
        auto& radius = c.radii[static_cast<std::size_t>(a)];
        radius = std::max(radius, r);
    }
    c.assignment = std::move(assignment);
    c.centers = std::move(centers);
    return c;
}

Clustering kmeans(const DataMatrix& data, Index k, std::uint64_t seed, Index max_iter,
                  std::vector<double>* objective_trace)
{
    check_k(data, k);
    const Index n = data.n();

    std::vector<double> dist2;
    IndexList assignment;
    const IndexList seeds = farthest_points(data, k, seed, dist2, assignment);
    PointMatrix centers = gather_rows(data, seeds);

    // Twice the farthest distance from the first seed bounds the diameter.
    double diameter = 0.0;
    for (Index p = 0; p < n; ++p)
        diameter = std::max(diameter, (data.point(p) - centers.row(0)).norm());
    diameter *= 2.0;
    const double tolerance = 1e-6 * diameter;

    for (Index it = 0; it < max_iter; ++it) {
        double objective = assign_nearest(data, centers, assignment, dist2);
        objective = repair_empty(data, centers, assignment, dist2, objective);
        if (objective_trace)
            objective_trace->push_back(objective);

        PointMatrix updated = centroids(data, assignment, k);
        const double movement = (updated - centers).rowwise().norm().sum();
        centers = std::move(updated);
        if (movement < tolerance)
            break;
    }
    double objective = assign_nearest(data, centers, assignment, dist2);
    objective = repair_empty(data, centers, assignment, dist2, objective);
    if (objective_trace)
        objective_trace->push_back(objective);
    centers = centroids(data, assignment, k);
    return make_clustering(data, std::move(assignment), std::move(centers));
}

Clustering kcenter_farthest(const DataMatrix& data, Index k, std::uint64_t seed)
{
    check_k(data, k);
    std::vector<double> dist2;
    IndexList assignment;
    const IndexList chosen = farthest_points(data, k, seed, dist2, assignment);
    return make_clustering(data, std::move(assignment), gather_rows(data, chosen));
}

Clustering cluster_points(const DataMatrix& data, Partitioner method, Index k, std::uint64_t seed)
{
    return method == Partitioner::KMeans ? kmeans(data, k, seed) : kcenter_farthest(data, k, seed);
}

Vector permute_vector(const Clustering& c, const Vector& v, PermuteDirection direction)
{
    const Index n = c.n();
    if (v.size() != n)
        throw InvalidArgument("permute_vector: length mismatch");
    Vector out(n);
    if (direction == PermuteDirection::Forward) {
        for (Index p = 0; p < n; ++p)
            out(p) = v(c.permutation[static_cast<std::size_t>(p)]);
    } else {
        for (Index p = 0; p < n; ++p)
            out(c.permutation[static_cast<std::size_t>(p)]) = v(p);
    }
    return out;
}

} // namespace bbf
