#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tentlab/point_set.hpp"

namespace tentlab {

/// Raised when an input violates a documented precondition or invariant.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/**
 * A finite metric measure space (X, d, mu).
 *
 * Points are indexed 0..N-1. The distance table is stored densely and, for
 * every point, the other points are kept sorted by distance so that a ball
 * B(x, r) = {y : d(x, y) < r} is a prefix of that order. Volumes are prefix
 * sums of the point masses along the same order.
 *
 * Immutable after construction; all queries are const and thread-safe.
 */
class MetricMeasureSpace {
public:
    using Coordinates = std::vector<std::vector<double>>;

    /// Euclidean metric on the given coordinates. Empty `mass` means unit masses.
    static MetricMeasureSpace from_coordinates(Coordinates coords, std::vector<double> mass = {});

    /// Explicit row-major N x N distance table. Empty `mass` means unit masses.
    static MetricMeasureSpace from_distances(std::size_t n, std::vector<double> table,
                                             std::vector<double> mass = {});

    std::size_t size() const { return n_; }
    double distance(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }
    double mass(std::size_t i) const { return mass_[i]; }
    std::span<const double> masses() const { return mass_; }
    double total_mass() const { return total_mass_; }
    double diameter() const { return diameter_; }
    /// Smallest positive pairwise distance; 0 for a one-point space.
    double min_positive_distance() const { return min_positive_; }

    bool has_coordinates() const { return !coords_.empty(); }
    const Coordinates& coordinates() const { return coords_; }
    bool is_euclidean() const { return euclidean_; }

    /// Points ordered by distance from x (x first, ties by index).
    std::span<const std::size_t> order(std::size_t x) const { return {order_.data() + x * n_, n_}; }
    /// Distances matching order(x).
    std::span<const double> sorted_distances(std::size_t x) const { return {sorted_.data() + x * n_, n_}; }
    /// prefix_mass(x)[k] = total mass of the first k points of order(x); size N+1.
    std::span<const double> prefix_mass(std::size_t x) const
    {
        return {prefix_.data() + x * (n_ + 1), n_ + 1};
    }

    /// Number of points in the strict ball B(x, r).
    std::size_t ball_count(std::size_t x, double r) const;
    PointSet ball(std::size_t x, double r) const;
    double volume(std::size_t x, double r) const;

    /// d(x, S) = min over S; +infinity for empty S.
    double distance_to_set(std::size_t x, const PointSet& s) const;
    /// diam(S); 0 for sets with fewer than two points.
    double set_diameter(std::span<const std::size_t> members) const;
    double measure(const PointSet& s) const;

    /// Prefix lengths of order(x) at which a new distinct ball ends; every
    /// ball centred at x equals one of these prefixes.
    std::vector<std::size_t> ball_breaks(std::size_t x) const;

    /// Stable fingerprint of distances and masses.
    std::uint64_t fingerprint() const;

private:
    MetricMeasureSpace() = default;
    void finalize();
    void validate() const;

    std::size_t n_ = 0;
    std::vector<double> dist_;
    std::vector<double> mass_;
    Coordinates coords_;
    bool euclidean_ = false;
    std::vector<std::size_t> order_;
    std::vector<double> sorted_;
    std::vector<double> prefix_;
    double total_mass_ = 0.0;
    double diameter_ = 0.0;
    double min_positive_ = 0.0;
};

/// Measured doubling behaviour of a finite space.
struct DoublingReport {
    double c_doubling = 1.0;  ///< sup over x, r of V(x, 2r) / V(x, r)
    double n_exp = 0.0;       ///< fitted volume-growth exponent
    double d_exp = 0.0;       ///< fitted exponent for V(y, r) <= C (1 + d(x,y)/r)^D V(x, r)
    std::size_t witness_center = 0;
    double witness_radius = 0.0;
};

DoublingReport doubling_report(const MetricMeasureSpace& space);

enum class MaximalKind { Uncentered, Centered };

/// Hardy-Littlewood maximal function, exact over the finite family of
/// distinct balls. Uncentered: max over every ball containing x.
std::vector<double> maximal_function(const MetricMeasureSpace& space, std::span<const double> f,
                                     MaximalKind kind = MaximalKind::Uncentered);

/// (sum_i |f_i|^p w_i mu_i)^(1/p). Empty `w` means w = 1.
double lp_norm_weighted(const MetricMeasureSpace& space, std::span<const double> f,
                        std::span<const double> w, double p);

/// Greedy r-net in index order: centres pairwise >= r apart, every point
/// within < r of some centre. `seed_centers` are taken first (they must be
/// r-separated).
std::vector<std::size_t> greedy_net(const MetricMeasureSpace& space, double r,
                                    std::span<const std::size_t> seed_centers = {});

/// Common test and CLI fixtures.
MetricMeasureSpace grid_1d(std::size_t n, double spacing = 1.0);
MetricMeasureSpace grid_2d(std::size_t rows, std::size_t cols, double spacing = 1.0);

}  // namespace tentlab
