#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tentlab/point_set.hpp"
#include "tentlab/space.hpp"

namespace tentlab {

inline constexpr std::size_t kNoParent = static_cast<std::size_t>(-1);

struct DyadicCube {
    std::size_t center = 0;
    std::vector<std::size_t> members;  // sorted
    std::size_t parent = kNoParent;    // index into the previous (coarser) generation
};

struct DyadicGeneration {
    int k = 0;
    std::vector<DyadicCube> cubes;
    std::vector<std::size_t> cube_of;  // point -> cube index
};

// Generations run coarse to fine: generations[i].k == k_min + i. Net scale
// at generation k is delta^k, with c0 = C0 = 1.
struct DyadicCubeSystem {
    double delta = 1.0 / 16.0;
    double c0 = 1.0;
    double C0 = 1.0;
    int k_min = 0;
    int k_max = 0;
    std::size_t max_children = 0;
    std::vector<DyadicGeneration> generations;

    double scale(int k) const;
    const DyadicGeneration& generation(int k) const { return generations.at(static_cast<std::size_t>(k - k_min)); }
};

// Default range: k_min is the last k with delta^k > diam (one cube), k_max the
// first k with 8 delta^k <= min positive distance (all singletons, and every
// Whitney shell is represented).
DyadicCubeSystem build_dyadic_system(const MetricMeasureSpace& space, double delta = 1.0 / 16.0,
                                     std::optional<std::pair<int, int>> k_range = std::nullopt);

struct PropertyCheck {
    std::string name;
    bool pass = true;
    std::string witness;  // empty on pass
    double slack = 0.0;   // property-specific margin; see the producing function
};

struct DyadicReport {
    std::vector<PropertyCheck> checks;  // (i) .. (vi)
    std::size_t max_children = 0;
    bool all_pass() const;
};

// Works from the member lists only, so hand-edited systems are judged on
// what they contain rather than on cached indices.
DyadicReport verify_dyadic(const MetricMeasureSpace& space, const DyadicCubeSystem& system);

enum class WhitneyMode { Strict, Repair };

struct WhitneyCube {
    int k = 0;              // generation at which the cube was selected
    int shell_k = 0;        // finest generation at which the same set is a candidate
    std::size_t index = 0;  // cube index within generation k
    std::vector<std::size_t> members;
    bool repaired = false;  // members were intersected with omega
};

struct WhitneyCover {
    PointSet omega;
    double delta = 1.0 / 16.0;
    WhitneyMode mode = WhitneyMode::Strict;
    std::vector<WhitneyCube> cubes;
};

/// Throws InvalidInput if omega is empty or all of X, or (strict mode) if the
/// generation range is too narrow for the selected cubes to avoid omega^c.
WhitneyCover whitney_cover(const MetricMeasureSpace& space, const DyadicCubeSystem& system, const PointSet& omega,
                           WhitneyMode mode = WhitneyMode::Strict);

struct WhitneyReport {
    PropertyCheck disjoint;
    PropertyCheck exact_union;
    PropertyCheck lower;  // diam(Q) <= d(Q, omega^c); slack = min d - diam
    PropertyCheck upper;  // d(Q, omega^c) <= delta^-2 diam(Q); slack = min delta^-2 diam - d over non-degenerate cubes
    std::size_t degenerate = 0;  // cubes with diam(Q) < (2/3) delta^shell_k, exempt from the upper bound
    std::size_t repaired = 0;
    bool all_pass() const { return disjoint.pass && exact_union.pass && lower.pass && upper.pass; }
};

WhitneyReport verify_whitney(const MetricMeasureSpace& space, const WhitneyCover& cover);

}  // namespace tentlab
