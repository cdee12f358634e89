#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tentlab/dyadic.hpp"
#include "tentlab/space.hpp"
#include "tentlab/tent.hpp"

namespace tentlab {

struct LevelSet {
    int k = 0;
    PointSet omega;       // {A(F) > 2^k / kappa}
    PointSet omega_star;  // {M(chi_omega) > 1 - gamma}
};

/// Levels k_lo..k_hi with k_lo = floor(log2(kappa min+ A)) - 1 and
/// k_hi = ceil(log2(kappa max A)); empty for F = 0.
std::vector<LevelSet> level_sets(const MetricMeasureSpace& space, const TentFunction& f, double kappa, double gamma);

enum class DecompMode { Faithful, Strict };

struct DecompParams {
    double delta = 1.0 / 16.0;
    double gamma = 0.5;
    double kappa = 1.0;
    double c1 = 0.0;  // 0 selects 2 delta^-2 + 3
    DecompMode mode = DecompMode::Strict;

    double effective_c1() const { return c1 > 0.0 ? c1 : 2.0 / (delta * delta) + 3.0; }
};

struct AtomEntry {
    int k = 0;
    std::size_t j = 0;
    double lambda = 0.0;
    BallSpec ball;
    std::vector<std::size_t> cube;  // Whitney cube Q_j^k
    HalfSpaceRegion region;         // Delta_j^k
    TentFunction atom;              // F chi_Delta / lambda
};

struct LevelSummary {
    int k = 0;
    std::size_t omega_count = 0, omega_star_count = 0;
    double w_omega = 0.0, w_omega_star = 0.0;
    std::size_t atoms = 0;
    double lambda_p_sum = 0.0;
};

struct AtomicDecomposition {
    double p = 1.0, q = 2.0;
    DecompParams params;
    TGrid grid;
    std::size_t points = 0;
    std::vector<AtomEntry> entries;
    std::vector<LevelSummary> levels;
    std::uint64_t space_hash = 0, weight_hash = 0;
};

/// Throws InvalidInput on bad parameters or if some support sample escapes
/// every Delta region.
AtomicDecomposition decompose(const MetricMeasureSpace& space, const TentFunction& f, double p, double q,
                              std::span<const double> w, const DecompParams& params);

/// Sum of lambda * atom over the entries, in entry order.
TentFunction reconstruct(const AtomicDecomposition& d);

struct CoefficientReport {
    double lambda_p_sum = 0.0;   // sum |lambda|^p
    double norm_p = 0.0;         // ||F||^p_{T^p_{2,w}}
    double ratio = 0.0;          // lambda_p_sum / norm_p; 0 when degenerate
    bool degenerate = false;
    std::vector<double> atom_slack;  // (bound - norm) / bound per entry at exponent q
    std::size_t support_failures = 0;
    double min_slack = 0.0, max_slack = 0.0;
    double converse_lhs = 0.0;       // ||sum lambda a||^p_{T^p_{2,w}}
    bool converse_pass = true;       // converse_lhs <= lambda_p_sum + 1e-9
    double max_w_star_ratio = 0.0;   // max over levels of w(Omega*) / w(Omega)
};

CoefficientReport coefficient_report(const MetricMeasureSpace& space, const AtomicDecomposition& d,
                                     const TentFunction& f, std::span<const double> w);

/// Regions pairwise disjoint and their union equal to supp F (on each atom's own support).
bool regions_partition_support(const AtomicDecomposition& d, const TentFunction& f, std::string* witness = nullptr);

}  // namespace tentlab
