#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "tentlab/point_set.hpp"
#include "tentlab/space.hpp"

namespace tentlab {

/// [w]_{A_p} over every distinct ball. p = 1 uses avg(w) / min_B w.
double ap_constant(const MetricMeasureSpace& space, std::span<const double> w, double p);
/// sup over balls of avg(w^r)^{1/r} / avg(w), r > 1.
double rh_constant(const MetricMeasureSpace& space, std::span<const double> w, double r);

// Positive weight aligned to a space's point order. Constants are cached per
// (space fingerprint, exponent); concurrent fills compute identical values.
class WeightFunction {
public:
    WeightFunction() = default;
    explicit WeightFunction(std::vector<double> values);

    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    std::span<const double> values() const { return values_; }

    /// w(E) = sum over E of w_i mu_i.
    double measure(const MetricMeasureSpace& space, const PointSet& e) const;

    double ap(const MetricMeasureSpace& space, double p) const;
    double rh(const MetricMeasureSpace& space, double r) const;

    std::uint64_t fingerprint() const;

private:
    struct Cache {
        std::mutex mutex;
        std::map<std::pair<std::uint64_t, double>, double> ap, rh;
    };
    std::vector<double> values_;
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

enum class WeightKind { Constant, Power, Checkerboard, RandomAp };

struct WeightParams {
    double c = 1.0;             // constant value; overall scale for the others
    double a = 0.5;             // power: w = (1 + d(x, center))^a
    std::size_t center = 0;
    double high = 4.0;          // checkerboard values
    double low = 1.0;
    double cell = 1.0;          // checkerboard cell width in coordinate units
    double p = 2.0;             // random-Ap: class exponent
    double target = 2.0;        // random-Ap: accept when [w]_{A_p} <= target
    double sigma = 1.0;         // random-Ap: initial log-normal spread
    std::size_t max_attempts = 64;
};

WeightKind parse_weight_kind(const std::string& name);
std::string weight_kind_name(WeightKind kind);

/// Deterministic given (space, kind, params, seed). RandomAp draws log-normal
/// candidates, shrinking the spread by 0.85 per rejection; throws InvalidInput
/// if no candidate meets the target within max_attempts.
WeightFunction generate_weight(const MetricMeasureSpace& space, WeightKind kind, const WeightParams& params,
                               std::uint64_t seed);

/// Margin of w(B)/w(E) <= [w]_{A_p} (mu(B)/mu(E))^p for one pair E within B:
/// returns lhs / rhs, so the inequality holds iff the value is <= 1.
double subset_ratio(const MetricMeasureSpace& space, std::span<const double> w, double ap, double p,
                      const PointSet& ball_set, const PointSet& e);

struct WeightLemmaReport {
    double p = 0.0, q = 0.0;
    double ap_p = 0.0, ap_q = 0.0;
    bool monotone_pass = true;       // [w]_{A_q} <= [w]_{A_p}
    double dual_constant = 0.0;      // [w^{1-p'}]_{A_p'}
    double dual_expected = 0.0;      // [w]_{A_p}^{1/(p-1)}
    bool dual_pass = true;           // agreement to 1e-9 relative; vacuous at p = 1
    std::size_t iv_pairs = 0;
    double iv_worst = 0.0;           // max lhs/rhs
    bool iv_pass = true;
    std::string iv_witness;
    bool all_pass() const { return monotone_pass && dual_pass && iv_pass; }
};

/// E ranges over B intersect B' for every concentric sub-ball B' and, for
/// N <= 24, every other ball B'; larger spaces add 4096 seeded (B, B') draws.
WeightLemmaReport verify_weight_lemma(const MetricMeasureSpace& space, std::span<const double> w, double p, double q,
                                      std::uint64_t seed = 0);

}  // namespace tentlab
