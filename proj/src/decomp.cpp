#include "tentlab/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tentlab/hash.hpp"

namespace tentlab {

namespace {

double weighted_measure(const MetricMeasureSpace& space, std::span<const double> w, const PointSet& s)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < space.size(); ++i)
        if (s.contains(i)) acc += (w.empty() ? 1.0 : w[i]) * space.mass(i);
    return acc;
}

struct CoverCube {
    std::size_t center = 0;
    std::vector<std::size_t> members;
};

// Whitney cubes of omega*, or the single top cube when omega* = X.
std::vector<CoverCube> cover_cubes(const MetricMeasureSpace& space, const DyadicCubeSystem& sys, const PointSet& o)
{
    std::vector<CoverCube> out;
    if (o.full()) {
        const auto& top = sys.generations.front();
        for (const auto& q : top.cubes) out.push_back({q.center, q.members});
        return out;
    }
    const WhitneyCover cover = whitney_cover(space, sys, o, WhitneyMode::Strict);
    for (const auto& c : cover.cubes) out.push_back({sys.generation(c.k).cubes[c.index].center, c.members});
    return out;
}

}  // namespace

std::vector<LevelSet> level_sets(const MetricMeasureSpace& space, const TentFunction& f, double kappa, double gamma)
{
    if (!(kappa > 0.0)) throw InvalidInput("level_sets: kappa must be positive");
    const std::size_t n = space.size();
    const auto a = area_functional(space, f);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double v : a)
        if (v > 0.0) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    std::vector<LevelSet> out;
    if (hi == 0.0) return out;
    const int k_lo = static_cast<int>(std::floor(std::log2(kappa * lo))) - 1;
    const int k_hi = static_cast<int>(std::ceil(std::log2(kappa * hi)));
    for (int k = k_lo; k <= k_hi; ++k) {
        LevelSet ls;
        ls.k = k;
        ls.omega = PointSet(n);
        const double thr = std::ldexp(1.0, k) / kappa;
        for (std::size_t x = 0; x < n; ++x)
            if (a[x] > thr) ls.omega.insert(x);
        ls.omega_star = density_sets(space, gamma, ls.omega.complement()).o_star;
        out.push_back(std::move(ls));
    }
    return out;
}

AtomicDecomposition decompose(const MetricMeasureSpace& space, const TentFunction& f, double p, double q,
                              std::span<const double> w, const DecompParams& params)
{
    if (!(p > 0.0 && p <= 1.0 && q > 1.0)) throw InvalidInput("decompose: need 0 < p <= 1 < q");
    if (f.points() != space.size()) throw InvalidInput("decompose: tent function does not match the space");
    if (!w.empty() && w.size() != space.size()) throw InvalidInput("decompose: weight does not match the space");
    if (!(params.kappa > 0.0)) throw InvalidInput("decompose: kappa must be positive");
    const std::size_t n = space.size();
    const TGrid& g = f.grid();

    AtomicDecomposition d;
    d.p = p;
    d.q = q;
    d.params = params;
    d.grid = g;
    d.points = n;
    d.space_hash = space.fingerprint();
    {
        Fnv1a h;
        if (!w.empty()) h.values(w);
        d.weight_hash = h.digest();
    }

    const auto levels = level_sets(space, f, params.kappa, params.gamma);
    if (levels.empty()) return d;

    const DyadicCubeSystem sys = build_dyadic_system(space, params.delta);
    const double c1 = params.effective_c1();
    const double diam_x = space.diameter();
    const double minpos = space.min_positive_distance();

    std::vector<HalfSpaceRegion> hat;
    hat.reserve(levels.size() + 1);
    for (const auto& ls : levels) hat.push_back(tent_over(space, g, ls.omega_star, 0.5));
    hat.emplace_back(n, g.count);

    HalfSpaceRegion covered(n, g.count);
    for (std::size_t li = 0; li < levels.size(); ++li) {
        const LevelSet& ls = levels[li];
        LevelSummary sum;
        sum.k = ls.k;
        sum.omega_count = ls.omega.count();
        sum.omega_star_count = ls.omega_star.count();
        sum.w_omega = weighted_measure(space, w, ls.omega);
        sum.w_omega_star = weighted_measure(space, w, ls.omega_star);
        if (ls.omega_star.empty()) {
            d.levels.push_back(sum);
            continue;
        }
        const HalfSpaceRegion layer = hat[li] - hat[li + 1];
        const PointSet comp = ls.omega_star.complement();
        const auto cubes = cover_cubes(space, sys, ls.omega_star);
        for (std::size_t j = 0; j < cubes.size(); ++j) {
            const auto& cube = cubes[j];
            const double diam_q = space.set_diameter(cube.members);
            double dist_q = std::numeric_limits<double>::infinity();
            for (std::size_t x : cube.members) dist_q = std::min(dist_q, space.distance_to_set(x, comp));
            // C1 diam(Q) as prescribed, floored so that T(B) holds every sample
            // the k0 rule can send to Q (t <= 2 d(y, omega*^c)).
            double radius = std::max({c1 * diam_q, 3.0 * diam_q + 2.0 * dist_q, minpos});
            if (!(radius <= 2.0 * diam_x)) radius = diam_x > 0.0 ? 2.0 * diam_x : 1.0;

            AtomEntry e;
            e.k = ls.k;
            e.j = j;
            e.ball = {cube.center, radius};
            e.cube = cube.members;
            HalfSpaceRegion strip(n, g.count);
            for (std::size_t y : cube.members)
                for (std::size_t m = 0; m < g.count; ++m) strip.insert(y, m);
            e.region = tent_over_ball(space, g, e.ball) & strip & layer;
            TentFunction piece = restrict_to(f, e.region);
            if (piece.is_zero()) continue;
            covered |= e.region;

            const double wb = weighted_measure(space, w, space.ball(e.ball.center, e.ball.radius));
            if (params.mode == DecompMode::Faithful) {
                e.lambda = std::ldexp(1.0, ls.k) * std::pow(wb, 1.0 / p);
                e.atom = piece;
                e.atom *= 1.0 / e.lambda;
            } else {
                const double bound = std::pow(wb, 1.0 / q - 1.0 / p);
                e.lambda = tent_norm(space, piece, q, w) * std::pow(wb, 1.0 / p - 1.0 / q);
                // Rounding can leave the rescaled norm an ulp above the bound.
                for (int tries = 0;; ++tries) {
                    e.atom = piece;
                    for (auto& v : e.atom.values()) v /= e.lambda;
                    if (tent_norm(space, e.atom, q, w) <= bound || tries == 64) break;
                    e.lambda = std::nextafter(e.lambda, std::numeric_limits<double>::infinity());
                }
            }
            ++sum.atoms;
            sum.lambda_p_sum += std::pow(e.lambda, p);
            d.entries.push_back(std::move(e));
        }
        d.levels.push_back(sum);
    }

    for (std::size_t y = 0; y < n; ++y)
        for (std::size_t m = 0; m < g.count; ++m)
            if (f.at(y, m) != 0.0 && !covered.contains(y, m))
                throw InvalidInput("decompose: support sample (" + std::to_string(y) + ", " + std::to_string(m) +
                                   ") lies in no Delta region; check the t-grid and kappa");
    return d;
}

TentFunction reconstruct(const AtomicDecomposition& d)
{
    TentFunction out(d.points, d.grid);
    for (const auto& e : d.entries) {
        auto src = e.atom.values();
        auto dst = out.values();
        for (std::size_t k = 0; k < dst.size(); ++k)
            if (src[k] != 0.0) dst[k] += e.lambda * src[k];
    }
    return out;
}

CoefficientReport coefficient_report(const MetricMeasureSpace& space, const AtomicDecomposition& d,
                                     const TentFunction& f, std::span<const double> w)
{
    CoefficientReport r;
    for (const auto& e : d.entries) r.lambda_p_sum += std::pow(std::abs(e.lambda), d.p);
    r.norm_p = std::pow(tent_norm(space, f, d.p, w), d.p);
    if (r.norm_p > 0.0)
        r.ratio = r.lambda_p_sum / r.norm_p;
    else
        r.degenerate = true;
    r.min_slack = std::numeric_limits<double>::infinity();
    r.max_slack = -std::numeric_limits<double>::infinity();
    for (const auto& e : d.entries) {
        const QAtomReport a = validate_q_atom(space, e.atom, e.ball, d.p, d.q, w);
        r.atom_slack.push_back(a.slack);
        if (!a.support_pass) ++r.support_failures;
        r.min_slack = std::min(r.min_slack, a.slack);
        r.max_slack = std::max(r.max_slack, a.slack);
    }
    if (d.entries.empty()) r.min_slack = r.max_slack = 0.0;
    r.converse_lhs = std::pow(tent_norm(space, reconstruct(d), d.p, w), d.p);
    r.converse_pass = r.converse_lhs <= r.lambda_p_sum + 1e-9;
    for (const auto& l : d.levels)
        if (l.w_omega > 0.0) r.max_w_star_ratio = std::max(r.max_w_star_ratio, l.w_omega_star / l.w_omega);
    return r;
}

bool regions_partition_support(const AtomicDecomposition& d, const TentFunction& f, std::string* witness)
{
    const std::size_t n = d.points, M = d.grid.count;
    std::vector<int> hits(n * M, 0);
    for (const auto& e : d.entries)
        for (std::size_t y = 0; y < n; ++y)
            for (std::size_t m = 0; m < M; ++m)
                if (e.region.contains(y, m)) ++hits[y * M + m];
    for (std::size_t y = 0; y < n; ++y)
        for (std::size_t m = 0; m < M; ++m) {
            const int h = hits[y * M + m];
            const bool in_support = f.at(y, m) != 0.0;
            if (h > 1 || (in_support && h != 1)) {
                if (witness)
                    *witness = "sample (" + std::to_string(y) + ", " + std::to_string(m) + ") lies in " +
                               std::to_string(h) + " regions";
                return false;
            }
        }
    return true;
}

}  // namespace tentlab
