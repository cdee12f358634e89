#include "tentlab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tentlab/hash.hpp"
#include "tentlab/rng.hpp"

namespace tentlab {

namespace {

void check_weight(const MetricMeasureSpace& space, std::span<const double> w)
{
    if (w.size() != space.size()) throw InvalidInput("weight must have one value per point");
    for (double v : w)
        if (!(v > 0.0) || !std::isfinite(v)) throw InvalidInput("weight values must be positive and finite");
}

// Calls visit(sum_a, sum_b, mass, min_w) for every distinct ball, where the
// sums are of fa(w_i) mu_i and fb(w_i) mu_i over the ball.
template <class FA, class FB, class Visit>
void for_each_ball(const MetricMeasureSpace& space, std::span<const double> w, FA fa, FB fb, Visit visit)
{
    const std::size_t n = space.size();
    for (std::size_t x = 0; x < n; ++x) {
        const auto ord = space.order(x);
        const auto d = space.sorted_distances(x);
        double sa = 0.0, sb = 0.0, m = 0.0, lo = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t y = ord[k];
            sa += fa(w[y]) * space.mass(y);
            sb += fb(w[y]) * space.mass(y);
            m += space.mass(y);
            lo = std::min(lo, w[y]);
            if (k + 1 == n || d[k] < d[k + 1]) visit(sa, sb, m, lo);
        }
    }
}

}  // namespace

double ap_constant(const MetricMeasureSpace& space, std::span<const double> w, double p)
{
    if (!(p >= 1.0)) throw InvalidInput("ap_constant: p must be >= 1");
    check_weight(space, w);
    double best = 1.0;
    if (p == 1.0) {
        for_each_ball(
            space, w, [](double v) { return v; }, [](double) { return 0.0; },
            [&](double sa, double, double m, double lo) { best = std::max(best, sa / m / lo); });
        return best;
    }
    const double e = -1.0 / (p - 1.0);
    for_each_ball(
        space, w, [](double v) { return v; }, [e](double v) { return std::pow(v, e); },
        [&](double sa, double sb, double m, double) { best = std::max(best, (sa / m) * std::pow(sb / m, p - 1.0)); });
    return best;
}

double rh_constant(const MetricMeasureSpace& space, std::span<const double> w, double r)
{
    if (!(r > 1.0)) throw InvalidInput("rh_constant: r must be > 1");
    check_weight(space, w);
    double best = 1.0;
    for_each_ball(
        space, w, [](double v) { return v; }, [r](double v) { return std::pow(v, r); },
        [&](double sa, double sb, double m, double) { best = std::max(best, std::pow(sb / m, 1.0 / r) / (sa / m)); });
    return best;
}

WeightFunction::WeightFunction(std::vector<double> values) : values_(std::move(values))
{
    for (double v : values_)
        if (!(v > 0.0) || !std::isfinite(v)) throw InvalidInput("weight values must be positive and finite");
}

double WeightFunction::measure(const MetricMeasureSpace& space, const PointSet& e) const
{
    double s = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (e.contains(i)) s += values_[i] * space.mass(i);
    return s;
}

double WeightFunction::ap(const MetricMeasureSpace& space, double p) const
{
    const auto key = std::make_pair(space.fingerprint(), p);
    {
        std::lock_guard lock(cache_->mutex);
        if (auto it = cache_->ap.find(key); it != cache_->ap.end()) return it->second;
    }
    const double v = ap_constant(space, values_, p);
    std::lock_guard lock(cache_->mutex);
    cache_->ap[key] = v;
    return v;
}

double WeightFunction::rh(const MetricMeasureSpace& space, double r) const
{
    const auto key = std::make_pair(space.fingerprint(), r);
    {
        std::lock_guard lock(cache_->mutex);
        if (auto it = cache_->rh.find(key); it != cache_->rh.end()) return it->second;
    }
    const double v = rh_constant(space, values_, r);
    std::lock_guard lock(cache_->mutex);
    cache_->rh[key] = v;
    return v;
}

std::uint64_t WeightFunction::fingerprint() const
{
    Fnv1a h;
    h.values(values_);
    return h.digest();
}

WeightKind parse_weight_kind(const std::string& name)
{
    if (name == "constant") return WeightKind::Constant;
    if (name == "power") return WeightKind::Power;
    if (name == "checkerboard") return WeightKind::Checkerboard;
    if (name == "random-ap") return WeightKind::RandomAp;
    throw InvalidInput("unknown weight kind '" + name + "'");
}

std::string weight_kind_name(WeightKind kind)
{
    switch (kind) {
    case WeightKind::Constant: return "constant";
    case WeightKind::Power: return "power";
    case WeightKind::Checkerboard: return "checkerboard";
    case WeightKind::RandomAp: return "random-ap";
    }
    return "unknown";
}

WeightFunction generate_weight(const MetricMeasureSpace& space, WeightKind kind, const WeightParams& params,
                               std::uint64_t seed)
{
    const std::size_t n = space.size();
    if (!(params.c > 0.0)) throw InvalidInput("generate_weight: scale c must be positive");
    std::vector<double> w(n, params.c);
    switch (kind) {
    case WeightKind::Constant:
        break;
    case WeightKind::Power:
        if (params.center >= n) throw InvalidInput("generate_weight: power centre out of range");
        for (std::size_t i = 0; i < n; ++i) w[i] = params.c * std::pow(1.0 + space.distance(i, params.center), params.a);
        break;
    case WeightKind::Checkerboard: {
        if (!(params.high > 0.0) || !(params.low > 0.0) || !(params.cell > 0.0))
            throw InvalidInput("generate_weight: checkerboard values and cell must be positive");
        for (std::size_t i = 0; i < n; ++i) {
            long parity = static_cast<long>(i);
            if (space.has_coordinates()) {
                parity = 0;
                for (double c : space.coordinates()[i]) parity += static_cast<long>(std::floor(c / params.cell));
            }
            w[i] = params.c * ((parity % 2 == 0) ? params.high : params.low);
        }
        break;
    }
    case WeightKind::RandomAp: {
        if (!(params.p >= 1.0)) throw InvalidInput("generate_weight: p must be >= 1");
        if (!(params.target >= 1.0)) throw InvalidInput("generate_weight: A_p target below 1 is unreachable");
        Rng rng(seed);
        double sigma = params.sigma;
        for (std::size_t attempt = 0; attempt < params.max_attempts; ++attempt, sigma *= 0.85) {
            for (std::size_t i = 0; i < n; ++i) w[i] = params.c * std::exp(sigma * rng.normal());
            if (ap_constant(space, w, params.p) <= params.target) return WeightFunction(std::move(w));
        }
        throw InvalidInput("generate_weight: no candidate reached [w]_{A_p} <= target within max_attempts");
    }
    }
    return WeightFunction(std::move(w));
}

double subset_ratio(const MetricMeasureSpace& space, std::span<const double> w, double ap, double p,
                      const PointSet& ball_set, const PointSet& e)
{
    double wb = 0.0, we = 0.0, mb = 0.0, me = 0.0;
    for (std::size_t i = 0; i < space.size(); ++i) {
        if (ball_set.contains(i)) {
            wb += w[i] * space.mass(i);
            mb += space.mass(i);
        }
        if (e.contains(i)) {
            if (!ball_set.contains(i)) throw InvalidInput("subset_ratio: E must lie inside B");
            we += w[i] * space.mass(i);
            me += space.mass(i);
        }
    }
    if (me == 0.0) throw InvalidInput("subset_ratio: E must be nonempty");
    return (wb / we) / (ap * std::pow(mb / me, p));
}

WeightLemmaReport verify_weight_lemma(const MetricMeasureSpace& space, std::span<const double> w, double p, double q,
                                      std::uint64_t seed)
{
    if (!(p >= 1.0) || !(q >= p)) throw InvalidInput("verify_weight_lemma: need 1 <= p <= q");
    check_weight(space, w);
    const std::size_t n = space.size();
    WeightLemmaReport rep;
    rep.p = p;
    rep.q = q;
    rep.ap_p = ap_constant(space, w, p);
    rep.ap_q = ap_constant(space, w, q);
    rep.monotone_pass = rep.ap_q <= rep.ap_p;

    if (p > 1.0) {
        const double pp = p / (p - 1.0);
        std::vector<double> sigma(n);
        for (std::size_t i = 0; i < n; ++i) sigma[i] = std::pow(w[i], 1.0 - pp);
        rep.dual_constant = ap_constant(space, sigma, pp);
        rep.dual_expected = std::pow(rep.ap_p, 1.0 / (p - 1.0));
        rep.dual_pass = std::abs(rep.dual_constant - rep.dual_expected) <= 1e-9 * rep.dual_expected;
    }

    const double tol = 1.0 + 1e-12;
    auto record = [&](double ratio, std::size_t x, std::size_t kb, const std::string& what) {
        ++rep.iv_pairs;
        if (ratio > rep.iv_worst) rep.iv_worst = ratio;
        if (ratio > tol && rep.iv_pass) {
            rep.iv_pass = false;
            rep.iv_witness = "B = first " + std::to_string(kb) + " points around " + std::to_string(x) + ", E = " + what +
                             ", ratio " + std::to_string(ratio);
        }
    };

    // Concentric sub-balls: prefix sums give both sides in O(1).
    std::vector<double> pw(n + 1);
    for (std::size_t x = 0; x < n; ++x) {
        const auto ord = space.order(x);
        const auto pm = space.prefix_mass(x);
        const auto brk = space.ball_breaks(x);
        pw[0] = 0.0;
        for (std::size_t k = 0; k < n; ++k) pw[k + 1] = pw[k] + w[ord[k]] * space.mass(ord[k]);
        for (std::size_t b : brk)
            for (std::size_t e : brk) {
                if (e > b) break;
                record((pw[b] / pw[e]) / (rep.ap_p * std::pow(pm[b] / pm[e], p)), x, b,
                       "first " + std::to_string(e) + " points");
            }
    }

    // Intersections with non-concentric balls.
    auto ball_at = [&](std::size_t x, std::size_t count) {
        PointSet s(n);
        const auto ord = space.order(x);
        for (std::size_t i = 0; i < count; ++i) s.insert(ord[i]);
        return s;
    };
    auto pair_check = [&](std::size_t x, std::size_t kb, std::size_t y, std::size_t ke) {
        const PointSet b = ball_at(x, kb);
        const PointSet e = b & ball_at(y, ke);
        if (e.empty()) return;
        record(subset_ratio(space, w, rep.ap_p, p, b, e), x, kb,
               "B intersect first " + std::to_string(ke) + " points around " + std::to_string(y));
    };
    if (n <= 24) {
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t kb : space.ball_breaks(x))
                for (std::size_t y = 0; y < n; ++y)
                    for (std::size_t ke : space.ball_breaks(y)) pair_check(x, kb, y, ke);
    } else {
        Rng rng(seed);
        for (int t = 0; t < 4096; ++t) {
            const std::size_t x = rng.index(n);
            const auto bx = space.ball_breaks(x);
            const std::size_t kb = bx[rng.index(bx.size())];
            const std::size_t y = rng.index(n);
            const auto by = space.ball_breaks(y);
            pair_check(x, kb, y, by[rng.index(by.size())]);
        }
    }
    return rep;
}

}  // namespace tentlab
