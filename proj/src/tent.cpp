#include "tentlab/tent.hpp"

#include <algorithm>
#include <limits>

namespace tentlab {

void TGrid::validate() const
{
    if (!(t_min > 0.0) || !std::isfinite(t_min)) throw InvalidInput("t-grid: t_min must be positive");
    if (!(ratio > 1.0) || !std::isfinite(ratio)) throw InvalidInput("t-grid: ratio must exceed 1");
    if (count == 0) throw InvalidInput("t-grid: count must be positive");
}

TGrid TGrid::defaults(const MetricMeasureSpace& space)
{
    TGrid g;
    const double minpos = space.min_positive_distance();
    g.t_min = minpos > 0.0 ? 0.5 * minpos : 0.5;
    const double top = std::max(2.0 * space.diameter(), g.t_min);
    g.count = 1;
    while (g.t(g.count - 1) < top) ++g.count;
    return g;
}

std::size_t HalfSpaceRegion::count() const
{
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

bool HalfSpaceRegion::subset_of(const HalfSpaceRegion& o) const
{
    for (std::size_t k = 0; k < bits_.size(); ++k)
        if (bits_[k] && !o.bits_[k]) return false;
    return true;
}

bool HalfSpaceRegion::intersects(const HalfSpaceRegion& o) const
{
    for (std::size_t k = 0; k < bits_.size(); ++k)
        if (bits_[k] && o.bits_[k]) return true;
    return false;
}

HalfSpaceRegion HalfSpaceRegion::complement() const
{
    HalfSpaceRegion r = *this;
    for (auto& b : r.bits_) b = b ? 0 : 1;
    return r;
}

HalfSpaceRegion& HalfSpaceRegion::operator&=(const HalfSpaceRegion& o)
{
    for (std::size_t k = 0; k < bits_.size(); ++k) bits_[k] &= o.bits_[k];
    return *this;
}

HalfSpaceRegion& HalfSpaceRegion::operator|=(const HalfSpaceRegion& o)
{
    for (std::size_t k = 0; k < bits_.size(); ++k) bits_[k] |= o.bits_[k];
    return *this;
}

HalfSpaceRegion& HalfSpaceRegion::operator-=(const HalfSpaceRegion& o)
{
    for (std::size_t k = 0; k < bits_.size(); ++k)
        if (o.bits_[k]) bits_[k] = 0;
    return *this;
}

HalfSpaceRegion cone(const MetricMeasureSpace& space, const TGrid& grid, std::size_t x, double alpha)
{
    if (!(alpha > 0.0)) throw InvalidInput("cone: alpha must be positive");
    HalfSpaceRegion r(space.size(), grid.count);
    const auto ord = space.order(x);
    for (std::size_t m = 0; m < grid.count; ++m) {
        const std::size_t cnt = space.ball_count(x, alpha * grid.t(m));
        for (std::size_t k = 0; k < cnt; ++k) r.insert(ord[k], m);
    }
    return r;
}

HalfSpaceRegion cone_union(const MetricMeasureSpace& space, const TGrid& grid, const PointSet& s, double alpha)
{
    if (!(alpha > 0.0)) throw InvalidInput("cone_union: alpha must be positive");
    HalfSpaceRegion r(space.size(), grid.count);
    for (std::size_t y = 0; y < space.size(); ++y) {
        const double d = space.distance_to_set(y, s);
        for (std::size_t m = 0; m < grid.count; ++m)
            if (d < alpha * grid.t(m)) r.insert(y, m);
    }
    return r;
}

HalfSpaceRegion tent_over(const MetricMeasureSpace& space, const TGrid& grid, const PointSet& o, double alpha)
{
    if (!(alpha > 0.0)) throw InvalidInput("tent_over: alpha must be positive");
    const PointSet comp = o.complement();
    HalfSpaceRegion r(space.size(), grid.count);
    for (std::size_t y = 0; y < space.size(); ++y) {
        const double d = space.distance_to_set(y, comp);
        for (std::size_t m = 0; m < grid.count; ++m)
            if (d >= alpha * grid.t(m)) r.insert(y, m);
    }
    return r;
}

HalfSpaceRegion tent_over_ball(const MetricMeasureSpace& space, const TGrid& grid, const BallSpec& b)
{
    if (b.center >= space.size()) throw InvalidInput("tent_over_ball: centre out of range");
    return tent_over(space, grid, space.ball(b.center, b.radius));
}

std::vector<double> fubini_weight(const MetricMeasureSpace& space, const TGrid& grid, std::span<const double> w)
{
    const std::size_t n = space.size();
    std::vector<double> out(n * grid.count, 0.0);
    for (std::size_t m = 0; m < grid.count; ++m) {
        const double t = grid.t(m);
        for (std::size_t y = 0; y < n; ++y) {
            const auto ord = space.order(y);
            const std::size_t cnt = space.ball_count(y, t);
            double s = 0.0;
            for (std::size_t k = 0; k < cnt; ++k) {
                const std::size_t x = ord[k];
                s += (w.empty() ? 1.0 : w[x]) * space.mass(x) / space.volume(x, t);
            }
            out[y * grid.count + m] = s;
        }
    }
    return out;
}

QAtomReport validate_q_atom(const MetricMeasureSpace& space, const TentFunction& a, const BallSpec& b, double p,
                            double q, std::span<const double> w)
{
    if (!(p > 0.0 && p <= 1.0 && q > 1.0)) throw InvalidInput("validate_q_atom: need 0 < p <= 1 < q");
    QAtomReport rep;
    const HalfSpaceRegion tb = tent_over_ball(space, a.grid(), b);
    for (std::size_t i = 0; i < a.points() && rep.support_pass; ++i)
        for (std::size_t m = 0; m < a.samples(); ++m)
            if (a.at(i, m) != 0.0 && !tb.contains(i, m)) {
                rep.support_pass = false;
                rep.witness_point = i;
                rep.witness_sample = m;
                break;
            }
    const PointSet ball = space.ball(b.center, b.radius);
    double wb = 0.0;
    for (std::size_t i = 0; i < space.size(); ++i)
        if (ball.contains(i)) wb += (w.empty() ? 1.0 : w[i]) * space.mass(i);
    rep.norm = tent_norm(space, a, q, w);
    rep.bound = std::pow(wb, 1.0 / q - 1.0 / p);
    rep.slack = (rep.bound - rep.norm) / rep.bound;
    rep.norm_pass = rep.norm <= rep.bound;
    return rep;
}

DensitySets density_sets(const MetricMeasureSpace& space, double gamma, const PointSet& f_closed, MaximalKind kind)
{
    if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidInput("density_sets: gamma must lie in (0, 1)");
    const std::size_t n = space.size();
    const PointSet o = f_closed.complement();
    std::vector<double> chi(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        if (o.contains(i)) chi[i] = 1.0;
    const auto mchi = maximal_function(space, chi, kind);
    DensitySets ds;
    ds.o_star = PointSet(n);
    for (std::size_t i = 0; i < n; ++i)
        if (mchi[i] > 1.0 - gamma) ds.o_star.insert(i);
    ds.f_star = ds.o_star.complement();
    ds.inclusion_pass = o.subset_of(ds.o_star);
    const double mo = space.measure(o);
    ds.ratio = mo > 0.0 ? space.measure(ds.o_star) / mo : 0.0;
    return ds;
}

ShadowRatio shadow_ratio(const MetricMeasureSpace& space, const PointSet& f_closed, const TentFunction& h,
                            double gamma, double eta)
{
    if (!(eta > 0.0 && eta < 1.0)) throw InvalidInput("shadow_ratio: eta must lie in (0, 1)");
    const std::size_t n = space.size();
    const TGrid& g = h.grid();
    for (double v : h.values())
        if (v < 0.0) throw InvalidInput("shadow_ratio: H must be nonnegative");
    const double lr = g.log_ratio();

    const DensitySets ds = density_sets(space, gamma, f_closed);
    const HalfSpaceRegion region = cone_union(space, g, ds.f_star, 1.0 - eta);
    ShadowRatio res;
    for (std::size_t y = 0; y < n; ++y)
        for (std::size_t m = 0; m < g.count; ++m)
            if (region.contains(y, m))
                res.lhs += h.at(y, m) * space.volume(y, g.t(m)) * space.mass(y) * g.t(m) * lr;
    for (std::size_t x = 0; x < n; ++x) {
        if (!f_closed.contains(x)) continue;
        const auto ord = space.order(x);
        double s = 0.0;
        for (std::size_t m = 0; m < g.count; ++m) {
            const std::size_t cnt = space.ball_count(x, g.t(m));
            double row = 0.0;
            for (std::size_t k = 0; k < cnt; ++k) row += h.at(ord[k], m) * space.mass(ord[k]);
            s += row * g.t(m) * lr;
        }
        res.rhs += s * space.mass(x);
    }
    if (res.rhs > 0.0) {
        res.ratio = res.lhs / res.rhs;
    } else if (res.lhs > 0.0) {
        res.unbounded = true;
        res.ratio = std::numeric_limits<double>::infinity();
    } else {
        res.degenerate = true;
    }
    return res;
}

double compact_support_constant(const MetricMeasureSpace& space, const TGrid& grid, const HalfSpaceRegion& k, double q,
                                std::span<const double> w)
{
    if (!(q > 1.0)) throw InvalidInput("compact_support_constant: q must exceed 1");
    const std::size_t n = space.size();
    const auto W = fubini_weight(space, grid);
    double wmin = std::numeric_limits<double>::infinity();
    PointSet shadow(n);  // points whose cones meet K
    for (std::size_t y = 0; y < n; ++y)
        for (std::size_t m = 0; m < grid.count; ++m) {
            if (!k.contains(y, m)) continue;
            wmin = std::min(wmin, W[y * grid.count + m]);
            const auto ord = space.order(y);
            const std::size_t cnt = space.ball_count(y, grid.t(m));
            for (std::size_t j = 0; j < cnt; ++j) shadow.insert(ord[j]);
        }
    if (!std::isfinite(wmin)) return 0.0;  // empty K

    // ||g||_{L^2(shadow)}^2 <= c2 ||g||_{L^q_w}^2 for g supported on the shadow.
    auto wt = [&](std::size_t x) { return w.empty() ? 1.0 : w[x]; };
    double c2 = 0.0;
    if (q <= 2.0) {
        for (std::size_t x = 0; x < n; ++x)
            if (shadow.contains(x))
                c2 = std::max(c2, std::pow(wt(x), -2.0 / q) * std::pow(space.mass(x), -(2.0 - q) / q));
    } else {
        double s = 0.0;
        for (std::size_t x = 0; x < n; ++x)
            if (shadow.contains(x)) s += std::pow(wt(x), -2.0 / (q - 2.0)) * space.mass(x);
        c2 = std::pow(s, (q - 2.0) / q);
    }
    return std::sqrt(c2 / wmin);
}

DualityCheck duality_check(const MetricMeasureSpace& space, const TentFunction& f, const TentFunction& g, double q,
                           std::span<const double> w)
{
    if (!(q > 1.0)) throw InvalidInput("duality_check: q must exceed 1");
    const std::size_t n = space.size();
    DualityCheck c;
    c.pairing_abs = std::abs(pairing(space, f, g));
    const auto af = area_functional(space, f);
    const auto ag = area_functional(space, g);
    for (std::size_t x = 0; x < n; ++x) c.area_integral += af[x] * ag[x] * space.mass(x);
    std::vector<double> dual(n, 1.0);
    if (!w.empty())
        for (std::size_t x = 0; x < n; ++x) dual[x] = std::pow(w[x], -1.0 / (q - 1.0));
    const double qq = q / (q - 1.0);
    c.holder_rhs = lp_norm_weighted(space, af, w, q) * lp_norm_weighted(space, ag, w.empty() ? std::span<const double>{} : std::span<const double>(dual), qq);
    c.c_n = c.area_integral > 0.0 ? c.pairing_abs / c.area_integral : 0.0;
    const auto W = fubini_weight(space, f.grid());
    c.overlap_bound = 1.0 / *std::min_element(W.begin(), W.end());
    return c;
}

}  // namespace tentlab
