#include "tentlab/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tentlab/hash.hpp"
#include "tentlab/rng.hpp"

namespace tentlab {

namespace {

constexpr std::size_t kExhaustiveTriangleLimit = 500;
constexpr std::size_t kSampledTriangleChecks = 200000;

}  // namespace

MetricMeasureSpace MetricMeasureSpace::from_coordinates(Coordinates coords, std::vector<double> mass)
{
    MetricMeasureSpace s;
    s.n_ = coords.size();
    if (s.n_ == 0) throw InvalidInput("space has no points");
    const std::size_t dim = coords.front().size();
    for (const auto& c : coords) {
        if (c.size() != dim) throw InvalidInput("coordinate vectors have inconsistent dimension");
        for (double v : c)
            if (!std::isfinite(v)) throw InvalidInput("non-finite coordinate");
    }
    s.dist_.assign(s.n_ * s.n_, 0.0);
    for (std::size_t i = 0; i < s.n_; ++i) {
        for (std::size_t j = i + 1; j < s.n_; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < dim; ++k) {
                const double diff = coords[i][k] - coords[j][k];
                acc += diff * diff;
            }
            const double d = std::sqrt(acc);
            s.dist_[i * s.n_ + j] = d;
            s.dist_[j * s.n_ + i] = d;
        }
    }
    s.coords_ = std::move(coords);
    s.euclidean_ = true;
    s.mass_ = mass.empty() ? std::vector<double>(s.n_, 1.0) : std::move(mass);
    s.validate();
    s.finalize();
    return s;
}

MetricMeasureSpace MetricMeasureSpace::from_distances(std::size_t n, std::vector<double> table,
                                                      std::vector<double> mass)
{
    if (n == 0) throw InvalidInput("space has no points");
    if (table.size() != n * n) throw InvalidInput("distance table must have N*N entries");
    MetricMeasureSpace s;
    s.n_ = n;
    s.dist_ = std::move(table);
    s.mass_ = mass.empty() ? std::vector<double>(n, 1.0) : std::move(mass);
    s.validate();
    s.finalize();
    return s;
}

void MetricMeasureSpace::validate() const
{
    if (mass_.size() != n_) throw InvalidInput("measure must have one entry per point");
    for (std::size_t i = 0; i < n_; ++i)
        if (!(mass_[i] > 0.0) || !std::isfinite(mass_[i]))
            throw InvalidInput("point mass must be positive and finite (index " + std::to_string(i) + ")");

    double scale = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        if (distance(i, i) != 0.0) throw InvalidInput("distance table has nonzero diagonal");
        for (std::size_t j = 0; j < n_; ++j) {
            const double d = distance(i, j);
            if (!std::isfinite(d) || d < 0.0) throw InvalidInput("distances must be finite and nonnegative");
            if (d != distance(j, i))
                throw InvalidInput("distance table is not symmetric at (" + std::to_string(i) + ", " +
                                   std::to_string(j) + ")");
            if (i != j && d == 0.0)
                throw InvalidInput("distinct points at zero distance (" + std::to_string(i) + ", " +
                                   std::to_string(j) + ")");
            scale = std::max(scale, d);
        }
    }

    const double tol = 1e-12 * scale;
    auto check = [&](std::size_t i, std::size_t j, std::size_t k) {
        if (distance(i, k) > distance(i, j) + distance(j, k) + tol)
            throw InvalidInput("triangle inequality violated: d(" + std::to_string(i) + "," + std::to_string(k) +
                               ") > d(" + std::to_string(i) + "," + std::to_string(j) + ") + d(" +
                               std::to_string(j) + "," + std::to_string(k) + ")");
    };
    if (n_ <= kExhaustiveTriangleLimit) {
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                for (std::size_t k = i + 1; k < n_; ++k) check(i, j, k);
    } else {
        Rng rng(0x7e47ULL ^ n_);
        for (std::size_t t = 0; t < kSampledTriangleChecks; ++t)
            check(rng.index(n_), rng.index(n_), rng.index(n_));
    }
}

void MetricMeasureSpace::finalize()
{
    order_.resize(n_ * n_);
    sorted_.resize(n_ * n_);
    prefix_.resize(n_ * (n_ + 1));
    total_mass_ = std::accumulate(mass_.begin(), mass_.end(), 0.0);
    diameter_ = 0.0;
    min_positive_ = std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < n_; ++x) {
        std::size_t* ord = order_.data() + x * n_;
        std::iota(ord, ord + n_, std::size_t{0});
        std::stable_sort(ord, ord + n_, [&](std::size_t a, std::size_t b) { return distance(x, a) < distance(x, b); });
        double* pre = prefix_.data() + x * (n_ + 1);
        pre[0] = 0.0;
        for (std::size_t k = 0; k < n_; ++k) {
            const double d = distance(x, ord[k]);
            sorted_[x * n_ + k] = d;
            pre[k + 1] = pre[k] + mass_[ord[k]];
            diameter_ = std::max(diameter_, d);
            if (d > 0.0) min_positive_ = std::min(min_positive_, d);
        }
    }
    if (!std::isfinite(min_positive_)) min_positive_ = 0.0;
}

std::size_t MetricMeasureSpace::ball_count(std::size_t x, double r) const
{
    const auto d = sorted_distances(x);
    return static_cast<std::size_t>(std::lower_bound(d.begin(), d.end(), r) - d.begin());
}

PointSet MetricMeasureSpace::ball(std::size_t x, double r) const
{
    PointSet b(n_);
    const std::size_t k = ball_count(x, r);
    const auto ord = order(x);
    for (std::size_t i = 0; i < k; ++i) b.insert(ord[i]);
    return b;
}

double MetricMeasureSpace::volume(std::size_t x, double r) const { return prefix_mass(x)[ball_count(x, r)]; }

double MetricMeasureSpace::distance_to_set(std::size_t x, const PointSet& s) const
{
    // order(x) is sorted by distance, so the first member hit is the nearest.
    for (std::size_t y : order(x))
        if (s.contains(y)) return distance(x, y);
    return std::numeric_limits<double>::infinity();
}

double MetricMeasureSpace::set_diameter(std::span<const std::size_t> members) const
{
    double d = 0.0;
    for (std::size_t a = 0; a < members.size(); ++a)
        for (std::size_t b = a + 1; b < members.size(); ++b) d = std::max(d, distance(members[a], members[b]));
    return d;
}

double MetricMeasureSpace::measure(const PointSet& s) const
{
    double m = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
        if (s.contains(i)) m += mass_[i];
    return m;
}

std::vector<std::size_t> MetricMeasureSpace::ball_breaks(std::size_t x) const
{
    const auto d = sorted_distances(x);
    std::vector<std::size_t> breaks;
    for (std::size_t k = 0; k < n_; ++k)
        if (k + 1 == n_ || d[k] < d[k + 1]) breaks.push_back(k + 1);
    return breaks;
}

std::uint64_t MetricMeasureSpace::fingerprint() const
{
    Fnv1a h;
    h.value(static_cast<std::uint64_t>(n_));
    h.values(dist_);
    h.values(mass_);
    return h.digest();
}

DoublingReport doubling_report(const MetricMeasureSpace& space)
{
    DoublingReport rep;
    const std::size_t n = space.size();
    const double diam = space.diameter();

    // sup_r V(x,2r)/V(x,r): V(x, .) is constant on (d_k, d_{k+1}] and V(x, 2 .)
    // is nondecreasing, so the sup over each such interval is attained at its
    // right end. The right ends are exactly the distinct positive distances.
    for (std::size_t x = 0; x < n; ++x) {
        const auto d = space.sorted_distances(x);
        for (std::size_t k = 1; k < n; ++k) {
            if (d[k] == d[k - 1]) continue;
            const double r = d[k];
            const double ratio = space.volume(x, 2.0 * r) / space.volume(x, r);
            if (ratio > rep.c_doubling) {
                rep.c_doubling = ratio;
                rep.witness_center = x;
                rep.witness_radius = r;
            }
        }
    }
    if (n < 2) return rep;

    // Growth exponent: pooled within-centre regression of log V against log r.
    // V at a break radius counts half of the boundary shell, which removes the
    // lattice offset; radii stop at diam/4 to keep boundary saturation out.
    auto mid_volume = [&](std::size_t x, double r) {
        const auto d = space.sorted_distances(x);
        const auto pre = space.prefix_mass(x);
        const auto lo = static_cast<std::size_t>(std::lower_bound(d.begin(), d.end(), r) - d.begin());
        const auto hi = static_cast<std::size_t>(std::upper_bound(d.begin(), d.end(), r) - d.begin());
        return pre[lo] + 0.5 * (pre[hi] - pre[lo]);
    };
    double num = 0.0, den = 0.0;
    std::vector<double> lr, lv;
    for (std::size_t x = 0; x < n; ++x) {
        const auto d = space.sorted_distances(x);
        lr.clear();
        lv.clear();
        for (std::size_t k = 1; k < n; ++k) {
            if (d[k] == d[k - 1] || d[k] > diam / 4.0) continue;
            lr.push_back(std::log(d[k]));
            lv.push_back(std::log(mid_volume(x, d[k])));
        }
        if (lr.size() < 2) continue;
        const double mr = std::accumulate(lr.begin(), lr.end(), 0.0) / static_cast<double>(lr.size());
        const double mv = std::accumulate(lv.begin(), lv.end(), 0.0) / static_cast<double>(lv.size());
        for (std::size_t i = 0; i < lr.size(); ++i) {
            num += (lr[i] - mr) * (lv[i] - mv);
            den += (lr[i] - mr) * (lr[i] - mr);
        }
    }
    rep.n_exp = den > 0.0 ? std::max(0.0, num / den) : 0.0;

    // Comparison exponent: least squares through the origin of
    // log(V(y,r)/V(x,r)) on log(1 + d(x,y)/r), over samples where V(y,r) > V(x,r).
    double znum = 0.0, zden = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
        const auto breaks = space.ball_breaks(x);
        const auto d = space.sorted_distances(x);
        const std::size_t stride = std::max<std::size_t>(1, breaks.size() / 16);
        for (std::size_t b = 0; b + 1 < breaks.size(); b += stride) {
            const double r = d[breaks[b]];
            const double vx = space.volume(x, r);
            for (std::size_t y = 0; y < n; ++y) {
                if (y == x) continue;
                const double v = std::log(space.volume(y, r) / vx);
                if (v <= 0.0) continue;
                const double z = std::log1p(space.distance(x, y) / r);
                znum += z * v;
                zden += z * z;
            }
        }
    }
    rep.d_exp = zden > 0.0 ? std::max(0.0, znum / zden) : 0.0;
    return rep;
}

std::vector<double> maximal_function(const MetricMeasureSpace& space, std::span<const double> f, MaximalKind kind)
{
    const std::size_t n = space.size();
    if (f.size() != n) throw InvalidInput("maximal_function: f must have one value per point");
    for (double v : f)
        if (v < 0.0) throw InvalidInput("maximal_function: f must be nonnegative");

    std::vector<double> out(n, 0.0);
    std::vector<double> avg;
    for (std::size_t c = 0; c < n; ++c) {
        const auto ord = space.order(c);
        const auto pre = space.prefix_mass(c);
        const auto breaks = space.ball_breaks(c);
        avg.assign(breaks.size(), 0.0);
        double acc = 0.0;
        std::size_t pos = 0;
        for (std::size_t g = 0; g < breaks.size(); ++g) {
            for (; pos < breaks[g]; ++pos) acc += f[ord[pos]] * space.mass(ord[pos]);
            avg[g] = acc / pre[breaks[g]];
        }
        if (kind == MaximalKind::Centered) {
            out[c] = *std::max_element(avg.begin(), avg.end());
            continue;
        }
        // A point in group g lies in every ball ending at group >= g.
        for (std::size_t g = breaks.size() - 1; g-- > 0;) avg[g] = std::max(avg[g], avg[g + 1]);
        std::size_t g = 0;
        for (std::size_t k = 0; k < n; ++k) {
            while (k >= breaks[g]) ++g;
            out[ord[k]] = std::max(out[ord[k]], avg[g]);
        }
    }
    return out;
}

double lp_norm_weighted(const MetricMeasureSpace& space, std::span<const double> f, std::span<const double> w,
                        double p)
{
    if (!(p > 0.0)) throw InvalidInput("lp_norm_weighted: p must be positive");
    if (f.size() != space.size() || (!w.empty() && w.size() != space.size()))
        throw InvalidInput("lp_norm_weighted: size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double a = std::abs(f[i]);
        if (a == 0.0) continue;
        acc += std::pow(a, p) * (w.empty() ? 1.0 : w[i]) * space.mass(i);
    }
    return std::pow(acc, 1.0 / p);
}

std::vector<std::size_t> greedy_net(const MetricMeasureSpace& space, double r, std::span<const std::size_t> seed_centers)
{
    if (!(r > 0.0)) throw InvalidInput("greedy_net: r must be positive");
    const std::size_t n = space.size();
    // nearest[i] = distance from i to the closest chosen centre
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> centers;
    auto take = [&](std::size_t c) {
        centers.push_back(c);
        for (std::size_t i = 0; i < n; ++i) nearest[i] = std::min(nearest[i], space.distance(i, c));
    };
    for (std::size_t c : seed_centers) {
        if (nearest[c] < r) throw InvalidInput("greedy_net: seed centres are not r-separated");
        take(c);
    }
    for (std::size_t i = 0; i < n; ++i)
        if (nearest[i] >= r) take(i);
    return centers;
}

MetricMeasureSpace grid_1d(std::size_t n, double spacing)
{
    MetricMeasureSpace::Coordinates c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = {spacing * static_cast<double>(i)};
    return MetricMeasureSpace::from_coordinates(std::move(c));
}

MetricMeasureSpace grid_2d(std::size_t rows, std::size_t cols, double spacing)
{
    MetricMeasureSpace::Coordinates c;
    c.reserve(rows * cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            c.push_back({spacing * static_cast<double>(i), spacing * static_cast<double>(j)});
    return MetricMeasureSpace::from_coordinates(std::move(c));
}

}  // namespace tentlab
