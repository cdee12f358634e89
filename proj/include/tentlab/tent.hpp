#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tentlab/parallel.hpp"
#include "tentlab/point_set.hpp"
#include "tentlab/space.hpp"

namespace tentlab {

// Geometric samples t_m = t_min * ratio^m of (0, inf); each carries dt/t mass ln(ratio).
struct TGrid {
    double t_min = 1.0;
    double ratio = 1.189207115002721;  // 2^(1/4)
    std::size_t count = 1;

    double t(std::size_t m) const { return t_min * std::pow(ratio, static_cast<double>(m)); }
    double log_ratio() const { return std::log(ratio); }
    void validate() const;

    /// t_min = half the smallest positive distance, ratio 2^(1/4), enough
    /// samples that the last one reaches 2 diam(X).
    static TGrid defaults(const MetricMeasureSpace& space);

    friend bool operator==(const TGrid&, const TGrid&) = default;
};

// Sampled F(y_i, t_m), stored row-major by point.
template <class T>
class BasicTentFunction {
public:
    using value_type = T;

    BasicTentFunction() = default;
    BasicTentFunction(std::size_t points, TGrid grid) : grid_(grid), n_(points), values_(points * grid.count, T{}) {}

    const TGrid& grid() const { return grid_; }
    std::size_t points() const { return n_; }
    std::size_t samples() const { return grid_.count; }

    T& at(std::size_t i, std::size_t m) { return values_[i * grid_.count + m]; }
    const T& at(std::size_t i, std::size_t m) const { return values_[i * grid_.count + m]; }

    std::span<T> values() { return values_; }
    std::span<const T> values() const { return values_; }

    bool is_zero() const
    {
        for (const T& v : values_)
            if (v != T{}) return false;
        return true;
    }

    BasicTentFunction& operator+=(const BasicTentFunction& o)
    {
        for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
        return *this;
    }
    BasicTentFunction& operator*=(T c)
    {
        for (T& v : values_) v *= c;
        return *this;
    }

private:
    TGrid grid_;
    std::size_t n_ = 0;
    std::vector<T> values_;
};

using TentFunction = BasicTentFunction<double>;
using ComplexTentFunction = BasicTentFunction<std::complex<double>>;

// Membership mask over (point, sample) pairs of the discretized half-space.
class HalfSpaceRegion {
public:
    HalfSpaceRegion() = default;
    HalfSpaceRegion(std::size_t points, std::size_t samples, bool filled = false)
        : n_(points), m_(samples), bits_(points * samples, filled ? 1 : 0)
    {
    }

    std::size_t points() const { return n_; }
    std::size_t samples() const { return m_; }
    bool contains(std::size_t i, std::size_t m) const { return bits_[i * m_ + m] != 0; }
    void insert(std::size_t i, std::size_t m) { bits_[i * m_ + m] = 1; }
    void erase(std::size_t i, std::size_t m) { bits_[i * m_ + m] = 0; }

    std::size_t count() const;
    bool empty() const { return count() == 0; }
    bool subset_of(const HalfSpaceRegion& o) const;
    bool intersects(const HalfSpaceRegion& o) const;
    HalfSpaceRegion complement() const;

    HalfSpaceRegion& operator&=(const HalfSpaceRegion& o);
    HalfSpaceRegion& operator|=(const HalfSpaceRegion& o);
    HalfSpaceRegion& operator-=(const HalfSpaceRegion& o);
    friend HalfSpaceRegion operator&(HalfSpaceRegion a, const HalfSpaceRegion& b) { return a &= b; }
    friend HalfSpaceRegion operator|(HalfSpaceRegion a, const HalfSpaceRegion& b) { return a |= b; }
    friend HalfSpaceRegion operator-(HalfSpaceRegion a, const HalfSpaceRegion& b) { return a -= b; }
    friend bool operator==(const HalfSpaceRegion&, const HalfSpaceRegion&) = default;

private:
    std::size_t n_ = 0, m_ = 0;
    std::vector<std::uint8_t> bits_;
};

/// Gamma_alpha(x) = {(y, t) : d(x, y) < alpha t}.
HalfSpaceRegion cone(const MetricMeasureSpace& space, const TGrid& grid, std::size_t x, double alpha = 1.0);
/// R_alpha(S): union of the cones with vertices in S.
HalfSpaceRegion cone_union(const MetricMeasureSpace& space, const TGrid& grid, const PointSet& s, double alpha = 1.0);
/// T_alpha(O) = {(y, t) : d(y, O^c) >= alpha t}, with d(y, empty) = +inf.
HalfSpaceRegion tent_over(const MetricMeasureSpace& space, const TGrid& grid, const PointSet& o, double alpha = 1.0);

struct BallSpec {
    std::size_t center = 0;
    double radius = 0.0;
};
/// T(B) for B = B(center, radius).
HalfSpaceRegion tent_over_ball(const MetricMeasureSpace& space, const TGrid& grid, const BallSpec& b);

template <class T>
HalfSpaceRegion support(const BasicTentFunction<T>& f)
{
    HalfSpaceRegion r(f.points(), f.samples());
    for (std::size_t i = 0; i < f.points(); ++i)
        for (std::size_t m = 0; m < f.samples(); ++m)
            if (f.at(i, m) != T{}) r.insert(i, m);
    return r;
}

template <class T>
BasicTentFunction<T> restrict_to(const BasicTentFunction<T>& f, const HalfSpaceRegion& r)
{
    BasicTentFunction<T> out(f.points(), f.grid());
    for (std::size_t i = 0; i < f.points(); ++i)
        for (std::size_t m = 0; m < f.samples(); ++m)
            if (r.contains(i, m)) out.at(i, m) = f.at(i, m);
    return out;
}

/// A(F)(x) = ( sum over (y, t_m) in Gamma(x) of |F|^2 mu_y ln(ratio) / V(x, t_m) )^(1/2).
template <class T>
std::vector<double> area_functional(const MetricMeasureSpace& space, const BasicTentFunction<T>& f)
{
    const std::size_t n = space.size();
    if (f.points() != n) throw InvalidInput("area_functional: tent function does not match the space");
    const TGrid& g = f.grid();
    const double lr = g.log_ratio();
    std::vector<double> out(n, 0.0);
    parallel_for(n, [&](std::size_t x) {
        const auto ord = space.order(x);
        const auto pre = space.prefix_mass(x);
        double acc = 0.0;
        for (std::size_t m = 0; m < g.count; ++m) {
            const std::size_t cnt = space.ball_count(x, g.t(m));
            double s = 0.0;
            for (std::size_t k = 0; k < cnt; ++k) s += std::norm(f.at(ord[k], m)) * space.mass(ord[k]);
            acc += s * lr / pre[cnt];
        }
        out[x] = std::sqrt(acc);
    });
    return out;
}

/// ||A(F)||_{L^p_w}; empty w means w = 1.
template <class T>
double tent_norm(const MetricMeasureSpace& space, const BasicTentFunction<T>& f, double p,
                 std::span<const double> w = {})
{
    const auto a = area_functional(space, f);
    return lp_norm_weighted(space, a, w, p);
}

/// <F, G> = sum F G mu_y ln(ratio); bilinear, no conjugation.
template <class T>
T pairing(const MetricMeasureSpace& space, const BasicTentFunction<T>& f, const BasicTentFunction<T>& g)
{
    if (!(f.grid() == g.grid()) || f.points() != g.points() || f.points() != space.size())
        throw InvalidInput("pairing: tent functions live on different grids");
    const double lr = f.grid().log_ratio();
    T acc{};
    for (std::size_t i = 0; i < f.points(); ++i) {
        T row{};
        for (std::size_t m = 0; m < f.samples(); ++m) row += f.at(i, m) * g.at(i, m);
        acc += row * space.mass(i);
    }
    return acc * lr;
}

/// W(y, t) = sum over x in B(y, t) of mu_x / V(x, t): the Fubini weight with
/// ||A(F)||_{L^2}^2 = sum |F|^2 mu_y ln(ratio) W(y, t). Row-major like F.
std::vector<double> fubini_weight(const MetricMeasureSpace& space, const TGrid& grid, std::span<const double> w = {});

struct QAtomReport {
    bool support_pass = true;
    std::size_t witness_point = 0, witness_sample = 0;
    double norm = 0.0;   // ||a||_{T^q_{2,w}}
    double bound = 0.0;  // w(B)^{1/q - 1/p}
    double slack = 0.0;  // (bound - norm) / bound; (ii) holds iff slack >= 0
    bool norm_pass = true;
    bool valid() const { return support_pass && norm_pass; }
};

QAtomReport validate_q_atom(const MetricMeasureSpace& space, const TentFunction& a, const BallSpec& b, double p,
                            double q, std::span<const double> w = {});

struct DensitySets {
    PointSet f_star;
    PointSet o_star;
    bool inclusion_pass = true;  // O within O*
    double ratio = 0.0;          // mu(O*) / mu(O); 0 when O is empty
};

/// O* = {M(chi_O) > 1 - gamma} with O = F^c.
DensitySets density_sets(const MetricMeasureSpace& space, double gamma, const PointSet& f_closed,
                         MaximalKind kind = MaximalKind::Uncentered);

struct ShadowRatio {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool degenerate = false;  // lhs = rhs = 0
    bool unbounded = false;   // rhs = 0 < lhs
};

/// LHS: sum over R_{1-eta}(F*) of H V(y, t) mu_y dt; RHS: sum over x in F of
/// mu_x sum over Gamma(x) of H mu_y dt, with dt = t_m ln(ratio).
ShadowRatio shadow_ratio(const MetricMeasureSpace& space, const PointSet& f_closed, const TentFunction& h,
                            double gamma, double eta);

/// C(K) with ||F||_{L^2(K, mu dt/t)} <= C(K) ||F||_{T^q_{2,w}} for every F
/// supported in K. Built from min_K W and a Hölder step on the shadow of K.
double compact_support_constant(const MetricMeasureSpace& space, const TGrid& grid, const HalfSpaceRegion& k, double q,
                                std::span<const double> w = {});

struct DualityCheck {
    double pairing_abs = 0.0;  // |<F, G>|
    double area_integral = 0.0;  // sum A(F) A(G) mu
    double holder_rhs = 0.0;     // ||A(F)||_{L^q_w} ||A(G)||_{L^q'_{w^{-1/(q-1)}}}
    double c_n = 0.0;            // pairing_abs / area_integral
    double overlap_bound = 0.0;  // 1 / min W(y, t), itself <= c_doubling
};

DualityCheck duality_check(const MetricMeasureSpace& space, const TentFunction& f, const TentFunction& g, double q,
                           std::span<const double> w = {});

}  // namespace tentlab
