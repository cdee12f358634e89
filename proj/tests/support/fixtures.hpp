#pragma once

// Seeded inputs and brute-force references shared by the unit and acceptance suites.

#include <algorithm>
#include <cmath>
#include <vector>

#include "tentlab/rng.hpp"
#include "tentlab/space.hpp"
#include "tentlab/tent.hpp"

namespace fixtures {

using tentlab::MetricMeasureSpace;
using tentlab::Rng;

inline MetricMeasureSpace random_space(std::uint64_t seed, std::size_t n, std::size_t dim = 2, bool masses = false)
{
    Rng rng(seed);
    MetricMeasureSpace::Coordinates c(n, std::vector<double>(dim));
    for (auto& p : c)
        for (auto& x : p) x = rng.uniform(0.0, 10.0);
    std::vector<double> mu;
    if (masses)
        for (std::size_t i = 0; i < n; ++i) mu.push_back(rng.uniform(0.5, 2.0));
    return MetricMeasureSpace::from_coordinates(std::move(c), std::move(mu));
}

inline std::vector<double> random_weight(std::uint64_t seed, std::size_t n, double spread = 1.0)
{
    Rng rng(seed);
    std::vector<double> w(n);
    for (auto& v : w) v = std::exp(spread * rng.normal());
    return w;
}

// Brute-force strict ball volume straight from the distance table.
inline double volume(const MetricMeasureSpace& s, std::size_t x, double r)
{
    double v = 0.0;
    for (std::size_t y = 0; y < s.size(); ++y)
        if (s.distance(x, y) < r) v += s.mass(y);
    return v;
}

// Area functional by the defining double sum.
inline std::vector<double> area(const MetricMeasureSpace& s, const tentlab::TentFunction& f)
{
    std::vector<double> out(s.size());
    const auto& g = f.grid();
    for (std::size_t x = 0; x < s.size(); ++x) {
        long double acc = 0.0L;
        for (std::size_t m = 0; m < g.count; ++m) {
            const double t = g.t(m);
            long double inner = 0.0L;
            for (std::size_t y = 0; y < s.size(); ++y)
                if (s.distance(x, y) < t) inner += (long double)f.at(y, m) * f.at(y, m) * s.mass(y);
            acc += inner * g.log_ratio() / volume(s, x, t);
        }
        out[x] = std::sqrt((double)acc);
    }
    return out;
}

inline double lp(const MetricMeasureSpace& s, const std::vector<double>& f, const std::vector<double>& w, double p)
{
    long double acc = 0.0L;
    for (std::size_t i = 0; i < s.size(); ++i)
        acc += std::pow((long double)std::abs(f[i]), (long double)p) * (w.empty() ? 1.0L : w[i]) * s.mass(i);
    return (double)std::pow(acc, 1.0L / p);
}

// Noisy bumps over random tents with amplitudes over several octaves; gives
// many good-lambda levels and several atoms per level.
inline tentlab::TentFunction bumps(const MetricMeasureSpace& s, const tentlab::TGrid& g, std::uint64_t seed,
                                   std::size_t count = 5, double octaves = 8.0)
{
    Rng rng(seed);
    tentlab::TentFunction f(s.size(), g);
    for (std::size_t b = 0; b < count; ++b) {
        const tentlab::BallSpec ball{rng.index(s.size()), s.diameter() * rng.uniform(0.05, 0.5) + s.min_positive_distance()};
        const double amp = std::exp2(octaves * (rng.uniform() - 0.5));
        const auto r = tentlab::tent_over_ball(s, g, ball);
        for (std::size_t y = 0; y < s.size(); ++y)
            for (std::size_t m = 0; m < g.count; ++m)
                if (r.contains(y, m)) f.at(y, m) += amp * rng.normal();
    }
    return f;
}

}  // namespace fixtures
