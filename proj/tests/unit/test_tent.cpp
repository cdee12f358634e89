#include <doctest.h>

#include "fixtures.hpp"
#include "tentlab/tent.hpp"

using namespace tentlab;

TEST_CASE("default grid")
{
    const auto s = grid_1d(20, 0.5);
    const auto g = TGrid::defaults(s);
    CHECK(g.t_min == 0.25);
    CHECK(g.ratio == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-15));
    CHECK(g.t(g.count - 1) >= 2.0 * s.diameter());
    CHECK(g.t(g.count - 2) < 2.0 * s.diameter());
    CHECK_THROWS((TGrid{0.0, 2.0, 3}.validate()));
    CHECK_THROWS((TGrid{1.0, 1.0, 3}.validate()));
}

TEST_CASE("cones, tents and the empty set")
{
    const auto s = fixtures::random_space(8, 25);
    const auto g = TGrid::defaults(s);
    const PointSet none(s.size());
    CHECK(tent_over(s, g, PointSet(s.size(), true)).count() == s.size() * g.count);  // d(y, empty) = +inf
    CHECK(tent_over(s, g, none).empty());
    for (std::size_t x = 0; x < s.size(); x += 5) {
        const auto c = cone(s, g, x);
        for (std::size_t y = 0; y < s.size(); ++y)
            for (std::size_t m = 0; m < g.count; ++m) CHECK(c.contains(y, m) == (s.distance(x, y) < g.t(m)));
    }
    // (y, t) lies in T(O) iff the cone of every point outside O misses it.
    PointSet o(s.size());
    for (std::size_t i = 0; i < s.size(); i += 2) o.insert(i);
    const auto t = tent_over(s, g, o);
    const auto r = cone_union(s, g, o.complement());
    CHECK(t == r.complement());
}

TEST_CASE("area functional against the double sum")
{
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const auto s = fixtures::random_space(70 + seed, 22, 2, true);
        const auto g = TGrid::defaults(s);
        const auto F = fixtures::bumps(s, g, seed);
        const auto a = area_functional(s, F);
        const auto ref = fixtures::area(s, F);
        for (std::size_t x = 0; x < s.size(); ++x) CHECK(a[x] == doctest::Approx(ref[x]).epsilon(1e-12));
        CHECK(tent_norm(s, F, 0.5) == doctest::Approx(fixtures::lp(s, ref, {}, 0.5)).epsilon(1e-12));
    }
}

TEST_CASE("Fubini weight reproduces the L2 tent norm")
{
    const auto s = fixtures::random_space(12, 20, 2, true);
    const auto g = TGrid::defaults(s);
    const auto F = fixtures::bumps(s, g, 4);
    const auto W = fubini_weight(s, g);
    double acc = 0.0;
    for (std::size_t y = 0; y < s.size(); ++y)
        for (std::size_t m = 0; m < g.count; ++m)
            acc += F.at(y, m) * F.at(y, m) * s.mass(y) * g.log_ratio() * W[y * g.count + m];
    CHECK(std::sqrt(acc) == doctest::Approx(tent_norm(s, F, 2.0)).epsilon(1e-12));
}

TEST_CASE("pairing is bilinear")
{
    const auto s = fixtures::random_space(13, 15);
    const auto g = TGrid::defaults(s);
    const auto F = fixtures::bumps(s, g, 1), G = fixtures::bumps(s, g, 2), H = fixtures::bumps(s, g, 3);
    auto FG = F;
    FG *= 2.0;
    FG += G;
    CHECK(pairing(s, FG, H) == doctest::Approx(2.0 * pairing(s, F, H) + pairing(s, G, H)).epsilon(1e-12));
    CHECK(pairing(s, F, G) == doctest::Approx(pairing(s, G, F)).epsilon(1e-14));
}

TEST_CASE("q-atom validation")
{
    const auto s = grid_1d(16);
    const auto g = TGrid::defaults(s);
    const BallSpec b{8, 4.0};
    const auto tb = tent_over_ball(s, g, b);
    TentFunction a(s.size(), g);
    Rng rng(5);
    for (std::size_t y = 0; y < s.size(); ++y)
        for (std::size_t m = 0; m < g.count; ++m)
            if (tb.contains(y, m)) a.at(y, m) = rng.normal();
    const auto w = fixtures::random_weight(9, s.size());
    double wb = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s.distance(8, i) < 4.0) wb += w[i];
    a *= std::pow(wb, 0.5 - 2.0) / tent_norm(s, a, 2.0, w);
    auto r = validate_q_atom(s, a, b, 0.5, 2.0, w);
    CHECK(r.support_pass);
    CHECK(r.bound == doctest::Approx(std::pow(wb, -1.5)));
    CHECK(std::abs(r.slack) < 1e-12);

    a *= 1.01;
    r = validate_q_atom(s, a, b, 0.5, 2.0, w);
    CHECK_FALSE(r.norm_pass);
    a.at(0, g.count - 1) = 1.0;
    r = validate_q_atom(s, a, b, 0.5, 2.0, w);
    CHECK_FALSE(r.support_pass);
    CHECK(r.witness_point == 0);
}

TEST_CASE("density sets contain the open set")
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto s = fixtures::random_space(1000 + seed, 30, 2, seed % 2 == 0);
        Rng rng(seed);
        PointSet fc(s.size());
        for (std::size_t i = 0; i < s.size(); ++i)
            if (rng.bernoulli(0.7)) fc.insert(i);
        for (double gamma : {0.1, 0.5, 0.9}) {
            const auto d = density_sets(s, gamma, fc);
            CHECK(d.inclusion_pass);
            CHECK(fc.complement().subset_of(d.o_star));
            CHECK(d.f_star.subset_of(fc));
            // centred balls are a subfamily, so the centred O* is smaller
            CHECK(density_sets(s, gamma, fc, MaximalKind::Centered).o_star.subset_of(d.o_star));
        }
        // raising gamma lowers the threshold 1 - gamma and enlarges O*
        CHECK(density_sets(s, 0.2, fc).o_star.subset_of(density_sets(s, 0.6, fc).o_star));
    }
}

TEST_CASE("shadow ratio of a closed set")
{
    const auto s = fixtures::random_space(44, 25);
    const auto g = TGrid::defaults(s);
    Rng rng(1);
    TentFunction h(s.size(), g);
    for (auto& v : h.values()) v = rng.uniform();
    PointSet fc(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        if (rng.bernoulli(0.6)) fc.insert(i);
    const auto r = shadow_ratio(s, fc, h, 0.5, 0.5);
    CHECK(std::isfinite(r.ratio));
    CHECK(r.ratio > 0.0);
    CHECK(shadow_ratio(s, fc, TentFunction(s.size(), g), 0.5, 0.5).degenerate);
    h.at(0, 0) = -1.0;
    CHECK_THROWS_AS(shadow_ratio(s, fc, h, 0.5, 0.5), InvalidInput);
}

TEST_CASE("compact-support constant bounds random functions on K")
{
    const auto s = fixtures::random_space(55, 18, 2, true);
    const auto g = TGrid::defaults(s);
    const auto w = fixtures::random_weight(56, s.size());
    const auto K = tent_over_ball(s, g, {3, 4.0});
    for (double q : {1.5, 2.0, 3.0}) {
        const double c = compact_support_constant(s, g, K, q, w);
        REQUIRE(c > 0.0);
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            Rng rng(seed);
            TentFunction F(s.size(), g);
            for (std::size_t y = 0; y < s.size(); ++y)
                for (std::size_t m = 0; m < g.count; ++m)
                    if (K.contains(y, m)) F.at(y, m) = rng.normal() * std::exp2(rng.uniform(-4, 4));
            double l2 = 0.0;
            for (std::size_t y = 0; y < s.size(); ++y)
                for (std::size_t m = 0; m < g.count; ++m) l2 += F.at(y, m) * F.at(y, m) * s.mass(y) * g.log_ratio();
            CHECK(std::sqrt(l2) <= c * tent_norm(s, F, q, w) * (1 + 1e-12));
        }
    }
}

TEST_CASE("duality chain")
{
    const auto s = fixtures::random_space(66, 20);
    const auto g = TGrid::defaults(s);
    const auto w = fixtures::random_weight(67, s.size());
    const double cd = doubling_report(s).c_doubling;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto F = fixtures::bumps(s, g, 2 * seed), G = fixtures::bumps(s, g, 2 * seed + 1);
        const auto c = duality_check(s, F, G, 2.0, w);
        CHECK(c.area_integral <= c.holder_rhs * (1 + 1e-9));
        CHECK(c.c_n <= c.overlap_bound * (1 + 1e-12));
        CHECK(c.overlap_bound <= cd * (1 + 1e-12));
    }
}
