#include <doctest.h>

#include "fixtures.hpp"
#include "tentlab/weights.hpp"

using namespace tentlab;

namespace {

// Every ball B(c, d(c, y)+) by direct scan.
template <class Fn>
double sup_over_balls(const MetricMeasureSpace& s, Fn&& stat)
{
    double best = 1.0;
    for (std::size_t c = 0; c < s.size(); ++c)
        for (std::size_t y = 0; y < s.size(); ++y) {
            std::vector<std::size_t> members;
            for (std::size_t z = 0; z < s.size(); ++z)
                if (s.distance(c, z) <= s.distance(c, y)) members.push_back(z);
            best = std::max(best, stat(members));
        }
    return best;
}

double avg(const MetricMeasureSpace& s, const std::vector<std::size_t>& b, auto&& g)
{
    long double num = 0, den = 0;
    for (std::size_t z : b) {
        num += g(z) * s.mass(z);
        den += s.mass(z);
    }
    return static_cast<double>(num / den);
}

}  // namespace

TEST_CASE("two-point A_2 constant")
{
    const auto s = MetricMeasureSpace::from_distances(2, {0, 1, 1, 0});
    for (double t : {0.25, 1.0, 3.0, 100.0}) {
        const std::vector<double> w{1.0, t};
        CHECK(ap_constant(s, w, 2.0) == doctest::Approx((1 + t) * (1 + 1 / t) / 4).epsilon(1e-14));
        CHECK(ap_constant(s, w, 1.0) == doctest::Approx(std::max(1.0, (1 + t) / 2 / std::min(1.0, t))).epsilon(1e-14));
    }
}

TEST_CASE("A_p and RH constants match a brute-force ball scan")
{
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const auto s = fixtures::random_space(40 + seed, 14, 2, seed % 2 == 1);
        const auto w = fixtures::random_weight(60 + seed, s.size(), 0.8);
        for (double p : {1.0, 1.5, 2.0, 4.0}) {
            const double ref = sup_over_balls(s, [&](const std::vector<std::size_t>& b) {
                const double a = avg(s, b, [&](std::size_t z) { return w[z]; });
                if (p == 1.0) {
                    double mn = 1e300;
                    for (std::size_t z : b) mn = std::min(mn, w[z]);
                    return a / mn;
                }
                return a * std::pow(avg(s, b, [&](std::size_t z) { return std::pow(w[z], -1.0 / (p - 1.0)); }), p - 1.0);
            });
            CHECK(ap_constant(s, w, p) == doctest::Approx(ref).epsilon(1e-12));
        }
        for (double r : {1.5, 2.0, 3.0}) {
            const double ref = sup_over_balls(s, [&](const std::vector<std::size_t>& b) {
                return std::pow(avg(s, b, [&](std::size_t z) { return std::pow(w[z], r); }), 1.0 / r) /
                       avg(s, b, [&](std::size_t z) { return w[z]; });
            });
            CHECK(rh_constant(s, w, r) == doctest::Approx(ref).epsilon(1e-12));
        }
    }
}

TEST_CASE("constant weights have unit constants and monotone classes")
{
    const auto s = fixtures::random_space(3, 20);
    const std::vector<double> one(s.size(), 2.5);
    for (double p : {1.0, 2.0, 3.0}) CHECK(ap_constant(s, one, p) == doctest::Approx(1.0));
    CHECK(rh_constant(s, one, 2.0) == doctest::Approx(1.0));

    const auto w = fixtures::random_weight(4, s.size());
    double prev = ap_constant(s, w, 1.0);
    for (double p : {1.25, 1.5, 2.0, 3.0, 6.0}) {
        const double a = ap_constant(s, w, p);
        CHECK(a <= prev * (1 + 1e-12));
        prev = a;
    }
    double rprev = 1.0;
    for (double r : {1.1, 1.5, 2.0, 4.0}) {
        const double v = rh_constant(s, w, r);
        CHECK(v >= rprev * (1 - 1e-12));
        rprev = v;
    }
}

TEST_CASE("generators")
{
    const auto s = grid_2d(6, 6);
    WeightParams p;
    const auto c = generate_weight(s, WeightKind::Constant, p, 0);
    CHECK(c.ap(s, 2.0) == doctest::Approx(1.0));
    p.a = 0.5;
    const auto pw = generate_weight(s, WeightKind::Power, p, 0);
    CHECK(pw[0] == doctest::Approx(1.0));
    CHECK(pw[35] == doctest::Approx(std::pow(1.0 + std::sqrt(50.0), 0.5)));
    const auto cb = generate_weight(s, WeightKind::Checkerboard, p, 0);
    CHECK(cb[0] != cb[1]);

    p.p = 2.0;
    p.target = 1.6;
    const auto ra = generate_weight(s, WeightKind::RandomAp, p, 99);
    CHECK(ra.ap(s, 2.0) <= 1.6);
    const auto rb = generate_weight(s, WeightKind::RandomAp, p, 99);
    CHECK(ra.fingerprint() == rb.fingerprint());
    p.target = 0.5;
    CHECK_THROWS_AS(generate_weight(s, WeightKind::RandomAp, p, 1), InvalidInput);

    CHECK(parse_weight_kind("random-ap") == WeightKind::RandomAp);
    CHECK(weight_kind_name(WeightKind::Checkerboard) == "checkerboard");
    CHECK_THROWS_AS(parse_weight_kind("gaussian"), InvalidInput);
}

TEST_CASE("ball-ratio lemma and dual identity")
{
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const auto s = fixtures::random_space(200 + seed, 20, 2, true);
        const auto w = fixtures::random_weight(300 + seed, s.size(), 0.7);
        const auto r = verify_weight_lemma(s, w, 2.0, 3.0, seed);
        CHECK_MESSAGE(r.all_pass(), r.iv_witness);
        CHECK(r.iv_worst <= 1.0 + 1e-12);
        CHECK(r.dual_constant == doctest::Approx(r.dual_expected).epsilon(1e-9));
    }
    const auto s = grid_1d(8);
    const std::vector<double> w(8, 1.0);
    const PointSet b = s.ball(3, 3.0);
    const PointSet e = PointSet::from_indices(8, std::vector<std::size_t>{3});
    // constant weight: w(B)/w(E) = mu(B)/mu(E) and [w]_{A_1} = 1, so the ratio is exactly 1 at p = 1
    CHECK(subset_ratio(s, w, 1.0, 1.0, b, e) == doctest::Approx(1.0));
    CHECK_THROWS_AS(subset_ratio(s, w, 1.0, 1.0, e, b), InvalidInput);
}
