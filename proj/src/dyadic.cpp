#include "tentlab/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace tentlab {

namespace {

std::string cube_name(int k, std::size_t beta)
{
    return "Q[" + std::to_string(k) + "][" + std::to_string(beta) + "]";
}

// Smallest integer k with 8 delta^k <= d, i.e. the Whitney shell of a point
// at distance d from the complement.
int shell_index(double d, double delta)
{
    int k = static_cast<int>(std::floor(std::log(d / 8.0) / std::log(delta)));
    while (8.0 * std::pow(delta, k) > d) ++k;
    while (8.0 * std::pow(delta, k - 1) <= d) --k;
    return k;
}

}  // namespace

double DyadicCubeSystem::scale(int k) const { return std::pow(delta, k); }

DyadicCubeSystem build_dyadic_system(const MetricMeasureSpace& space, double delta,
                                     std::optional<std::pair<int, int>> k_range)
{
    if (!(delta > 0.0) || 12.0 * delta > 1.0)
        throw InvalidInput("dyadic: delta must lie in (0, 1/12] so that 12 C0 delta <= c0 with c0 = C0 = 1");
    const std::size_t n = space.size();

    DyadicCubeSystem sys;
    sys.delta = delta;
    if (k_range) {
        if (k_range->first > k_range->second) throw InvalidInput("dyadic: empty generation range");
        sys.k_min = k_range->first;
        sys.k_max = k_range->second;
    } else if (n == 1) {
        sys.k_min = sys.k_max = 0;
    } else {
        const double diam = space.diameter();
        const double minpos = space.min_positive_distance();
        int k = static_cast<int>(std::floor(std::log(diam) / std::log(delta)));
        while (std::pow(delta, k) <= diam) --k;
        while (std::pow(delta, k + 1) > diam) ++k;
        sys.k_min = k;
        k = sys.k_min;
        while (8.0 * std::pow(delta, k) > minpos) ++k;
        sys.k_max = std::max(k, sys.k_min);
    }

    std::vector<std::vector<std::size_t>> centers;
    std::vector<std::vector<std::size_t>> parent_of;  // per generation, per center slot
    for (int k = sys.k_min; k <= sys.k_max; ++k) {
        const std::vector<std::size_t> seeds = centers.empty() ? std::vector<std::size_t>{} : centers.back();
        auto net = greedy_net(space, std::pow(delta, k), seeds);
        std::vector<std::size_t> parents(net.size(), kNoParent);
        if (!centers.empty()) {
            const auto& coarse = centers.back();
            for (std::size_t s = 0; s < net.size(); ++s) {
                std::size_t best = 0;
                for (std::size_t c = 1; c < coarse.size(); ++c) {
                    const double dc = space.distance(net[s], coarse[c]);
                    const double db = space.distance(net[s], coarse[best]);
                    if (dc < db || (dc == db && coarse[c] < coarse[best])) best = c;
                }
                parents[s] = best;
            }
        }
        centers.push_back(std::move(net));
        parent_of.push_back(std::move(parents));
    }

    // Every point joins its nearest finest-generation centre; coarser cubes are
    // unions along the parent links.
    const std::size_t G = centers.size();
    std::vector<std::size_t> slot(n);
    {
        const auto& fine = centers.back();
        for (std::size_t x = 0; x < n; ++x) {
            std::size_t best = 0;
            for (std::size_t c = 1; c < fine.size(); ++c) {
                const double dc = space.distance(x, fine[c]);
                const double db = space.distance(x, fine[best]);
                if (dc < db || (dc == db && fine[c] < fine[best])) best = c;
            }
            slot[x] = best;
        }
    }
    sys.generations.resize(G);
    for (std::size_t g = G; g-- > 0;) {
        DyadicGeneration& gen = sys.generations[g];
        gen.k = sys.k_min + static_cast<int>(g);
        gen.cubes.resize(centers[g].size());
        gen.cube_of = slot;
        for (std::size_t c = 0; c < centers[g].size(); ++c) {
            gen.cubes[c].center = centers[g][c];
            gen.cubes[c].parent = parent_of[g][c];
        }
        for (std::size_t x = 0; x < n; ++x) gen.cubes[slot[x]].members.push_back(x);
        if (g > 0)
            for (std::size_t x = 0; x < n; ++x) slot[x] = parent_of[g][slot[x]];
    }
    for (std::size_t g = 0; g + 1 < G; ++g) {
        std::vector<std::size_t> count(sys.generations[g].cubes.size(), 0);
        for (const auto& q : sys.generations[g + 1].cubes) ++count[q.parent];
        for (std::size_t c : count) sys.max_children = std::max(sys.max_children, c);
    }
    if (G == 1) sys.max_children = 1;
    return sys;
}

bool DyadicReport::all_pass() const
{
    return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.pass; });
}

DyadicReport verify_dyadic(const MetricMeasureSpace& space, const DyadicCubeSystem& sys)
{
    const std::size_t n = space.size();
    const std::size_t G = sys.generations.size();
    DyadicReport rep;
    rep.checks = {{"(i) partition", true, "", 0.0},       {"(ii) nested or disjoint", true, "", 0.0},
                  {"(iii) unique ancestor", true, "", 0.0}, {"(iv) children", true, "", 0.0},
                  {"(v) ball containment", true, "", 0.0},  {"(vi) ball nesting", true, "", 0.0}};
    auto fail = [](PropertyCheck& c, const std::string& w) {
        if (c.pass) c.witness = w;
        c.pass = false;
    };

    // Owner table rebuilt from members; kNoParent marks an uncovered point.
    std::vector<std::vector<std::size_t>> owner(G, std::vector<std::size_t>(n, kNoParent));
    for (std::size_t g = 0; g < G; ++g) {
        const auto& gen = sys.generations[g];
        for (std::size_t b = 0; b < gen.cubes.size(); ++b) {
            for (std::size_t x : gen.cubes[b].members) {
                if (x >= n) {
                    fail(rep.checks[0], cube_name(gen.k, b) + " has out-of-range member " + std::to_string(x));
                    continue;
                }
                if (owner[g][x] != kNoParent)
                    fail(rep.checks[0], "point " + std::to_string(x) + " in " + cube_name(gen.k, owner[g][x]) +
                                            " and " + cube_name(gen.k, b));
                owner[g][x] = b;
            }
        }
        for (std::size_t x = 0; x < n; ++x)
            if (owner[g][x] == kNoParent)
                fail(rep.checks[0], "point " + std::to_string(x) + " in no cube of generation " + std::to_string(gen.k));
    }

    // (ii)/(iii): a finer cube lies inside a coarser one iff all its members
    // share one owner there; otherwise it meets several and is neither inside
    // nor disjoint from them.
    for (std::size_t l = 0; l < G; ++l) {
        const auto& gen = sys.generations[l];
        for (std::size_t b = 0; b < gen.cubes.size(); ++b) {
            const auto& m = gen.cubes[b].members;
            if (m.empty()) {
                fail(rep.checks[3], cube_name(gen.k, b) + " is empty");
                continue;
            }
            for (std::size_t k = 0; k < l; ++k) {
                const std::size_t first = owner[k][m.front()];
                for (std::size_t x : m) {
                    if (x < n && owner[k][x] != first) {
                        const std::string w = cube_name(gen.k, b) + " straddles " +
                                              cube_name(sys.generations[k].k, first) + " and " +
                                              cube_name(sys.generations[k].k, owner[k][x]);
                        fail(rep.checks[1], w);
                        fail(rep.checks[2], w);
                        break;
                    }
                }
            }
        }
    }

    // (iv): children via containment, union equals the parent.
    for (std::size_t g = 0; g + 1 < G; ++g) {
        const auto& gen = sys.generations[g];
        const auto& fine = sys.generations[g + 1];
        std::vector<std::size_t> children(gen.cubes.size(), 0);
        std::vector<std::size_t> covered(gen.cubes.size(), 0);
        for (const auto& q : fine.cubes) {
            if (q.members.empty() || q.members.front() >= n) continue;
            const std::size_t owner_cube = owner[g][q.members.front()];
            if (owner_cube == kNoParent) continue;
            ++children[owner_cube];
            covered[owner_cube] += q.members.size();
        }
        for (std::size_t b = 0; b < gen.cubes.size(); ++b) {
            rep.max_children = std::max(rep.max_children, children[b]);
            if (children[b] == 0) fail(rep.checks[3], cube_name(gen.k, b) + " has no children");
            if (covered[b] != gen.cubes[b].members.size())
                fail(rep.checks[3], cube_name(gen.k, b) + " is not the union of its children");
        }
    }
    if (G == 1) rep.max_children = 1;
    rep.checks[3].slack = static_cast<double>(rep.max_children);

    // (v): B(x, c0 delta^k / 3) within Q within B(x, 2 C0 delta^k); slack is the
    // smallest relative margin 1 - d/(2 C0 delta^k) over members.
    double vslack = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < G; ++g) {
        const auto& gen = sys.generations[g];
        const double s = sys.scale(gen.k);
        for (std::size_t b = 0; b < gen.cubes.size(); ++b) {
            const auto& q = gen.cubes[b];
            const std::size_t x = q.center;
            if (x >= n || owner[g][x] != b) {
                fail(rep.checks[4], cube_name(gen.k, b) + " does not contain its centre");
                continue;
            }
            for (std::size_t y : q.members) {
                if (y >= n) continue;
                const double d = space.distance(x, y);
                vslack = std::min(vslack, 1.0 - d / (2.0 * sys.C0 * s));
                if (d >= 2.0 * sys.C0 * s)
                    fail(rep.checks[4], "member " + std::to_string(y) + " of " + cube_name(gen.k, b) +
                                            " outside the outer ball");
            }
            const std::size_t inner = space.ball_count(x, sys.c0 * s / 3.0);
            const auto ord = space.order(x);
            for (std::size_t i = 0; i < inner; ++i)
                if (owner[g][ord[i]] != b)
                    fail(rep.checks[4], "point " + std::to_string(ord[i]) + " in the inner ball of " +
                                            cube_name(gen.k, b) + " but not in the cube");
        }
    }
    rep.checks[4].slack = std::isfinite(vslack) ? vslack : 0.0;

    // (vi): B(Q_child) within B(Q_parent) as point sets, for every parent link.
    for (std::size_t g = 1; g < G; ++g) {
        const auto& gen = sys.generations[g];
        const auto& coarse = sys.generations[g - 1];
        for (std::size_t b = 0; b < gen.cubes.size(); ++b) {
            const auto& q = gen.cubes[b];
            if (q.parent == kNoParent || q.parent >= coarse.cubes.size()) {
                fail(rep.checks[5], cube_name(gen.k, b) + " has no valid parent link");
                continue;
            }
            const std::size_t xp = coarse.cubes[q.parent].center;
            const double rp = 2.0 * sys.C0 * sys.scale(coarse.k);
            const double rc = 2.0 * sys.C0 * sys.scale(gen.k);
            const std::size_t cnt = space.ball_count(q.center, rc);
            const auto ord = space.order(q.center);
            for (std::size_t i = 0; i < cnt; ++i)
                if (space.distance(xp, ord[i]) >= rp) {
                    fail(rep.checks[5], "B(" + cube_name(gen.k, b) + ") leaves B(" + cube_name(coarse.k, q.parent) +
                                            ") at point " + std::to_string(ord[i]));
                    break;
                }
        }
    }
    return rep;
}

WhitneyCover whitney_cover(const MetricMeasureSpace& space, const DyadicCubeSystem& sys, const PointSet& omega,
                           WhitneyMode mode)
{
    const std::size_t n = space.size();
    if (omega.universe() != n) throw InvalidInput("whitney_cover: omega has the wrong universe");
    if (omega.empty()) throw InvalidInput("whitney_cover: omega is empty");
    if (omega.full()) throw InvalidInput("whitney_cover: omega must have a nonempty complement");

    const PointSet comp = omega.complement();
    const std::size_t G = sys.generations.size();

    // candidate[g][b] = finest generation index at which this cube's set was
    // hit by its own shell; -1 if never a candidate.
    std::vector<std::vector<int>> candidate(G);
    for (std::size_t g = 0; g < G; ++g) candidate[g].assign(sys.generations[g].cubes.size(), -1);
    for (std::size_t x = 0; x < n; ++x) {
        if (!omega.contains(x)) continue;
        const int k = std::clamp(shell_index(space.distance_to_set(x, comp), sys.delta), sys.k_min, sys.k_max);
        const auto g = static_cast<std::size_t>(k - sys.k_min);
        candidate[g][sys.generations[g].cube_of[x]] = static_cast<int>(g);
    }

    // Maximal selection. Identical sets recurring in several generations are
    // one cube; it is kept at its coarsest occurrence.
    WhitneyCover cover;
    cover.omega = omega;
    cover.delta = sys.delta;
    cover.mode = mode;
    for (std::size_t g = 0; g < G; ++g) {
        const auto& gen = sys.generations[g];
        for (std::size_t b = 0; b < gen.cubes.size(); ++b) {
            if (candidate[g][b] < 0) continue;
            const std::size_t size = gen.cubes[b].members.size();
            bool maximal = true;
            std::size_t a = b;
            for (std::size_t h = g; h-- > 0;) {
                a = sys.generations[h + 1].cubes[a].parent;
                if (candidate[h][a] >= 0 && sys.generations[h].cubes[a].members.size() >= size) {
                    maximal = false;
                    break;
                }
            }
            if (!maximal) continue;
            WhitneyCube wc;
            wc.k = gen.k;
            wc.shell_k = gen.k;
            wc.index = b;
            // finest candidate occurrence of the same set
            for (std::size_t h = g + 1; h < G; ++h) {
                const auto& fine = sys.generations[h];
                const std::size_t child = fine.cube_of[gen.cubes[b].members.front()];
                if (fine.cubes[child].members.size() != size) break;
                if (candidate[h][child] >= 0) wc.shell_k = fine.k;
            }
            for (std::size_t x : gen.cubes[b].members) {
                if (omega.contains(x))
                    wc.members.push_back(x);
                else
                    wc.repaired = true;
            }
            if (wc.repaired && mode == WhitneyMode::Strict)
                throw InvalidInput("whitney_cover: " + cube_name(gen.k, b) +
                                   " meets the complement; the generation range is too coarse for strict mode");
            if (!wc.repaired) wc.members = gen.cubes[b].members;
            cover.cubes.push_back(std::move(wc));
        }
    }
    return cover;
}

WhitneyReport verify_whitney(const MetricMeasureSpace& space, const WhitneyCover& cover)
{
    const std::size_t n = space.size();
    WhitneyReport rep;
    rep.disjoint.name = "(i) disjoint";
    rep.exact_union.name = "(ii) union";
    rep.lower.name = "(iii) diam <= dist";
    rep.upper.name = "(iii) dist <= delta^-2 diam";
    auto fail = [](PropertyCheck& c, const std::string& w) {
        if (c.pass) c.witness = w;
        c.pass = false;
    };

    std::vector<std::size_t> owner(n, kNoParent);
    PointSet covered(n);
    for (std::size_t c = 0; c < cover.cubes.size(); ++c) {
        for (std::size_t x : cover.cubes[c].members) {
            if (owner[x] != kNoParent)
                fail(rep.disjoint, "cubes " + std::to_string(owner[x]) + " and " + std::to_string(c) + " share point " +
                                       std::to_string(x));
            owner[x] = c;
            covered.insert(x);
        }
        if (cover.cubes[c].repaired) ++rep.repaired;
    }
    if (!(covered == cover.omega)) {
        for (std::size_t x = 0; x < n; ++x)
            if (covered.contains(x) != cover.omega.contains(x)) {
                fail(rep.exact_union, "point " + std::to_string(x) +
                                          (covered.contains(x) ? " covered but outside omega" : " in omega but uncovered"));
                break;
            }
    }

    const PointSet comp = cover.omega.complement();
    const double inv2 = 1.0 / (cover.delta * cover.delta);
    double lower_slack = std::numeric_limits<double>::infinity();
    double upper_slack = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < cover.cubes.size(); ++c) {
        const auto& q = cover.cubes[c];
        const double diam = space.set_diameter(q.members);
        double dist = std::numeric_limits<double>::infinity();
        for (std::size_t x : q.members) dist = std::min(dist, space.distance_to_set(x, comp));
        lower_slack = std::min(lower_slack, dist - diam);
        if (diam > dist)
            fail(rep.lower, "cube " + std::to_string(c) + ": diam " + std::to_string(diam) + " > dist " +
                                std::to_string(dist));
        if (diam < (2.0 / 3.0) * std::pow(cover.delta, q.shell_k)) {
            ++rep.degenerate;
            continue;
        }
        upper_slack = std::min(upper_slack, inv2 * diam - dist);
        if (dist > inv2 * diam)
            fail(rep.upper, "cube " + std::to_string(c) + ": dist " + std::to_string(dist) + " > delta^-2 diam " +
                                std::to_string(inv2 * diam));
    }
    rep.lower.slack = std::isfinite(lower_slack) ? lower_slack : 0.0;
    rep.upper.slack = std::isfinite(upper_slack) ? upper_slack : 0.0;
    return rep;
}

}  // namespace tentlab
